use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use comblab::arrangement::{Arrangement, Location};
use comblab::bench::{render_svg, run_suite, Suite};
use comblab::boundary::{boundary_components, format_sequence, linearize};
use comblab::ds::{active_profile, is_ds, lambda_brute, SymbolSequence};
use comblab::exact::{format_segments, parse_rat, parse_segments, Point};
use comblab::exec::Exec;
use comblab::generators::{generate, Scenario};
use comblab::motion::{plan, PlanOutcome, PlanProblem};
use comblab::overlay::{collection_ids, marked_faces_complexity, refine, single_face_overlay, MarkedInstance};
use comblab::Error;

#[derive(Parser)]
#[command(name = "comblab", version, about = "Exact segment arrangements and overlay face complexities")]
struct Cli {
    /// Run everything on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance: a segment file plus a JSON sidecar.
    Gen {
        /// Scenario as JSON, or a path to a JSON file.
        #[arg(long)]
        scenario: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Segment file to write; the sidecar goes next to it as .json.
        #[arg(long)]
        out: PathBuf,
    },
    /// Build the arrangement of a segment file and print its summary.
    Arrange { segments: PathBuf },
    /// Boundary of the face containing a point.
    Face {
        segments: PathBuf,
        #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_negative_numbers = true)]
        at: Vec<String>,
    },
    /// Marked-face complexities, single faces and the refinement of an instance.
    Overlay {
        /// Sidecar JSON written by `gen`.
        instance: PathBuf,
    },
    /// Translational motion planning among point obstacles.
    Plan {
        #[arg(long)]
        robot: PathBuf,
        #[arg(long)]
        pins: PathBuf,
        #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_negative_numbers = true)]
        from: Vec<String>,
        #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_negative_numbers = true)]
        to: Vec<String>,
        /// Reference point of the robot; defaults to its first vertex.
        #[arg(long = "ref", num_args = 2, value_names = ["X", "Y"], allow_negative_numbers = true)]
        reference: Option<Vec<String>>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Check a whitespace-separated symbol sequence read from stdin.
    Ds {
        #[arg(long, default_value_t = 3)]
        order: usize,
        #[arg(long)]
        circular: bool,
        /// Also compute lambda_order(n) by exhaustive search.
        #[arg(long)]
        lambda: Option<usize>,
    },
    /// Run a benchmark suite and write its JSON report.
    Bench {
        #[arg(long, default_value = "default")]
        suite: String,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a segment file as SVG, filling the faces holding the given points.
    Render {
        segments: PathBuf,
        #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_negative_numbers = true, action = clap::ArgAction::Append)]
        at: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    Lib(Error),
    Io(String),
    Unreachable(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn point(xy: &[String]) -> CliResult<Point> {
    match xy {
        [x, y] => Ok(Point::new(parse_rat(x)?, parse_rat(y)?)),
        _ => Err(Error::Input("a point needs two coordinates".into()).into()),
    }
}

fn points(flat: &[String]) -> CliResult<Vec<Point>> {
    flat.chunks(2).map(point).collect()
}

fn print(v: &Value) {
    // A closed pipe (e.g. `| head`) is not an error worth panicking over.
    let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(v).expect("json"));
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")).into())
}

fn cmd_gen(scenario: &str, seed: u64, out: &Path) -> CliResult<()> {
    let text = if Path::new(scenario).is_file() { read(Path::new(scenario))? } else { scenario.to_string() };
    let sc: Scenario = parse_json(&text, "scenario")?;
    let inst = generate(&sc, seed)?;
    let segs = inst.all_segments();
    write(out, &format_segments(&segs))?;
    let sidecar = out.with_extension("json");
    let meta = json!({
        "schema": 1,
        "scenario": sc,
        "seed": seed,
        "collections": collection_ids(&inst),
        "instance": inst,
    });
    write(&sidecar, &serde_json::to_string_pretty(&meta).expect("json"))?;
    print(&json!({
        "schema": 1,
        "segments": segs.len(),
        "collections": inst.collections.len(),
        "points": inst.points.len(),
        "sidecar": sidecar.display().to_string(),
    }));
    Ok(())
}

fn load_arrangement(path: &Path) -> CliResult<Arrangement> {
    let segs = parse_segments(&read(path)?, 0)?;
    let arr = Arrangement::build(&segs)?;
    arr.validate()?;
    Ok(arr)
}

fn cmd_face(path: &Path, at: &[String]) -> CliResult<()> {
    let arr = load_arrangement(path)?;
    let p = point(at)?;
    let f = match arr.locate(&p) {
        Location::Face(f) => f,
        other => return Err(Error::Input(format!("point {p} is not in a face: {other:?}")).into()),
    };
    let mut comps = Vec::new();
    for comp in boundary_components(&arr, f) {
        let lin = linearize(&arr, &comp)?;
        comps.push(json!({
            "circular": format_sequence(&comp.sequence()),
            "linearized": format_sequence(&lin),
            "edge_sides": comp.edge_sides(),
            "ds3": is_ds(&lin, 3).is_ok(),
        }));
    }
    print(&json!({
        "schema": 1,
        "face": f,
        "unbounded": arr.faces[f].is_unbounded(),
        "complexity": arr.face_complexity(f),
        "components": comps,
    }));
    Ok(())
}

fn cmd_overlay(path: &Path, exec: Exec) -> CliResult<()> {
    let v: Value = parse_json(&read(path)?, "instance file")?;
    let inst: MarkedInstance = serde_json::from_value(v.get("instance").cloned().unwrap_or(v))
        .map_err(|e| Error::Parse(format!("instance: {e}")))?;
    let mc = marked_faces_complexity(&inst, exec)?;
    let rf = refine(&inst, exec)?;
    let singles = inst
        .points
        .iter()
        .map(|p| {
            single_face_overlay(&inst, p, exec).map(|sf| json!({"face": sf.face, "level_totals": sf.level_totals}))
        })
        .collect::<comblab::Result<Vec<_>>>()?;
    print(&json!({
        "schema": 1,
        "marked": mc,
        "single_faces": singles,
        "splitting_number": rf.splitting_number,
        "splitting_bound": rf.splitting_bound(),
        "subarc_bounds_hold": rf.subarc_bounds_hold(),
        "collections": rf.collections.iter().map(|c| json!({
            "splits": c.splits,
            "subarcs": c.subarcs.len(),
            "marked_complexity": c.marked_complexity,
        })).collect::<Vec<_>>(),
    }));
    Ok(())
}

fn read_pins(text: &str) -> CliResult<Vec<Point>> {
    let toks: Vec<String> = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(|l| l.split_whitespace().map(str::to_string).collect::<Vec<_>>())
        .collect();
    if !toks.len().is_multiple_of(2) {
        return Err(Error::Parse("pin file needs an even number of coordinates".into()).into());
    }
    points(&toks)
}

fn cmd_plan(
    robot: &Path,
    pins: &Path,
    from: &[String],
    to: &[String],
    reference: Option<&[String]>,
    svg: Option<&Path>,
) -> CliResult<()> {
    let loop_segs = parse_segments(&read(robot)?, 0)?;
    for w in 0..loop_segs.len() {
        if loop_segs[w].target != loop_segs[(w + 1) % loop_segs.len()].source {
            return Err(Error::Input(format!("robot segment {w} does not end where the next one starts")).into());
        }
    }
    let prob = PlanProblem {
        robot: loop_segs.iter().map(|s| s.source.clone()).collect(),
        obstacles: read_pins(&read(pins)?)?,
        start: point(from)?,
        goal: point(to)?,
        reference: reference.map(point).transpose()?,
    };
    let outcome = plan(&prob)?;
    if let Some(out) = svg {
        let segs: Vec<_> = prob.families()?.concat();
        let arr = Arrangement::build(&segs)?;
        let faces: Vec<usize> = arr.locate(&prob.start).face().into_iter().collect();
        let path = match &outcome {
            PlanOutcome::Path(p) => Some(p.points.as_slice()),
            PlanOutcome::Unreachable => None,
        };
        write(out, &render_svg(&arr, &faces, &[prob.start.clone(), prob.goal.clone()], path))?;
    }
    let report = json!({"schema": 1, "outcome": outcome});
    match outcome {
        PlanOutcome::Path(_) => {
            print(&report);
            Ok(())
        }
        PlanOutcome::Unreachable => Err(Failure::Unreachable(report)),
    }
}

fn cmd_ds(order: usize, circular: bool, lambda: Option<usize>) -> CliResult<()> {
    if order == 0 {
        return Err(Error::Input("order must be at least 1".into()).into());
    }
    let mut input = String::new();
    std::io::stdin()
        .read_to_string(&mut input)
        .map_err(|e| Failure::Io(format!("stdin: {e}")))?;
    let toks: Vec<String> = input.split_whitespace().map(str::to_string).collect();
    let seq = if circular { SymbolSequence::circular(toks) } else { SymbolSequence::linear(toks) };
    let verdict = is_ds(&seq, order);
    let lambda = lambda.map(|n| lambda_brute(n, order)).transpose()?;
    print(&json!({
        "schema": 1,
        "length": seq.len(),
        "symbols": seq.alphabet().len(),
        "order": order,
        "valid": verdict.is_ok(),
        "violation": verdict.err(),
        "profile": active_profile(&seq),
        "lambda": lambda,
    }));
    Ok(())
}

fn cmd_bench(suite: &str, trials: usize, seed: u64, out: Option<&Path>, exec: Exec) -> CliResult<()> {
    let report = run_suite(&Suite::by_name(suite)?, trials, seed, exec);
    let text = report.to_json();
    match out {
        Some(p) => write(p, &(text + "\n"))?,
        None => {
            let _ = writeln!(std::io::stdout().lock(), "{text}");
        }
    }
    eprintln!(
        "suite {}: {} calibrations, {} sampling runs, {} violations, {} errors",
        report.suite,
        report.calibrations.len(),
        report.sampling.len(),
        report.violations.len(),
        report.errors.len()
    );
    if report.violations.is_empty() {
        Ok(())
    } else {
        Err(Error::Invariant(report.violations.join("; ")).into())
    }
}

fn cmd_render(path: &Path, at: &[String], out: &Path) -> CliResult<()> {
    let arr = load_arrangement(path)?;
    let pts = points(at)?;
    let mut faces: Vec<usize> = pts.iter().filter_map(|p| arr.locate(p).face()).collect();
    faces.sort_unstable();
    faces.dedup();
    write(out, &render_svg(&arr, &faces, &pts, None))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    let result = match &cli.command {
        Command::Gen { scenario, seed, out } => cmd_gen(scenario, *seed, out),
        Command::Arrange { segments } => load_arrangement(segments).map(|a| print(&to_value(&a.summary()))),
        Command::Face { segments, at } => cmd_face(segments, at),
        Command::Overlay { instance } => cmd_overlay(instance, exec),
        Command::Plan { robot, pins, from, to, reference, svg } => {
            cmd_plan(robot, pins, from, to, reference.as_deref(), svg.as_deref())
        }
        Command::Ds { order, circular, lambda } => cmd_ds(*order, *circular, *lambda),
        Command::Bench { suite, trials, seed, out } => cmd_bench(suite, *trials, *seed, out.as_deref(), exec),
        Command::Render { segments, at, out } => cmd_render(segments, at, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Unreachable(report)) => {
            print(&report);
            ExitCode::from(3)
        }
        Err(Failure::Lib(Error::Invariant(m))) => {
            eprintln!("error: invariant violated: {m}");
            ExitCode::from(4)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
