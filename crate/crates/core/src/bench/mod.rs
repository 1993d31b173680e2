//! Scenario runner: measures face complexities, splitting numbers and
//! colorings on generated instances, compares them with bound formulas under
//! frozen constants, and runs the random-sampling experiment.

mod sampling;
mod svg;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use sampling::{clarkson_shor_trial, expected_sampled_intersections, sample_size, SamplingRecord};
pub use svg::render_svg;

use crate::ds::inverse_ackermann;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::generators::{generate, tangent_fan, Scenario};
use crate::overlay::{
    lower_envelope, marked_faces_complexity, refine, single_face_oracle, single_face_overlay, smallest_last_coloring,
    sqrt_color_bound, MarkedInstance,
};

pub const SCHEMA: u32 = 1;

/// Factor applied to the largest calibration margin before it is frozen,
/// absorbing trial-to-trial noise of random families.
pub const HEADROOM: f64 = 1.25;

/// Independent seed for item `index` of stream `stream`.
pub fn derive_seed(seed: u64, stream: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos(u128::from(index) * 2);
    rng.gen()
}

/// `lambda_3(n)` estimated as `n * alpha(n)`.
pub fn lambda3_hat(n: usize) -> f64 {
    n as f64 * f64::from(inverse_ackermann(n as u64))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measured {
    pub n: usize,
    pub t: usize,
    pub k: usize,
    /// Sum over collections of their marked-face complexities.
    pub c_total: usize,
    /// Splitting number of the refinement.
    pub splitting: usize,
    /// Intersecting segment pairs.
    pub w: usize,
    /// Overlay face complexity at each marking point.
    pub per_face: Vec<usize>,
    /// Total over the distinct marked overlay faces.
    pub union_total: usize,
    /// Face of the first marking point, by pairwise merging.
    pub single_face: usize,
    /// Collection-wise marked complexities feeding the single-face bound.
    pub single_face_c: usize,
    /// Largest face complexity in the full overlay.
    pub max_face: usize,
    pub coloring: usize,
    /// Breakpoints of the base envelope, for shifted copies.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base_breakpoints: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub copies: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub scenario: Scenario,
    pub trial: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measured: Option<Measured>,
    pub bounds: BTreeMap<String, f64>,
    pub margins: BTreeMap<String, f64>,
    /// Failed inline checks; empty when everything held.
    pub violations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn ratio(measured: usize, bound: f64) -> f64 {
    if bound > 0.0 {
        measured as f64 / bound
    } else if measured == 0 {
        0.0
    } else {
        f64::MAX
    }
}

fn measure(sc: &Scenario, seed: u64) -> Result<(Measured, Vec<String>)> {
    let inst = generate(sc, seed)?;
    measure_instance(&inst, sc)
}

fn measure_instance(inst: &MarkedInstance, sc: &Scenario) -> Result<(Measured, Vec<String>)> {
    let mut violations = Vec::new();
    let segments = inst.all_segments();
    let mc = marked_faces_complexity(inst, Exec::Sequential)?;
    let rf = refine(inst, Exec::Sequential)?;
    if rf.splitting_number > rf.splitting_bound() {
        violations.push(format!("splitting number {} > {}", rf.splitting_number, rf.splitting_bound()));
    }
    if !rf.subarc_bounds_hold() {
        violations.push("subarc count exceeds 2L_i + 2C_i".into());
    }
    if !rf.collections.iter().all(|c| c.tiled) {
        violations.push("refinement does not tile a boundary".into());
    }
    let coloring = smallest_last_coloring(&segments);
    if coloring.count > sqrt_color_bound(coloring.intersecting_pairs) {
        violations.push(format!("{} colors exceed the square-root bound", coloring.count));
    }
    let p = inst.points.first().ok_or_else(|| Error::Input("scenario has no marking point".into()))?;
    let sf = single_face_overlay(inst, p, Exec::Sequential)?;
    if sf.face != single_face_oracle(inst, p)? {
        violations.push("merged single face differs from the full overlay".into());
    }
    let max_face = {
        let arr = crate::arrangement::Arrangement::build(&segments)?;
        (0..arr.face_count()).map(|f| arr.face_complexity(f).total()).max().unwrap_or(0)
    };
    let single_face_c = {
        let one = MarkedInstance { collections: inst.collections.clone(), points: vec![p.clone()] };
        marked_faces_complexity(&one, Exec::Sequential)?.c_total
    };
    let (base_breakpoints, copies) = match sc {
        Scenario::ShiftedCopies { t, m } => (Some(lower_envelope(&tangent_fan(*t))?.breakpoints.len()), Some(*m)),
        _ => (None, None),
    };
    if let (Some(b), Some(m)) = (base_breakpoints, copies) {
        if sf.face.complexity.total() < m * b {
            violations.push(format!("single face {} below m * breakpoints = {}", sf.face.complexity.total(), m * b));
        }
    }
    Ok((
        Measured {
            n: segments.len(),
            t: inst.collections.len(),
            k: inst.points.len(),
            c_total: mc.c_total,
            splitting: rf.splitting_number,
            w: coloring.intersecting_pairs,
            per_face: mc.per_point,
            union_total: mc.union_total,
            single_face: sf.face.complexity.total(),
            single_face_c,
            max_face,
            coloring: coloring.count,
            base_breakpoints,
            copies,
        },
        violations,
    ))
}

/// Bound formulas with unit constants, evaluated from measured inputs.
fn bounds_of(m: &Measured) -> BTreeMap<String, f64> {
    let n = m.n as f64;
    let k = m.k as f64;
    let alpha_n = f64::from(inverse_ackermann(m.n as u64));
    let mut b = BTreeMap::new();
    b.insert("splitting".into(), (2 * m.k * m.t + 2 * m.c_total) as f64);
    b.insert("coloring".into(), sqrt_color_bound(m.w) as f64);
    // C * lambda_3(t) / t for the face holding the first point.
    b.insert("single_face".into(), m.single_face_c as f64 * lambda3_hat(m.t) / m.t.max(1) as f64);
    b.insert("many_faces".into(), k.sqrt() * lambda3_hat(m.n));
    b.insert("incidences".into(), (n + n.powf(2.0 / 3.0) * k.powf(2.0 / 3.0)) * alpha_n);
    b.insert("linear".into(), n);
    b
}

fn margins_of(m: &Measured, bounds: &BTreeMap<String, f64>) -> BTreeMap<String, f64> {
    let measured = |key: &str| match key {
        "splitting" => m.splitting,
        "coloring" => m.coloring,
        "single_face" => m.single_face,
        "linear" => m.max_face,
        _ => m.union_total,
    };
    bounds.iter().map(|(key, &b)| (key.clone(), ratio(measured(key), b))).collect()
}

/// One record per (scenario, trial), in that order, whatever the execution
/// order. A failing trial is recorded with its error.
pub fn run(scenarios: &[Scenario], trials: usize, seed: u64, exec: Exec) -> Vec<Record> {
    let jobs: Vec<(usize, usize)> = (0..scenarios.len()).flat_map(|s| (0..trials).map(move |t| (s, t))).collect();
    exec.map(&jobs, |&(s, t)| {
        let sc = &scenarios[s];
        let trial_seed = derive_seed(seed, s as u64, t as u64);
        let mut rec = Record {
            scenario: sc.clone(),
            trial: t,
            seed: trial_seed,
            measured: None,
            bounds: BTreeMap::new(),
            margins: BTreeMap::new(),
            violations: Vec::new(),
            error: None,
        };
        match measure(sc, trial_seed) {
            Ok((m, v)) => {
                rec.bounds = bounds_of(&m);
                rec.margins = margins_of(&m, &rec.bounds);
                rec.measured = Some(m);
                rec.violations = v;
            }
            Err(e) => rec.error = Some(e.to_string()),
        }
        rec
    })
}

/// A family checked against one bound: the constant is fitted on the
/// calibration scenarios and then frozen for the evaluation scenarios.
#[derive(Debug, Clone)]
pub struct Sweep {
    pub family: &'static str,
    pub bound: &'static str,
    /// Whether the frozen constant must hold, or the margins are only recorded.
    pub asserted: bool,
    pub calibration: Vec<Scenario>,
    pub evaluation: Vec<Scenario>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Calibration {
    pub family: String,
    pub bound: String,
    pub asserted: bool,
    /// Largest calibration margin under the unit constant.
    pub calibration_max: f64,
    pub headroom: f64,
    /// Frozen constant: `headroom * calibration_max`.
    pub constant: f64,
    /// Largest evaluation margin after dividing by `constant`.
    pub evaluation_max: f64,
    pub passed: bool,
    pub calibration_records: Vec<Record>,
    pub evaluation_records: Vec<Record>,
}

fn max_margin(records: &[Record], bound: &str) -> f64 {
    records
        .iter()
        .filter_map(|r| r.margins.get(bound).copied())
        .fold(0.0, f64::max)
}

pub fn calibrate(sweep: &Sweep, trials: usize, seed: u64, exec: Exec) -> Calibration {
    let cal = run(&sweep.calibration, trials, derive_seed(seed, 1, 0), exec);
    let eval = run(&sweep.evaluation, trials, derive_seed(seed, 2, 0), exec);
    let calibration_max = max_margin(&cal, sweep.bound);
    let constant = HEADROOM * calibration_max;
    let evaluation_max = if constant > 0.0 { max_margin(&eval, sweep.bound) / constant } else { 0.0 };
    let clean = cal.iter().chain(&eval).all(|r| r.error.is_none());
    Calibration {
        family: sweep.family.into(),
        bound: sweep.bound.into(),
        asserted: sweep.asserted,
        calibration_max,
        headroom: HEADROOM,
        constant,
        evaluation_max,
        passed: clean && evaluation_max <= 1.0,
        calibration_records: cal,
        evaluation_records: eval,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplingSummary {
    pub scenario: Scenario,
    pub n: usize,
    pub m: usize,
    /// True number of intersecting pairs.
    pub w: usize,
    pub r: usize,
    pub trials: usize,
    pub expected: f64,
    pub mean_sampled: f64,
    pub relative_error: f64,
    pub tolerance: f64,
    pub within_tolerance: bool,
    /// `sum m_i = m` in every trial.
    pub points_exact: bool,
    pub records: Vec<SamplingRecord>,
}

pub fn sampling_experiment(sc: &Scenario, trials: usize, seed: u64, exec: Exec) -> Result<SamplingSummary> {
    let inst = generate(sc, seed)?;
    let segs = inst.all_segments();
    let n = segs.len();
    let w = crate::arrangement::Arrangement::build(&segs)?.intersecting_pairs();
    let r = sample_size(n, w);
    let records: Vec<SamplingRecord> = exec
        .map_range(trials, |i| clarkson_shor_trial(&segs, &inst.points, r, derive_seed(seed, 3, i as u64)))
        .into_iter()
        .collect::<Result<_>>()?;
    let expected = expected_sampled_intersections(w, n, r);
    let mean = records.iter().map(|r| r.sampled_intersections as f64).sum::<f64>() / trials.max(1) as f64;
    let relative_error = if expected > 0.0 { (mean - expected).abs() / expected } else { mean };
    let tolerance = 0.2;
    Ok(SamplingSummary {
        scenario: sc.clone(),
        n,
        m: inst.points.len(),
        w,
        r,
        trials,
        expected,
        mean_sampled: mean,
        relative_error,
        tolerance,
        within_tolerance: relative_error <= tolerance,
        points_exact: records.iter().all(|rec| rec.sum_m == inst.points.len() && rec.points_partitioned),
        records,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub calibrations: Vec<Calibration>,
    pub sampling: Vec<SamplingSummary>,
    /// Invariant failures collected from every record.
    pub violations: Vec<String>,
    /// Trials that failed to run.
    pub errors: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
            && self.errors.is_empty()
            && self.calibrations.iter().all(|c| c.passed || !c.asserted)
            && self.sampling.iter().all(|s| s.within_tolerance && s.points_exact)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

pub struct Suite {
    pub name: &'static str,
    pub sweeps: Vec<Sweep>,
    pub sampling: Vec<Scenario>,
    pub sampling_trials: usize,
}

fn shifted(t: usize, m: usize) -> Scenario {
    Scenario::ShiftedCopies { t, m }
}

fn many(n: usize, k: usize) -> Scenario {
    let t = (n as f64 / (k as f64).sqrt()).ceil() as usize;
    Scenario::Random { n, t, k, size: 24, length: 8 }
}

fn grid(h: usize) -> Scenario {
    Scenario::Grid { h, v: h, marks: (h - 1) * (h - 1) / 2 }
}

fn stabber(n: usize) -> Scenario {
    Scenario::Stabber { n, size: 20 }
}

fn chords(n: usize) -> Scenario {
    Scenario::ChordsLong { n, c: "1".into(), radius: 20 }
}

impl Suite {
    pub fn by_name(name: &str) -> Result<Suite> {
        match name {
            "default" => Ok(Suite::default_suite()),
            "quick" => Ok(Suite::quick()),
            "empty" => Ok(Suite { name: "empty", sweeps: Vec::new(), sampling: Vec::new(), sampling_trials: 0 }),
            _ => Err(Error::Input(format!("unknown suite {name:?} (default, quick, empty)"))),
        }
    }

    pub fn default_suite() -> Suite {
        let sweep_all = |f: fn(usize, usize) -> Scenario, a: &[usize], b: &[usize]| {
            a.iter().flat_map(|&x| b.iter().map(move |&y| f(x, y))).collect::<Vec<_>>()
        };
        Suite {
            name: "default",
            sweeps: vec![
                Sweep {
                    family: "shifted_copies",
                    bound: "single_face",
                    asserted: true,
                    calibration: vec![shifted(2, 4), shifted(2, 8), shifted(4, 4)],
                    evaluation: sweep_all(shifted, &[2, 4, 8], &[4, 8, 16]),
                },
                Sweep {
                    family: "random_many_faces",
                    bound: "many_faces",
                    asserted: true,
                    calibration: sweep_all(many, &[16, 24], &[4, 9]),
                    evaluation: sweep_all(many, &[48, 96], &[4, 9, 16]),
                },
                Sweep {
                    family: "grid",
                    bound: "incidences",
                    asserted: false,
                    calibration: vec![grid(4), grid(5)],
                    evaluation: vec![grid(8), grid(12)],
                },
                Sweep {
                    family: "stabber",
                    bound: "linear",
                    asserted: true,
                    calibration: vec![stabber(8), stabber(12)],
                    evaluation: vec![stabber(24), stabber(48)],
                },
                Sweep {
                    family: "chords_long",
                    bound: "linear",
                    asserted: true,
                    calibration: vec![chords(8), chords(12)],
                    evaluation: vec![chords(24), chords(48)],
                },
            ],
            sampling: vec![Scenario::Random { n: 40, t: 1, k: 30, size: 20, length: 20 }],
            sampling_trials: 100,
        }
    }

    pub fn quick() -> Suite {
        Suite {
            name: "quick",
            sweeps: vec![
                Sweep {
                    family: "shifted_copies",
                    bound: "single_face",
                    asserted: true,
                    calibration: vec![shifted(2, 2)],
                    evaluation: vec![shifted(2, 4), shifted(3, 4)],
                },
                Sweep {
                    family: "stabber",
                    bound: "linear",
                    asserted: true,
                    calibration: vec![stabber(6)],
                    evaluation: vec![stabber(10)],
                },
            ],
            sampling: vec![Scenario::Random { n: 16, t: 1, k: 8, size: 10, length: 10 }],
            sampling_trials: 10,
        }
    }
}

pub fn run_suite(suite: &Suite, trials: usize, seed: u64, exec: Exec) -> Report {
    let calibrations: Vec<Calibration> = suite
        .sweeps
        .iter()
        .enumerate()
        .map(|(i, s)| calibrate(s, trials, derive_seed(seed, 10 + i as u64, 0), exec))
        .collect();
    let mut errors = Vec::new();
    let mut sampling = Vec::new();
    for (i, sc) in suite.sampling.iter().enumerate() {
        match sampling_experiment(sc, suite.sampling_trials, derive_seed(seed, 100 + i as u64, 0), exec) {
            Ok(s) => sampling.push(s),
            Err(e) => errors.push(format!("sampling {i}: {e}")),
        }
    }
    let mut violations = Vec::new();
    for c in &calibrations {
        for r in c.calibration_records.iter().chain(&c.evaluation_records) {
            let tag = format!("{} trial {}", c.family, r.trial);
            violations.extend(r.violations.iter().map(|v| format!("{tag}: {v}")));
            errors.extend(r.error.iter().map(|e| format!("{tag}: {e}")));
        }
    }
    for s in &sampling {
        if !s.points_exact {
            violations.push("sampling: point counts do not sum to m".into());
        }
    }
    Report { schema: SCHEMA, suite: suite.name.into(), seed, trials, calibrations, sampling, violations, errors }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_scenario_list() {
        assert!(run(&[], 3, 1, Exec::Sequential).is_empty());
        let r = run_suite(&Suite::by_name("empty").unwrap(), 2, 1, Exec::Sequential);
        assert!(r.passed());
    }

    #[test]
    fn records_ordered_and_deterministic() {
        let scs = vec![shifted(2, 3), stabber(6)];
        let a = run(&scs, 2, 5, Exec::Parallel);
        let b = run(&scs, 2, 5, Exec::Sequential);
        assert_eq!(a, b);
        assert_eq!(a.iter().map(|r| r.trial).collect::<Vec<_>>(), vec![0, 1, 0, 1]);
        for r in &a {
            assert!(r.violations.is_empty(), "{:?}", r.violations);
            assert!(r.margins.values().all(|m| m.is_finite()));
        }
    }

    #[test]
    fn quick_suite_reproducible() {
        let a = run_suite(&Suite::quick(), 1, 42, Exec::Parallel).to_json();
        let b = run_suite(&Suite::quick(), 1, 42, Exec::Sequential).to_json();
        assert_eq!(a, b);
        assert!(a.contains("\"schema\": 1"));
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(1, 0, 0), derive_seed(1, 0, 1));
        assert_ne!(derive_seed(1, 0, 0), derive_seed(1, 1, 0));
        assert_eq!(derive_seed(7, 3, 2), derive_seed(7, 3, 2));
    }
}
