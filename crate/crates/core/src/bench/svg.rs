use std::fmt::Write;

use crate::arrangement::{Arrangement, FaceId};
use crate::exact::{to_f64, Point};

const SIZE: f64 = 800.0;
const PAD: f64 = 20.0;

struct Frame {
    min_x: f64,
    max_y: f64,
    scale: f64,
}

impl Frame {
    fn new<'a>(pts: impl Iterator<Item = &'a Point>) -> Frame {
        let (mut lx, mut ly, mut hx, mut hy) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in pts {
            let (x, y) = (to_f64(&p.x), to_f64(&p.y));
            lx = lx.min(x);
            ly = ly.min(y);
            hx = hx.max(x);
            hy = hy.max(y);
        }
        if !lx.is_finite() {
            (lx, ly, hx, hy) = (0.0, 0.0, 1.0, 1.0);
        }
        let span = (hx - lx).max(hy - ly).max(1e-9);
        Frame { min_x: lx, max_y: hy, scale: (SIZE - 2.0 * PAD) / span }
    }

    fn xy(&self, p: &Point) -> (f64, f64) {
        (PAD + (to_f64(&p.x) - self.min_x) * self.scale, PAD + (self.max_y - to_f64(&p.y)) * self.scale)
    }
}

/// Segments as lines, highlighted faces filled (holes cut out), marking
/// points as dots and an optional path as a polyline. Output depends on the
/// input only.
pub fn render_svg(arr: &Arrangement, highlighted: &[FaceId], points: &[Point], path: Option<&[Point]>) -> String {
    let frame = Frame::new(
        arr.vertices
            .iter()
            .map(|v| &v.point)
            .chain(points)
            .chain(path.unwrap_or(&[])),
    );
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    for &f in highlighted {
        let cycles = arr.boundary_cycles(f);
        let ring = |c: &Vec<usize>| -> Vec<String> {
            c.iter()
                .map(|&h| {
                    let (x, y) = frame.xy(arr.origin_point(h));
                    format!("{x:.3},{y:.3}")
                })
                .collect()
        };
        if !arr.faces[f].is_unbounded() && cycles.len() == 1 {
            let _ = writeln!(out, r##"<polygon points="{}" fill="#9ecae1" stroke="none"/>"##, ring(&cycles[0]).join(" "));
            continue;
        }
        let mut d = String::new();
        if arr.faces[f].is_unbounded() {
            let _ = write!(d, "M0,0 L{SIZE},0 L{SIZE},{SIZE} L0,{SIZE} Z ");
        }
        for c in &cycles {
            let pts = ring(c);
            if let Some((first, rest)) = pts.split_first() {
                let _ = write!(d, "M{first} ");
                for p in rest {
                    let _ = write!(d, "L{p} ");
                }
                d.push_str("Z ");
            }
        }
        let _ = writeln!(out, r##"<path d="{}" fill="#9ecae1" fill-rule="evenodd" stroke="none"/>"##, d.trim_end());
    }
    for s in &arr.segments {
        let (x1, y1) = frame.xy(&s.source);
        let (x2, y2) = frame.xy(&s.target);
        let _ = writeln!(
            out,
            r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="black" stroke-width="1.5"/>"#
        );
    }
    if let Some(path) = path {
        let pts: Vec<String> = path
            .iter()
            .map(|p| {
                let (x, y) = frame.xy(p);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(out, r#"<polyline points="{}" fill="none" stroke="red" stroke-width="2"/>"#, pts.join(" "));
    }
    for p in points {
        let (x, y) = frame.xy(p);
        let _ = writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="4" fill="red"/>"#);
    }
    out.push_str("</svg>\n");
    out
}
