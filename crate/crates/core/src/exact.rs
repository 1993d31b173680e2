//! Exact rational primitives: points, oriented segments and the predicates
//! every other module is built on. Nothing in here touches floating point.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-precision rational. Always reduced with a positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p/q` or a bare integer.
pub fn parse_rat(token: &str) -> Result<Rat> {
    let token = token.trim();
    let parsed = match token.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok();
            let d = BigInt::from_str(d.trim()).ok();
            match (n, d) {
                (Some(n), Some(d)) if !d.is_zero() => Some(Rat::new(n, d)),
                _ => None,
            }
        }
        None => BigInt::from_str(token).ok().map(Rat::from_integer),
    };
    parsed.ok_or_else(|| Error::Parse(format!("not a rational: {token:?}")))
}

/// Lossy conversion for rendering and reporting only.
pub fn to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rat,
    pub y: Rat,
}

impl Point {
    pub fn new(x: Rat, y: Rat) -> Self {
        Point { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Point::new(rat(x), rat(y))
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn add(&self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn scale(&self, k: &Rat) -> Point {
        Point::new(&self.x * k, &self.y * k)
    }

    pub fn midpoint(&self, o: &Point) -> Point {
        let half = ratio(1, 2);
        Point::new((&self.x + &o.x) * &half, (&self.y + &o.y) * &half)
    }

    pub fn neg(&self) -> Point {
        Point::new(-&self.x, -&self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.x.to_string(), self.y.to_string()].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [x, y] = <[String; 2]>::deserialize(d)?;
        let x = parse_rat(&x).map_err(serde::de::Error::custom)?;
        let y = parse_rat(&y).map_err(serde::de::Error::custom)?;
        Ok(Point::new(x, y))
    }
}

/// Serializes optional rationals as `"p/q"` strings or `null`.
pub fn serialize_opt_rat<S: serde::Serializer>(v: &Option<Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
    v.as_ref().map(|r| r.to_string()).serialize(s)
}

/// Serializes a list of rationals as `"p/q"` strings.
pub fn serialize_rats<S: serde::Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

pub fn cross(a: &Point, b: &Point) -> Rat {
    &a.x * &b.y - &a.y * &b.x
}

pub fn dot(a: &Point, b: &Point) -> Rat {
    &a.x * &b.x + &a.y * &b.y
}

pub type SegId = u32;

/// Closed segment oriented from `source` to `target`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Segment {
    pub id: SegId,
    pub source: Point,
    pub target: Point,
}

impl Segment {
    pub fn new(id: SegId, source: Point, target: Point) -> Result<Self> {
        if source == target {
            return Err(Error::Input(format!("segment {id} has zero length")));
        }
        Ok(Segment { id, source, target })
    }

    pub fn from_ints(id: SegId, x1: i64, y1: i64, x2: i64, y2: i64) -> Self {
        Segment::new(id, Point::int(x1, y1), Point::int(x2, y2)).expect("non-degenerate")
    }

    pub fn is_vertical(&self) -> bool {
        self.source.x == self.target.x
    }

    pub fn direction(&self) -> Point {
        self.target.sub(&self.source)
    }

    /// Lexicographically smaller endpoint first.
    pub fn sorted_endpoints(&self) -> (&Point, &Point) {
        if self.source <= self.target {
            (&self.source, &self.target)
        } else {
            (&self.target, &self.source)
        }
    }

    pub fn min_x(&self) -> &Rat {
        std::cmp::min(&self.source.x, &self.target.x)
    }

    pub fn max_x(&self) -> &Rat {
        std::cmp::max(&self.source.x, &self.target.x)
    }

    /// y-coordinate of the supporting line at `x`. Panics on vertical segments.
    pub fn y_at(&self, x: &Rat) -> Rat {
        let d = self.direction();
        assert!(!d.x.is_zero(), "y_at on vertical segment {}", self.id);
        &self.source.y + (x - &self.source.x) * &d.y / &d.x
    }

    pub fn slope(&self) -> Option<Rat> {
        let d = self.direction();
        (!d.x.is_zero()).then(|| d.y / d.x)
    }

    pub fn translated(&self, id: SegId, by: &Point) -> Segment {
        Segment {
            id,
            source: self.source.add(by),
            target: self.target.add(by),
        }
    }

    /// Position of a point of the supporting line along the segment:
    /// 0 at source, 1 at target.
    pub fn param_of(&self, p: &Point) -> Rat {
        let d = self.direction();
        let rel = p.sub(&self.source);
        dot(&rel, &d) / dot(&d, &d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Clockwise,
    Collinear,
    Counterclockwise,
}

impl Orientation {
    pub fn reversed(self) -> Self {
        match self {
            Orientation::Clockwise => Orientation::Counterclockwise,
            Orientation::Collinear => Orientation::Collinear,
            Orientation::Counterclockwise => Orientation::Clockwise,
        }
    }

    fn of_sign(v: &Rat) -> Self {
        if v.is_positive() {
            Orientation::Counterclockwise
        } else if v.is_negative() {
            Orientation::Clockwise
        } else {
            Orientation::Collinear
        }
    }
}

pub fn orientation(p: &Point, q: &Point, r: &Point) -> Orientation {
    Orientation::of_sign(&cross(&q.sub(p), &r.sub(p)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Intersection {
    Empty,
    Single(Point),
    /// Collinear overlap; `start < end` lexicographically.
    Overlap { start: Point, end: Point },
}

pub fn point_on_segment(p: &Point, s: &Segment) -> bool {
    if orientation(&s.source, &s.target, p) != Orientation::Collinear {
        return false;
    }
    let (lo, hi) = s.sorted_endpoints();
    lo <= p && p <= hi
}

pub fn intersect(a: &Segment, b: &Segment) -> Intersection {
    let da = a.direction();
    let db = b.direction();
    let w = b.source.sub(&a.source);
    let denom = cross(&da, &db);
    if !denom.is_zero() {
        let t = cross(&w, &db) / &denom;
        let u = cross(&w, &da) / &denom;
        let unit = Rat::one();
        if t.is_negative() || t > unit || u.is_negative() || u > unit {
            return Intersection::Empty;
        }
        return Intersection::Single(a.source.add(&da.scale(&t)));
    }
    if !cross(&w, &da).is_zero() {
        return Intersection::Empty;
    }
    // Collinear: intersect the lexicographic extents.
    let (a0, a1) = a.sorted_endpoints();
    let (b0, b1) = b.sorted_endpoints();
    let lo = std::cmp::max(a0, b0);
    let hi = std::cmp::min(a1, b1);
    match lo.cmp(hi) {
        Ordering::Greater => Intersection::Empty,
        Ordering::Equal => Intersection::Single(lo.clone()),
        Ordering::Less => Intersection::Overlap {
            start: lo.clone(),
            end: hi.clone(),
        },
    }
}

pub fn segments_meet(a: &Segment, b: &Segment) -> bool {
    intersect(a, b) != Intersection::Empty
}

/// Twice the signed area of a closed polygon.
pub fn signed_area2(pts: &[&Point]) -> Rat {
    let n = pts.len();
    let mut acc = Rat::zero();
    for i in 0..n {
        acc += cross(pts[i], pts[(i + 1) % n]);
    }
    acc
}

/// Winding number of a closed polyline around `p`; `p` must not lie on it.
pub fn winding_number(pts: &[&Point], p: &Point) -> i64 {
    let n = pts.len();
    let mut wn = 0i64;
    for i in 0..n {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        if a.y <= p.y {
            if b.y > p.y && orientation(a, b, p) == Orientation::Counterclockwise {
                wn += 1;
            }
        } else if b.y <= p.y && orientation(a, b, p) == Orientation::Clockwise {
            wn -= 1;
        }
    }
    wn
}

/// Strict point-in-polygon test for a closed vertex loop.
pub fn point_in_polygon(poly: &[Point], p: &Point) -> bool {
    let refs: Vec<&Point> = poly.iter().collect();
    winding_number(&refs, p) != 0
}

/// Parses the segment text format: one segment per line as `x1 y1 x2 y2`,
/// `#` comment lines. Ids are assigned in file order starting at `first_id`.
pub fn parse_segments(text: &str, first_id: SegId) -> Result<Vec<Segment>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 4 {
            return Err(Error::Parse(format!(
                "line {}: expected 4 rationals, found {}",
                lineno + 1,
                toks.len()
            )));
        }
        let v = toks
            .iter()
            .map(|t| parse_rat(t))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        let id = first_id + out.len() as SegId;
        let seg = Segment::new(
            id,
            Point::new(v[0].clone(), v[1].clone()),
            Point::new(v[2].clone(), v[3].clone()),
        )
        .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        out.push(seg);
    }
    Ok(out)
}

pub fn format_segments(segments: &[Segment]) -> String {
    let mut s = String::new();
    for seg in segments {
        s.push_str(&format!(
            "{} {} {} {}\n",
            seg.source.x, seg.source.y, seg.target.x, seg.target.y
        ));
    }
    s
}
