//! Seeded instance families: shifted copies of a tangent fan, grids, random
//! segments, convex polygons, stabbed segments, long circle chords and
//! translated copies of a reflected robot around pins.

use num_traits::{One, Signed, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{intersect, parse_rat, point_on_segment, point_in_polygon, rat, Intersection, Point, Rat, SegId, Segment};
use crate::overlay::MarkedInstance;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scenario {
    /// `t` collections, each holding `m` translates of one tangent segment.
    ShiftedCopies { t: usize, m: usize },
    /// `h` horizontal and `v` vertical segments; `marks` random cells marked.
    Grid { h: usize, v: usize, marks: usize },
    /// `n` lattice segments of extent at most `length`, dealt round-robin into
    /// `t` collections, with `k` marking points.
    Random { n: usize, t: usize, k: usize, size: i64, length: i64 },
    /// `k` convex polygons with `sides` vertices each, one collection per
    /// polygon, marked far outside.
    Polygons { k: usize, sides: usize, size: i64 },
    /// Segment 0 is crossed by all `n - 1` others.
    Stabber { n: usize, size: i64 },
    /// `n` chords of the circle of radius `radius` about the origin, each of
    /// length at least `c * radius`; `c` is a rational string.
    ChordsLong { n: usize, c: String, radius: i64 },
    /// Forbidden regions of a translating robot among `pins` random pins,
    /// one family per robot edge.
    Minkowski { robot: Vec<Point>, pins: usize, size: i64 },
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn generate(sc: &Scenario, seed: u64) -> Result<MarkedInstance> {
    let mut rng = rng_for(seed);
    match sc {
        Scenario::ShiftedCopies { t, m } => shifted_copies(*t, *m).map(|(inst, _)| inst),
        Scenario::Grid { h, v, marks } => grid(*h, *v, *marks, &mut rng),
        Scenario::Random { n, t, k, size, length } => random(*n, *t, *k, *size, *length, &mut rng),
        Scenario::Polygons { k, sides, size } => polygons(*k, *sides, *size, &mut rng),
        Scenario::Stabber { n, size } => stabber(*n, *size, &mut rng),
        Scenario::ChordsLong { n, c, radius } => chords_long(*n, &parse_rat(c)?, *radius, &mut rng),
        Scenario::Minkowski { robot, pins, size } => minkowski(robot, *pins, *size, &mut rng),
    }
}

/// Segment `i` of the fan is tangent to `y = -x^2` at `x = i` and spans `[i - 1, i + 1]`.
pub fn tangent_fan(t: usize) -> Vec<Segment> {
    (0..t)
        .map(|i| {
            let i = i as i64;
            let y = |x: i64| -2 * i * x + i * i;
            Segment::from_ints(i as SegId, i - 1, y(i - 1), i + 1, y(i + 1))
        })
        .collect()
}

pub fn shifted_copies(t: usize, m: usize) -> Result<(MarkedInstance, Rat)> {
    if t == 0 || m == 0 {
        return Err(Error::Input("shifted copies need t >= 1 and m >= 1".into()));
    }
    shifted_copies_from(&tangent_fan(t), m)
}

/// One collection per base segment, holding its `m` translates by multiples
/// of the strip width (the base's x-extent plus one). The marking point sits
/// below everything.
pub fn shifted_copies_from(base: &[Segment], m: usize) -> Result<(MarkedInstance, Rat)> {
    if base.is_empty() || m == 0 {
        return Err(Error::Input("shifted copies need a base and m >= 1".into()));
    }
    let lo = base.iter().map(|s| s.min_x()).min().expect("non-empty").clone();
    let hi = base.iter().map(|s| s.max_x()).max().expect("non-empty").clone();
    let a = &hi - &lo + Rat::one();
    let mut collections = Vec::new();
    for (i, s) in base.iter().enumerate() {
        let copies = (0..m)
            .map(|j| s.translated((i * m + j) as SegId, &Point::new(&a * rat(j as i64), Rat::zero())))
            .collect();
        collections.push(copies);
    }
    let min_y = base
        .iter()
        .flat_map(|s| [&s.source.y, &s.target.y])
        .min()
        .expect("non-empty")
        .clone();
    let p = Point::new(lo, min_y - Rat::one());
    Ok((MarkedInstance::new(collections, vec![p])?, a))
}

fn grid(h: usize, v: usize, marks: usize, rng: &mut ChaCha8Rng) -> Result<MarkedInstance> {
    if h < 2 || v < 2 {
        return Err(Error::Input("grid needs at least 2 lines each way".into()));
    }
    let cells = (h - 1) * (v - 1);
    if marks > cells {
        return Err(Error::Input(format!("{marks} marks exceed {cells} cells")));
    }
    let (hi, vi) = (h as i64, v as i64);
    let horizontal: Vec<Segment> = (0..hi).map(|i| Segment::from_ints(i as SegId, 0, i + 1, vi + 1, i + 1)).collect();
    let vertical: Vec<Segment> =
        (0..vi).map(|i| Segment::from_ints((hi + i) as SegId, i + 1, 0, i + 1, hi + 1)).collect();
    let half = Rat::new(1.into(), 2.into());
    let points = sample(rng, cells, marks)
        .into_iter()
        .map(|c| {
            let (cx, cy) = ((c % (v - 1)) as i64, (c / (v - 1)) as i64);
            Point::new(rat(cx + 1) + &half, rat(cy + 1) + &half)
        })
        .collect();
    MarkedInstance::new(vec![horizontal, vertical], points)
}

/// A random point with denominator 7 in `[lo, hi]^2`, off every segment.
pub fn free_point(rng: &mut ChaCha8Rng, segments: &[Segment], lo: i64, hi: i64) -> Result<Point> {
    for _ in 0..10_000 {
        let x = Rat::new(rng.gen_range(lo * 7..=hi * 7).into(), 7.into());
        let y = Rat::new(rng.gen_range(lo * 7..=hi * 7).into(), 7.into());
        let p = Point::new(x, y);
        if segments.iter().all(|s| !point_on_segment(&p, s)) {
            return Ok(p);
        }
    }
    Err(Error::Input("could not place a point off all segments".into()))
}

fn random(n: usize, t: usize, k: usize, size: i64, length: i64, rng: &mut ChaCha8Rng) -> Result<MarkedInstance> {
    if t == 0 || size < 1 || length < 1 {
        return Err(Error::Input("random needs t >= 1, size >= 1 and length >= 1".into()));
    }
    let mut segs = Vec::with_capacity(n);
    while segs.len() < n {
        let a = Point::int(rng.gen_range(0..=size), rng.gen_range(0..=size));
        let d = Point::int(rng.gen_range(-length..=length), rng.gen_range(-length..=length));
        if let Ok(s) = Segment::new(segs.len() as SegId, a.clone(), a.add(&d)) {
            segs.push(s);
        }
    }
    let points = (0..k).map(|_| free_point(rng, &segs, 0, size)).collect::<Result<_>>()?;
    let mut collections = vec![Vec::new(); t];
    for (i, s) in segs.into_iter().enumerate() {
        collections[i % t].push(s);
    }
    MarkedInstance::new(collections, points)
}

/// Rational point on the unit circle: `((1 - s^2) / (1 + s^2), 2s / (1 + s^2))`.
pub fn circle_point(s: &Rat) -> Point {
    let one = Rat::one();
    let d = &one + s * s;
    Point::new((&one - s * s) / &d, (s * rat(2)) / &d)
}

fn random_slope(rng: &mut ChaCha8Rng) -> Rat {
    Rat::new(rng.gen_range(-64..=64).into(), 16.into())
}

/// Closed loop of segments through `pts`, ids from `first`.
pub fn polygon_segments(pts: &[Point], first: SegId) -> Result<Vec<Segment>> {
    (0..pts.len())
        .map(|i| Segment::new(first + i as SegId, pts[i].clone(), pts[(i + 1) % pts.len()].clone()))
        .collect()
}

/// One collection per polygon; the marking point is below and left of all.
pub fn polygons_from(polys: &[Vec<Point>]) -> Result<MarkedInstance> {
    let mut collections = Vec::new();
    let mut next: SegId = 0;
    for poly in polys {
        let segs = polygon_segments(poly, next)?;
        next += segs.len() as SegId;
        collections.push(segs);
    }
    let all = polys.iter().flatten();
    let min_x = all.clone().map(|p| &p.x).min().cloned().unwrap_or_else(Rat::zero);
    let min_y = all.map(|p| &p.y).min().cloned().unwrap_or_else(Rat::zero);
    MarkedInstance::new(collections, vec![Point::new(min_x - Rat::one(), min_y - Rat::one())])
}

fn polygons(k: usize, sides: usize, size: i64, rng: &mut ChaCha8Rng) -> Result<MarkedInstance> {
    if sides < 3 || size < 8 {
        return Err(Error::Input("polygons need at least 3 sides and size >= 8".into()));
    }
    let mut polys = Vec::with_capacity(k);
    for _ in 0..k {
        let center = Point::int(rng.gen_range(0..=size), rng.gen_range(0..=size));
        let r = rat(rng.gen_range(size / 8..=size / 3).max(1));
        let mut slopes: Vec<Rat> = Vec::new();
        while slopes.len() < sides {
            let s = random_slope(rng);
            if !slopes.contains(&s) {
                slopes.push(s);
            }
        }
        slopes.sort();
        polys.push(slopes.iter().map(|s| circle_point(s).scale(&r).add(&center)).collect());
    }
    polygons_from(&polys)
}

fn stabber(n: usize, size: i64, rng: &mut ChaCha8Rng) -> Result<MarkedInstance> {
    if n == 0 || size < 2 {
        return Err(Error::Input("stabber needs n >= 1 and size >= 2".into()));
    }
    let mut segs = vec![Segment::from_ints(0, 0, 0, size, 0)];
    while segs.len() < n {
        let below = Point::int(rng.gen_range(0..=size), -rng.gen_range(1..=size));
        let above = Point::int(rng.gen_range(0..=size), rng.gen_range(1..=size));
        segs.push(Segment::new(segs.len() as SegId, below, above)?);
    }
    let p = free_point(rng, &segs, 0, size)?;
    MarkedInstance::new(vec![segs], vec![p])
}

fn chords_long(n: usize, c: &Rat, radius: i64, rng: &mut ChaCha8Rng) -> Result<MarkedInstance> {
    if !c.is_positive() || *c > rat(2) {
        return Err(Error::Input(format!("chord length factor {c} must lie in (0, 2]")));
    }
    if radius < 1 {
        return Err(Error::Input("radius must be positive".into()));
    }
    let r = rat(radius);
    let min_len2 = c * c * &r * &r;
    let mut segs = Vec::with_capacity(n);
    let mut tries = 0;
    while segs.len() < n {
        tries += 1;
        if tries > 100_000 {
            return Err(Error::Input(format!("could not draw chords of length >= {c} r")));
        }
        let a = circle_point(&random_slope(rng)).scale(&r);
        let b = if *c == rat(2) { a.neg() } else { circle_point(&random_slope(rng)).scale(&r) };
        let d = b.sub(&a);
        if &d.x * &d.x + &d.y * &d.y < min_len2 {
            continue;
        }
        if let Ok(s) = Segment::new(segs.len() as SegId, a, b) {
            if !segs.iter().any(|o: &Segment| matches!(intersect(o, &s), Intersection::Overlap { .. })) {
                segs.push(s);
            }
        }
    }
    let p = free_point(rng, &segs, -radius, radius)?;
    MarkedInstance::new(vec![segs], vec![p])
}

/// Checks that a vertex loop is a simple polygon with non-zero area.
pub fn check_simple(poly: &[Point]) -> Result<()> {
    let n = poly.len();
    if n < 3 {
        return Err(Error::Input("a polygon needs at least 3 vertices".into()));
    }
    let edges = polygon_segments(poly, 0)?;
    for i in 0..n {
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            let meet = intersect(&edges[i], &edges[j]);
            let ok = if adjacent {
                let shared = if j == i + 1 { &poly[j] } else { &poly[0] };
                meet == Intersection::Single(shared.clone())
            } else {
                meet == Intersection::Empty
            };
            if !ok {
                return Err(Error::Input(format!("polygon edges {i} and {j} intersect")));
            }
        }
    }
    let refs: Vec<&Point> = poly.iter().collect();
    if crate::exact::signed_area2(&refs).is_zero() {
        return Err(Error::Input("polygon has zero area".into()));
    }
    Ok(())
}

/// Forbidden region of each pin: the robot reflected through `c` and placed
/// at the pin, with vertices `q + c - v`.
pub fn forbidden_regions(robot: &[Point], c: &Point, pins: &[Point]) -> Vec<Vec<Point>> {
    pins.iter()
        .map(|q| robot.iter().map(|v| q.add(c).sub(v)).collect())
        .collect()
}

/// Groups the forbidden-region edges into one family per robot edge; family
/// `i` holds the translates of the reflected edge `i`.
pub fn reflect_translate(robot: &[Point], c: &Point, pins: &[Point]) -> Result<Vec<Vec<Segment>>> {
    check_simple(robot)?;
    let regions = forbidden_regions(robot, c, pins);
    let k = robot.len();
    let n = pins.len();
    let mut families = vec![Vec::with_capacity(n); k];
    for (j, region) in regions.iter().enumerate() {
        for i in 0..k {
            let id = (i * n + j) as SegId;
            families[i].push(Segment::new(id, region[i].clone(), region[(i + 1) % k].clone())?);
        }
    }
    Ok(families)
}

/// Whether `p` lies on or inside a forbidden region.
pub fn is_forbidden(regions: &[Vec<Point>], p: &Point) -> bool {
    regions.iter().any(|r| {
        point_in_polygon(r, p)
            || (0..r.len()).any(|i| {
                let s = Segment { id: 0, source: r[i].clone(), target: r[(i + 1) % r.len()].clone() };
                point_on_segment(p, &s)
            })
    })
}

fn minkowski(robot: &[Point], pins: usize, size: i64, rng: &mut ChaCha8Rng) -> Result<MarkedInstance> {
    let pin_points: Vec<Point> = (0..pins)
        .map(|_| Point::int(rng.gen_range(0..=size), rng.gen_range(0..=size)))
        .collect();
    let c = robot.first().ok_or_else(|| Error::Input("empty robot".into()))?;
    let families = reflect_translate(robot, c, &pin_points)?;
    let regions = forbidden_regions(robot, c, &pin_points);
    let segs: Vec<Segment> = families.iter().flatten().cloned().collect();
    let reach = size + robot.iter().map(|p| p.x.abs().max(p.y.abs())).max().map_or(0, |m| m.ceil().to_integer().try_into().unwrap_or(0));
    for _ in 0..1000 {
        let p = free_point(rng, &segs, -reach, size + reach)?;
        if !is_forbidden(&regions, &p) {
            return MarkedInstance::new(families, vec![p]);
        }
    }
    Err(Error::Input("no free placement found".into()))
}
