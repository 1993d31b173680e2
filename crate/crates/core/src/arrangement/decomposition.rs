//! Vertical (trapezoidal) decomposition: walls go up and down from every
//! vertex until they hit an edge. Straight segments have no interior
//! x-extrema, so endpoints and crossings are the only wall sources.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{Arrangement, EdgeId, FaceId, UNBOUNDED};
use crate::exact::{ratio, Point, Rat, SegId, Segment};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trapezoid {
    /// Segment below, `None` for minus infinity.
    pub bottom: Option<SegId>,
    /// Segment above, `None` for plus infinity.
    pub top: Option<SegId>,
    /// Left wall abscissa, `None` for minus infinity.
    #[serde(serialize_with = "crate::exact::serialize_opt_rat")]
    pub left: Option<Rat>,
    /// Right wall abscissa, `None` for plus infinity.
    #[serde(serialize_with = "crate::exact::serialize_opt_rat")]
    pub right: Option<Rat>,
    /// Face of the arrangement this trapezoid refines.
    pub face: FaceId,
    #[serde(skip)]
    pub bottom_edge: Option<EdgeId>,
    #[serde(skip)]
    pub top_edge: Option<EdgeId>,
}

fn edge_y(arr: &Arrangement, e: EdgeId, x: &Rat) -> Rat {
    let (lo, hi) = arr.edge_endpoints(e);
    if x == &lo.x {
        return lo.y.clone();
    }
    if x == &hi.x {
        return hi.y.clone();
    }
    &lo.y + (x - &lo.x) * (&hi.y - &lo.y) / (&hi.x - &lo.x)
}

fn edge_slope(arr: &Arrangement, e: EdgeId) -> Rat {
    let (lo, hi) = arr.edge_endpoints(e);
    (&hi.y - &lo.y) / (&hi.x - &lo.x)
}

fn face_of_gap(arr: &Arrangement, bottom: Option<EdgeId>, top: Option<EdgeId>) -> FaceId {
    match (top, bottom) {
        (Some(t), _) => arr.half_edges[2 * t + 1].face,
        (None, Some(b)) => arr.half_edges[2 * b].face,
        (None, None) => UNBOUNDED,
    }
}

/// Sweeps the vertex abscissae left to right, keeping the x-monotone edges
/// crossing the current slab in vertical order. A gap between consecutive
/// edges closes at an abscissa exactly when a vertex lies on its closed
/// vertical extent there.
pub fn decompose(arr: &Arrangement) -> Vec<Trapezoid> {
    let owner = |e: Option<EdgeId>| e.map(|e| arr.edges[e].owners[0]);
    let mut xs: Vec<Rat> = arr.vertices.iter().map(|v| v.point.x.clone()).collect();
    xs.dedup();

    let mut starts: HashMap<&Rat, Vec<EdgeId>> = HashMap::new();
    for e in 0..arr.edges.len() {
        let (lo, hi) = arr.edge_endpoints(e);
        if lo.x != hi.x {
            starts.entry(&lo.x).or_default().push(e);
        }
    }
    let mut ys_at: HashMap<&Rat, Vec<&Rat>> = HashMap::new();
    for v in &arr.vertices {
        ys_at.entry(&v.point.x).or_default().push(&v.point.y);
    }

    let mut out = Vec::new();
    let mut active: Vec<EdgeId> = Vec::new();
    let mut open: Vec<Option<Rat>> = vec![None];

    for (xi, x) in xs.iter().enumerate() {
        // Vertices are sorted lexicographically, so these are ascending.
        let ys = &ys_at[x];
        let mut persisting: HashMap<(Option<EdgeId>, Option<EdgeId>), Option<Rat>> = HashMap::new();
        for gap in 0..=active.len() {
            let below = gap.checked_sub(1).map(|i| active[i]);
            let above = active.get(gap).copied();
            let yb = below.map(|e| edge_y(arr, e, x));
            let yt = above.map(|e| edge_y(arr, e, x));
            let first_at_or_above = match &yb {
                Some(yb) => ys.partition_point(|y| *y < yb),
                None => 0,
            };
            let blocked = ys
                .get(first_at_or_above)
                .is_some_and(|y| yt.as_ref().is_none_or(|yt| *y <= yt));
            if blocked {
                out.push(Trapezoid {
                    bottom: owner(below),
                    top: owner(above),
                    left: open[gap].clone(),
                    right: Some(x.clone()),
                    face: face_of_gap(arr, below, above),
                    bottom_edge: below,
                    top_edge: above,
                });
            } else {
                persisting.insert((below, above), open[gap].clone());
            }
        }

        active.retain(|&e| arr.edge_endpoints(e).1.x != *x);
        if let Some(new) = starts.get(x) {
            active.extend(new.iter().copied());
        }
        let probe = match xs.get(xi + 1) {
            Some(nx) => (x + nx) * ratio(1, 2),
            None => x + Rat::one(),
        };
        let ys_probe: HashMap<EdgeId, Rat> = active.iter().map(|&e| (e, edge_y(arr, e, &probe))).collect();
        active.sort_by(|a, b| ys_probe[a].cmp(&ys_probe[b]));

        open = (0..=active.len())
            .map(|gap| {
                let below = gap.checked_sub(1).map(|i| active[i]);
                let above = active.get(gap).copied();
                match persisting.remove(&(below, above)) {
                    Some(left) => left,
                    None => Some(x.clone()),
                }
            })
            .collect();
        debug_assert!(persisting.is_empty(), "unblocked gap lost its bounding edges");
    }

    for gap in 0..=active.len() {
        let below = gap.checked_sub(1).map(|i| active[i]);
        let above = active.get(gap).copied();
        out.push(Trapezoid {
            bottom: owner(below),
            top: owner(above),
            left: open[gap].clone(),
            right: None,
            face: face_of_gap(arr, below, above),
            bottom_edge: below,
            top_edge: above,
        });
    }
    out
}

/// Open interval of `t` over a linear predicate `a + b·x > 0` on `(lo, hi)`.
fn positive_part(a: &Rat, b: &Rat, lo: &Option<Rat>, hi: &Option<Rat>) -> Option<(Option<Rat>, Option<Rat>)> {
    if b.is_zero() {
        return a.is_positive().then(|| (lo.clone(), hi.clone()));
    }
    let root = -a / b;
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    if b.is_positive() {
        if lo.as_ref().is_none_or(|l| *l < root) {
            lo = Some(root);
        }
    } else if hi.as_ref().is_none_or(|h| *h > root) {
        hi = Some(root);
    }
    let nonempty = match (&lo, &hi) {
        (Some(l), Some(h)) => l < h,
        _ => true,
    };
    nonempty.then_some((lo, hi))
}

impl Trapezoid {
    pub fn bottom_y(&self, arr: &Arrangement, x: &Rat) -> Option<Rat> {
        self.bottom_edge.map(|e| edge_y(arr, e, x))
    }

    pub fn top_y(&self, arr: &Arrangement, x: &Rat) -> Option<Rat> {
        self.top_edge.map(|e| edge_y(arr, e, x))
    }

    /// Membership of `p` shifted by an infinitesimal `(ε, ε²)`, so that
    /// points on walls or edges land in exactly one trapezoid.
    pub fn contains_perturbed(&self, arr: &Arrangement, p: &Point) -> bool {
        if self.left.as_ref().is_some_and(|l| p.x < *l) {
            return false;
        }
        if self.right.as_ref().is_some_and(|r| p.x >= *r) {
            return false;
        }
        if let Some(e) = self.bottom_edge {
            let yb = edge_y(arr, e, &p.x);
            if p.y < yb || (p.y == yb && edge_slope(arr, e).is_positive()) {
                return false;
            }
        }
        if let Some(e) = self.top_edge {
            let yt = edge_y(arr, e, &p.x);
            if p.y > yt || (p.y == yt && !edge_slope(arr, e).is_positive()) {
                return false;
            }
        }
        true
    }

    /// Whether the closed segment meets the open trapezoid.
    pub fn meets_segment(&self, arr: &Arrangement, s: &Segment) -> bool {
        if s.is_vertical() {
            let x = &s.source.x;
            if self.left.as_ref().is_some_and(|l| x <= l) || self.right.as_ref().is_some_and(|r| x >= r) {
                return false;
            }
            let (ylo, yhi) = if s.source.y <= s.target.y {
                (&s.source.y, &s.target.y)
            } else {
                (&s.target.y, &s.source.y)
            };
            let above_bottom = self.bottom_y(arr, x).is_none_or(|yb| *yhi > yb);
            let below_top = self.top_y(arr, x).is_none_or(|yt| *ylo < yt);
            return above_bottom && below_top;
        }
        let mut lo = Some(s.min_x().clone());
        let mut hi = Some(s.max_x().clone());
        if let Some(l) = &self.left {
            if lo.as_ref().is_none_or(|v| v < l) {
                lo = Some(l.clone());
            }
        }
        if let Some(r) = &self.right {
            if hi.as_ref().is_none_or(|v| v > r) {
                hi = Some(r.clone());
            }
        }
        if let (Some(l), Some(h)) = (&lo, &hi) {
            if l >= h {
                return false;
            }
        }
        // y_s(x) = a_s + b_s x; need y_s - y_bottom > 0 and y_top - y_s > 0.
        let line = |p: &Point, q: &Point| {
            let b = (&q.y - &p.y) / (&q.x - &p.x);
            let a = &p.y - &b * &p.x;
            (a, b)
        };
        let (sa, sb) = line(&s.source, &s.target);
        let mut window = Some((lo, hi));
        if let Some(e) = self.bottom_edge {
            let (p, q) = arr.edge_endpoints(e);
            let (ba, bb) = line(p, q);
            window = window.and_then(|(l, h)| positive_part(&(&sa - &ba), &(&sb - &bb), &l, &h));
        }
        if let Some(e) = self.top_edge {
            let (p, q) = arr.edge_endpoints(e);
            let (ta, tb) = line(p, q);
            window = window.and_then(|(l, h)| positive_part(&(&ta - &sa), &(&tb - &sb), &l, &h));
        }
        window.is_some()
    }

    /// A point strictly inside the trapezoid.
    pub fn interior_point(&self, arr: &Arrangement) -> Point {
        let one = Rat::one();
        let x = match (&self.left, &self.right) {
            (Some(l), Some(r)) => (l + r) * ratio(1, 2),
            (None, Some(r)) => r - &one,
            (Some(l), None) => l + &one,
            (None, None) => Rat::zero(),
        };
        let y = mid_or_offset(self.bottom_y(arr, &x), self.top_y(arr, &x));
        Point::new(x, y)
    }

    /// A point on the common wall between `self` and a trapezoid to its
    /// right that avoids every vertex and vertical edge on that wall, if the
    /// two trapezoids share an open wall portion.
    pub fn shared_wall_point(&self, right: &Trapezoid, arr: &Arrangement) -> Option<Point> {
        let x = self.right.as_ref()?;
        if right.left.as_ref() != Some(x) {
            return None;
        }
        let lower = match (self.bottom_y(arr, x), right.bottom_y(arr, x)) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        let upper = match (self.top_y(arr, x), right.top_y(arr, x)) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        // Blocked closed y-ranges on the wall, ascending.
        let mut blocked: Vec<(Rat, Rat)> = Vec::new();
        for v in arr.vertices_at_x(x) {
            let y = &arr.vertices[v].point.y;
            let top = arr.vertices[v]
                .outgoing
                .iter()
                .map(|&h| arr.dest_point(h))
                .find(|q| q.x == *x && q.y > *y)
                .map(|q| q.y.clone());
            blocked.push((y.clone(), top.unwrap_or_else(|| y.clone())));
        }
        let mut gap_lo = lower;
        for (a, b) in blocked {
            if gap_lo.as_ref().is_some_and(|l| b <= *l) {
                continue;
            }
            if upper.as_ref().is_some_and(|u| a >= *u) {
                break;
            }
            if gap_lo.as_ref().is_none_or(|l| a > *l) {
                return Some(Point::new(x.clone(), mid_or_offset(gap_lo, Some(a))));
            }
            gap_lo = Some(b);
        }
        if let (Some(l), Some(u)) = (&gap_lo, &upper) {
            if l >= u {
                return None;
            }
        }
        Some(Point::new(x.clone(), mid_or_offset(gap_lo, upper)))
    }
}

fn mid_or_offset(lower: Option<Rat>, upper: Option<Rat>) -> Rat {
    match (lower, upper) {
        (Some(l), Some(u)) => (l + u) * ratio(1, 2),
        (Some(l), None) => l + Rat::one(),
        (None, Some(u)) => u - Rat::one(),
        (None, None) => Rat::zero(),
    }
}

impl Arrangement {
    pub fn vertical_decomposition(&self) -> Vec<Trapezoid> {
        decompose(self)
    }
}

/// Index of the trapezoid holding `p` under the infinitesimal shift.
pub fn locate_trapezoid(arr: &Arrangement, traps: &[Trapezoid], p: &Point) -> Option<usize> {
    traps.iter().position(|t| t.contains_perturbed(arr, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, Segment};

    /// Independent count: turn every wall into an actual segment clipped to a
    /// bounding box, build that arrangement and count its bounded faces.
    fn oracle_count(segments: &[Segment]) -> usize {
        let arr = Arrangement::build(segments).unwrap();
        let mut lo_x = rat(-10);
        let mut hi_x = rat(10);
        let mut lo_y = rat(-10);
        let mut hi_y = rat(10);
        for v in &arr.vertices {
            lo_x = lo_x.min(&v.point.x - rat(10));
            hi_x = hi_x.max(&v.point.x + rat(10));
            lo_y = lo_y.min(&v.point.y - rat(10));
            hi_y = hi_y.max(&v.point.y + rat(10));
        }
        let mut all: Vec<Segment> = segments.to_vec();
        let mut next_id = segments.iter().map(|s| s.id).max().map_or(0, |m| m + 1);
        let mut push = |a: Point, b: Point, all: &mut Vec<Segment>| {
            if a != b {
                all.push(Segment::new(next_id, a, b).unwrap());
                next_id += 1;
            }
        };
        for v in &arr.vertices {
            let p = &v.point;
            let mut up = hi_y.clone();
            let mut down = lo_y.clone();
            for s in segments {
                if s.is_vertical() {
                    if s.source.x == p.x {
                        for y in [&s.source.y, &s.target.y] {
                            if *y > p.y && *y < up {
                                up = y.clone();
                            }
                            if *y < p.y && *y > down {
                                down = y.clone();
                            }
                        }
                    }
                    continue;
                }
                if s.min_x() <= &p.x && &p.x <= s.max_x() {
                    let y = s.y_at(&p.x);
                    if y > p.y && y < up {
                        up = y.clone();
                    }
                    if y < p.y && y > down {
                        down = y;
                    }
                }
            }
            push(p.clone(), Point::new(p.x.clone(), up), &mut all);
            push(p.clone(), Point::new(p.x.clone(), down), &mut all);
        }
        let corners = [
            Point::new(lo_x.clone(), lo_y.clone()),
            Point::new(hi_x.clone(), lo_y.clone()),
            Point::new(hi_x.clone(), hi_y.clone()),
            Point::new(lo_x.clone(), hi_y.clone()),
        ];
        for i in 0..4 {
            push(corners[i].clone(), corners[(i + 1) % 4].clone(), &mut all);
        }
        let full = Arrangement::build(&all).unwrap();
        full.face_count() - 1
    }

    fn square() -> Vec<Segment> {
        vec![
            Segment::from_ints(0, 0, 0, 1, 0),
            Segment::from_ints(1, 1, 0, 1, 1),
            Segment::from_ints(2, 1, 1, 0, 1),
            Segment::from_ints(3, 0, 1, 0, 0),
        ]
    }

    #[test]
    fn empty_is_one_trapezoid() {
        let arr = Arrangement::build(&[]).unwrap();
        let t = decompose(&arr);
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].face, UNBOUNDED);
    }

    #[test]
    fn single_segment_is_four() {
        let segs = vec![Segment::from_ints(0, 0, 0, 2, 1)];
        let arr = Arrangement::build(&segs).unwrap();
        let t = decompose(&arr);
        assert_eq!(t.len(), 4);
        assert_eq!(oracle_count(&segs), 4);
        let above = t.iter().filter(|t| t.bottom == Some(0)).count();
        let below = t.iter().filter(|t| t.top == Some(0)).count();
        assert_eq!((above, below), (1, 1));
    }

    #[test]
    fn square_matches_wall_oracle() {
        let segs = square();
        let arr = Arrangement::build(&segs).unwrap();
        let t = decompose(&arr);
        assert_eq!(t.len(), oracle_count(&segs));
        let inner = arr.locate(&Point::new(ratio(1, 2), ratio(1, 2))).face().unwrap();
        assert_eq!(t.iter().filter(|t| t.face == inner).count(), 1);
    }

    #[test]
    fn crossing_matches_wall_oracle() {
        let segs = vec![
            Segment::from_ints(0, 0, 0, 2, 2),
            Segment::from_ints(1, 0, 2, 2, 0),
            Segment::from_ints(2, 1, -1, 1, 3),
            Segment::from_ints(3, -1, 1, 3, 1),
        ];
        let arr = Arrangement::build(&segs).unwrap();
        assert_eq!(decompose(&arr).len(), oracle_count(&segs));
    }

    #[test]
    fn perturbed_points_land_once() {
        let segs = square();
        let arr = Arrangement::build(&segs).unwrap();
        let t = decompose(&arr);
        for p in [
            Point::int(0, 0),
            Point::int(1, 1),
            Point::new(ratio(1, 2), rat(0)),
            Point::new(rat(0), ratio(1, 2)),
            Point::int(5, 5),
            Point::new(ratio(1, 3), ratio(1, 3)),
        ] {
            let hits = t.iter().filter(|tr| tr.contains_perturbed(&arr, &p)).count();
            assert_eq!(hits, 1, "point {p}");
        }
    }

    #[test]
    fn segment_meets_trapezoid() {
        let segs = square();
        let arr = Arrangement::build(&segs).unwrap();
        let t = decompose(&arr);
        let inner = arr.locate(&Point::new(ratio(1, 2), ratio(1, 2))).face().unwrap();
        let cell = t.iter().find(|t| t.face == inner).unwrap();
        let diag = Segment::from_ints(9, -1, -1, 2, 2);
        assert!(cell.meets_segment(&arr, &diag));
        let outside = Segment::from_ints(9, 2, 0, 3, 5);
        assert!(!cell.meets_segment(&arr, &outside));
        let on_edge = Segment::from_ints(9, 0, 0, 1, 0);
        assert!(!cell.meets_segment(&arr, &on_edge));
        let vertical_in = Segment::from_ints(9, 0, 0, 0, 1);
        assert!(!cell.meets_segment(&arr, &vertical_in));
        let half = Segment::new(9, Point::new(ratio(1, 2), rat(-3)), Point::new(ratio(1, 2), rat(3))).unwrap();
        assert!(cell.meets_segment(&arr, &half));
    }
}
