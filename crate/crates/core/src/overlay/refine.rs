//! Refinement of the marked-face boundaries of each arrangement against the
//! marked faces of the overlay, and the resulting splitting number.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::MarkedInstance;
use crate::arrangement::{Arrangement, FaceId, HalfEdgeId, Location};
use crate::error::{Error, Result};
use crate::exact::{cross, dot, Point, SegId};
use crate::exec::Exec;

/// A piece of a marked-face boundary edge, traversed with the face on its left.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Subarc {
    pub segment: SegId,
    pub from: Point,
    pub to: Point,
}

#[derive(Debug, Clone, Serialize)]
pub struct CollectionRefinement {
    /// Distinct subarcs (a piece seen from both sides is kept once).
    pub subarcs: Vec<Subarc>,
    /// Number of split points over all traversed boundary components.
    pub splits: usize,
    /// Splits caused by reaching a new overlay face.
    pub face_splits: usize,
    /// Total complexity of the distinct marked faces.
    pub marked_complexity: usize,
    pub marked_faces: usize,
    /// Every traversed boundary component is exactly covered by its
    /// subarcs, end to end.
    pub tiled: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Refinement {
    pub collections: Vec<CollectionRefinement>,
    /// Splitting number: the sum of per-collection splits.
    pub splitting_number: usize,
    /// Sum of per-collection marked complexities.
    pub c_total: usize,
    pub k: usize,
    pub t: usize,
}

impl Refinement {
    /// `2kt + 2C`.
    pub fn splitting_bound(&self) -> usize {
        2 * self.k * self.t + 2 * self.c_total
    }

    pub fn margin(&self) -> f64 {
        let b = self.splitting_bound();
        if b == 0 {
            0.0
        } else {
            self.splitting_number as f64 / b as f64
        }
    }

    /// `|G_i| <= 2 L_i + 2 C_i` for every collection.
    pub fn subarc_bounds_hold(&self) -> bool {
        self.collections
            .iter()
            .all(|c| c.subarcs.len() <= 2 * c.splits + 2 * c.marked_complexity)
    }
}

/// Half-edges of `overlay` covering half-edge `h` of `sub`, in order.
fn overlay_chain(sub: &Arrangement, h: HalfEdgeId, overlay: &Arrangement) -> Result<Vec<HalfEdgeId>> {
    let dir = sub.half_edge_vector(h);
    let target = sub.dest_point(h);
    let mut cur = overlay
        .vertex_id(sub.origin_point(h))
        .ok_or_else(|| Error::Invariant("sub-arrangement vertex missing from overlay".into()))?;
    let mut chain = Vec::new();
    while overlay.vertices[cur].point != *target {
        let next = overlay.vertices[cur]
            .outgoing
            .iter()
            .copied()
            .find(|&g| {
                let v = overlay.half_edge_vector(g);
                cross(&v, &dir).is_zero() && dot(&v, &dir).is_positive()
            })
            .ok_or_else(|| Error::Invariant("overlay does not continue a sub-arrangement edge".into()))?;
        chain.push(next);
        cur = overlay.dest(next);
    }
    Ok(chain)
}

struct Piece {
    /// Overlay half-edge.
    g: HalfEdgeId,
    /// Sub-arrangement half-edge it belongs to.
    h: HalfEdgeId,
    /// Starts a sub-arrangement half-edge.
    starts_edge: bool,
    label: Option<FaceId>,
}

fn refine_collection(
    arr: &Arrangement,
    overlay: &Arrangement,
    overlay_marked: &BTreeSet<FaceId>,
    points: &[Point],
) -> Result<CollectionRefinement> {
    let mut faces = BTreeSet::new();
    for p in points {
        match arr.locate(p) {
            Location::Face(f) => {
                faces.insert(f);
            }
            _ => return Err(Error::Input(format!("point {p} lies on a segment"))),
        }
    }
    let mut splits = 0;
    let mut face_splits = 0;
    let mut subarcs: BTreeMap<(Point, Point), Subarc> = BTreeMap::new();
    let mut marked_complexity = 0;
    let mut tiled = true;
    for &f in &faces {
        marked_complexity += arr.face_complexity(f).total();
        for cycle in arr.boundary_cycles(f) {
            let mut pieces: Vec<Piece> = Vec::new();
            for &h in &cycle {
                for (i, g) in overlay_chain(arr, h, overlay)?.into_iter().enumerate() {
                    let face = overlay.half_edges[g].face;
                    pieces.push(Piece {
                        g,
                        h,
                        starts_edge: i == 0,
                        label: overlay_marked.contains(&face).then_some(face),
                    });
                }
            }
            // A new marked face begins where the label differs from the last
            // marked label seen, cyclically.
            let labels: Vec<(usize, FaceId)> =
                pieces.iter().enumerate().filter_map(|(i, p)| p.label.map(|l| (i, l))).collect();
            let mut cut = vec![false; pieces.len()];
            for (i, p) in pieces.iter().enumerate() {
                cut[i] = p.starts_edge;
            }
            for j in 0..labels.len() {
                let prev = labels[(j + labels.len() - 1) % labels.len()].1;
                let (i, l) = labels[j];
                if l != prev {
                    face_splits += usize::from(!cut[i]);
                    cut[i] = true;
                }
            }
            splits += cut.iter().filter(|&&c| c).count();
            // Cut positions split the cycle into subarcs; each lies within a
            // single sub-arrangement half-edge.
            let first = cut.iter().position(|&c| c).expect("cycle has a vertex");
            let n = pieces.len();
            let mut i = first;
            let mut chain: Vec<(Point, Point)> = Vec::new();
            loop {
                let mut j = i;
                while !cut[(j + 1) % n] {
                    j = (j + 1) % n;
                }
                let (a, b) = (&pieces[i], &pieces[j]);
                debug_assert_eq!(a.h, b.h);
                let from = overlay.origin_point(a.g).clone();
                let to = overlay.dest_point(b.g).clone();
                chain.push((from.clone(), to.clone()));
                let key = if from < to { (from.clone(), to.clone()) } else { (to.clone(), from.clone()) };
                subarcs.entry(key).or_insert(Subarc { segment: arr.primary_owner(a.h), from, to });
                i = (j + 1) % n;
                if i == first {
                    break;
                }
            }
            let closes = (0..chain.len()).all(|c| chain[c].1 == chain[(c + 1) % chain.len()].0);
            let covers = cycle.iter().all(|&h| chain.iter().any(|(a, _)| a == arr.origin_point(h)));
            tiled &= closes && covers && chain.len() == cut.iter().filter(|&&c| c).count();
        }
    }
    Ok(CollectionRefinement {
        subarcs: subarcs.into_values().collect(),
        splits,
        face_splits,
        marked_complexity,
        marked_faces: faces.len(),
        tiled,
    })
}

/// Splits every marked-face boundary of every collection at its vertices and
/// wherever it starts bordering a different marked face of the overlay.
pub fn refine(inst: &MarkedInstance, exec: Exec) -> Result<Refinement> {
    inst.validate()?;
    let overlay = Arrangement::build(&inst.all_segments())?;
    let mut overlay_marked = BTreeSet::new();
    for p in &inst.points {
        if let Location::Face(f) = overlay.locate(p) {
            overlay_marked.insert(f);
        }
    }
    let arrangements: Vec<Result<Arrangement>> = exec.map(&inst.collections, |c| Arrangement::build(c));
    let arrangements: Vec<Arrangement> = arrangements.into_iter().collect::<Result<_>>()?;
    let collections: Vec<CollectionRefinement> = exec
        .map(&arrangements, |arr| refine_collection(arr, &overlay, &overlay_marked, &inst.points))
        .into_iter()
        .collect::<Result<_>>()?;
    Ok(Refinement {
        splitting_number: collections.iter().map(|c| c.splits).sum(),
        c_total: collections.iter().map(|c| c.marked_complexity).sum(),
        k: inst.points.len(),
        t: inst.collections.len(),
        collections,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Segment;

    #[test]
    fn single_collection_single_point() {
        let segs = vec![
            Segment::from_ints(0, 0, 0, 2, 0),
            Segment::from_ints(1, 2, 0, 2, 2),
            Segment::from_ints(2, 2, 2, 0, 2),
            Segment::from_ints(3, 0, 2, 0, 0),
        ];
        let inst = MarkedInstance::new(vec![segs], vec![Point::int(1, 1)]).unwrap();
        let r = refine(&inst, Exec::Sequential).unwrap();
        assert_eq!(r.splitting_number, 4);
        assert_eq!(r.c_total, 8);
        assert_eq!(r.collections[0].subarcs.len(), 4);
        assert!(r.splitting_number <= r.splitting_bound());
        assert!(r.subarc_bounds_hold());
        assert!(r.collections.iter().all(|c| c.tiled));
    }

    #[test]
    fn square_cut_by_other_collection() {
        // Square in one collection, a vertical segment through it in the
        // other; one point on each side of the cut.
        let square = vec![
            Segment::from_ints(0, 0, 0, 2, 0),
            Segment::from_ints(1, 2, 0, 2, 2),
            Segment::from_ints(2, 2, 2, 0, 2),
            Segment::from_ints(3, 0, 2, 0, 0),
        ];
        let cut = vec![Segment::from_ints(4, 1, -1, 1, 3)];
        let pts = vec![
            Point::new(crate::exact::ratio(1, 2), crate::exact::ratio(1, 1)),
            Point::new(crate::exact::ratio(3, 2), crate::exact::ratio(1, 1)),
        ];
        let inst = MarkedInstance::new(vec![square, cut], pts).unwrap();
        let r = refine(&inst, Exec::Sequential).unwrap();
        // Square: 4 vertex splits plus entering each half once.
        assert_eq!(r.collections[0].splits, 6);
        assert_eq!(r.collections[0].face_splits, 2);
        assert_eq!(r.collections[0].subarcs.len(), 6);
        assert_eq!(r.collections[0].marked_complexity, 8);
        // Cut: 2 endpoint visits plus one face change on each side.
        assert_eq!(r.collections[1].splits, 4);
        assert_eq!(r.collections[1].marked_complexity, 4);
        assert_eq!(r.splitting_number, 10);
        assert_eq!(r.splitting_bound(), 2 * 2 * 2 + 2 * 12);
        assert!(r.subarc_bounds_hold());
        assert!(r.collections.iter().all(|c| c.tiled));
    }
}
