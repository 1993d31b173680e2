//! Faces in overlays of several arrangements: marked instances, the single
//! face containing a point (by balanced pairwise merging and by direct
//! construction), marked-face complexities, refinements and colorings.

mod coloring;
mod envelope;
mod refine;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

pub use coloring::{smallest_last_coloring, sqrt_color_bound, Coloring};
pub use envelope::{envelope_overlay, lower_envelope, Envelope};
pub use refine::{refine, CollectionRefinement, Refinement, Subarc};

use crate::arrangement::{Arrangement, FaceComplexity, FaceId, Location};
use crate::error::{Error, Result};
use crate::exact::{point_on_segment, Point, SegId, Segment};
use crate::exec::Exec;

/// Disjoint segment collections together with marking points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkedInstance {
    pub collections: Vec<Vec<Segment>>,
    pub points: Vec<Point>,
}

impl MarkedInstance {
    pub fn new(collections: Vec<Vec<Segment>>, points: Vec<Point>) -> Result<Self> {
        let inst = MarkedInstance { collections, points };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for s in self.collections.iter().flatten() {
            if !seen.insert(s.id) {
                return Err(Error::DuplicateId(s.id));
            }
        }
        for p in &self.points {
            self.check_free(p)?;
        }
        Ok(())
    }

    fn check_free(&self, p: &Point) -> Result<()> {
        match self.collections.iter().flatten().find(|s| point_on_segment(p, s)) {
            Some(s) => Err(Error::Input(format!("point {p} lies on segment {}", s.id))),
            None => Ok(()),
        }
    }

    pub fn all_segments(&self) -> Vec<Segment> {
        self.collections.iter().flatten().cloned().collect()
    }

    pub fn segment_count(&self) -> usize {
        self.collections.iter().map(Vec::len).sum()
    }
}

/// The face of an arrangement containing a point, reduced to comparable data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceData {
    pub complexity: FaceComplexity,
    /// Boundary vertices in lexicographic order.
    pub vertices: Vec<Point>,
    pub unbounded: bool,
}

impl FaceData {
    pub fn of(arr: &Arrangement, f: FaceId) -> Self {
        FaceData {
            complexity: arr.face_complexity(f),
            vertices: arr.face_vertex_points(f),
            unbounded: arr.faces[f].is_unbounded(),
        }
    }
}

/// Result of the merge-based single-face computation.
#[derive(Debug, Clone)]
pub struct SingleFace {
    pub face: FaceData,
    /// Sum of the complexities of the current faces at each merge level,
    /// starting with the individual arrangements.
    pub level_totals: Vec<usize>,
    /// Arrangement of the segments kept at the root; its face `face_id`
    /// coincides with the face of the full overlay.
    pub arrangement: Arrangement,
    pub face_id: FaceId,
}

fn face_at(arr: &Arrangement, p: &Point) -> Result<FaceId> {
    match arr.locate(p) {
        Location::Face(f) => Ok(f),
        _ => Err(Error::Input(format!("point {p} lies on a segment"))),
    }
}

struct Node {
    kept: Vec<Segment>,
    arr: Arrangement,
    face: FaceId,
}

impl Node {
    fn new(segments: Vec<Segment>, p: &Point) -> Result<Node> {
        let arr = Arrangement::build(&segments)?;
        let face = face_at(&arr, p)?;
        let touching = arr.segments_touching_face(face);
        let kept = segments.into_iter().filter(|s| touching.contains(&s.id)).collect();
        Ok(Node { kept, arr, face })
    }

    fn complexity(&self) -> usize {
        self.arr.face_complexity(self.face).total()
    }
}

/// Face containing `p` in the overlay of all collections, computed by
/// merging the collections two at a time in a balanced binary tree. Every
/// merge builds the arrangement of the segments touching the two current
/// faces only, and keeps the segments touching the new face.
pub fn single_face_overlay(inst: &MarkedInstance, p: &Point, exec: Exec) -> Result<SingleFace> {
    inst.check_free(p)?;
    if inst.collections.is_empty() {
        let arr = Arrangement::build(&[])?;
        let face = FaceData::of(&arr, 0);
        let level_totals = vec![face.complexity.total()];
        return Ok(SingleFace { face, level_totals, arrangement: arr, face_id: 0 });
    }
    let mut level: Vec<Node> = exec
        .map(&inst.collections, |c| Node::new(c.clone(), p))
        .into_iter()
        .collect::<Result<_>>()?;
    let mut level_totals = vec![level.iter().map(Node::complexity).sum()];
    while level.len() > 1 {
        // An odd node out is carried to the next level unchanged.
        let carried = if level.len() % 2 == 1 { level.pop() } else { None };
        let pairs: Vec<Vec<Segment>> = level
            .chunks(2)
            .map(|c| c.iter().flat_map(|n| n.kept.iter().cloned()).collect())
            .collect();
        let mut next: Vec<Node> = exec
            .map(&pairs, |segs| Node::new(segs.clone(), p))
            .into_iter()
            .collect::<Result<_>>()?;
        next.extend(carried);
        level = next;
        level_totals.push(level.iter().map(Node::complexity).sum());
    }
    let root = level.pop().expect("one node left");
    Ok(SingleFace { face: FaceData::of(&root.arr, root.face), level_totals, arrangement: root.arr, face_id: root.face })
}

/// Reference: build the whole overlay and locate `p`.
pub fn single_face_oracle(inst: &MarkedInstance, p: &Point) -> Result<FaceData> {
    inst.check_free(p)?;
    let arr = Arrangement::build(&inst.all_segments())?;
    let f = face_at(&arr, p)?;
    Ok(FaceData::of(&arr, f))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MarkedComplexity {
    /// Complexity of the overlay face containing each marking point.
    pub per_point: Vec<usize>,
    /// Sum over distinct marked faces of the overlay.
    pub union_total: usize,
    pub distinct_union_faces: usize,
    /// Per collection: total complexity of its distinct marked faces.
    pub per_collection: Vec<usize>,
    /// Sum of `per_collection`.
    pub c_total: usize,
}

/// Distinct faces of `arr` holding the points, with the face of each point.
fn marked_faces(arr: &Arrangement, points: &[Point]) -> Result<(Vec<FaceId>, BTreeSet<FaceId>)> {
    let per: Vec<FaceId> = points.iter().map(|p| face_at(arr, p)).collect::<Result<_>>()?;
    let distinct = per.iter().copied().collect();
    Ok((per, distinct))
}

pub fn marked_faces_complexity(inst: &MarkedInstance, exec: Exec) -> Result<MarkedComplexity> {
    inst.validate()?;
    let union = Arrangement::build(&inst.all_segments())?;
    let (per, distinct) = marked_faces(&union, &inst.points)?;
    let mut cache: BTreeMap<FaceId, usize> = BTreeMap::new();
    for &f in &distinct {
        cache.insert(f, union.face_complexity(f).total());
    }
    let per_collection: Vec<usize> = exec
        .map(&inst.collections, |c| -> Result<usize> {
            let arr = Arrangement::build(c)?;
            let (_, faces) = marked_faces(&arr, &inst.points)?;
            Ok(faces.iter().map(|&f| arr.face_complexity(f).total()).sum())
        })
        .into_iter()
        .collect::<Result<_>>()?;
    Ok(MarkedComplexity {
        per_point: per.iter().map(|f| cache[f]).collect(),
        union_total: cache.values().sum(),
        distinct_union_faces: distinct.len(),
        c_total: per_collection.iter().sum(),
        per_collection,
    })
}

/// Segment ids of an instance, per collection.
pub fn collection_ids(inst: &MarkedInstance) -> Vec<BTreeSet<SegId>> {
    inst.collections.iter().map(|c| c.iter().map(|s| s.id).collect()).collect()
}
