//! Planar subdivision induced by a set of segments, stored as a
//! doubly-connected edge list.
//!
//! Vertices sit at every endpoint and every pairwise intersection point.
//! Collinear overlaps collapse into a single edge that remembers every
//! segment covering it. Half-edge `2e` runs from the lexicographically
//! smaller endpoint of edge `e` to the larger one, `2e + 1` is its twin.
//! Every half-edge has its face on the left.

mod decomposition;
mod locate;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{cross, dot, intersect, winding_number, Intersection, Point, Rat, SegId, Segment};

pub use decomposition::{decompose, locate_trapezoid, Trapezoid};
pub use locate::Location;

pub type VertexId = usize;
pub type HalfEdgeId = usize;
pub type EdgeId = usize;
pub type FaceId = usize;
pub type CycleId = usize;

/// The unbounded face always has id 0.
pub const UNBOUNDED: FaceId = 0;

#[derive(Debug, Clone)]
pub struct Vertex {
    pub point: Point,
    /// Outgoing half-edges in counterclockwise order, starting from the +x axis.
    pub outgoing: Vec<HalfEdgeId>,
}

#[derive(Debug, Clone)]
pub struct HalfEdge {
    pub origin: VertexId,
    pub twin: HalfEdgeId,
    pub next: HalfEdgeId,
    pub prev: HalfEdgeId,
    pub edge: EdgeId,
    pub face: FaceId,
    pub cycle: CycleId,
}

#[derive(Debug, Clone)]
pub struct Edge {
    /// Ids of all segments containing this edge, ascending.
    pub owners: Vec<SegId>,
}

#[derive(Debug, Clone)]
pub struct Cycle {
    pub start: HalfEdgeId,
    pub len: usize,
    /// Twice the signed enclosed area; positive for outer boundaries of bounded faces.
    pub area2: Rat,
    pub face: FaceId,
}

#[derive(Debug, Clone)]
pub struct Face {
    pub id: FaceId,
    pub outer: Option<CycleId>,
    pub inner: Vec<CycleId>,
}

impl Face {
    pub fn is_unbounded(&self) -> bool {
        self.outer.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct FaceComplexity {
    pub edge_sides: usize,
    pub vertices: usize,
    pub components: usize,
}

impl FaceComplexity {
    /// Vertices plus edge sides along every boundary component.
    pub fn total(&self) -> usize {
        self.edge_sides + self.vertices
    }
}

/// How candidate intersecting pairs are found during construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairStrategy {
    /// Sort by left x and sweep, only testing pairs whose x-extents overlap.
    Sweep,
    /// Test every pair. Quadratic; kept as a reference.
    AllPairs,
}

#[derive(Debug, Clone)]
pub struct Arrangement {
    pub segments: Vec<Segment>,
    pub vertices: Vec<Vertex>,
    pub half_edges: Vec<HalfEdge>,
    pub edges: Vec<Edge>,
    pub cycles: Vec<Cycle>,
    pub faces: Vec<Face>,
    /// Per segment, its half-edges in order from source to target.
    pub segment_index: BTreeMap<SegId, Vec<HalfEdgeId>>,
    vertex_lookup: HashMap<Point, VertexId>,
    segment_pos: HashMap<SegId, usize>,
    vertex_component: Vec<usize>,
    component_count: usize,
}

fn angle_cmp(a: &Point, b: &Point) -> Ordering {
    let half = |d: &Point| -> u8 {
        if d.y.is_positive() || (d.y.is_zero() && d.x.is_positive()) {
            0
        } else {
            1
        }
    };
    half(a).cmp(&half(b)).then_with(|| {
        let c = cross(a, b);
        if c.is_positive() {
            Ordering::Less
        } else if c.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

pub(crate) fn candidate_pairs(segments: &[Segment], strategy: PairStrategy) -> Vec<(usize, usize)> {
    let n = segments.len();
    let mut pairs = Vec::new();
    match strategy {
        PairStrategy::AllPairs => {
            for i in 0..n {
                for j in i + 1..n {
                    pairs.push((i, j));
                }
            }
        }
        PairStrategy::Sweep => {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| segments[a].min_x().cmp(segments[b].min_x()));
            let y_range = |s: &Segment| {
                if s.source.y <= s.target.y {
                    (s.source.y.clone(), s.target.y.clone())
                } else {
                    (s.target.y.clone(), s.source.y.clone())
                }
            };
            let yr: Vec<(Rat, Rat)> = segments.iter().map(y_range).collect();
            let mut active: Vec<usize> = Vec::new();
            for &i in &order {
                let left = segments[i].min_x();
                active.retain(|&j| segments[j].max_x() >= left);
                for &j in &active {
                    if yr[i].0 <= yr[j].1 && yr[j].0 <= yr[i].1 {
                        pairs.push((i.min(j), i.max(j)));
                    }
                }
                active.push(i);
            }
            pairs.sort_unstable();
        }
    }
    pairs
}

impl Arrangement {
    pub fn build(segments: &[Segment]) -> Result<Self> {
        Self::build_with(segments, PairStrategy::Sweep)
    }

    pub fn build_with(segments: &[Segment], strategy: PairStrategy) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for s in segments {
            if !seen.insert(s.id) {
                return Err(Error::DuplicateId(s.id));
            }
        }

        let mut on_segment: Vec<Vec<Point>> = segments
            .iter()
            .map(|s| vec![s.source.clone(), s.target.clone()])
            .collect();
        for (i, j) in candidate_pairs(segments, strategy) {
            match intersect(&segments[i], &segments[j]) {
                Intersection::Empty => {}
                Intersection::Single(p) => {
                    on_segment[i].push(p.clone());
                    on_segment[j].push(p);
                }
                Intersection::Overlap { start, end } => {
                    on_segment[i].push(start.clone());
                    on_segment[i].push(end.clone());
                    on_segment[j].push(start);
                    on_segment[j].push(end);
                }
            }
        }
        for pts in &mut on_segment {
            pts.sort();
            pts.dedup();
        }

        let mut all_points: Vec<Point> = on_segment.iter().flatten().cloned().collect();
        all_points.sort();
        all_points.dedup();
        let vertex_lookup: HashMap<Point, VertexId> = all_points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();

        let mut edge_owners: BTreeMap<(VertexId, VertexId), Vec<SegId>> = BTreeMap::new();
        for (seg, pts) in segments.iter().zip(&on_segment) {
            for w in pts.windows(2) {
                let key = (vertex_lookup[&w[0]], vertex_lookup[&w[1]]);
                edge_owners.entry(key).or_default().push(seg.id);
            }
        }

        let mut vertices: Vec<Vertex> = all_points
            .into_iter()
            .map(|point| Vertex { point, outgoing: Vec::new() })
            .collect();
        let mut edges = Vec::with_capacity(edge_owners.len());
        let mut half_edges = Vec::with_capacity(2 * edge_owners.len());
        for (e, ((lo, hi), mut owners)) in edge_owners.into_iter().enumerate() {
            owners.sort_unstable();
            owners.dedup();
            edges.push(Edge { owners });
            for (origin, twin) in [(lo, 2 * e + 1), (hi, 2 * e)] {
                half_edges.push(HalfEdge {
                    origin,
                    twin,
                    next: usize::MAX,
                    prev: usize::MAX,
                    edge: e,
                    face: usize::MAX,
                    cycle: usize::MAX,
                });
                vertices[origin].outgoing.push(half_edges.len() - 1);
            }
        }

        let mut pos_at_origin = vec![0usize; half_edges.len()];
        for v in 0..vertices.len() {
            let here = vertices[v].point.clone();
            let mut out = std::mem::take(&mut vertices[v].outgoing);
            let dirs: HashMap<HalfEdgeId, Point> = out
                .iter()
                .map(|&h| {
                    let dest = half_edges[half_edges[h].twin].origin;
                    (h, vertices[dest].point.sub(&here))
                })
                .collect();
            out.sort_by(|a, b| angle_cmp(&dirs[a], &dirs[b]));
            for (i, &h) in out.iter().enumerate() {
                pos_at_origin[h] = i;
            }
            vertices[v].outgoing = out;
        }

        // Face on the left: the successor of u->v is the first outgoing edge at
        // v clockwise from v->u.
        for h in 0..half_edges.len() {
            let twin = half_edges[h].twin;
            let v = half_edges[twin].origin;
            let out = &vertices[v].outgoing;
            let deg = out.len();
            let next = out[(pos_at_origin[twin] + deg - 1) % deg];
            half_edges[h].next = next;
            half_edges[next].prev = h;
        }

        let mut arr = Arrangement {
            segments: segments.to_vec(),
            vertices,
            half_edges,
            edges,
            cycles: Vec::new(),
            faces: vec![Face { id: UNBOUNDED, outer: None, inner: Vec::new() }],
            segment_index: BTreeMap::new(),
            vertex_lookup,
            segment_pos: segments.iter().enumerate().map(|(i, s)| (s.id, i)).collect(),
            vertex_component: Vec::new(),
            component_count: 0,
        };
        arr.compute_components();
        arr.compute_cycles_and_faces();
        arr.compute_segment_index();
        Ok(arr)
    }

    fn compute_components(&mut self) {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in 0..self.edges.len() {
            let a = find(&mut parent, self.half_edges[2 * e].origin);
            let b = find(&mut parent, self.half_edges[2 * e + 1].origin);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut label = HashMap::new();
        self.vertex_component = (0..n)
            .map(|v| {
                let r = find(&mut parent, v);
                let next = label.len();
                *label.entry(r).or_insert(next)
            })
            .collect();
        self.component_count = label.len();
    }

    fn compute_cycles_and_faces(&mut self) {
        let m = self.half_edges.len();
        for h in 0..m {
            if self.half_edges[h].cycle != usize::MAX {
                continue;
            }
            let cid = self.cycles.len();
            let mut pts = Vec::new();
            let mut cur = h;
            loop {
                self.half_edges[cur].cycle = cid;
                pts.push(&self.vertices[self.half_edges[cur].origin].point);
                cur = self.half_edges[cur].next;
                if cur == h {
                    break;
                }
            }
            let area2 = crate::exact::signed_area2(&pts);
            let len = pts.len();
            self.cycles.push(Cycle { start: h, len, area2, face: usize::MAX });
        }

        for c in 0..self.cycles.len() {
            if self.cycles[c].area2.is_positive() {
                let id = self.faces.len();
                self.faces.push(Face { id, outer: Some(c), inner: Vec::new() });
                self.cycles[c].face = id;
            }
        }

        let outer_cycles: Vec<CycleId> = (0..self.cycles.len())
            .filter(|&c| self.cycles[c].area2.is_positive())
            .collect();
        for c in 0..self.cycles.len() {
            if self.cycles[c].area2.is_positive() {
                continue;
            }
            let comp = self.cycle_component(c);
            let rep = self
                .cycle_half_edges(c)
                .into_iter()
                .map(|h| &self.vertices[self.half_edges[h].origin].point)
                .min()
                .expect("non-empty cycle")
                .clone();
            let mut best: Option<CycleId> = None;
            for &oc in &outer_cycles {
                if self.cycle_component(oc) == comp {
                    continue;
                }
                if let Some(b) = best {
                    if self.cycles[oc].area2 >= self.cycles[b].area2 {
                        continue;
                    }
                }
                let pts = self.cycle_points(oc);
                if winding_number(&pts, &rep) != 0 {
                    best = Some(oc);
                }
            }
            let face = best.map_or(UNBOUNDED, |b| self.cycles[b].face);
            self.cycles[c].face = face;
            self.faces[face].inner.push(c);
        }

        for h in 0..m {
            self.half_edges[h].face = self.cycles[self.half_edges[h].cycle].face;
        }
    }

    fn compute_segment_index(&mut self) {
        let mut by_owner: HashMap<SegId, Vec<EdgeId>> = HashMap::new();
        for (e, edge) in self.edges.iter().enumerate() {
            for &o in &edge.owners {
                by_owner.entry(o).or_default().push(e);
            }
        }
        for seg in &self.segments {
            let d = seg.direction();
            let mut chain: Vec<HalfEdgeId> = by_owner
                .get(&seg.id)
                .map(|es| {
                    es.iter()
                        .map(|&e| {
                            let h = 2 * e;
                            let fwd = dot(&self.half_edge_vector(h), &d).is_positive();
                            if fwd {
                                h
                            } else {
                                h + 1
                            }
                        })
                        .collect()
                })
                .unwrap_or_default();
            chain.sort_by(|&a, &b| {
                let pa = seg.param_of(self.origin_point(a));
                let pb = seg.param_of(self.origin_point(b));
                pa.cmp(&pb)
            });
            self.segment_index.insert(seg.id, chain);
        }
    }

    fn cycle_component(&self, c: CycleId) -> usize {
        self.vertex_component[self.half_edges[self.cycles[c].start].origin]
    }

    pub fn segment(&self, id: SegId) -> Option<&Segment> {
        self.segment_pos.get(&id).map(|&i| &self.segments[i])
    }

    /// Vertices with the given x-coordinate, bottom to top. Vertex ids follow
    /// lexicographic point order.
    pub fn vertices_at_x(&self, x: &Rat) -> std::ops::Range<VertexId> {
        let lo = self.vertices.partition_point(|v| v.point.x < *x);
        let hi = self.vertices.partition_point(|v| v.point.x <= *x);
        lo..hi
    }

    pub fn vertex_id(&self, p: &Point) -> Option<VertexId> {
        self.vertex_lookup.get(p).copied()
    }

    pub fn origin_point(&self, h: HalfEdgeId) -> &Point {
        &self.vertices[self.half_edges[h].origin].point
    }

    pub fn dest(&self, h: HalfEdgeId) -> VertexId {
        self.half_edges[self.half_edges[h].twin].origin
    }

    pub fn dest_point(&self, h: HalfEdgeId) -> &Point {
        &self.vertices[self.dest(h)].point
    }

    pub fn half_edge_vector(&self, h: HalfEdgeId) -> Point {
        self.dest_point(h).sub(self.origin_point(h))
    }

    /// Segment id used as the symbol of a half-edge: the smallest covering id.
    pub fn primary_owner(&self, h: HalfEdgeId) -> SegId {
        self.edges[self.half_edges[h].edge].owners[0]
    }

    /// Whether `h` runs along the direction of segment `id`.
    pub fn runs_forward(&self, h: HalfEdgeId, id: SegId) -> bool {
        let seg = self.segment(id).expect("owner exists");
        dot(&self.half_edge_vector(h), &seg.direction()).is_positive()
    }

    /// Lexicographically ordered endpoints of an edge.
    pub fn edge_endpoints(&self, e: EdgeId) -> (&Point, &Point) {
        (self.origin_point(2 * e), self.origin_point(2 * e + 1))
    }

    pub fn cycle_half_edges(&self, c: CycleId) -> Vec<HalfEdgeId> {
        let start = self.cycles[c].start;
        let mut out = Vec::with_capacity(self.cycles[c].len);
        let mut cur = start;
        loop {
            out.push(cur);
            cur = self.half_edges[cur].next;
            if cur == start {
                break;
            }
        }
        out
    }

    fn cycle_points(&self, c: CycleId) -> Vec<&Point> {
        self.cycle_half_edges(c)
            .into_iter()
            .map(|h| self.origin_point(h))
            .collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Connected components of the union of the segments.
    pub fn component_count(&self) -> usize {
        self.component_count
    }

    pub fn face_cycles(&self, f: FaceId) -> Vec<CycleId> {
        let face = &self.faces[f];
        face.outer.iter().chain(face.inner.iter()).copied().collect()
    }

    /// One half-edge cycle per boundary component, with `f` on the left.
    /// The outer component (if any) comes first.
    pub fn boundary_cycles(&self, f: FaceId) -> Vec<Vec<HalfEdgeId>> {
        self.face_cycles(f)
            .into_iter()
            .map(|c| self.cycle_half_edges(c))
            .collect()
    }

    pub fn face_complexity(&self, f: FaceId) -> FaceComplexity {
        let mut edge_sides = 0;
        let mut verts = BTreeSet::new();
        let cycles = self.face_cycles(f);
        for &c in &cycles {
            for h in self.cycle_half_edges(c) {
                edge_sides += 1;
                verts.insert(self.half_edges[h].origin);
            }
        }
        FaceComplexity { edge_sides, vertices: verts.len(), components: cycles.len() }
    }

    /// Distinct vertices on the boundary of `f`, in lexicographic order.
    pub fn face_vertex_points(&self, f: FaceId) -> Vec<Point> {
        let mut vs: BTreeSet<VertexId> = BTreeSet::new();
        for c in self.face_cycles(f) {
            for h in self.cycle_half_edges(c) {
                vs.insert(self.half_edges[h].origin);
            }
        }
        vs.into_iter().map(|v| self.vertices[v].point.clone()).collect()
    }

    /// Every segment touching the closure of `f`: owners of the boundary
    /// edges and every segment through a boundary vertex.
    pub fn segments_touching_face(&self, f: FaceId) -> BTreeSet<SegId> {
        let mut out = BTreeSet::new();
        for c in self.face_cycles(f) {
            for h in self.cycle_half_edges(c) {
                let v = self.half_edges[h].origin;
                for &o in &self.vertices[v].outgoing {
                    out.extend(self.edges[self.half_edges[o].edge].owners.iter().copied());
                }
            }
        }
        out
    }

    /// V + E + F.
    pub fn total_complexity(&self) -> usize {
        self.vertex_count() + self.edge_count() + self.face_count()
    }

    /// Number of intersecting segment pairs (touching and overlapping included).
    pub fn intersecting_pairs(&self) -> usize {
        candidate_pairs(&self.segments, PairStrategy::Sweep)
            .into_iter()
            .filter(|&(i, j)| intersect(&self.segments[i], &self.segments[j]) != Intersection::Empty)
            .count()
    }

    pub fn summary(&self) -> ArrangementSummary {
        ArrangementSummary {
            schema: 1,
            vertices: self.vertex_count(),
            edges: self.edge_count(),
            faces: self.face_count(),
            components: self.component_count(),
            total_complexity: self.total_complexity(),
            face_list: (0..self.face_count())
                .map(|f| FaceSummary {
                    id: f,
                    unbounded: self.faces[f].is_unbounded(),
                    complexity: self.face_complexity(f),
                })
                .collect(),
        }
    }

    /// Structural self-check used by tests and the bench harness.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Invariant(m));
        for (h, he) in self.half_edges.iter().enumerate() {
            if self.half_edges[he.twin].twin != h {
                return bad(format!("twin(twin({h})) != {h}"));
            }
            if self.half_edges[he.next].prev != h {
                return bad(format!("prev(next({h})) != {h}"));
            }
            if self.dest(h) != self.half_edges[he.next].origin {
                return bad(format!("half-edge {h} does not chain to its successor"));
            }
            if self.half_edges[he.next].face != he.face {
                return bad(format!("half-edge {h} and successor disagree on face"));
            }
        }
        for (e, edge) in self.edges.iter().enumerate() {
            let (a, b) = self.edge_endpoints(e);
            for &o in &edge.owners {
                let s = self.segment(o).expect("owner exists");
                if !crate::exact::point_on_segment(a, s) || !crate::exact::point_on_segment(b, s) {
                    return bad(format!("edge {e} not contained in owner {o}"));
                }
            }
        }
        let v = self.vertex_count() as i64;
        let e = self.edge_count() as i64;
        let f = self.face_count() as i64;
        if v - e + f != 1 + self.component_count() as i64 {
            return bad(format!(
                "Euler relation fails: V={v} E={e} F={f} components={}",
                self.component_count()
            ));
        }
        let sides: usize = (0..self.face_count()).map(|f| self.face_complexity(f).edge_sides).sum();
        if sides != 2 * self.edge_count() {
            return bad(format!("edge sides {sides} != 2E"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FaceSummary {
    pub id: FaceId,
    pub unbounded: bool,
    #[serde(flatten)]
    pub complexity: FaceComplexity,
}

#[derive(Debug, Clone, Serialize)]
pub struct ArrangementSummary {
    pub schema: u32,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub components: usize,
    pub total_complexity: usize,
    pub face_list: Vec<FaceSummary>,
}
