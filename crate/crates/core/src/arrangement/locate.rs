use std::cmp::Ordering;

use num_traits::Zero;
use serde::Serialize;

use super::{angle_cmp, Arrangement, EdgeId, FaceId, VertexId, UNBOUNDED};
use crate::exact::{point_on_segment, rat, Point, Rat, Segment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "id")]
pub enum Location {
    Face(FaceId),
    OnEdge(EdgeId),
    OnVertex(VertexId),
}

impl Location {
    pub fn face(self) -> Option<FaceId> {
        match self {
            Location::Face(f) => Some(f),
            _ => None,
        }
    }
}

enum Hit {
    Edge(EdgeId),
    Vertex(VertexId),
}

impl Arrangement {
    /// Exact point location by shooting a ray straight up from `p` and
    /// reading the face off the first feature it hits.
    pub fn locate(&self, p: &Point) -> Location {
        if let Some(v) = self.vertex_id(p) {
            return Location::OnVertex(v);
        }
        let mut best: Option<(Rat, Hit)> = None;
        for e in 0..self.edges.len() {
            let (lo, hi) = self.edge_endpoints(e);
            let piece = Segment { id: 0, source: lo.clone(), target: hi.clone() };
            if point_on_segment(p, &piece) {
                return Location::OnEdge(e);
            }
            let candidate = if lo.x == hi.x {
                (lo.x == p.x && lo.y > p.y).then(|| (lo.y.clone(), Hit::Vertex(self.half_edges[2 * e].origin)))
            } else if lo.x <= p.x && p.x <= hi.x {
                let y = piece.y_at(&p.x);
                if y > p.y {
                    let hit = if p.x == lo.x {
                        Hit::Vertex(self.half_edges[2 * e].origin)
                    } else if p.x == hi.x {
                        Hit::Vertex(self.half_edges[2 * e + 1].origin)
                    } else {
                        Hit::Edge(e)
                    };
                    Some((y, hit))
                } else {
                    None
                }
            } else {
                None
            };
            if let Some((y, hit)) = candidate {
                if best.as_ref().is_none_or(|(by, _)| y < *by) {
                    best = Some((y, hit));
                }
            }
        }
        match best {
            None => Location::Face(UNBOUNDED),
            // The right-to-left half-edge has the region below on its left.
            Some((_, Hit::Edge(e))) => Location::Face(self.half_edges[2 * e + 1].face),
            Some((_, Hit::Vertex(v))) => Location::Face(self.face_below_vertex(v)),
        }
    }

    /// Face occupying the wedge at `v` that contains the downward direction.
    fn face_below_vertex(&self, v: VertexId) -> FaceId {
        let down = Point::new(Rat::zero(), rat(-1));
        let out = &self.vertices[v].outgoing;
        // Last edge strictly before the downward direction in counterclockwise
        // order, wrapping around to the last edge overall.
        let mut chosen = *out.last().expect("vertex has edges");
        for &h in out {
            if angle_cmp(&self.half_edge_vector(h), &down) == Ordering::Less {
                chosen = h;
            }
        }
        self.half_edges[chosen].face
    }
}
