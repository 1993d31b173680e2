//! Face boundaries as sequences of oriented segment symbols, and their
//! linearization into Davenport–Schinzel sequences of order 3.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::arrangement::{Arrangement, CycleId, FaceId, HalfEdgeId};
use crate::ds::SymbolSequence;
use crate::error::{Error, Result};
use crate::exact::{Point, Rat, SegId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitTag {
    None,
    /// Occurrences earlier along the oriented segment, read before the cut.
    First,
    /// Occurrences later along the oriented segment, read after the cut.
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OrientedSymbol {
    pub segment: SegId,
    pub direction: Direction,
    pub split: SplitTag,
}

impl OrientedSymbol {
    pub fn new(segment: SegId, direction: Direction) -> Self {
        OrientedSymbol { segment, direction, split: SplitTag::None }
    }

    fn untagged(self) -> Self {
        OrientedSymbol { split: SplitTag::None, ..self }
    }
}

impl fmt::Display for OrientedSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.direction {
            Direction::Forward => '+',
            Direction::Backward => '-',
        };
        write!(f, "{}{}", self.segment, sign)?;
        match self.split {
            SplitTag::None => Ok(()),
            SplitTag::First => write!(f, ":1"),
            SplitTag::Second => write!(f, ":2"),
        }
    }
}

pub fn format_sequence(seq: &SymbolSequence<OrientedSymbol>) -> String {
    seq.elements.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
}

/// A maximal portion of a boundary component traced along one oriented segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryArc {
    pub symbol: OrientedSymbol,
    pub half_edges: Vec<HalfEdgeId>,
}

/// One boundary component, starting at the cut: the arc containing the
/// half-edge with the smallest (origin, owner id).
#[derive(Debug, Clone)]
pub struct BoundaryComponent {
    pub cycle: CycleId,
    pub arcs: Vec<BoundaryArc>,
}

impl BoundaryComponent {
    pub fn sequence(&self) -> SymbolSequence<OrientedSymbol> {
        SymbolSequence::circular(self.arcs.iter().map(|a| a.symbol).collect())
    }

    pub fn edge_sides(&self) -> usize {
        self.arcs.iter().map(|a| a.half_edges.len()).sum()
    }
}

pub fn half_edge_symbol(arr: &Arrangement, h: HalfEdgeId) -> OrientedSymbol {
    let id = arr.primary_owner(h);
    let dir = if arr.runs_forward(h, id) { Direction::Forward } else { Direction::Backward };
    OrientedSymbol::new(id, dir)
}

pub fn boundary_components(arr: &Arrangement, f: FaceId) -> Vec<BoundaryComponent> {
    arr.face_cycles(f)
        .into_iter()
        .map(|c| component_of_cycle(arr, c))
        .collect()
}

fn component_of_cycle(arr: &Arrangement, c: CycleId) -> BoundaryComponent {
    let hs = arr.cycle_half_edges(c);
    let n = hs.len();
    let syms: Vec<OrientedSymbol> = hs.iter().map(|&h| half_edge_symbol(arr, h)).collect();
    let cut = (0..n)
        .min_by(|&a, &b| {
            arr.origin_point(hs[a])
                .cmp(arr.origin_point(hs[b]))
                .then(syms[a].segment.cmp(&syms[b].segment))
        })
        .expect("cycles are non-empty");
    // Walk back to the start of the run containing the cut. A cycle never
    // consists of a single symbol, so this terminates.
    let mut start = cut;
    for _ in 0..n {
        let prev = (start + n - 1) % n;
        if syms[prev] != syms[start] {
            break;
        }
        start = prev;
    }
    let mut arcs: Vec<BoundaryArc> = Vec::new();
    for i in 0..n {
        let k = (start + i) % n;
        match arcs.last_mut() {
            Some(a) if a.symbol == syms[k] => a.half_edges.push(hs[k]),
            _ => arcs.push(BoundaryArc { symbol: syms[k], half_edges: vec![hs[k]] }),
        }
    }
    BoundaryComponent { cycle: c, arcs }
}

/// One circular sequence per boundary component of `f` (outer first).
pub fn boundary_symbol_sequence(arr: &Arrangement, f: FaceId) -> Vec<SymbolSequence<OrientedSymbol>> {
    boundary_components(arr, f).iter().map(|c| c.sequence()).collect()
}

/// Position of `p` along the oriented symbol's segment, increasing in the
/// direction of travel.
fn along(arr: &Arrangement, sym: OrientedSymbol, p: &Point) -> Rat {
    let t = arr.segment(sym.segment).expect("owner exists").param_of(p);
    match sym.direction {
        Direction::Forward => t,
        Direction::Backward => -t,
    }
}

/// Reads the component from its cut and splits every oriented symbol whose
/// portions wrap around the cut into two tagged symbols. Fails if some
/// symbol's portions are not a rotation of their order along the segment.
pub fn linearize(arr: &Arrangement, comp: &BoundaryComponent) -> Result<SymbolSequence<OrientedSymbol>> {
    let mut occurrences: BTreeMap<OrientedSymbol, Vec<(usize, Rat)>> = BTreeMap::new();
    for (pos, arc) in comp.arcs.iter().enumerate() {
        let p = arr.origin_point(arc.half_edges[0]);
        occurrences.entry(arc.symbol).or_default().push((pos, along(arr, arc.symbol, p)));
    }
    let mut out: Vec<OrientedSymbol> = comp.arcs.iter().map(|a| a.symbol).collect();
    for (sym, occ) in occurrences {
        let r = occ.len();
        let descents: Vec<usize> = (0..r).filter(|&i| occ[i].1 >= occ[(i + 1) % r].1).collect();
        if r > 1 && descents.len() != 1 {
            return Err(Error::Invariant(format!(
                "portions of {sym} on cycle {} are not in circular order along the segment",
                comp.cycle
            )));
        }
        if r <= 1 || descents[0] == r - 1 {
            continue;
        }
        // The first portion along the segment sits after the cut position.
        let alpha = occ[descents[0] + 1].0;
        for &(pos, _) in &occ {
            out[pos].split = if pos >= alpha { SplitTag::First } else { SplitTag::Second };
        }
    }
    Ok(SymbolSequence::linear(out))
}

/// Linearized sequences for every boundary component of `f`.
pub fn linearized_face(arr: &Arrangement, f: FaceId) -> Result<Vec<SymbolSequence<OrientedSymbol>>> {
    boundary_components(arr, f).iter().map(|c| linearize(arr, c)).collect()
}

/// Drops split tags; inverse of the tagging done by [`linearize`].
pub fn untag(seq: &SymbolSequence<OrientedSymbol>) -> Vec<OrientedSymbol> {
    seq.elements.iter().map(|s| s.untagged()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::UNBOUNDED;
    use crate::ds::is_ds;
    use crate::exact::Segment;

    fn tokens(seq: &SymbolSequence<OrientedSymbol>) -> Vec<String> {
        seq.elements.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn triangle_inner_face() {
        let segs = vec![
            Segment::from_ints(0, 0, 0, 4, 0),
            Segment::from_ints(1, 4, 0, 0, 4),
            Segment::from_ints(2, 0, 4, 0, 0),
        ];
        let arr = Arrangement::build(&segs).unwrap();
        let f = arr.locate(&Point::int(1, 1)).face().unwrap();
        let seqs = boundary_symbol_sequence(&arr, f);
        assert_eq!(seqs.len(), 1);
        assert_eq!(tokens(&seqs[0]), vec!["0+", "1+", "2+"]);
        let lin = linearized_face(&arr, f).unwrap();
        assert_eq!(untag(&lin[0]), seqs[0].elements);
        assert!(is_ds(&lin[0], 3).is_ok());
    }

    #[test]
    fn single_segment_outer_face() {
        let arr = Arrangement::build(&[Segment::from_ints(0, 0, 0, 1, 0)]).unwrap();
        let seqs = boundary_symbol_sequence(&arr, UNBOUNDED);
        assert_eq!(tokens(&seqs[0]), vec!["0+", "0-"]);
    }

    #[test]
    fn plus_sign_splits_wrapped_symbol() {
        let segs = vec![Segment::from_ints(0, -1, 0, 1, 0), Segment::from_ints(1, 0, -1, 0, 1)];
        let arr = Arrangement::build(&segs).unwrap();
        let comp = &boundary_components(&arr, UNBOUNDED)[0];
        assert_eq!(
            tokens(&comp.sequence()),
            vec!["0+", "1+", "1-", "0+", "0-", "1-", "1+", "0-"]
        );
        let lin = linearize(&arr, comp).unwrap();
        assert_eq!(
            tokens(&lin),
            vec!["0+", "1+:2", "1-", "0+", "0-", "1-", "1+:1", "0-"]
        );
        assert!(is_ds(&lin, 3).is_ok());
    }

    #[test]
    fn t_junction_far_side_is_one_portion() {
        let segs = vec![Segment::from_ints(0, 0, 0, 4, 0), Segment::from_ints(1, 2, 0, 2, 2)];
        let arr = Arrangement::build(&segs).unwrap();
        let comp = &boundary_components(&arr, UNBOUNDED)[0];
        assert_eq!(comp.edge_sides(), 6);
        assert_eq!(tokens(&comp.sequence()), vec!["0+", "1+", "1-", "0+", "0-"]);
    }
}
