//! Lower envelopes of non-vertical segments viewed as partial functions of x.

use std::collections::BTreeMap;

use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{ratio, serialize_rats, Rat, SegId, Segment};

/// Pointwise minimum over x. `pieces[i]` is the lowest segment over
/// `(breakpoints[i], breakpoints[i + 1])`, or `None` where nothing is defined.
/// The first and last breakpoints are the ends of the overall domain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Envelope {
    #[serde(serialize_with = "serialize_rats")]
    pub breakpoints: Vec<Rat>,
    pub pieces: Vec<Option<SegId>>,
    #[serde(skip)]
    segments: BTreeMap<SegId, Segment>,
}

impl Envelope {
    pub fn empty() -> Self {
        Envelope { breakpoints: Vec::new(), pieces: Vec::new(), segments: BTreeMap::new() }
    }

    fn single(s: &Segment) -> Self {
        Envelope {
            breakpoints: vec![s.min_x().clone(), s.max_x().clone()],
            pieces: vec![Some(s.id)],
            segments: BTreeMap::from([(s.id, s.clone())]),
        }
    }

    /// Non-gap pieces plus breakpoints.
    pub fn complexity(&self) -> usize {
        self.pieces.iter().flatten().count() + self.breakpoints.len()
    }

    pub fn segment(&self, id: SegId) -> Option<&Segment> {
        self.segments.get(&id)
    }

    /// Lowest segment over the open interval starting at `x`, if `x` is a
    /// breakpoint or lies inside a piece.
    pub fn piece_at(&self, x: &Rat) -> Option<SegId> {
        let i = self.breakpoints.partition_point(|b| b <= x);
        if i == 0 || i > self.pieces.len() {
            return None;
        }
        self.pieces[i - 1]
    }

    /// Builds from elementary `(x0, x1, piece)` intervals in increasing
    /// order, merging equal neighbours and trimming outer gaps.
    fn from_intervals(intervals: Vec<(Rat, Rat, Option<SegId>)>, segments: BTreeMap<SegId, Segment>) -> Self {
        let mut breakpoints: Vec<Rat> = Vec::new();
        let mut pieces: Vec<Option<SegId>> = Vec::new();
        for (x0, x1, piece) in intervals {
            if pieces.is_empty() && piece.is_none() {
                continue;
            }
            if breakpoints.last() != Some(&x0) {
                // A gap between intervals that were not adjacent.
                if let Some(last) = breakpoints.last().cloned() {
                    debug_assert!(last < x0);
                    pieces.push(None);
                }
                breakpoints.push(x0);
            }
            if pieces.last() == Some(&piece) {
                *breakpoints.last_mut().expect("non-empty") = x1;
            } else {
                pieces.push(piece);
                breakpoints.push(x1);
            }
        }
        while pieces.last() == Some(&None) {
            pieces.pop();
            breakpoints.pop();
        }
        Envelope { breakpoints, pieces, segments }
    }
}

fn lower_of(a: &Segment, b: &Segment, x: &Rat) -> SegId {
    match a.y_at(x).cmp(&b.y_at(x)) {
        std::cmp::Ordering::Less => a.id,
        std::cmp::Ordering::Greater => b.id,
        std::cmp::Ordering::Equal => a.id.min(b.id),
    }
}

fn merge(a: &Envelope, b: &Envelope) -> Envelope {
    let mut segments = a.segments.clone();
    segments.extend(b.segments.iter().map(|(k, v)| (*k, v.clone())));
    let mut xs: Vec<Rat> = a.breakpoints.iter().chain(&b.breakpoints).cloned().collect();
    xs.sort();
    xs.dedup();
    let mut intervals = Vec::new();
    let half = ratio(1, 2);
    for w in xs.windows(2) {
        let (x0, x1) = (&w[0], &w[1]);
        let mid = (x0 + x1) * &half;
        match (a.piece_at(&mid), b.piece_at(&mid)) {
            (None, None) => intervals.push((x0.clone(), x1.clone(), None)),
            (Some(p), None) | (None, Some(p)) => intervals.push((x0.clone(), x1.clone(), Some(p))),
            (Some(pa), Some(pb)) => {
                let (sa, sb) = (&segments[&pa], &segments[&pb]);
                let d0 = sa.y_at(x0) - sb.y_at(x0);
                let d1 = sa.y_at(x1) - sb.y_at(x1);
                if (d0.is_positive() && d1.is_negative()) || (d0.is_negative() && d1.is_positive()) {
                    let xc = x0 + (x1 - x0) * &d0 / (&d0 - &d1);
                    let m0 = (x0 + &xc) * &half;
                    let m1 = (&xc + x1) * &half;
                    intervals.push((x0.clone(), xc.clone(), Some(lower_of(sa, sb, &m0))));
                    intervals.push((xc, x1.clone(), Some(lower_of(sa, sb, &m1))));
                } else {
                    intervals.push((x0.clone(), x1.clone(), Some(lower_of(sa, sb, &mid))));
                }
            }
        }
    }
    Envelope::from_intervals(intervals, segments)
}

fn merge_all(mut envs: Vec<Envelope>) -> Envelope {
    if envs.is_empty() {
        return Envelope::empty();
    }
    while envs.len() > 1 {
        let mut next = Vec::with_capacity(envs.len().div_ceil(2));
        for pair in envs.chunks(2) {
            next.push(if pair.len() == 2 { merge(&pair[0], &pair[1]) } else { pair[0].clone() });
        }
        envs = next;
    }
    envs.pop().expect("one left")
}

/// Lower envelope by divide and conquer. Where two segments coincide the
/// smaller id wins.
pub fn lower_envelope(segments: &[Segment]) -> Result<Envelope> {
    if let Some(s) = segments.iter().find(|s| s.is_vertical()) {
        return Err(Error::Input(format!("segment {} is vertical", s.id)));
    }
    Ok(merge_all(segments.iter().map(Envelope::single).collect()))
}

/// Envelope of the union of the given envelopes' defining segments.
pub fn envelope_overlay(envelopes: &[Envelope]) -> Envelope {
    merge_all(envelopes.to_vec())
}

impl Envelope {
    /// True if every piece is a defining segment and no two neighbours agree.
    pub fn is_normalized(&self) -> bool {
        let shape = self.breakpoints.len() == self.pieces.len() + 1 || (self.pieces.is_empty() && self.breakpoints.is_empty());
        shape
            && self.breakpoints.windows(2).all(|w| w[0] < w[1])
            && self.pieces.windows(2).all(|w| w[0] != w[1])
            && self.pieces.iter().flatten().all(|id| self.segments.contains_key(id))
            && self.pieces.first().is_none_or(|p| p.is_some())
            && self.pieces.last().is_none_or(|p| p.is_some())
    }

    /// Number of breakpoints strictly inside the domain.
    pub fn interior_breakpoints(&self) -> usize {
        self.breakpoints.len().saturating_sub(2)
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn value_at(&self, x: &Rat) -> Option<Rat> {
        self.piece_at(x).map(|id| self.segments[&id].y_at(x))
    }
}
