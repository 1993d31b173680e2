//! Davenport–Schinzel sequence machinery: validation, restriction,
//! active-symbol profiles, exhaustive λ values, the delimiter/block
//! decomposition of a sequence with respect to a partition of its symbols,
//! and the greedy slot partition for sequences with few active symbols.

use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap};
use std::cmp::Reverse;
use std::hash::Hash;
use std::ops::Range;

use serde::Serialize;

use crate::error::{Error, Result};

pub trait Symbol: Clone + Eq + Hash + Ord {}
impl<T: Clone + Eq + Hash + Ord> Symbol for T {}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SymbolSequence<S> {
    pub elements: Vec<S>,
    pub circular: bool,
}

impl<S: Symbol> SymbolSequence<S> {
    pub fn linear(elements: Vec<S>) -> Self {
        SymbolSequence { elements, circular: false }
    }

    pub fn circular(elements: Vec<S>) -> Self {
        SymbolSequence { elements, circular: true }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn alphabet(&self) -> BTreeSet<S> {
        self.elements.iter().cloned().collect()
    }

    /// No two adjacent elements equal (cyclically when circular).
    pub fn is_run_collapsed(&self) -> bool {
        first_adjacent_equal(self).is_none()
    }

    /// Cuts a circular sequence so that it starts at `at`.
    pub fn linearized_at(&self, at: usize) -> Self {
        let n = self.elements.len();
        let elements = (0..n).map(|i| self.elements[(at + i) % n].clone()).collect();
        SymbolSequence { elements, circular: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Violation {
    /// Elements at `position` and the one after it (cyclically) are equal.
    AdjacentEqual { position: usize },
    /// Positions (0-based) of an alternation of length `order + 2`.
    Alternation { positions: Vec<usize> },
}

fn first_adjacent_equal<S: Symbol>(seq: &SymbolSequence<S>) -> Option<usize> {
    let e = &seq.elements;
    if let Some(i) = e.windows(2).position(|w| w[0] == w[1]) {
        return Some(i);
    }
    (seq.circular && e.len() >= 2 && e[0] == e[e.len() - 1]).then(|| e.len() - 1)
}

/// Checks the Davenport–Schinzel condition of order `order`. Alternations are
/// searched on the linear reading; for circular sequences adjacency also wraps.
pub fn is_ds<S: Symbol>(seq: &SymbolSequence<S>, order: usize) -> std::result::Result<(), Violation> {
    assert!(order >= 1, "order must be at least 1");
    if let Some(position) = first_adjacent_equal(seq) {
        return Err(Violation::AdjacentEqual { position });
    }
    let limit = order + 2;
    let mut index: HashMap<&S, usize> = HashMap::new();
    for x in &seq.elements {
        let next = index.len();
        index.entry(x).or_insert(next);
    }
    let n = index.len();
    // Per unordered pair: symbol of the current run and start positions of runs.
    let mut last = vec![usize::MAX; n * n];
    let mut runs: Vec<Vec<usize>> = vec![Vec::new(); n * n];
    let mut seen: Vec<usize> = Vec::new();
    let mut first_pos = vec![usize::MAX; n];
    for (j, x) in seq.elements.iter().enumerate() {
        let xi = index[x];
        if first_pos[xi] == usize::MAX {
            first_pos[xi] = j;
            seen.push(xi);
        }
        for &yi in &seen {
            if yi == xi {
                continue;
            }
            let key = xi.min(yi) * n + xi.max(yi);
            if runs[key].is_empty() {
                // The pair's restriction so far is a single run of `y`.
                runs[key].push(first_pos[yi]);
                last[key] = yi;
            }
            if last[key] != xi {
                last[key] = xi;
                runs[key].push(j);
                if runs[key].len() == limit {
                    return Err(Violation::Alternation { positions: runs[key].clone() });
                }
            }
        }
    }
    Ok(())
}

/// Keeps only symbols of `keep` and collapses maximal runs of equal elements.
pub fn restrict<S: Symbol>(seq: &SymbolSequence<S>, keep: &BTreeSet<S>) -> SymbolSequence<S> {
    let mut out: Vec<S> = Vec::new();
    for x in &seq.elements {
        if keep.contains(x) && out.last() != Some(x) {
            out.push(x.clone());
        }
    }
    if seq.circular {
        while out.len() >= 2 && out.first() == out.last() {
            out.pop();
        }
    }
    SymbolSequence { elements: out, circular: seq.circular }
}

/// `v(j)`: number of symbols with an occurrence at or before `j` and another
/// strictly after `j`.
pub fn active_profile<S: Symbol>(seq: &SymbolSequence<S>) -> Vec<usize> {
    let n = seq.len();
    let mut first: HashMap<&S, usize> = HashMap::new();
    let mut last: HashMap<&S, usize> = HashMap::new();
    for (j, x) in seq.elements.iter().enumerate() {
        first.entry(x).or_insert(j);
        last.insert(x, j);
    }
    let mut diff = vec![0isize; n + 1];
    for (x, &f) in &first {
        let l = last[x];
        if l > f {
            diff[f] += 1;
            diff[l] -= 1;
        }
    }
    let mut acc = 0isize;
    diff[..n]
        .iter()
        .map(|d| {
            acc += d;
            acc as usize
        })
        .collect()
}

/// Largest `n` and order accepted by [`lambda_brute`].
pub const LAMBDA_MAX_SYMBOLS: usize = 5;
pub const LAMBDA_MAX_ORDER: usize = 3;

/// Exact λ_s(n) by exhaustive search over canonical sequences (symbols
/// introduced in increasing order).
pub fn lambda_brute(n: usize, order: usize) -> Result<usize> {
    if order == 0 {
        return Err(Error::Input("order must be at least 1".into()));
    }
    if n > LAMBDA_MAX_SYMBOLS || order > LAMBDA_MAX_ORDER {
        return Err(Error::Budget(format!(
            "lambda_{order}({n}) exceeds the search budget (n <= {LAMBDA_MAX_SYMBOLS}, s <= {LAMBDA_MAX_ORDER})"
        )));
    }
    if n == 0 {
        return Ok(0);
    }
    struct Search {
        n: usize,
        limit: u8,
        last: Vec<u8>,
        count: Vec<u8>,
        seq: Vec<u8>,
        best: usize,
    }
    impl Search {
        fn key(&self, a: usize, b: usize) -> usize {
            a.min(b) * self.n + a.max(b)
        }
        fn go(&mut self, used: usize) {
            self.best = self.best.max(self.seq.len());
            let prev = self.seq.last().map(|&p| p as usize);
            let candidates = if used < self.n { used + 1 } else { used };
            for x in 0..candidates {
                if Some(x) == prev {
                    continue;
                }
                let mut changed: Vec<(usize, u8, u8)> = Vec::new();
                let mut ok = true;
                for y in 0..self.n {
                    if y == x {
                        continue;
                    }
                    let k = self.key(x, y);
                    if self.last[k] != x as u8 {
                        changed.push((k, self.last[k], self.count[k]));
                        self.last[k] = x as u8;
                        self.count[k] += 1;
                        if self.count[k] >= self.limit {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    self.seq.push(x as u8);
                    self.go(used.max(x + 1));
                    self.seq.pop();
                }
                for (k, l, c) in changed.into_iter().rev() {
                    self.last[k] = l;
                    self.count[k] = c;
                }
            }
        }
    }
    let mut s = Search {
        n,
        limit: (order + 2) as u8,
        last: vec![u8::MAX; n * n],
        count: vec![0; n * n],
        seq: Vec::new(),
        best: 0,
    };
    s.go(0);
    Ok(s.best)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition<S> {
    pub classes: Vec<BTreeSet<S>>,
}

impl<S: Symbol> Partition<S> {
    pub fn new(classes: Vec<BTreeSet<S>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for c in &classes {
            for x in c {
                if !seen.insert(x.clone()) {
                    return Err(Error::Input("partition classes overlap".into()));
                }
            }
        }
        Ok(Partition { classes })
    }

    pub fn covers(&self, seq: &SymbolSequence<S>) -> bool {
        seq.elements.iter().all(|x| self.classes.iter().any(|c| c.contains(x)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockDecomposition {
    /// Length of each non-empty restricted sequence.
    pub class_lengths: Vec<usize>,
    /// Sum of `class_lengths`.
    pub total_restricted: usize,
    /// Number of non-empty restrictions.
    pub classes_used: usize,
    /// A delimiter at `p` separates positions `p` and `p + 1`.
    pub delimiters: Vec<usize>,
    /// Maximal delimiter-free runs, as position ranges.
    pub subsequences: Vec<Range<usize>>,
    /// Groups of `classes_used` consecutive subsequences; the last group
    /// absorbs the remainder.
    pub blocks: Vec<Range<usize>>,
}

/// Splits `seq` with one delimiter after the last position mapped onto each
/// non-final element of every restricted sequence, then groups the pieces.
pub fn block_decompose<S: Symbol>(seq: &SymbolSequence<S>, part: &Partition<S>) -> Result<BlockDecomposition> {
    if seq.circular {
        return Err(Error::Input("block decomposition needs a linear sequence".into()));
    }
    if !seq.is_run_collapsed() {
        return Err(Error::Input("sequence has equal adjacent elements".into()));
    }
    if !part.covers(seq) {
        return Err(Error::Input("partition does not cover the sequence".into()));
    }
    let mut delimiters = Vec::new();
    let mut class_lengths = Vec::new();
    for class in &part.classes {
        // Position in the restricted sequence of each element, and the last
        // position of `seq` mapped to it.
        let mut last_pos: Vec<usize> = Vec::new();
        let mut current: Option<&S> = None;
        for (p, x) in seq.elements.iter().enumerate() {
            if !class.contains(x) {
                continue;
            }
            if current != Some(x) {
                last_pos.push(p);
                current = Some(x);
            } else {
                *last_pos.last_mut().expect("run started") = p;
            }
        }
        if last_pos.is_empty() {
            continue;
        }
        class_lengths.push(last_pos.len());
        delimiters.extend(last_pos[..last_pos.len() - 1].iter().copied());
    }
    delimiters.sort_unstable();
    debug_assert!(delimiters.windows(2).all(|w| w[0] < w[1]), "delimiters coincide");

    let mut subsequences = Vec::new();
    let mut start = 0;
    for &d in &delimiters {
        subsequences.push(start..d + 1);
        start = d + 1;
    }
    if !seq.is_empty() {
        subsequences.push(start..seq.len());
    }

    let k = class_lengths.len();
    let mut blocks = Vec::new();
    if k > 0 {
        let groups = (subsequences.len() / k).max(1);
        for g in 0..groups {
            let first = g * k;
            let last = if g + 1 == groups { subsequences.len() } else { first + k };
            blocks.push(subsequences[first].start..subsequences[last - 1].end);
        }
    }
    Ok(BlockDecomposition {
        total_restricted: class_lengths.iter().sum(),
        classes_used: k,
        class_lengths,
        delimiters,
        subsequences,
        blocks,
    })
}

/// Drops symbols that occur only once, repeating until none are left (removing
/// a symbol can merge two occurrences of a neighbour into one).
pub fn drop_singletons<S: Symbol>(seq: &SymbolSequence<S>) -> SymbolSequence<S> {
    let mut cur = seq.clone();
    loop {
        let mut counts: HashMap<&S, usize> = HashMap::new();
        for x in &cur.elements {
            *counts.entry(x).or_default() += 1;
        }
        if counts.values().all(|&c| c >= 2) {
            return cur;
        }
        let keep = counts.into_iter().filter(|&(_, c)| c >= 2).map(|(x, _)| x.clone()).collect();
        cur = restrict(&cur, &keep);
    }
}

/// Greedy left-to-right slot allocation: a symbol takes the lowest free slot
/// at its first occurrence and releases it at its last. Every restricted
/// sequence of the result contains each of its symbols exactly once.
pub fn dsa_partition<S: Symbol>(seq: &SymbolSequence<S>, k: usize) -> Result<Partition<S>> {
    if seq.circular {
        return Err(Error::Input("slot partition needs a linear sequence".into()));
    }
    let mut first: HashMap<&S, usize> = HashMap::new();
    let mut last: HashMap<&S, usize> = HashMap::new();
    for (j, x) in seq.elements.iter().enumerate() {
        first.entry(x).or_insert(j);
        last.insert(x, j);
    }
    if let Some((x, _)) = first.iter().find(|(x, &f)| last[*x] == f) {
        let _ = x;
        return Err(Error::Input("a symbol occurs only once; drop singletons first".into()));
    }
    let peak = active_profile(seq).into_iter().max().unwrap_or(0);
    if peak > k {
        return Err(Error::Input(format!("{peak} active symbols exceed {k} slots")));
    }
    let mut free: BinaryHeap<Reverse<usize>> = (0..k).map(Reverse).collect();
    let mut slot_of: HashMap<&S, usize> = HashMap::new();
    let mut classes: BTreeMap<usize, BTreeSet<S>> = BTreeMap::new();
    for (j, x) in seq.elements.iter().enumerate() {
        if first[x] == j {
            let Reverse(slot) = free
                .pop()
                .ok_or_else(|| Error::Invariant(format!("slot scan stalled at position {j}")))?;
            slot_of.insert(x, slot);
            classes.entry(slot).or_default().insert(x.clone());
        }
        if last[x] == j {
            free.push(Reverse(slot_of[x]));
        }
    }
    Partition::new(classes.into_values().collect())
}

/// Ackermann variant: A(1, j) = 2^j, A(i, 1) = A(i-1, 2),
/// A(i, j) = A(i-1, A(i, j-1)); values saturate at `cap`.
fn ackermann_capped(i: u32, j: u64, cap: u64) -> u64 {
    if i == 1 {
        return if j >= 64 { cap } else { (1u64 << j).min(cap) };
    }
    let mut val = ackermann_capped(i - 1, 2, cap);
    for _ in 2..=j {
        if val >= cap {
            return cap;
        }
        val = ackermann_capped(i - 1, val, cap);
    }
    val.min(cap)
}

pub fn ackermann(i: u32, j: u64) -> u64 {
    ackermann_capped(i, j, u64::MAX)
}

/// α(n): the least k >= 1 with A(k, k) >= n.
pub fn inverse_ackermann(n: u64) -> u32 {
    let n = n.max(1);
    let mut k = 1;
    while ackermann_capped(k, k as u64, n) < n {
        k += 1;
    }
    k
}
