//! Proper colorings of segment intersection graphs.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arrangement::PairStrategy;
use crate::exact::{intersect, Intersection, SegId, Segment};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coloring {
    pub colors: BTreeMap<SegId, usize>,
    pub count: usize,
    /// Largest minimum degree met while peeling the graph.
    pub degeneracy: usize,
    pub intersecting_pairs: usize,
}

impl Coloring {
    /// Segments grouped by color, each group ascending.
    pub fn classes(&self) -> Vec<Vec<SegId>> {
        let mut out = vec![Vec::new(); self.count];
        for (&id, &c) in &self.colors {
            out[c].push(id);
        }
        out
    }
}

/// Smallest `c` with `c(c-1)/2 >= w`, i.e. the ceiling of `(1 + sqrt(1 + 8w)) / 2`.
pub fn sqrt_color_bound(w: usize) -> usize {
    let mut c = ((2.0 * w as f64).sqrt() as usize).max(1);
    while c > 1 && (c - 1) * (c - 2) / 2 >= w {
        c -= 1;
    }
    while c * (c - 1) / 2 < w {
        c += 1;
    }
    c
}

/// Greedy coloring in smallest-last order: repeatedly remove a vertex of
/// minimum remaining degree, then color in reverse removal order.
pub fn smallest_last_coloring(segments: &[Segment]) -> Coloring {
    let n = segments.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut pairs = 0;
    for (i, j) in crate::arrangement::candidate_pairs(segments, PairStrategy::Sweep) {
        if intersect(&segments[i], &segments[j]) != Intersection::Empty {
            adj[i].push(j);
            adj[j].push(i);
            pairs += 1;
        }
    }
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let max_deg = degree.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); max_deg + 1];
    for v in 0..n {
        buckets[degree[v]].push(v);
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut degeneracy = 0;
    let mut low = 0;
    while order.len() < n {
        low = low.min(max_deg);
        // Stale bucket entries are skipped lazily.
        let v = loop {
            while buckets[low].is_empty() {
                low += 1;
            }
            let v = buckets[low].pop().expect("non-empty");
            if !removed[v] && degree[v] == low {
                break v;
            }
        };
        degeneracy = degeneracy.max(low);
        removed[v] = true;
        order.push(v);
        for &u in &adj[v] {
            if !removed[u] {
                degree[u] -= 1;
                buckets[degree[u]].push(u);
                low = low.min(degree[u]);
            }
        }
    }
    let mut color = vec![usize::MAX; n];
    let mut count = 0;
    for &v in order.iter().rev() {
        let mut used: Vec<bool> = vec![false; adj[v].len() + 1];
        for &u in &adj[v] {
            if color[u] < used.len() {
                used[color[u]] = true;
            }
        }
        let c = used.iter().position(|&u| !u).expect("a free color exists");
        color[v] = c;
        count = count.max(c + 1);
    }
    Coloring {
        colors: segments.iter().zip(&color).map(|(s, &c)| (s.id, c)).collect(),
        count,
        degeneracy,
        intersecting_pairs: pairs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bound_values() {
        assert_eq!(sqrt_color_bound(0), 1);
        assert_eq!(sqrt_color_bound(1), 2);
        assert_eq!(sqrt_color_bound(3), 3);
        assert_eq!(sqrt_color_bound(4), 4);
        assert_eq!(sqrt_color_bound(6), 4);
        assert_eq!(sqrt_color_bound(45), 10);
        assert_eq!(sqrt_color_bound(46), 11);
    }

    #[test]
    fn disjoint_one_color() {
        let segs: Vec<Segment> = (0..5).map(|i| Segment::from_ints(i, 0, i as i64, 1, i as i64)).collect();
        let c = smallest_last_coloring(&segs);
        assert_eq!(c.count, 1);
        assert_eq!(c.intersecting_pairs, 0);
    }

    #[test]
    fn grid_two_colors() {
        let mut segs = Vec::new();
        for i in 0..4 {
            segs.push(Segment::from_ints(i, 0, i as i64 + 1, 6, i as i64 + 1));
            segs.push(Segment::from_ints(10 + i, i as i64 + 1, 0, i as i64 + 1, 6));
        }
        let c = smallest_last_coloring(&segs);
        assert_eq!(c.count, 2);
        assert_eq!(c.classes().len(), 2);
    }

    #[test]
    fn random_proper_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let segs: Vec<Segment> = (0..40)
                .map(|i| loop {
                    let s = Segment::new(
                        i,
                        crate::exact::Point::int(rng.gen_range(0..20), rng.gen_range(0..20)),
                        crate::exact::Point::int(rng.gen_range(0..20), rng.gen_range(0..20)),
                    );
                    if let Ok(s) = s {
                        break s;
                    }
                })
                .collect();
            let c = smallest_last_coloring(&segs);
            let mut w = 0;
            for i in 0..segs.len() {
                for j in i + 1..segs.len() {
                    if intersect(&segs[i], &segs[j]) != Intersection::Empty {
                        w += 1;
                        assert_ne!(c.colors[&segs[i].id], c.colors[&segs[j].id]);
                    }
                }
            }
            assert_eq!(w, c.intersecting_pairs);
            assert!(c.count <= c.degeneracy + 1);
            assert!(c.count <= sqrt_color_bound(w));
        }
    }
}
