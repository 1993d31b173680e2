use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::exact::{Point, Segment};

/// One random-sample experiment: decompose the arrangement of `r` sampled
/// segments and count, per trapezoid, the segments of the full set meeting
/// it (`n_i`) and the points it holds (`m_i`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplingRecord {
    pub r: usize,
    /// Number of trapezoids.
    pub tau: usize,
    pub sum_n: usize,
    pub sum_binom_n: usize,
    pub sum_m: usize,
    /// `sum sqrt(m_i) * n_i`.
    pub sum_sqrt_m_n: f64,
    pub sampled_intersections: usize,
    /// Every point lies in exactly one trapezoid.
    pub points_partitioned: bool,
}

pub fn clarkson_shor_trial(segments: &[Segment], points: &[Point], r: usize, seed: u64) -> Result<SamplingRecord> {
    let n = segments.len();
    if r == 0 || r > n {
        return Err(Error::Input(format!("sample size {r} outside 1..={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx = sample(&mut rng, n, r).into_vec();
    idx.sort_unstable();
    let chosen: Vec<Segment> = idx.iter().map(|&i| segments[i].clone()).collect();
    let arr = Arrangement::build(&chosen)?;
    let traps = arr.vertical_decomposition();
    let mut hits = vec![0usize; points.len()];
    let mut rec = SamplingRecord {
        r,
        tau: traps.len(),
        sum_n: 0,
        sum_binom_n: 0,
        sum_m: 0,
        sum_sqrt_m_n: 0.0,
        sampled_intersections: arr.intersecting_pairs(),
        points_partitioned: true,
    };
    for t in &traps {
        let ni = segments.iter().filter(|s| t.meets_segment(&arr, s)).count();
        let mut mi = 0;
        for (h, p) in hits.iter_mut().zip(points) {
            if t.contains_perturbed(&arr, p) {
                *h += 1;
                mi += 1;
            }
        }
        rec.sum_n += ni;
        rec.sum_binom_n += ni * ni.saturating_sub(1) / 2;
        rec.sum_m += mi;
        rec.sum_sqrt_m_n += (mi as f64).sqrt() * ni as f64;
    }
    rec.points_partitioned = hits.iter().all(|&h| h == 1);
    Ok(rec)
}

/// Expected number of sampled intersecting pairs: `w r (r-1) / (n (n-1))`.
pub fn expected_sampled_intersections(w: usize, n: usize, r: usize) -> f64 {
    if n < 2 {
        return 0.0;
    }
    w as f64 * (r * r.saturating_sub(1)) as f64 / (n * (n - 1)) as f64
}

/// `ceil(n^2 / w)`, clamped to `1..=n`.
pub fn sample_size(n: usize, w: usize) -> usize {
    if w == 0 {
        return n.max(1);
    }
    (n * n).div_ceil(w).clamp(1, n.max(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_segment_sample() {
        let segs = vec![Segment::from_ints(0, 0, 0, 4, 1), Segment::from_ints(1, 0, 3, 4, 2)];
        let pts = vec![Point::int(1, 1), Point::int(-3, 0), Point::int(2, 5)];
        for seed in 0..4 {
            let rec = clarkson_shor_trial(&segs, &pts, 1, seed).unwrap();
            assert_eq!(rec.tau, 4);
            assert_eq!(rec.sum_m, 3);
            assert!(rec.points_partitioned);
            assert_eq!(rec.sampled_intersections, 0);
        }
    }

    #[test]
    fn full_sample_counts_everything() {
        let segs = vec![
            Segment::from_ints(0, 0, 0, 4, 4),
            Segment::from_ints(1, 0, 4, 4, 0),
            Segment::from_ints(2, 1, -1, 3, -1),
        ];
        let rec = clarkson_shor_trial(&segs, &[Point::int(2, 3)], 3, 9).unwrap();
        let arr = Arrangement::build(&segs).unwrap();
        assert_eq!(rec.sampled_intersections, 1);
        assert_eq!(rec.tau, arr.vertical_decomposition().len());
        assert_eq!(rec.sum_m, 1);
        assert!(clarkson_shor_trial(&segs, &[], 4, 0).is_err());
    }

    #[test]
    fn sample_size_formula() {
        assert_eq!(sample_size(10, 25), 4);
        assert_eq!(sample_size(10, 0), 10);
        assert_eq!(sample_size(10, 3), 10);
        assert!((expected_sampled_intersections(10, 5, 5) - 10.0).abs() < 1e-12);
    }
}
