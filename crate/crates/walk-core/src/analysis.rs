//! Distribution statistics and the exact classical baseline.

use std::collections::BTreeMap;

use crate::error::{Result, WalkError};
use crate::numeric::compensated_sum;
use crate::state::Distribution;

/// Mean and variance of a position distribution, plus the probability it
/// carries (less than 1 when amplitude has been absorbed).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentSummary {
    pub mean: f64,
    pub variance: f64,
    pub total: f64,
}

/// First two moments of `dist`, normalized by its total weight.
pub fn moments(dist: &Distribution) -> Result<MomentSummary> {
    if dist.is_empty() {
        return Err(WalkError::EmptyDistribution);
    }
    let total = dist.total();
    let mean = compensated_sum(dist.iter().map(|(i, p)| i as f64 * p)) / total;
    let second = compensated_sum(dist.iter().map(|(i, p)| (i as f64) * (i as f64) * p)) / total;
    Ok(MomentSummary {
        mean,
        variance: (second - mean * mean).max(0.0),
        total,
    })
}

/// Exact distribution of the fair +-1 classical walk after `steps` steps:
/// the binomial C(N, (N+i)/2) / 2^N on the parity-matching support.
///
/// Computed by repeated halving convolutions, which is numerically exact to
/// within one rounding per addition; nothing is pruned.
pub fn classical_dtrw(steps: usize) -> Distribution {
    let mut probs = vec![1.0f64];
    for _ in 0..steps {
        let mut next = vec![0.0f64; probs.len() + 2];
        for (cell, p) in probs.iter().enumerate() {
            let half = 0.5 * p;
            next[cell] += half;
            next[cell + 2] += half;
        }
        probs = next;
    }
    let offset = steps as i64;
    Distribution::from_entries(
        probs
            .into_iter()
            .enumerate()
            .map(|(cell, p)| (cell as i64 - offset, p)),
    )
}

/// Least-squares slope of log(variance) against log(steps).
///
/// Needs at least 4 points with positive, strictly increasing step counts and
/// positive variances. A ballistic walk gives 2, a diffusive one gives 1.
pub fn variance_growth_exponent(points: &[(usize, f64)]) -> Result<f64> {
    if points.len() < 4 {
        return Err(WalkError::TooFewPoints {
            needed: 4,
            got: points.len(),
        });
    }
    for window in points.windows(2) {
        if window[0].0 >= window[1].0 {
            return Err(WalkError::InvalidStepSequence);
        }
    }
    if points[0].0 == 0 {
        return Err(WalkError::InvalidStepSequence);
    }
    let logs: Vec<(f64, f64)> = points
        .iter()
        .map(|&(n, var)| {
            if var > 0.0 {
                Ok(((n as f64).ln(), var.ln()))
            } else {
                Err(WalkError::NonPositiveVariance(var))
            }
        })
        .collect::<Result<_>>()?;

    let count = logs.len() as f64;
    let mean_x = logs.iter().map(|(x, _)| x).sum::<f64>() / count;
    let mean_y = logs.iter().map(|(_, y)| y).sum::<f64>() / count;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    for (x, y) in &logs {
        cov += (x - mean_x) * (y - mean_y);
        var_x += (x - mean_x) * (x - mean_x);
    }
    Ok(cov / var_x)
}

/// Total-variation distance: half the L1 distance over the union support.
/// A metric with values in [0, 1] for probability distributions.
pub fn total_variation(a: &Distribution, b: &Distribution) -> f64 {
    let mut union: BTreeMap<i64, (f64, f64)> = BTreeMap::new();
    for (i, p) in a.iter() {
        union.entry(i).or_insert((0.0, 0.0)).0 = p;
    }
    for (i, p) in b.iter() {
        union.entry(i).or_insert((0.0, 0.0)).1 = p;
    }
    0.5 * compensated_sum(union.values().map(|&(pa, pb)| (pa - pb).abs()))
}
