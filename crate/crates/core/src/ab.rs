//! Probabilistic comparison of two posterior samples by paired resampling.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::rng;
use crate::scalar::Real;

/// Default number of paired resamples.
pub const DEFAULT_RESAMPLES: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonResult<T> {
    /// Share of resampled pairs with `a ≥ b`.
    pub prob_a_greater: T,
    pub draw_count: usize,
    pub seed: u64,
}

fn prob_greater_on_stream<T: Real>(a: &[T], b: &[T], n: usize, seed: u64, stream: u64) -> Result<T> {
    if a.is_empty() || b.is_empty() {
        return domain("both draw lists must be non-empty");
    }
    if n == 0 {
        return domain("resample count must be at least one");
    }
    let mut rng = rng::stream(seed, stream);
    let hits = (0..n)
        .filter(|_| {
            let x = a[rng.random_range(0..a.len())];
            let y = b[rng.random_range(0..b.len())];
            x >= y
        })
        .count();
    Ok(T::count(hits as u64) / T::count(n as u64))
}

/// Estimates P(FN_A > FN_B) from `n` paired draws taken with replacement.
/// Ties count toward A.
pub fn prob_greater<T: Real>(a: &[T], b: &[T], n: usize, seed: u64) -> Result<ComparisonResult<T>> {
    Ok(ComparisonResult { prob_a_greater: prob_greater_on_stream(a, b, n, seed, 0)?, draw_count: n, seed })
}

/// Matrix with entry `(i, j) = P(FN_i > FN_j)`; the diagonal is fixed at 0.5.
///
/// Each off-diagonal cell uses its own stream, so cells are independent and
/// can be computed in any order.
pub fn pairwise_matrix<T: Real, S: AsRef<[T]> + Sync>(
    samples: &[S],
    n: usize,
    seed: u64,
) -> Result<Vec<Vec<T>>> {
    if samples.is_empty() {
        return domain("pairwise comparison needs at least one sample");
    }
    let k = samples.len();
    (0..k)
        .into_par_iter()
        .map(|i| {
            (0..k)
                .map(|j| {
                    if i == j {
                        Ok(T::lit(0.5))
                    } else {
                        let stream = rng::pair_index(i, j) + 1;
                        prob_greater_on_stream(samples[i].as_ref(), samples[j].as_ref(), n, seed, stream)
                    }
                })
                .collect()
        })
        .collect()
}
