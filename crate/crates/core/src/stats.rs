//! Empirical summaries of samples: quantiles, quantile grids and boxplot
//! five-number summaries.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::scalar::Real;

pub fn mean<T: Real>(xs: &[T]) -> Option<T> {
    (!xs.is_empty()).then(|| xs.iter().copied().sum::<T>() / T::count(xs.len() as u64))
}

/// Unbiased sample variance.
pub fn variance<T: Real>(xs: &[T]) -> Option<T> {
    if xs.len() < 2 {
        return None;
    }
    let m = mean(xs)?;
    let ss: T = xs.iter().map(|&x| (x - m) * (x - m)).sum();
    Some(ss / T::count(xs.len() as u64 - 1))
}

pub fn sorted<T: Real>(xs: &[T]) -> Vec<T> {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("samples are not NaN"));
    v
}

/// Quantile of an already sorted sample, interpolating linearly between
/// order statistics (position `(n − 1)·q`).
pub fn quantile_sorted<T: Real>(sorted: &[T], q: T) -> Result<T> {
    if sorted.is_empty() {
        return domain("quantile of an empty sample");
    }
    if !(q >= T::zero() && q <= T::one()) {
        return domain(format!("quantile level must lie in [0, 1], got {q}"));
    }
    let pos = q * T::count(sorted.len() as u64 - 1);
    let lo = pos.floor();
    let i = lo.to_usize().unwrap_or(0).min(sorted.len() - 1);
    let frac = pos - lo;
    if i + 1 >= sorted.len() || frac == T::zero() {
        return Ok(sorted[i]);
    }
    Ok(sorted[i] + frac * (sorted[i + 1] - sorted[i]))
}

pub fn quantile<T: Real>(xs: &[T], q: T) -> Result<T> {
    quantile_sorted(&sorted(xs), q)
}

/// One row of a quantile grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantilePoint<T> {
    pub level: T,
    pub value: T,
}

/// Empirical quantiles at `0, step, 2·step, …, 1`.
///
/// `step` must divide one into a whole number of cells (10% → 11 points).
pub fn quantile_table<T: Real>(xs: &[T], step: T) -> Result<Vec<QuantilePoint<T>>> {
    if !(step > T::zero() && step <= T::one()) {
        return domain(format!("quantile step must lie in (0, 1], got {step}"));
    }
    let cells = (T::one() / step).round();
    let k = cells.to_usize().unwrap_or(0);
    if k == 0 || ((cells * step) - T::one()).abs() > T::lit(1e-9) {
        return domain(format!("quantile step {step} does not partition [0, 1]"));
    }
    let s = sorted(xs);
    let mut out: Vec<QuantilePoint<T>> = Vec::with_capacity(k + 1);
    for i in 0..=k {
        let level = T::count(i as u64) / cells;
        let mut value = quantile_sorted(&s, level)?;
        // interpolation rounding must not break monotonicity
        if let Some(prev) = out.last() {
            value = value.max(prev.value);
        }
        out.push(QuantilePoint { level, value });
    }
    Ok(out)
}

/// Boxplot summary with 1.5·IQR whiskers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiveNumber<T> {
    pub whisker_low: T,
    pub q1: T,
    pub median: T,
    pub q3: T,
    pub whisker_high: T,
    pub outliers: Vec<T>,
}

pub fn five_number<T: Real>(xs: &[T]) -> Result<FiveNumber<T>> {
    if xs.is_empty() {
        return domain("five-number summary of an empty sample");
    }
    let s = sorted(xs);
    let q1 = quantile_sorted(&s, T::lit(0.25))?;
    let median = quantile_sorted(&s, T::lit(0.5))?;
    let q3 = quantile_sorted(&s, T::lit(0.75))?;
    let reach = T::lit(1.5) * (q3 - q1);
    let (lo_fence, hi_fence) = (q1 - reach, q3 + reach);
    let whisker_low = s.iter().copied().find(|&x| x >= lo_fence).unwrap_or(q1);
    let whisker_high = s.iter().rev().copied().find(|&x| x <= hi_fence).unwrap_or(q3);
    let outliers = s.iter().copied().filter(|&x| x < lo_fence || x > hi_fence).collect();
    Ok(FiveNumber { whisker_low, q1, median, q3, whisker_high, outliers })
}
