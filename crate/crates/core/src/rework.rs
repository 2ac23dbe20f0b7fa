//! Rework man-hour estimation with an absorbing Markov chain over a linear
//! production sequence, and execution-phase control charts.
//!
//! Product `i` is reworked with probability `pᵢ` and passes on to `i + 1`
//! otherwise; completing the last product is the absorbing state. The
//! expected number of visits to state `i` is `1/(1 − pᵢ)`, so the expected
//! rework hours are `ηᵢ·tᵢ·(1/(1 − pᵢ) − 1)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::beta::BetaParams;
use crate::error::{domain, Error, Result};
use crate::linalg::Matrix;
use crate::rng;
use crate::scalar::Real;
use crate::stats::{self, QuantilePoint};

pub const DEFAULT_EFFICIENCY: f64 = 1.2;
pub const DEFAULT_ITERATIONS: usize = 1000;
/// Draws at or above `1 − P_CEILING_GAP` are redrawn.
pub const P_CEILING_GAP: f64 = 1e-12;
pub const MAX_REDRAWS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductSpec<T> {
    pub label: String,
    /// Products sharing a type key share inspection evidence when the
    /// posteriors are updated during execution.
    pub type_key: String,
    pub posterior: BetaParams<T>,
    /// Estimated hours tᵢ to produce the product once.
    pub estimated_hours: T,
    /// Ratio ηᵢ of rework hours to first-pass hours.
    pub efficiency: T,
}

impl<T: Real> ProductSpec<T> {
    pub fn new(label: impl Into<String>, posterior: BetaParams<T>, estimated_hours: T) -> Self {
        let label = label.into();
        Self {
            type_key: label.clone(),
            label,
            posterior,
            estimated_hours,
            efficiency: T::lit(DEFAULT_EFFICIENCY),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.estimated_hours >= T::zero() && self.estimated_hours.is_finite()) {
            return domain(format!("{}: estimated hours must be nonnegative, got {}", self.label, self.estimated_hours));
        }
        if !(self.efficiency > T::zero() && self.efficiency.is_finite()) {
            return domain(format!("{}: efficiency must be positive, got {}", self.label, self.efficiency));
        }
        BetaParams::new(self.posterior.a, self.posterior.b).map(|_| ())
    }

    /// ηᵢ·tᵢ·(1/(1 − p) − 1).
    pub fn rework_hours(&self, p: T) -> T {
        self.efficiency * self.estimated_hours * (p / (T::one() - p))
    }
}

fn validate_specs<T: Real>(specs: &[ProductSpec<T>]) -> Result<()> {
    if specs.is_empty() {
        return domain("at least one product is required");
    }
    specs.iter().try_for_each(ProductSpec::validate)
}

/// Canonical-form pieces of the production chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkovMatrices<T> {
    pub p: Vec<T>,
    /// Full (n+1)×(n+1) transition matrix.
    pub transition: Matrix<T>,
    /// Transient-to-transient block (n×n).
    pub q: Matrix<T>,
    /// Transient-to-absorbing column (n×1).
    pub r: Matrix<T>,
}

pub fn transition_matrix<T: Real>(p: &[T]) -> Result<MarkovMatrices<T>> {
    let n = p.len();
    if n == 0 {
        return domain("at least one product is required");
    }
    for (i, &pi) in p.iter().enumerate() {
        if pi == T::one() {
            return domain(format!(
                "product {}: rework always occurs (p = 1), so it can never be completed",
                i + 1
            ));
        }
        if !(pi >= T::zero() && pi < T::one()) {
            return domain(format!("product {}: rework probability must lie in [0, 1), got {pi}", i + 1));
        }
    }
    let mut transition = Matrix::zeros(n + 1, n + 1);
    let mut q = Matrix::zeros(n, n);
    let mut r = Matrix::zeros(n, 1);
    for (i, &pi) in p.iter().enumerate() {
        let pass = T::one() - pi;
        transition[(i, i)] = pi;
        transition[(i, i + 1)] = pass;
        q[(i, i)] = pi;
        if i + 1 < n {
            q[(i, i + 1)] = pass;
        } else {
            r[(i, 0)] = pass;
        }
    }
    transition[(n, n)] = T::one();
    Ok(MarkovMatrices { p: p.to_vec(), transition, q, r })
}

/// N = (I − Q)⁻¹ in closed form: `N[i][j] = 1/(1 − pⱼ)` for `j ≥ i`, zero
/// below the diagonal. Cross-checked against a dense inverse.
pub fn fundamental_matrix<T: Real>(m: &MarkovMatrices<T>) -> Result<Matrix<T>> {
    let n = m.p.len();
    if m.p.iter().any(|&p| !(p < T::one())) {
        return domain("I − Q is singular: some product is reworked with certainty");
    }
    let mut closed = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            closed[(i, j)] = T::one() / (T::one() - m.p[j]);
        }
    }
    let dense = Matrix::identity(n).sub(&m.q).inverse()?;
    let tol = T::lit(1e-10).max(T::epsilon() * T::lit(1e3));
    for (c, d) in closed.data.iter().zip(&dense.data) {
        if (*c - *d).abs() > tol * T::one().max(c.abs()) {
            return Err(Error::Convergence(format!(
                "closed-form fundamental matrix disagrees with the dense inverse ({c} vs {d})"
            )));
        }
    }
    Ok(closed)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReworkHours<T> {
    pub per_product: Vec<T>,
    pub total: T,
}

/// Expected rework hours for fixed rework probabilities, read off the first
/// row of the fundamental matrix.
pub fn expected_rework_hours<T: Real>(p: &[T], specs: &[ProductSpec<T>]) -> Result<ReworkHours<T>> {
    validate_specs(specs)?;
    if p.len() != specs.len() {
        return domain(format!("{} probabilities for {} products", p.len(), specs.len()));
    }
    let n = fundamental_matrix(&transition_matrix(p)?)?;
    let per_product: Vec<T> = specs
        .iter()
        .enumerate()
        .map(|(i, s)| s.efficiency * s.estimated_hours * (n[(0, i)] - T::one()))
        .collect();
    let total = per_product.iter().copied().sum();
    Ok(ReworkHours { per_product, total })
}

/// Draw of `p` for product `product` in iteration `iteration`.
///
/// The stream depends only on (seed, iteration, product), so the same
/// iteration sees the same random numbers in the planning estimate and at
/// every control-chart state.
fn draw_p<T: Real>(seed: u64, iteration: usize, product: usize, posterior: &BetaParams<T>) -> Result<T> {
    let mut rng = rng::stream(seed, rng::pair_index(iteration, product));
    let ceiling = T::one() - T::lit(P_CEILING_GAP);
    for _ in 0..=MAX_REDRAWS {
        let p = rng::beta_draw(&mut rng, posterior)?;
        if p < ceiling {
            return Ok(p);
        }
    }
    Err(Error::Domain(format!(
        "product {}: posterior Beta({}, {}) keeps drawing p ≈ 1",
        product + 1,
        posterior.a,
        posterior.b
    )))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real"))]
pub struct ReworkEstimate<T> {
    /// Total rework hours per iteration.
    pub samples: Vec<T>,
    pub quantiles: Vec<QuantilePoint<T>>,
    pub mean: T,
    pub seed: u64,
    pub iterations: usize,
}

fn estimate_from<T: Real>(samples: Vec<T>, seed: u64) -> Result<ReworkEstimate<T>> {
    let quantiles = stats::quantile_table(&samples, T::lit(0.1))?;
    let mean = stats::mean(&samples).unwrap_or_else(T::zero);
    let iterations = samples.len();
    Ok(ReworkEstimate { samples, quantiles, mean, seed, iterations })
}

/// Per-iteration remaining-work totals for products `from..`, with each
/// product's posterior given by `posterior(i)`.
fn remaining_samples<T: Real, F>(specs: &[ProductSpec<T>], from: usize, iterations: usize, seed: u64, posterior: F) -> Result<Vec<T>>
where
    F: Fn(usize) -> BetaParams<T> + Sync,
{
    (0..iterations)
        .into_par_iter()
        .map(|j| {
            (from..specs.len()).try_fold(T::zero(), |acc, i| {
                Ok(acc + specs[i].rework_hours(draw_p(seed, j, i, &posterior(i))?))
            })
        })
        .collect()
}

/// Planning-phase distribution of total rework hours: each iteration draws
/// every `pᵢ` from its posterior and sums the expected rework hours.
pub fn simulate_total_rework<T: Real>(specs: &[ProductSpec<T>], iterations: usize, seed: u64) -> Result<ReworkEstimate<T>> {
    validate_specs(specs)?;
    if iterations == 0 {
        return domain("rework simulation needs at least one iteration");
    }
    let samples = remaining_samples(specs, 0, iterations, seed, |i| specs[i].posterior)?;
    estimate_from(samples, seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlLimits<T> {
    /// Centre line: median of the planning estimate.
    pub cl: T,
    /// 97.5% quantile.
    pub ucl: T,
    /// 2.5% quantile.
    pub lcl: T,
}

pub fn control_limits<T: Real>(estimate: &ReworkEstimate<T>) -> Result<ControlLimits<T>> {
    let s = stats::sorted(&estimate.samples);
    Ok(ControlLimits {
        cl: stats::quantile_sorted(&s, T::lit(0.5))?,
        ucl: stats::quantile_sorted(&s, T::lit(0.975))?,
        lcl: stats::quantile_sorted(&s, T::lit(0.025))?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ControlFlag {
    InControl,
    AboveUcl,
    BelowLcl,
}

impl ControlFlag {
    pub fn classify<T: Real>(value: T, limits: &ControlLimits<T>) -> Self {
        if value > limits.ucl {
            Self::AboveUcl
        } else if value < limits.lcl {
            Self::BelowLcl
        } else {
            Self::InControl
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::InControl => "in_control",
            Self::AboveUcl => "above_ucl",
            Self::BelowLcl => "below_lcl",
        }
    }
}

/// Forecast of total rework hours at one state of execution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatePoint<T> {
    /// State k: products `1..k` are complete, product `k` is next.
    pub state: usize,
    pub median: T,
    pub band_low: T,
    pub band_high: T,
    /// Actual rework hours of the completed products.
    pub accrued_actual: T,
    pub flag: ControlFlag,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlChartSeries<T> {
    pub limits: ControlLimits<T>,
    pub points: Vec<StatePoint<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChartOptions {
    pub iterations: usize,
    pub seed: u64,
    /// Fold completed products' pass/fail results into the posteriors of
    /// remaining products of the same type.
    pub sequential_update: bool,
}

impl Default for ChartOptions {
    fn default() -> Self {
        Self { iterations: DEFAULT_ITERATIONS, seed: 0, sequential_update: false }
    }
}

/// Control chart over execution states `1..=m+1`, where `m` products have
/// been completed with the given actual rework hours and results
/// (`true` = failed inspection / reworked).
///
/// At state k the forecast is the accrued actual hours plus a Monte Carlo
/// distribution of expected rework over products `k..=n`. Limits come from
/// the planning estimate with the same seed; when all `n` products are
/// done the final state is the plain actual total with a zero-width band.
pub fn control_chart<T: Real>(
    specs: &[ProductSpec<T>],
    actual_hours: &[T],
    actual_failed: &[bool],
    opts: &ChartOptions,
) -> Result<ControlChartSeries<T>> {
    validate_specs(specs)?;
    let n = specs.len();
    let m = actual_hours.len();
    if m > n {
        return domain(format!("{m} actual results for {n} products"));
    }
    if actual_failed.len() != m {
        return domain(format!("{} pass/fail results for {m} actual hour entries", actual_failed.len()));
    }
    if let Some(h) = actual_hours.iter().find(|h| !(**h >= T::zero() && h.is_finite())) {
        return domain(format!("actual rework hours must be nonnegative, got {h}"));
    }
    if opts.iterations == 0 {
        return domain("control chart needs at least one iteration");
    }
    let planning = simulate_total_rework(specs, opts.iterations, opts.seed)?;
    let limits = control_limits(&planning)?;

    let mut points = Vec::with_capacity(m + 1);
    let mut accrued = T::zero();
    for k in 0..=m {
        if k > 0 {
            accrued = accrued + actual_hours[k - 1];
        }
        let state = k + 1;
        if k == n {
            points.push(StatePoint {
                state,
                median: accrued,
                band_low: accrued,
                band_high: accrued,
                accrued_actual: accrued,
                flag: ControlFlag::classify(accrued, &limits),
            });
            break;
        }
        let remaining = if opts.sequential_update {
            let updated = |i: usize| {
                let mut post = specs[i].posterior;
                for (j, &failed) in actual_failed[..k].iter().enumerate() {
                    if specs[j].type_key == specs[i].type_key {
                        if failed {
                            post.a = post.a + T::one();
                        } else {
                            post.b = post.b + T::one();
                        }
                    }
                }
                post
            };
            remaining_samples(specs, k, opts.iterations, opts.seed, updated)?
        } else if k == 0 {
            planning.samples.clone()
        } else {
            remaining_samples(specs, k, opts.iterations, opts.seed, |i| specs[i].posterior)?
        };
        let s = stats::sorted(&remaining);
        let median = accrued + stats::quantile_sorted(&s, T::lit(0.5))?;
        points.push(StatePoint {
            state,
            median,
            band_low: accrued + stats::quantile_sorted(&s, T::lit(0.025))?,
            band_high: accrued + stats::quantile_sorted(&s, T::lit(0.975))?,
            accrued_actual: accrued,
            flag: ControlFlag::classify(median, &limits),
        });
    }
    Ok(ControlChartSeries { limits, points })
}
