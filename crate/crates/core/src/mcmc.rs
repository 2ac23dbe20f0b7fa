//! Random-walk Metropolis-Hastings sampler for the fraction-nonconforming
//! posterior, with trace/ACF diagnostics and error metrics against the
//! closed-form interval.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::beta::{BetaParams, CountData, CredibleInterval};
use crate::error::{domain, Result};
use crate::rng;
use crate::scalar::Real;
use crate::stats::{self, FiveNumber};

/// Sampler settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, bound(deserialize = "T: Real"))]
pub struct ChainConfig<T> {
    pub iterations: usize,
    /// Leading draws dropped before any summary.
    pub burn_in: usize,
    pub proposal_sd: T,
    /// Starting value; `None` uses (X + 1/2) / (n + 1).
    pub initial: Option<T>,
    pub seed: u64,
    /// Stream index under `seed`; distinct chains use distinct indices.
    pub chain_index: u64,
}

impl<T: Real> Default for ChainConfig<T> {
    fn default() -> Self {
        Self {
            iterations: 10_000,
            burn_in: 200,
            proposal_sd: T::lit(0.05),
            initial: None,
            seed: 0,
            chain_index: 0,
        }
    }
}

impl<T: Real> ChainConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.iterations <= self.burn_in {
            return domain(format!(
                "iterations ({}) must exceed burn-in ({})",
                self.iterations, self.burn_in
            ));
        }
        if !(self.proposal_sd > T::zero() && self.proposal_sd.is_finite()) {
            return domain(format!("proposal sd must be positive, got {}", self.proposal_sd));
        }
        if let Some(p0) = self.initial {
            if !(p0 > T::zero() && p0 < T::one()) {
                return domain(format!("initial value must lie in (0, 1), got {p0}"));
            }
        }
        Ok(())
    }

    pub fn starting_point(&self, counts: &CountData) -> T {
        self.initial.unwrap_or_else(|| {
            let lo = T::lit(1e-6);
            let p = (T::count(counts.failed) + T::lit(0.5)) / (T::count(counts.inspected) + T::one());
            p.max(lo).min(T::one() - lo)
        })
    }

    pub fn with_chain_index(mut self, index: u64) -> Self {
        self.chain_index = index;
        self
    }
}

/// Draws `p(1) … p(N)` of one Metropolis-Hastings run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real"))]
pub struct Chain<T> {
    pub draws: Vec<T>,
    pub config: ChainConfig<T>,
    pub acceptance_rate: T,
    pub counts: CountData,
    pub prior: BetaParams<T>,
}

impl<T: Real> Chain<T> {
    /// Draws after burn-in.
    pub fn retained(&self) -> &[T] {
        &self.draws[self.config.burn_in.min(self.draws.len())..]
    }

    /// `(iteration, value)` pairs for trace plots, iterations counted from 1.
    pub fn trace(&self) -> impl Iterator<Item = (usize, T)> + '_ {
        self.draws.iter().copied().enumerate().map(|(i, p)| (i + 1, p))
    }

    pub fn posterior(&self) -> BetaParams<T> {
        crate::beta::posterior(&self.counts, &self.prior)
    }
}

/// Runs the sampler.
///
/// Each step proposes `p* = p + Δp` with `Δp ~ N(0, σ²)` and accepts when a
/// uniform draw falls below `min(1, π(p*)/π(p))`, where π is the
/// unnormalized posterior. Proposals outside (0, 1) are rejected.
pub fn sample_posterior<T: Real>(
    counts: &CountData,
    prior: &BetaParams<T>,
    config: &ChainConfig<T>,
) -> Result<Chain<T>> {
    config.validate()?;
    let target = crate::beta::posterior(counts, prior);
    let mut rng = rng::stream(config.seed, config.chain_index);
    let mut current = config.starting_point(counts);
    let mut current_ln = target.ln_kernel(current);
    let mut accepted = 0usize;
    let mut draws = Vec::with_capacity(config.iterations);
    let sd = config.proposal_sd.f64();
    for _ in 0..config.iterations {
        let step: f64 = rng.sample(StandardNormal);
        let proposal = current + T::lit(step * sd);
        let u: f64 = rng.random();
        if proposal > T::zero() && proposal < T::one() {
            let proposal_ln = target.ln_kernel(proposal);
            let ratio = (proposal_ln - current_ln).min(T::zero()).exp();
            if T::lit(u) < ratio {
                current = proposal;
                current_ln = proposal_ln;
                accepted += 1;
            }
        }
        draws.push(current);
    }
    Ok(Chain {
        draws,
        config: *config,
        acceptance_rate: T::count(accepted as u64) / T::count(config.iterations as u64),
        counts: *counts,
        prior: *prior,
    })
}

/// Runs `runs` chains in parallel on streams `0..runs` under `config.seed`.
pub fn sample_many<T: Real>(
    counts: &CountData,
    prior: &BetaParams<T>,
    config: &ChainConfig<T>,
    runs: usize,
) -> Result<Vec<Chain<T>>> {
    (0..runs as u64)
        .into_par_iter()
        .map(|i| sample_posterior(counts, prior, &config.with_chain_index(i)))
        .collect()
}

/// Sample autocorrelation of `xs` at lags `0..=max_lag`.
///
/// A constant series has no defined correlation; it reports 1 at lag 0 and
/// 0 elsewhere.
pub fn acf_series<T: Real>(xs: &[T], max_lag: usize) -> Result<Vec<T>> {
    if xs.len() < 2 {
        return domain("autocorrelation needs at least two values");
    }
    if max_lag >= xs.len() {
        return domain(format!("max lag {max_lag} must be below series length {}", xs.len()));
    }
    let m = stats::mean(xs).expect("non-empty");
    let dev: Vec<T> = xs.iter().map(|&x| x - m).collect();
    let denom: T = dev.iter().map(|&d| d * d).sum();
    if denom == T::zero() {
        return Ok((0..=max_lag).map(|k| if k == 0 { T::one() } else { T::zero() }).collect());
    }
    Ok((0..=max_lag)
        .map(|k| dev.iter().zip(&dev[k..]).map(|(&a, &b)| a * b).sum::<T>() / denom)
        .collect())
}

/// ACF of the retained (post-burn-in) draws.
pub fn acf<T: Real>(chain: &Chain<T>, max_lag: usize) -> Result<Vec<T>> {
    acf_series(chain.retained(), max_lag)
}

/// Empirical `alpha/2` and `1 − alpha/2` quantiles of the retained draws.
pub fn empirical_interval<T: Real>(chain: &Chain<T>, alpha: T) -> Result<CredibleInterval<T>> {
    if !(alpha > T::zero() && alpha < T::one()) {
        return domain(format!("alpha must lie in (0, 1), got {alpha}"));
    }
    let draws = chain.retained();
    if draws.is_empty() {
        return domain("chain has no retained draws");
    }
    let s = stats::sorted(draws);
    let half = alpha / T::lit(2.0);
    Ok(CredibleInterval {
        lower: stats::quantile_sorted(&s, half)?,
        upper: stats::quantile_sorted(&s, T::one() - half)?,
        alpha,
    })
}

pub fn empirical_five_number<T: Real>(chain: &Chain<T>) -> Result<FiveNumber<T>> {
    stats::five_number(chain.retained())
}

/// Endpoint-wise average of the empirical intervals of several chains.
pub fn average_interval<T: Real>(chains: &[Chain<T>], alpha: T) -> Result<CredibleInterval<T>> {
    if chains.is_empty() {
        return domain("no chains to average");
    }
    let intervals = chains
        .iter()
        .map(|c| empirical_interval(c, alpha))
        .collect::<Result<Vec<_>>>()?;
    let k = T::count(intervals.len() as u64);
    Ok(CredibleInterval {
        lower: intervals.iter().map(|i| i.lower).sum::<T>() / k,
        upper: intervals.iter().map(|i| i.upper).sum::<T>() / k,
        alpha,
    })
}

/// MAE and RMSE of numeric interval limits against analytic ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport<T> {
    pub mae_lower: T,
    pub mae_upper: T,
    pub rmse_lower: T,
    pub rmse_upper: T,
}

pub fn residual_metrics<T: Real>(
    numeric: &[CredibleInterval<T>],
    analytic: &[CredibleInterval<T>],
) -> Result<ResidualReport<T>> {
    if numeric.len() != analytic.len() {
        return domain(format!(
            "residual lists differ in length: {} vs {}",
            numeric.len(),
            analytic.len()
        ));
    }
    if numeric.is_empty() {
        return domain("residual metrics need at least one pair");
    }
    let n = T::count(numeric.len() as u64);
    let lower: Vec<T> = numeric.iter().zip(analytic).map(|(a, b)| a.lower - b.lower).collect();
    let upper: Vec<T> = numeric.iter().zip(analytic).map(|(a, b)| a.upper - b.upper).collect();
    let mae = |r: &[T]| r.iter().map(|x| x.abs()).sum::<T>() / n;
    let rmse = |r: &[T]| (r.iter().map(|&x| x * x).sum::<T>() / n).sqrt();
    Ok(ResidualReport {
        mae_lower: mae(&lower),
        mae_upper: mae(&upper),
        rmse_lower: rmse(&lower),
        rmse_upper: rmse(&upper),
    })
}
