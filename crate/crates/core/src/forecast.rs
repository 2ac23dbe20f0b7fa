//! Monte Carlo forecast of a project's fraction nonconforming from the
//! posteriors of its weld types.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::beta::BetaParams;
use crate::error::{domain, Error, Result};
use crate::rng;
use crate::scalar::Real;
use crate::stats::{self, QuantilePoint};

pub const DEFAULT_ITERATIONS: usize = 100;

/// One weld type of the project and how many of its welds are planned.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignEntry<T> {
    pub label: String,
    pub posterior: BetaParams<T>,
    pub welds: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectDesign<T> {
    pub entries: Vec<DesignEntry<T>>,
}

impl<T: Real> ProjectDesign<T> {
    pub fn new(entries: Vec<DesignEntry<T>>) -> Result<Self> {
        let d = Self { entries };
        if d.total_welds() == 0 {
            return domain("project design has no welds");
        }
        Ok(d)
    }

    /// Looks up each `(label, weld count)` line of a design in `posteriors`.
    pub fn resolve(lines: &[(String, u64)], posteriors: &BTreeMap<String, BetaParams<T>>) -> Result<Self> {
        let entries = lines
            .iter()
            .map(|(label, welds)| {
                let posterior = posteriors
                    .get(label)
                    .ok_or_else(|| Error::Config(format!("weld type {label:?} has no posterior")))?;
                Ok(DesignEntry { label: label.clone(), posterior: *posterior, welds: *welds })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    /// Total weld count n.
    pub fn total_welds(&self) -> u64 {
        self.entries.iter().map(|e| e.welds).sum()
    }

    /// Number of distinct types k.
    pub fn type_count(&self) -> usize {
        self.entries.len()
    }

    /// (1/n)·Σ posterior means over welds.
    pub fn expected_fraction(&self) -> T {
        let n = T::count(self.total_welds());
        self.entries
            .iter()
            .map(|e| T::count(e.welds) * e.posterior.mean())
            .sum::<T>()
            / n
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForecastMode {
    /// Draw a rate for every weld and average them.
    #[default]
    WeldAverage,
    /// Pick one weld at random and draw its rate (a mixture of the type
    /// posteriors weighted by weld counts).
    Mixture,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real"))]
pub struct ForecastResult<T> {
    pub samples: Vec<T>,
    pub quantiles: Vec<QuantilePoint<T>>,
    pub seed: u64,
    pub iterations: usize,
    pub mode: ForecastMode,
}

impl<T: Real> ForecastResult<T> {
    pub fn mean(&self) -> T {
        stats::mean(&self.samples).unwrap_or_else(T::zero)
    }
}

/// Simulates the project fraction nonconforming.
///
/// Iteration `j` uses its own random stream, so the result does not depend
/// on thread scheduling; welds are drawn in design order.
pub fn simulate_project<T: Real>(
    design: &ProjectDesign<T>,
    iterations: usize,
    seed: u64,
    mode: ForecastMode,
) -> Result<ForecastResult<T>> {
    if iterations == 0 {
        return domain("forecast needs at least one iteration");
    }
    let n = design.total_welds();
    if n == 0 {
        return domain("project design has no welds");
    }
    let samples = (0..iterations)
        .into_par_iter()
        .map(|j| {
            let mut rng = rng::stream(seed, j as u64);
            match mode {
                ForecastMode::WeldAverage => {
                    let mut sum = T::zero();
                    for e in &design.entries {
                        for _ in 0..e.welds {
                            sum = sum + rng::beta_draw(&mut rng, &e.posterior)?;
                        }
                    }
                    Ok(sum / T::count(n))
                }
                ForecastMode::Mixture => {
                    use rand::Rng;
                    let mut pick = rng.random_range(0..n);
                    let e = design
                        .entries
                        .iter()
                        .find(|e| {
                            if pick < e.welds {
                                true
                            } else {
                                pick -= e.welds;
                                false
                            }
                        })
                        .expect("pick is below the weld total");
                    rng::beta_draw(&mut rng, &e.posterior)
                }
            }
        })
        .collect::<Result<Vec<T>>>()?;
    let quantiles = quantile_table(&samples)?;
    Ok(ForecastResult { samples, quantiles, seed, iterations, mode })
}

/// Quantiles at 0%, 10%, …, 100%.
pub fn quantile_table<T: Real>(samples: &[T]) -> Result<Vec<QuantilePoint<T>>> {
    stats::quantile_table(samples, T::lit(0.1))
}
