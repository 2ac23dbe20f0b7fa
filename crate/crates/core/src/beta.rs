//! Beta-binomial posterior machinery and the classical binomial intervals.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::scalar::Real;
use crate::special;

/// Observed inspection counts: `failed` nonconforming out of `inspected`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CountData {
    pub failed: u64,
    pub inspected: u64,
}

impl CountData {
    pub fn new(failed: u64, inspected: u64) -> Result<Self> {
        if failed > inspected {
            return domain(format!("failed count {failed} exceeds inspected count {inspected}"));
        }
        Ok(Self { failed, inspected })
    }

    /// X / n, or `None` when nothing was inspected.
    pub fn sample_fraction<T: Real>(&self) -> Option<T> {
        (self.inspected > 0).then(|| T::count(self.failed) / T::count(self.inspected))
    }

    pub fn passed(&self) -> u64 {
        self.inspected - self.failed
    }
}

/// Shape parameters of a Beta(a, b) distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaParams<T> {
    pub a: T,
    pub b: T,
}

impl<T: Real> BetaParams<T> {
    pub fn new(a: T, b: T) -> Result<Self> {
        if !(a > T::zero() && b > T::zero() && a.is_finite() && b.is_finite()) {
            return domain(format!("beta shapes must be positive and finite, got ({a}, {b})"));
        }
        Ok(Self { a, b })
    }

    /// The non-informative Beta(1/2, 1/2) prior.
    pub fn jeffreys() -> Self {
        let half = T::lit(0.5);
        Self { a: half, b: half }
    }

    pub fn mean(&self) -> T {
        self.a / (self.a + self.b)
    }

    pub fn variance(&self) -> T {
        let s = self.a + self.b;
        self.a * self.b / (s * s * (s + T::one()))
    }

    pub fn pdf(&self, x: T) -> Result<T> {
        special::beta_pdf(x, self.a, self.b)
    }

    pub fn cdf(&self, x: T) -> Result<T> {
        beta_cdf(x, self)
    }

    pub fn quantile(&self, q: T) -> Result<T> {
        beta_quantile(q, self)
    }

    pub fn median(&self) -> Result<T> {
        self.quantile(T::lit(0.5))
    }

    /// Unnormalized log density, (a−1) ln p + (b−1) ln(1−p).
    pub fn ln_kernel(&self, p: T) -> T {
        let one = T::one();
        (self.a - one) * p.ln() + (self.b - one) * (-p).ln_1p()
    }

    pub fn ln_norm(&self) -> T {
        special::ln_beta_unchecked(self.a, self.b)
    }
}

impl<T: Real> Default for BetaParams<T> {
    fn default() -> Self {
        Self::jeffreys()
    }
}

/// Equal-tailed interval `[lower, upper]` at level `1 − alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CredibleInterval<T> {
    pub lower: T,
    pub upper: T,
    pub alpha: T,
}

impl<T: Real> CredibleInterval<T> {
    pub fn level(&self) -> T {
        T::one() - self.alpha
    }

    pub fn width(&self) -> T {
        self.upper - self.lower
    }

    pub fn contains(&self, x: T) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// Conjugate update: Beta(X + a, n − X + b).
pub fn posterior<T: Real>(counts: &CountData, prior: &BetaParams<T>) -> BetaParams<T> {
    BetaParams {
        a: T::count(counts.failed) + prior.a,
        b: T::count(counts.passed()) + prior.b,
    }
}

/// Posterior mean (X + a) / (n + a + b).
///
/// `params` must be the posterior of `counts` under `prior`. The value is
/// cross-checked against its decomposition as a weighted average of the
/// sample fraction and the prior mean.
pub fn posterior_mean<T: Real>(
    params: &BetaParams<T>,
    counts: &CountData,
    prior: &BetaParams<T>,
) -> Result<T> {
    let expected = posterior(counts, prior);
    let tol = T::lit(1e-12).max(T::epsilon() * T::lit(16.0));
    let close = |x: T, y: T| (x - y).abs() <= tol * x.abs().max(T::one());
    if !close(params.a, expected.a) || !close(params.b, expected.b) {
        return domain(format!(
            "params Beta({}, {}) are not the posterior of {}/{} under Beta({}, {})",
            params.a, params.b, counts.failed, counts.inspected, prior.a, prior.b
        ));
    }
    let n = T::count(counts.inspected);
    let x = T::count(counts.failed);
    let s = prior.a + prior.b;
    let mean = (x + prior.a) / (n + s);
    let data_weight = n / (n + s);
    let mle = counts.sample_fraction::<T>().unwrap_or(T::zero());
    let weighted = data_weight * mle + (s / (n + s)) * prior.mean();
    if (weighted - mean).abs() > tol {
        return Err(crate::Error::Convergence(format!(
            "posterior mean {mean} disagrees with weighted form {weighted}"
        )));
    }
    Ok(mean)
}

pub fn beta_cdf<T: Real>(x: T, params: &BetaParams<T>) -> Result<T> {
    special::reg_inc_beta(x, params.a, params.b)
}

pub fn beta_quantile<T: Real>(q: T, params: &BetaParams<T>) -> Result<T> {
    special::inv_reg_inc_beta(q, params.a, params.b)
}

fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if !(alpha > T::zero() && alpha < T::one()) {
        return domain(format!("alpha must lie in (0, 1), got {alpha}"));
    }
    Ok(())
}

/// Equal-tailed credible interval of a Beta posterior.
pub fn credible_interval<T: Real>(params: &BetaParams<T>, alpha: T) -> Result<CredibleInterval<T>> {
    check_alpha(alpha)?;
    let half = alpha / T::lit(2.0);
    Ok(CredibleInterval {
        lower: beta_quantile(half, params)?,
        upper: beta_quantile(T::one() - half, params)?,
        alpha,
    })
}

/// Posterior plus its credible interval under the Jeffreys prior.
pub fn jeffreys_interval<T: Real>(counts: &CountData, alpha: T) -> Result<CredibleInterval<T>> {
    credible_interval(&posterior(counts, &BetaParams::jeffreys()), alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassicalMethod {
    Wald,
    Wilson,
    AgrestiCoull,
}

/// Frequentist interval; limits are reported unclipped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalInterval<T> {
    pub method: ClassicalMethod,
    pub lower: T,
    pub upper: T,
    pub alpha: T,
}

fn classical_parts<T: Real>(counts: &CountData, alpha: T) -> Result<(T, T, T)> {
    check_alpha(alpha)?;
    let Some(p) = counts.sample_fraction::<T>() else {
        return domain("classical intervals require at least one inspected item");
    };
    let z = special::normal_quantile(T::one() - alpha / T::lit(2.0))?;
    Ok((p, T::count(counts.inspected), z))
}

/// p̂ ± z·sqrt(p̂(1−p̂)/n).
pub fn wald_interval<T: Real>(counts: &CountData, alpha: T) -> Result<ClassicalInterval<T>> {
    let (p, n, z) = classical_parts(counts, alpha)?;
    let half = z * (p * (T::one() - p) / n).sqrt();
    Ok(ClassicalInterval { method: ClassicalMethod::Wald, lower: p - half, upper: p + half, alpha })
}

/// (p̂ + z²/2n ± z·sqrt([p̂(1−p̂) + z²/4n]/n)) / (1 + z²/n).
pub fn wilson_interval<T: Real>(counts: &CountData, alpha: T) -> Result<ClassicalInterval<T>> {
    let (p, n, z) = classical_parts(counts, alpha)?;
    let z2 = z * z;
    let two = T::lit(2.0);
    let center = p + z2 / (two * n);
    let half = z * ((p * (T::one() - p) + z2 / (T::lit(4.0) * n)) / n).sqrt();
    let denom = T::one() + z2 / n;
    Ok(ClassicalInterval {
        method: ClassicalMethod::Wilson,
        lower: (center - half) / denom,
        upper: (center + half) / denom,
        alpha,
    })
}

/// p̂ ± z·sqrt(p̂(1−p̂)/(n + z²)).
pub fn agresti_coull_interval<T: Real>(counts: &CountData, alpha: T) -> Result<ClassicalInterval<T>> {
    let (p, n, z) = classical_parts(counts, alpha)?;
    let half = z * (p * (T::one() - p) / (n + z * z)).sqrt();
    Ok(ClassicalInterval {
        method: ClassicalMethod::AgrestiCoull,
        lower: p - half,
        upper: p + half,
        alpha,
    })
}

pub fn classical_intervals<T: Real>(counts: &CountData, alpha: T) -> Result<[ClassicalInterval<T>; 3]> {
    Ok([
        wald_interval(counts, alpha)?,
        wilson_interval(counts, alpha)?,
        agresti_coull_interval(counts, alpha)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(x: u64, n: u64) -> CountData {
        CountData::new(x, n).unwrap()
    }

    #[test]
    fn posterior_conjugate_update() {
        let j = BetaParams::<f64>::jeffreys();
        assert_eq!(posterior(&counts(10, 100), &j), BetaParams { a: 10.5, b: 90.5 });
        assert_eq!(posterior(&counts(8, 51), &j), BetaParams { a: 8.5, b: 43.5 });
        let prior = BetaParams::new(2.0, 3.0).unwrap();
        assert_eq!(posterior(&counts(0, 0), &prior), prior);
    }

    #[test]
    fn count_data_rejects_excess_failures() {
        assert!(CountData::new(4, 3).is_err());
    }

    #[test]
    fn beta_params_validation() {
        assert!(BetaParams::new(0.0, 1.0).is_err());
        assert!(BetaParams::new(1.0, f64::INFINITY).is_err());
        assert!(BetaParams::new(-1.0, 1.0).is_err());
    }

    #[test]
    fn posterior_mean_cases() {
        let j = BetaParams::<f64>::jeffreys();
        let c = counts(10, 100);
        let m = posterior_mean(&posterior(&c, &j), &c, &j).unwrap();
        assert!((m - 10.5 / 101.0).abs() < 1e-15);
        let empty = counts(0, 0);
        assert_eq!(posterior_mean(&j, &empty, &j).unwrap(), 0.5);
        let all = counts(37, 37);
        let m = posterior_mean(&posterior(&all, &j), &all, &j).unwrap();
        assert!((m - 37.5 / 38.0).abs() < 1e-15);
        // mismatched params are rejected
        assert!(posterior_mean(&j, &c, &j).is_err());
    }

    #[test]
    fn quantile_examples() {
        let u = BetaParams::<f64>::new(1.0, 1.0).unwrap();
        assert!((u.quantile(0.5).unwrap() - 0.5).abs() < 1e-12);
        let p = BetaParams::<f64>::new(2.5, 98.5).unwrap();
        assert!((p.median().unwrap() - 0.0217).abs() < 5e-5);
        let p = BetaParams::<f64>::new(10.5, 90.5).unwrap();
        assert!((p.quantile(0.025).unwrap() - 0.0526).abs() < 5e-5);
        assert!(p.quantile(1.5).is_err());
        assert!(p.cdf(-0.1).is_err());
    }

    #[test]
    fn credible_interval_examples() {
        let ci = credible_interval(&BetaParams::<f64>::new(10.5, 90.5).unwrap(), 0.05).unwrap();
        assert!((ci.lower - 0.0526).abs() < 5e-5 && (ci.upper - 0.1701).abs() < 5e-5);
        let ci = credible_interval(&BetaParams::<f64>::new(249.5, 7226.5).unwrap(), 0.05).unwrap();
        assert!((ci.lower - 0.0294).abs() < 5e-5 && (ci.upper - 0.0376).abs() < 5e-5);
        let ci = credible_interval(&BetaParams::<f64>::new(7.0, 7.0).unwrap(), 0.1).unwrap();
        assert!((ci.lower + ci.upper - 1.0).abs() < 1e-12);
        assert!(credible_interval(&BetaParams::<f64>::jeffreys(), 0.0).is_err());
        assert!(credible_interval(&BetaParams::<f64>::jeffreys(), 1.0).is_err());
    }

    #[test]
    fn wald_zero_failures_degenerates() {
        let w = wald_interval(&counts(0, 12), 0.05).unwrap();
        assert_eq!((w.lower, w.upper), (0.0, 0.0));
    }

    #[test]
    fn wald_keeps_negative_lower_limit() {
        let w = wald_interval(&counts(1, 3), 0.05f64).unwrap();
        assert!(w.lower < 0.0);
    }

    #[test]
    fn wilson_symmetric_center() {
        let w = wilson_interval(&counts(50, 100), 0.05f64).unwrap();
        assert!(((w.lower + w.upper) / 2.0 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn classical_requires_data() {
        assert!(wald_interval::<f64>(&counts(0, 0), 0.05).is_err());
        assert!(wilson_interval::<f64>(&counts(0, 0), 0.05).is_err());
        assert!(agresti_coull_interval::<f64>(&counts(0, 0), 0.05).is_err());
    }
}
