//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code, unused_imports)]

mod tables;

pub use tables::*;

use statrs::function::gamma::ln_gamma;

/// Eight illustrative products: (inspected, repaired).
pub const EIGHT_PRODUCTS: [(u64, u64); 8] =
    [(200, 5), (170, 4), (50, 2), (48, 2), (100, 2), (99, 2), (98, 4), (101, 4)];

pub const EIGHT_MEDIANS: [f64; 8] = [0.0258, 0.0245, 0.0432, 0.0450, 0.0217, 0.0219, 0.0424, 0.0412];

pub const EIGHT_SCORES: [f64; 8] = [2.8, 2.0, 9.7, 10.0, 0.0, 0.1, 7.7, 7.4];

/// Hellinger distances between the eight products' posteriors, 4 decimals.
pub const EIGHT_MATRIX: [[f64; 8]; 8] = [
    [0.0000, 0.0602, 0.4100, 0.4290, 0.2109, 0.2090, 0.3900, 0.3694],
    [0.0602, 0.0000, 0.4023, 0.4219, 0.1566, 0.1552, 0.3989, 0.3789],
    [0.4100, 0.4023, 0.0000, 0.0232, 0.3737, 0.3688, 0.1604, 0.1674],
    [0.4290, 0.4219, 0.0232, 0.0000, 0.3937, 0.3888, 0.1703, 0.1796],
    [0.2109, 0.1566, 0.3737, 0.3937, 0.0000, 0.0057, 0.4100, 0.3936],
    [0.2090, 0.1552, 0.3688, 0.3888, 0.0057, 0.0000, 0.4046, 0.3881],
    [0.3900, 0.3989, 0.1604, 0.1703, 0.4100, 0.4046, 0.0000, 0.0230],
    [0.3694, 0.3789, 0.1674, 0.1796, 0.3936, 0.3881, 0.0230, 0.0000],
];

/// Ten products of a small job: (inspected, repaired, estimated hours).
pub const TEN_PRODUCTS: [(u64, u64, f64); 10] = [
    (21, 2, 3.0),
    (23, 1, 2.5),
    (7, 0, 3.0),
    (14, 2, 1.5),
    (17, 2, 2.0),
    (37, 3, 1.0),
    (10, 1, 3.0),
    (41, 4, 3.0),
    (55, 3, 2.5),
    (51, 6, 2.0),
];

/// Actual rework hours per product for the three execution scenarios.
pub const NO_REWORK: [f64; 10] = [0.0; 10];
pub const UNDER_CONTROL: [f64; 10] = [0.0, 0.0, 0.0, 1.8, 0.0, 1.2, 0.0, 0.0, 0.0, 2.4];
pub const OVER_CONTROL: [f64; 10] = [0.0, 0.0, 0.0, 1.8, 2.4, 1.2, 0.0, 0.0, 0.0, 0.0];

/// Published planning-estimate quantiles at 0%, 10%, …, 100%.
pub const REWORK_QUANTILES: [f64; 11] = [1.4, 2.4, 2.7, 2.9, 3.2, 3.4, 3.6, 3.9, 4.3, 4.9, 10.2];

fn softplus(u: f64) -> f64 {
    if u > 0.0 {
        u + (-u).exp().ln_1p()
    } else {
        u.exp().ln_1p()
    }
}

fn ln_beta_fn(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// ∫₀¹ exp(g(ln x, ln(1 − x))) dx by tanh-sinh quadrature with step `h`.
fn tanh_sinh(g: impl Fn(f64, f64) -> f64, h: f64) -> f64 {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let k = (4.5 / h).ceil() as i64;
    let mut sum = 0.0;
    for i in -k..=k {
        let t = i as f64 * h;
        let u = 2.0 * half_pi * t.sinh();
        // x = 1/(1 + e^{-u}), 1 − x = 1/(1 + e^{u})
        let ln_x = -softplus(-u);
        let ln_1mx = -softplus(u);
        let ln_jac = ln_x + ln_1mx + (2.0 * half_pi * t.cosh()).ln();
        sum += (g(ln_x, ln_1mx) + ln_jac).exp();
    }
    sum * h
}

/// Hellinger distance between two Betas from the Bhattacharyya integral.
pub fn hellinger_quadrature(a1: f64, b1: f64, a2: f64, b2: f64) -> f64 {
    let (n1, n2) = (ln_beta_fn(a1, b1), ln_beta_fn(a2, b2));
    let g = |lx: f64, l1: f64| 0.5 * ((a1 + a2 - 2.0) * lx + (b1 + b2 - 2.0) * l1 - n1 - n2);
    let bc = tanh_sinh(g, 1.0 / 256.0);
    (1.0 - bc).max(0.0).sqrt()
}

/// Beta cdf by quadrature of the density, for cross-checks.
pub fn beta_cdf_quadrature(x: f64, a: f64, b: f64) -> f64 {
    // substitute y = x·s on s ∈ (0, 1)
    let lnb = ln_beta_fn(a, b);
    let g = |ls: f64, _l1s: f64| {
        let y = x * ls.exp();
        (a - 1.0) * (x.ln() + ls) + (b - 1.0) * (-y).ln_1p() - lnb + x.ln()
    };
    tanh_sinh(g, 1.0 / 256.0)
}

/// Beta median via statrs, an implementation independent of the crate.
pub fn statrs_beta_quantile(q: f64, a: f64, b: f64) -> f64 {
    use statrs::distribution::{Beta, ContinuousCDF};
    Beta::new(a, b).unwrap().inverse_cdf(q)
}

pub fn close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol
}
