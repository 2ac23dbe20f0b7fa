//! Acceptance suite: one line per criterion, exit status 1 if any fails.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use weldq_core::ab;
use weldq_core::beta::{self, BetaParams, CountData};
use weldq_core::complexity::{self, DistanceMatrix};
use weldq_core::mcmc::{self, ChainConfig};
use weldq_core::rework::{self, ChartOptions, ControlFlag, ProductSpec};
use weldq_core::{special, stats};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn jeffreys(n: u64, x: u64) -> BetaParams<f64> {
    beta::posterior(&CountData::new(x, n).unwrap(), &BetaParams::jeffreys())
}

fn c01_jeffreys_interval() -> Outcome {
    let t = Instant::now();
    let ci = beta::jeffreys_interval(&CountData::new(10, 100).unwrap(), 0.05).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    ensure(close(ci.lower, 0.0526, 5e-4) && close(ci.upper, 0.1701, 5e-4), || {
        format!("got [{:.6}, {:.6}]", ci.lower, ci.upper)
    })?;
    ensure(elapsed.as_secs_f64() < 1e-3, || format!("took {elapsed:?}"))?;
    Ok(format!("[{:.4}, {:.4}] in {elapsed:?}", ci.lower, ci.upper))
}

fn c02_analytic_case_study() -> Outcome {
    let mut worst: f64 = 0.0;
    for (i, (&(_, _, _, n, x), &(a, b, lo, hi))) in PIPE_TYPES.iter().zip(&PIPE_TYPE_LIMITS).enumerate() {
        let post = jeffreys(n, x);
        ensure(post.a == a && post.b == b, || format!("type {}: Beta({}, {}) vs Beta({a}, {b})", i + 1, post.a, post.b))?;
        let ci = beta::credible_interval(&post, 0.05).map_err(|e| e.to_string())?;
        let err = (ci.lower - lo).abs().max((ci.upper - hi).abs());
        worst = worst.max(err);
        ensure(err <= 5e-4, || format!("type {}: [{:.5}, {:.5}] vs [{lo}, {hi}]", i + 1, ci.lower, ci.upper))?;
    }
    Ok(format!("35 shapes exact, worst limit error {worst:.2e}"))
}

fn c03_mcmc_fidelity() -> Outcome {
    let t = Instant::now();
    let mut numeric = Vec::new();
    let mut analytic = Vec::new();
    for (i, &(_, _, _, n, x)) in PIPE_TYPES.iter().enumerate() {
        let counts = CountData::new(x, n).unwrap();
        let config = ChainConfig { seed: 1000 + i as u64, ..ChainConfig::default() };
        let chains = mcmc::sample_many(&counts, &BetaParams::jeffreys(), &config, 30).map_err(|e| e.to_string())?;
        numeric.push(mcmc::average_interval(&chains, 0.05).map_err(|e| e.to_string())?);
        analytic.push(beta::jeffreys_interval(&counts, 0.05).map_err(|e| e.to_string())?);
    }
    let r = mcmc::residual_metrics(&numeric, &analytic).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    let summary = format!(
        "MAE {:.5}/{:.5}, RMSE {:.5}/{:.5} in {:.1?}",
        r.mae_lower, r.mae_upper, r.rmse_lower, r.rmse_upper, elapsed
    );
    ensure(
        r.mae_lower <= 0.002 && r.mae_upper <= 0.003 && r.rmse_lower <= 0.003 && r.rmse_upper <= 0.0045,
        || summary.clone(),
    )?;
    ensure(elapsed.as_secs() < 60, || summary.clone())?;
    Ok(summary)
}

fn c04_wald_baseline() -> Outcome {
    let w = beta::wald_interval(&CountData::new(1, 3).unwrap(), 0.05).map_err(|e| e.to_string())?;
    let msg = format!("({:.4}, {:.4}) vs published (-0.2110, 0.8743)", w.lower, w.upper);
    ensure(close(w.lower, -0.2110, 1e-4) && close(w.upper, 0.8743, 1e-4), || msg.clone())?;
    Ok(msg)
}

fn draws(n: u64, x: u64, seed: u64) -> Vec<f64> {
    let config = ChainConfig { seed, ..ChainConfig::default() };
    let chain = mcmc::sample_posterior(&CountData::new(x, n).unwrap(), &BetaParams::jeffreys(), &config).unwrap();
    chain.retained().to_vec()
}

fn c05_ab_test() -> Outcome {
    let a = draws(180, 25, 51);
    let b = draws(140, 10, 52);
    let p = ab::prob_greater(&a, &b, ab::DEFAULT_RESAMPLES, 53).map_err(|e| e.to_string())?.prob_a_greater;
    let s = ab::prob_greater(&a, &a, ab::DEFAULT_RESAMPLES, 54).map_err(|e| e.to_string())?.prob_a_greater;
    let msg = format!("P(A > B) = {p:.4}, self-comparison {s:.4}");
    ensure(close(p, 0.975, 0.01) && close(s, 0.5, 0.01), || msg.clone())?;
    Ok(msg)
}

fn c06_operator_table() -> Outcome {
    let (mut worst_med, mut worst_box): (f64, f64) = (0.0, 0.0);
    let mut misses = Vec::new();
    for (i, &(n, x, _, q1, med, q3, _)) in OPERATORS.iter().enumerate() {
        let post = jeffreys(n, x);
        let m = post.median().map_err(|e| e.to_string())?;
        worst_med = worst_med.max((m - med).abs());
        if !close(m, med, 0.003) {
            misses.push(format!("operator {} median {m:.4} vs {med}", i + 1));
        }
        let f = stats::five_number(&draws(n, x, 600 + i as u64)).map_err(|e| e.to_string())?;
        let err = (f.q1 - q1).abs().max((f.median - med).abs()).max((f.q3 - q3).abs());
        worst_box = worst_box.max(err);
        if err > 0.01 {
            misses.push(format!(
                "operator {} box ({:.3}, {:.3}, {:.3}) vs ({q1}, {med}, {q3})",
                i + 1,
                f.q1,
                f.median,
                f.q3
            ));
        }
    }
    let summary = format!("worst median error {worst_med:.4}, worst quartile error {worst_box:.4}");
    ensure(misses.is_empty(), || format!("{}; {summary}", misses.join("; ")))?;
    Ok(summary)
}

fn eight_posteriors() -> Vec<BetaParams<f64>> {
    EIGHT_PRODUCTS.iter().map(|&(n, x)| jeffreys(n, x)).collect()
}

fn c07_hellinger_matrix() -> Outcome {
    let m = complexity::distance_matrix(&eight_posteriors());
    let mut worst: f64 = 0.0;
    for i in 0..8 {
        for j in 0..8 {
            let err = (m.get(i, j) - EIGHT_MATRIX[i][j]).abs();
            worst = worst.max(err);
            ensure(err <= 5e-4, || format!("entry ({}, {}): {:.5} vs {}", i + 1, j + 1, m.get(i, j), EIGHT_MATRIX[i][j]))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_q: f64 = 0.0;
    for _ in 0..100 {
        let s: [f64; 4] = std::array::from_fn(|_| rng.random_range(0.5..60.0));
        let p = BetaParams::new(s[0], s[1]).unwrap();
        let q = BetaParams::new(s[2], s[3]).unwrap();
        let closed = complexity::hellinger(&p, &q);
        let quad = hellinger_quadrature(s[0], s[1], s[2], s[3]);
        worst_q = worst_q.max((closed - quad).abs());
        ensure(close(closed, quad, 1e-6), || format!("{s:?}: closed {closed} vs quadrature {quad}"))?;
    }
    Ok(format!("worst matrix error {worst:.1e}, worst quadrature gap {worst_q:.1e}"))
}

fn c08_complexity_scores() -> Outcome {
    let scores = complexity::complexity_scores(&eight_posteriors()).map_err(|e| e.to_string())?;
    let got: Vec<f64> = scores.iter().map(|s| s.scaled_score).collect();
    for (i, (&g, &w)) in got.iter().zip(&EIGHT_SCORES).enumerate() {
        ensure(close(g, w, 0.1), || format!("product {}: {g:.3} vs {w}", i + 1))?;
    }
    ensure(got[4] == 0.0 && got[3] == 10.0, || format!("endpoints {} and {}", got[4], got[3]))?;
    Ok(format!("scores {:?}", got.iter().map(|g| format!("{g:.2}")).collect::<Vec<_>>()))
}

fn c09_clustering() -> Outcome {
    let labels = (1..=8).map(|i| i.to_string()).collect();
    let m = DistanceMatrix::new(labels, EIGHT_MATRIX.iter().map(|r| r.to_vec()).collect()).map_err(|e| e.to_string())?;
    let first = complexity::cut(&complexity::agglomerative_cluster(&m).map_err(|e| e.to_string())?, 4)
        .map_err(|e| e.to_string())?;
    for _ in 0..5 {
        let again = complexity::cut(&complexity::agglomerative_cluster(&m).unwrap(), 4).unwrap();
        ensure(again == first, || "cut differs between runs".into())?;
    }
    ensure(first == vec![0, 0, 1, 1, 2, 2, 3, 3], || format!("assignment {first:?}"))?;
    Ok("{1,2} {3,4} {5,6} {7,8}".into())
}

fn c10_case_study_ordering() -> Outcome {
    let posts: Vec<BetaParams<f64>> = WELD_TYPES.iter().map(|&(_, _, _, _, n, x)| jeffreys(n, x)).collect();
    let totals: Vec<u64> = WELD_TYPES.iter().map(|w| w.3).collect();
    let profile = complexity::distance_matrix(&posts).row_profile_distances();
    let tree = complexity::agglomerative_cluster(&profile).map_err(|e| e.to_string())?;
    let assign = complexity::cut(&tree, 7).map_err(|e| e.to_string())?;
    let scores = complexity::complexity_scores(&posts).map_err(|e| e.to_string())?;
    let clusters = complexity::label_clusters(&assign, &scores, Some(&totals)).map_err(|e| e.to_string())?;
    let reps = [5usize, 23, 1, 11, 4, 8, 3];
    let mut seen = Vec::new();
    for r in reps {
        let c = assign[r - 1];
        ensure(!seen.contains(&c), || format!("type {r} shares a cluster with an earlier representative"))?;
        seen.push(c);
    }
    let label_of = |r: usize| clusters.iter().find(|c| c.members.contains(&(r - 1))).unwrap().label.clone();
    let mut by_label: Vec<(String, usize)> = reps.iter().map(|&r| (label_of(r), r)).collect();
    by_label.sort();
    let medians: Vec<f64> = by_label.iter().map(|&(_, r)| posts[r - 1].median().unwrap()).collect();
    ensure(medians.windows(2).all(|w| w[0] > w[1]), || format!("medians by label {by_label:?}: {medians:?}"))?;
    let order: Vec<String> = by_label.iter().map(|(l, r)| format!("{l}={r}")).collect();
    Ok(order.join(" "))
}

fn ten_specs() -> Vec<ProductSpec<f64>> {
    TEN_PRODUCTS
        .iter()
        .enumerate()
        .map(|(i, &(n, x, t))| ProductSpec::new(format!("{}", i + 1), jeffreys(n, x), t))
        .collect()
}

fn c11_rework_estimate() -> Outcome {
    let specs = ten_specs();
    let est = rework::simulate_total_rework(&specs, 1000, 11).map_err(|e| e.to_string())?;
    let q = |i: usize| est.quantiles[i].value;
    let analytic: f64 = specs.iter().map(|s| s.efficiency * s.estimated_hours * s.posterior.a / (s.posterior.b - 1.0)).sum();
    let msg = format!(
        "10% {:.3}, 50% {:.3}, 90% {:.3}, mean {:.3} (identity {analytic:.3})",
        q(1),
        q(5),
        q(9),
        est.mean
    );
    ensure(
        close(q(5), 3.4, 0.2) && close(q(1), 2.4, 0.2) && close(q(9), 4.9, 0.4) && close(est.mean, analytic, 0.15),
        || msg.clone(),
    )?;
    ensure(close(analytic, 3.54, 0.01), || format!("identity mean {analytic}"))?;
    Ok(msg)
}

fn chart(actual: &[f64; 10], seed: u64) -> rework::ControlChartSeries<f64> {
    let failed: Vec<bool> = actual.iter().map(|&h| h > 0.0).collect();
    let opts = ChartOptions { iterations: 1000, seed, sequential_update: false };
    rework::control_chart(&ten_specs(), actual, &failed, &opts).unwrap()
}

fn c12_control_chart() -> Outcome {
    let s1 = chart(&NO_REWORK, 12);
    let med1: Vec<f64> = s1.points.iter().map(|p| p.median).collect();
    ensure(med1.windows(2).all(|w| w[1] < w[0]), || format!("no-rework medians {med1:?}"))?;
    ensure(*med1.last().unwrap() == 0.0, || "no-rework final value is not 0".into())?;

    let s2 = chart(&UNDER_CONTROL, 12);
    let l = s2.limits;
    ensure(s2.points.iter().all(|p| p.flag == ControlFlag::InControl), || {
        let m: Vec<String> = s2.points.iter().map(|p| format!("{:.2}", p.median)).collect();
        format!("under-control medians {m:?} vs [{:.2}, {:.2}]", l.lcl, l.ucl)
    })?;
    let f2 = s2.points.last().unwrap().median;
    ensure(close(f2, 5.4, 1e-9), || format!("under-control final {f2}"))?;

    let mut votes = 0;
    let mut f3 = 0.0;
    for seed in 0..20 {
        let s3 = chart(&OVER_CONTROL, seed);
        if s3.points[5].flag == ControlFlag::AboveUcl {
            votes += 1;
        }
        f3 = s3.points.last().unwrap().median;
        ensure(close(f3, 5.4, 1e-9), || format!("over-control final {f3}"))?;
    }
    ensure(votes > 10, || format!("state 6 above UCL in only {votes}/20 seeds"))?;
    Ok(format!(
        "limits [{:.2}, {:.2}, {:.2}]; finals 0 / {f2:.1} / {f3:.1}; state 6 flagged in {votes}/20 seeds",
        l.lcl, l.cl, l.ucl
    ))
}

fn c13_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    // cdf/quantile round trip
    let mut worst_rt: f64 = 0.0;
    for _ in 0..1000 {
        let (a, b) = (rng.random_range(0.5..500.0), rng.random_range(0.5..500.0));
        let q = rng.random_range(0.001..0.999);
        let x: f64 = special::inv_reg_inc_beta(q, a, b).map_err(|e| e.to_string())?;
        let back = special::reg_inc_beta(x, a, b).map_err(|e| e.to_string())?;
        worst_rt = worst_rt.max((back - q).abs());
    }
    ensure(worst_rt <= 1e-8, || format!("round trip error {worst_rt:e}"))?;
    // Hellinger metric axioms
    for _ in 0..1000 {
        let mut draw = || BetaParams::new(rng.random_range(0.5..200.0), rng.random_range(0.5..200.0)).unwrap();
        let (p, q, r) = (draw(), draw(), draw());
        let (pq, qr, pr) = (complexity::hellinger(&p, &q), complexity::hellinger(&q, &r), complexity::hellinger(&p, &r));
        ensure(complexity::hellinger(&p, &p) == 0.0, || "d(p, p) != 0".into())?;
        ensure(pq == complexity::hellinger(&q, &p), || "asymmetric".into())?;
        ensure((0.0..=1.0).contains(&pq), || format!("out of range {pq}"))?;
        ensure(pr <= pq + qr + 1e-12, || format!("triangle violated: {pr} > {pq} + {qr}"))?;
    }
    // transition matrices and fundamental matrices
    for n in 1..=50 {
        let p: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..0.95)).collect();
        let m = rework::transition_matrix(&p).map_err(|e| e.to_string())?;
        for i in 0..=n {
            let s: f64 = m.transition.row(i).iter().sum();
            ensure((s - 1.0).abs() < 1e-14, || format!("row {i} of P sums to {s}"))?;
        }
        rework::fundamental_matrix(&m).map_err(|e| e.to_string())?;
    }
    // interval width versus n and p
    let width = |n: u64, x: u64| beta::jeffreys_interval(&CountData::new(x, n).unwrap(), 0.05).unwrap().width();
    let widths: Vec<f64> = (1..=50).map(|k| width(4 * k, k)).collect();
    ensure(widths.windows(2).all(|w| w[1] < w[0]), || "width not decreasing in n at p = 0.25".into())?;
    let at_half = width(100, 50);
    ensure((0..=100).all(|x| x == 50 || width(100, x) < at_half), || "width not maximal at p = 0.5".into())?;
    // A/B complementarity
    for k in 0..5 {
        let a: Vec<f64> = (0..2000).map(|_| rng.random_range(0.0..0.3)).collect();
        let b: Vec<f64> = (0..2000).map(|_| rng.random_range(0.05..0.25)).collect();
        let ab = ab::prob_greater(&a, &b, 20_000, k).unwrap().prob_a_greater;
        let ba = ab::prob_greater(&b, &a, 20_000, k + 100).unwrap().prob_a_greater;
        ensure(close(ab + ba, 1.0, 0.02), || format!("P(A>B) + P(B>A) = {}", ab + ba))?;
    }
    Ok(format!("round trip ≤ {worst_rt:.1e}; metric, stochastic, inverse, width and complementarity checks hold"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("C01 Jeffreys interval (10 of 100)", c01_jeffreys_interval),
        ("C02 analytic intervals, 35 pipe types", c02_analytic_case_study),
        ("C03 MCMC interval fidelity (35 × 30 chains)", c03_mcmc_fidelity),
        ("C04 Wald interval (1 of 3)", c04_wald_baseline),
        ("C05 A/B test, operators A and B", c05_ab_test),
        ("C06 operator medians and quartiles", c06_operator_table),
        ("C07 Hellinger matrix and quadrature oracle", c07_hellinger_matrix),
        ("C08 complexity scores, eight products", c08_complexity_scores),
        ("C09 complete-linkage cut at k = 4", c09_clustering),
        ("C10 case-study cluster ordering at k = 7", c10_case_study_ordering),
        ("C11 rework estimate, ten products", c11_rework_estimate),
        ("C12 control chart scenarios", c12_control_chart),
        ("C13 property suites", c13_properties),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, run) in criteria {
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 13 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
