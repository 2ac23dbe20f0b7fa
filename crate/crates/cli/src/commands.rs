//! One function per subcommand: load inputs, run the analysis, write files.

use serde::Serialize;
use weldq_core::beta::{self, CountData};
use weldq_core::complexity::{self, agglomerative_cluster, cut};
use weldq_core::forecast::{self, ProjectDesign};
use weldq_core::ingest::{self, GroupKey};
use weldq_core::rework::{self, ChartOptions};
use weldq_core::stats::{FiveNumber, QuantilePoint};
use weldq_core::{ab, mcmc, BetaParams64, ClassicalInterval64, CredibleInterval64, GroupField};

use crate::config::{Linkage, RunConfig};
use crate::error::{config_err, CliError, CliResult};
use crate::inputs::{self, Item};
use crate::report::{f6, Reporter};
use crate::svg;

fn done(rep: &Reporter) {
    for p in rep.written() {
        println!("wrote {}", p.display());
    }
}

fn counts_arg(cfg: &RunConfig) -> CliResult<CountData> {
    let (Some(x), Some(n)) = (cfg.failed, cfg.inspected) else {
        return config_err("both --failed and --inspected are required");
    };
    Ok(CountData::new(x, n)?)
}

fn quantile_header(first: &str, qs: &[QuantilePoint<f64>]) -> Vec<String> {
    std::iter::once(first.to_string())
        .chain(qs.iter().map(|q| format!("{}%", (q.level * 100.0).round())))
        .collect()
}

fn quantile_cells(first: &str, qs: &[QuantilePoint<f64>]) -> Vec<String> {
    std::iter::once(first.to_string()).chain(qs.iter().map(|q| f6(q.value))).collect()
}

fn header_refs(h: &[String]) -> Vec<&str> {
    h.iter().map(String::as_str).collect()
}

pub fn summarize(cfg: &RunConfig) -> CliResult<()> {
    if cfg.inputs.is_empty() {
        return config_err("summarize needs at least one raw weld file");
    }
    let fields = cfg.group_fields(&GroupField::PIPE_FORMAT)?;
    let raw = inputs::load_raw(&cfg.inputs, cfg)?;
    let mut summaries =
        ingest::filter_summaries(&ingest::summarize(&raw.records, &fields), &GroupKey::default(), cfg.min_inspected);
    // largest groups first, like a wrangled top-N table
    summaries.sort_by(|a, b| b.total_welds.cmp(&a.total_welds).then_with(|| a.key.cmp(&b.key)));

    let mut rep = Reporter::new(cfg)?;
    let mut header = vec!["weld_type"];
    header.extend(fields.iter().map(|f| f.name()));
    header.extend(["total_welds", "inspected_welds", "repaired_welds"]);
    let rows: Vec<Vec<String>> = summaries
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let mut r = vec![(i + 1).to_string()];
            r.extend(fields.iter().map(|&f| s.key.get(f).unwrap_or("").to_string()));
            r.extend([s.total_welds, s.inspected_welds, s.repaired_welds].map(|c| c.to_string()));
            r
        })
        .collect();
    rep.csv("table", &header, &rows)?;

    let mut rejected: Vec<Vec<String>> = raw
        .parse_errors
        .iter()
        .map(|e| vec![e.line.to_string(), format!("unreadable row: {}", e.message)])
        .collect();
    rejected.extend(raw.rejections.rejections.iter().map(|r| vec![r.line.to_string(), r.reason.to_string()]));
    if !rejected.is_empty() {
        rep.csv("rejections", &["line", "reason"], &rejected)?;
    }

    #[derive(Serialize)]
    struct Out<'a> {
        groups: &'a [ingest::GroupSummary],
        kept_records: usize,
        unreadable_rows: &'a [ingest::RowError],
        rejections: &'a ingest::RejectionReport,
        filtered_out: usize,
    }
    rep.json(
        "table",
        &Out {
            groups: &summaries,
            kept_records: raw.records.len(),
            unreadable_rows: &raw.parse_errors,
            rejections: &raw.rejections,
            filtered_out: raw.filtered_out,
        },
    )?;
    println!(
        "{} groups from {} records ({} unreadable, {} rejected, {} filtered out)",
        summaries.len(),
        raw.records.len(),
        raw.parse_errors.len(),
        raw.rejections.total(),
        raw.filtered_out
    );
    done(&rep);
    Ok(())
}

pub fn interval(cfg: &RunConfig) -> CliResult<()> {
    let counts = counts_arg(cfg)?;
    let prior = cfg.prior()?;
    let post = beta::posterior(&counts, &prior);
    let ci = beta::credible_interval(&post, cfg.alpha)?;

    #[derive(Serialize)]
    struct Out {
        counts: CountData,
        prior: BetaParams64,
        posterior: BetaParams64,
        mean: f64,
        median: f64,
        interval: CredibleInterval64,
        classical: Vec<ClassicalInterval64>,
    }
    let classical = if cfg.classical && counts.inspected > 0 {
        beta::classical_intervals(&counts, cfg.alpha)?.to_vec()
    } else {
        if cfg.classical {
            eprintln!("weldq: classical intervals need at least one inspected item; skipped");
        }
        Vec::new()
    };
    let out = Out { counts, prior, posterior: post, mean: post.mean(), median: post.median()?, interval: ci, classical };
    let mut rep = Reporter::new(cfg)?;
    print!("{}", rep.json_text(&out)?);
    rep.json("report", &out)?;
    done(&rep);
    Ok(())
}

fn five_cells(f: &FiveNumber<f64>) -> [String; 6] {
    [
        f6(f.whisker_low),
        f6(f.q1),
        f6(f.median),
        f6(f.q3),
        f6(f.whisker_high),
        f.outliers.len().to_string(),
    ]
}

fn matrix_rows(labels: &[String], m: &[Vec<f64>]) -> Vec<Vec<String>> {
    labels
        .iter()
        .zip(m)
        .map(|(l, row)| std::iter::once(l.clone()).chain(row.iter().map(|&v| f6(v))).collect())
        .collect()
}

pub fn operators(cfg: &RunConfig) -> CliResult<()> {
    let items = inputs::load_items(cfg.input("operator")?, cfg, &[GroupField::OperatorId])?;
    if items.is_empty() {
        return Err(CliError::Domain("no operators left after filtering".into()));
    }
    let prior = cfg.prior()?;

    #[derive(Serialize)]
    struct Row {
        rank: usize,
        operator: String,
        counts: CountData,
        posterior: BetaParams64,
        median: f64,
        interval: CredibleInterval64,
        sampled: FiveNumber<f64>,
        acceptance_rate: f64,
    }
    let mut rows = Vec::with_capacity(items.len());
    let mut draws = Vec::with_capacity(items.len());
    for (i, it) in items.iter().enumerate() {
        let chain = mcmc::sample_posterior(&it.counts, &prior, &cfg.mcmc.with_chain_index(i as u64))?;
        let post = chain.posterior();
        rows.push(Row {
            rank: 0,
            operator: it.label.clone(),
            counts: it.counts,
            posterior: post,
            median: post.median()?,
            interval: beta::credible_interval(&post, cfg.alpha)?,
            sampled: mcmc::empirical_five_number(&chain)?,
            acceptance_rate: chain.acceptance_rate,
        });
        draws.push(chain.retained().to_vec());
    }
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&a, &b| rows[a].sampled.median.total_cmp(&rows[b].sampled.median).then(a.cmp(&b)));
    let mut ranked: Vec<Row> = Vec::with_capacity(rows.len());
    let mut ranked_draws = Vec::with_capacity(rows.len());
    let mut slots: Vec<Option<Row>> = rows.into_iter().map(Some).collect();
    for (r, &i) in order.iter().enumerate() {
        let mut row = slots[i].take().expect("each index once");
        row.rank = r + 1;
        ranked.push(row);
        ranked_draws.push(std::mem::take(&mut draws[i]));
    }
    let labels: Vec<String> = ranked.iter().map(|r| r.operator.clone()).collect();
    let matrix: Vec<Vec<f64>> = ab::pairwise_matrix(&ranked_draws, cfg.resamples, cfg.seed)?;

    let mut rep = Reporter::new(cfg)?;
    let table: Vec<Vec<String>> = ranked
        .iter()
        .map(|r| {
            let mut v = vec![
                r.rank.to_string(),
                r.operator.clone(),
                r.counts.inspected.to_string(),
                r.counts.failed.to_string(),
                f6(r.posterior.a),
                f6(r.posterior.b),
                f6(r.median),
                f6(r.interval.lower),
                f6(r.interval.upper),
            ];
            v.extend(five_cells(&r.sampled));
            v.push(f6(r.acceptance_rate));
            v
        })
        .collect();
    rep.csv(
        "ranking",
        &[
            "rank", "operator", "inspected", "repaired", "a", "b", "median", "lower", "upper", "mcmc_min", "mcmc_q1",
            "mcmc_median", "mcmc_q3", "mcmc_max", "mcmc_outliers", "acceptance_rate",
        ],
        &table,
    )?;
    let mut ab_header = vec!["operator".to_string()];
    ab_header.extend(labels.iter().cloned());
    rep.csv("ab_matrix", &header_refs(&ab_header), &matrix_rows(&labels, &matrix))?;

    #[derive(Serialize)]
    struct Out<'a> {
        operators: &'a [Row],
        /// Entry (i, j) is P(FN_i > FN_j), rows and columns in rank order.
        pairwise: Pairwise<'a>,
    }
    #[derive(Serialize)]
    struct Pairwise<'a> {
        labels: &'a [String],
        resamples: usize,
        matrix: &'a [Vec<f64>],
    }
    rep.json(
        "report",
        &Out { operators: &ranked, pairwise: Pairwise { labels: &labels, resamples: cfg.resamples, matrix: &matrix } },
    )?;
    let boxes: Vec<FiveNumber<f64>> = ranked.iter().map(|r| r.sampled.clone()).collect();
    rep.svg("boxplot", &svg::boxplot("Sampled fraction nonconforming by operator", &labels, &boxes))?;
    for r in &ranked {
        println!("{:>3} {:<12} median {}", r.rank, r.operator, f6(r.sampled.median));
    }
    done(&rep);
    Ok(())
}

fn welds_of(items: &[Item]) -> impl Fn(&Item) -> u64 + '_ {
    let all_totals = items.iter().all(|i| i.total.is_some());
    move |i: &Item| if all_totals { i.total.unwrap_or(0) } else { i.counts.inspected }
}

pub fn complexity(cfg: &RunConfig) -> CliResult<()> {
    let mut items = inputs::load_items(cfg.input("weld type")?, cfg, &GroupField::PIPE_FORMAT)?;
    if let Some(n) = cfg.top_n {
        if n == 0 {
            return config_err("top_n must be positive");
        }
        let key: Vec<u64> = items.iter().map(welds_of(&items)).collect();
        let mut idx: Vec<usize> = (0..items.len()).collect();
        idx.sort_by(|&a, &b| key[b].cmp(&key[a]).then(a.cmp(&b)));
        idx.truncate(n);
        idx.sort_unstable();
        items = idx.into_iter().map(|i| items[i].clone()).collect();
    }
    if items.is_empty() {
        return Err(CliError::Domain("no weld types left after filtering".into()));
    }
    if cfg.clusters == 0 {
        return config_err("cluster count must be positive");
    }
    let prior = cfg.prior()?;
    let labels: Vec<String> = items.iter().map(|i| i.label.clone()).collect();
    let posts: Vec<BetaParams64> = items.iter().map(|i| beta::posterior(&i.counts, &prior)).collect();
    let scores = complexity::complexity_scores(&posts)?;
    let hellinger = complexity::labelled_distance_matrix(&posts, labels.clone());
    let clustered_on = match cfg.linkage {
        Linkage::Direct => hellinger.clone(),
        Linkage::Profile => hellinger.row_profile_distances(),
    };
    let tree = agglomerative_cluster(&clustered_on)?;
    let k = cfg.clusters.min(items.len());
    let assignment = cut(&tree, k)?;
    let totals: Option<Vec<u64>> = items.iter().map(|i| i.total).collect();
    let clusters = complexity::label_clusters(&assignment, &scores, totals.as_deref())?;
    let mut letter = vec![String::new(); items.len()];
    for c in &clusters {
        for &m in &c.members {
            letter[m] = c.label.clone();
        }
    }

    let mut rep = Reporter::new(cfg)?;
    let score_rows: Vec<Vec<String>> = scores
        .iter()
        .map(|s| {
            let it = &items[s.product];
            vec![
                (s.product + 1).to_string(),
                it.label.clone(),
                it.total.map_or_else(String::new, |t| t.to_string()),
                it.counts.inspected.to_string(),
                it.counts.failed.to_string(),
                f6(posts[s.product].a),
                f6(posts[s.product].b),
                f6(s.median),
                (s.rank + 1).to_string(),
                f6(s.raw_score),
                f6(s.scaled_score),
                letter[s.product].clone(),
            ]
        })
        .collect();
    rep.csv(
        "scores",
        &[
            "product", "label", "total_welds", "inspected", "repaired", "a", "b", "median", "complexity_rank",
            "raw_score", "score", "cluster",
        ],
        &score_rows,
    )?;
    let mut h_header = vec!["label".to_string()];
    h_header.extend(labels.iter().cloned());
    rep.csv("hellinger", &header_refs(&h_header), &matrix_rows(&labels, &hellinger.entries))?;
    let cluster_rows: Vec<Vec<String>> = clusters
        .iter()
        .map(|c| {
            vec![
                c.label.clone(),
                c.members.len().to_string(),
                c.members.iter().map(|&m| labels[m].as_str()).collect::<Vec<_>>().join(";"),
                f6(c.mean_score),
                c.total_welds.map_or_else(String::new, |t| t.to_string()),
                c.business_share.map_or_else(String::new, f6),
                c.representative.map_or_else(String::new, |r| labels[r].clone()),
            ]
        })
        .collect();
    rep.csv(
        "clusters",
        &["cluster", "size", "members", "mean_score", "total_welds", "business_share", "representative"],
        &cluster_rows,
    )?;

    #[derive(Serialize)]
    struct Tree<'a> {
        linkage: Linkage,
        tree: &'a weldq_core::ClusterTree64,
        leaf_order: Vec<usize>,
        segments: Vec<complexity::DendrogramSegment<f64>>,
        clusters: usize,
        assignment: &'a [usize],
    }
    rep.json(
        "tree",
        &Tree {
            linkage: cfg.linkage,
            tree: &tree,
            leaf_order: tree.leaf_order(),
            segments: tree.segments(),
            clusters: k,
            assignment: &assignment,
        },
    )?;
    #[derive(Serialize)]
    struct Report<'a> {
        labels: &'a [String],
        scores: &'a [weldq_core::ComplexityScore64],
        hellinger: &'a [Vec<f64>],
        clusters: &'a [weldq_core::LabelledCluster<f64>],
    }
    rep.json(
        "report",
        &Report { labels: &labels, scores: &scores, hellinger: &hellinger.entries, clusters: &clusters },
    )?;
    rep.text("tree", &tree.render_text())?;
    rep.svg("dendrogram", &svg::dendrogram(&tree))?;
    for c in &clusters {
        let names: Vec<&str> = c.members.iter().map(|&m| labels[m].as_str()).collect();
        println!("{} (mean score {}): {}", c.label, f6(c.mean_score), names.join(", "));
    }
    done(&rep);
    Ok(())
}

pub fn forecast(cfg: &RunConfig) -> CliResult<()> {
    let prior = cfg.prior()?;
    let design = ProjectDesign::new(inputs::load_design(cfg.input("design")?, &prior)?)?;
    let iterations = cfg.iterations.unwrap_or(forecast::DEFAULT_ITERATIONS);
    let res = forecast::simulate_project(&design, iterations, cfg.seed, cfg.mode)?;

    let mut rep = Reporter::new(cfg)?;
    let h = quantile_header("quantiles", &res.quantiles);
    rep.csv("quantiles", &header_refs(&h), &[quantile_cells("fraction_nonconforming", &res.quantiles)])?;
    let samples: Vec<Vec<String>> =
        res.samples.iter().enumerate().map(|(j, &s)| vec![(j + 1).to_string(), f6(s)]).collect();
    rep.csv("samples", &["iteration", "fraction_nonconforming"], &samples)?;

    #[derive(Serialize)]
    struct Out<'a> {
        design: &'a ProjectDesign<f64>,
        total_welds: u64,
        expected_fraction: f64,
        mean: f64,
        result: &'a weldq_core::ForecastResult64,
    }
    rep.json(
        "report",
        &Out {
            design: &design,
            total_welds: design.total_welds(),
            expected_fraction: design.expected_fraction(),
            mean: res.mean(),
            result: &res,
        },
    )?;
    rep.svg("histogram", &svg::histogram("Project fraction nonconforming", &res.samples, 20))?;
    let cells = quantile_cells("fraction nonconforming", &res.quantiles);
    println!("{}\n{}", h.join("\t"), cells.join("\t"));
    done(&rep);
    Ok(())
}

pub fn rework(cfg: &RunConfig) -> CliResult<()> {
    let prior = cfg.prior()?;
    let specs = inputs::load_specs(cfg.input("product spec")?, &prior)?;
    let iterations = cfg.iterations.unwrap_or(rework::DEFAULT_ITERATIONS);
    let estimate = rework::simulate_total_rework(&specs, iterations, cfg.seed)?;
    let means: Vec<f64> = specs.iter().map(|s| s.posterior.mean()).collect();
    let at_means = rework::expected_rework_hours(&means, &specs)?;
    let (hours, failed) = match &cfg.actuals {
        Some(p) => inputs::load_actuals(p)?,
        None => (Vec::new(), Vec::new()),
    };
    let opts = ChartOptions { iterations, seed: cfg.seed, sequential_update: cfg.sequential_update };
    let chart = rework::control_chart(&specs, &hours, &failed, &opts)?;

    let mut rep = Reporter::new(cfg)?;
    let mut h = quantile_header("quantiles", &estimate.quantiles);
    h.push("mean".into());
    let mut row = quantile_cells("rework_hours", &estimate.quantiles);
    row.push(f6(estimate.mean));
    rep.csv("estimate", &header_refs(&h), &[row.clone()])?;
    let samples: Vec<Vec<String>> =
        estimate.samples.iter().enumerate().map(|(j, &s)| vec![(j + 1).to_string(), f6(s)]).collect();
    rep.csv("samples", &["iteration", "rework_hours"], &samples)?;
    let l = chart.limits;
    let chart_rows: Vec<Vec<String>> = chart
        .points
        .iter()
        .map(|p| {
            vec![
                p.state.to_string(),
                f6(p.median),
                f6(p.band_low),
                f6(p.band_high),
                f6(p.accrued_actual),
                f6(l.lcl),
                f6(l.cl),
                f6(l.ucl),
                p.flag.as_str().to_string(),
            ]
        })
        .collect();
    rep.csv(
        "chart",
        &["state", "median", "band_low", "band_high", "accrued_actual", "lcl", "cl", "ucl", "flag"],
        &chart_rows,
    )?;

    #[derive(Serialize)]
    struct Out<'a> {
        products: &'a [weldq_core::ProductSpec64],
        at_posterior_means: &'a rework::ReworkHours<f64>,
        estimate: &'a weldq_core::ReworkEstimate64,
        chart: &'a weldq_core::ControlChartSeries64,
    }
    rep.json(
        "report",
        &Out { products: &specs, at_posterior_means: &at_means, estimate: &estimate, chart: &chart },
    )?;
    rep.svg("chart", &svg::control_chart(&chart))?;
    rep.svg("histogram", &svg::histogram("Total rework hours", &estimate.samples, 20))?;
    println!("{}\n{}", h.join("\t"), row.join("\t"));
    println!("limits: lcl {} cl {} ucl {}", f6(l.lcl), f6(l.cl), f6(l.ucl));
    for p in chart.points.iter().filter(|p| p.flag != weldq_core::ControlFlag::InControl) {
        println!("state {}: {} (median {})", p.state, p.flag.as_str(), f6(p.median));
    }
    done(&rep);
    Ok(())
}

pub fn chain(cfg: &RunConfig) -> CliResult<()> {
    let counts = counts_arg(cfg)?;
    let prior = cfg.prior()?;
    let chain = mcmc::sample_posterior(&counts, &prior, &cfg.mcmc)?;
    let acf = mcmc::acf(&chain, cfg.max_lag)?;
    let empirical = mcmc::empirical_interval(&chain, cfg.alpha)?;
    let analytical = beta::credible_interval(&chain.posterior(), cfg.alpha)?;
    let five = mcmc::empirical_five_number(&chain)?;

    let mut rep = Reporter::new(cfg)?;
    let burn = chain.config.burn_in;
    let trace: Vec<Vec<String>> = chain
        .trace()
        .map(|(i, p)| vec![i.to_string(), f6(p), u8::from(i > burn).to_string()])
        .collect();
    rep.csv("trace", &["iteration", "p", "retained"], &trace)?;
    let acf_rows: Vec<Vec<String>> = acf.iter().enumerate().map(|(k, &r)| vec![k.to_string(), f6(r)]).collect();
    rep.csv("acf", &["lag", "acf"], &acf_rows)?;

    #[derive(Serialize)]
    struct Out<'a> {
        counts: CountData,
        posterior: BetaParams64,
        acceptance_rate: f64,
        empirical: CredibleInterval64,
        analytical: CredibleInterval64,
        five_number: &'a FiveNumber<f64>,
        acf: &'a [f64],
    }
    rep.json(
        "summary",
        &Out {
            counts,
            posterior: chain.posterior(),
            acceptance_rate: chain.acceptance_rate,
            empirical,
            analytical,
            five_number: &five,
            acf: &acf,
        },
    )?;
    rep.svg("trace", &svg::trace(&chain.draws))?;
    println!(
        "acceptance {}; empirical [{}, {}]; analytical [{}, {}]",
        f6(chain.acceptance_rate),
        f6(empirical.lower),
        f6(empirical.upper),
        f6(analytical.lower),
        f6(analytical.upper)
    );
    done(&rep);
    Ok(())
}
