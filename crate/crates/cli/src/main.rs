//! `weldq`: quality analytics for pass/fail weld inspection data.
//!
//! Exit codes: 0 success, 2 input/schema error, 3 configuration error,
//! 4 numeric/domain error.

mod commands;
mod config;
mod error;
mod inputs;
mod report;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use weldq_core::ForecastMode;

use config::{Format, Linkage, RunConfig};
use error::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(name = "weldq", version, about = "Bayesian quality analytics for weld inspection data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Roll raw weld records up into total/inspected/repaired counts per group.
    Summarize(SummarizeArgs),
    /// Credible interval for one failed/inspected count.
    Interval(IntervalArgs),
    /// Rank operators by sampled posterior and compare them pairwise.
    Operators(OperatorsArgs),
    /// Complexity scores, Hellinger matrix and clustering of weld types.
    Complexity(ComplexityArgs),
    /// Forecast a project's fraction nonconforming.
    Forecast(ForecastArgs),
    /// Rework-hours estimate and execution control chart.
    Rework(ReworkArgs),
    /// One MCMC chain with its trace and autocorrelation.
    Chain(ChainArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// JSON run config; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory [default: $WELDQ_OUT_DIR, else .]
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Output formats to write.
    #[arg(long, value_delimiter = ',')]
    format: Option<Vec<Format>>,
    /// Beta prior shapes a b [default: 0.5 0.5].
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    prior: Option<Vec<f64>>,
    #[arg(long)]
    alpha: Option<f64>,
}

#[derive(Args, Debug)]
struct Filtering {
    /// Raw-record condition FIELD=VALUE (repeatable).
    #[arg(long = "where", value_name = "FIELD=VALUE")]
    filter: Vec<String>,
    /// Group raw records on these fields (comma separated).
    #[arg(long, value_delimiter = ',')]
    group_by: Option<Vec<String>>,
    /// Drop groups with fewer inspected welds.
    #[arg(long)]
    min_inspected: Option<u64>,
}

#[derive(Args, Debug)]
struct Mcmc {
    /// Chain length including burn-in.
    #[arg(long)]
    mcmc_iterations: Option<usize>,
    #[arg(long)]
    burn_in: Option<usize>,
    #[arg(long)]
    proposal_sd: Option<f64>,
}

#[derive(Args, Debug)]
struct SummarizeArgs {
    /// Raw weld export(s).
    inputs: Vec<PathBuf>,
    #[command(flatten)]
    filtering: Filtering,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct IntervalArgs {
    #[arg(long)]
    failed: Option<u64>,
    #[arg(long)]
    inspected: Option<u64>,
    /// Add Wald, Wilson and Agresti-Coull intervals.
    #[arg(long)]
    classical: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct OperatorsArgs {
    /// Raw weld export or operator count table.
    input: Option<PathBuf>,
    #[command(flatten)]
    filtering: Filtering,
    #[command(flatten)]
    mcmc: Mcmc,
    /// Paired resamples per A/B comparison.
    #[arg(long)]
    resamples: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct ComplexityArgs {
    /// Raw weld export or weld-type count table.
    input: Option<PathBuf>,
    /// Keep only the N types with the most welds.
    #[arg(long)]
    top_n: Option<usize>,
    /// Number of clusters.
    #[arg(long, short = 'k')]
    clusters: Option<usize>,
    #[arg(long, value_enum)]
    linkage: Option<Linkage>,
    #[command(flatten)]
    filtering: Filtering,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    WeldAverage,
    Mixture,
}

#[derive(Args, Debug)]
struct ForecastArgs {
    /// Design table: label, welds and a/b or inspected/repaired columns.
    input: Option<PathBuf>,
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct ReworkArgs {
    /// Product specs in production order.
    input: Option<PathBuf>,
    /// Actual hours (and pass/fail) of completed products.
    #[arg(long)]
    actuals: Option<PathBuf>,
    #[arg(long)]
    iterations: Option<usize>,
    /// Update remaining posteriors with completed results of the same type.
    #[arg(long)]
    sequential_update: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct ChainArgs {
    #[arg(long)]
    failed: Option<u64>,
    #[arg(long)]
    inspected: Option<u64>,
    #[arg(long)]
    max_lag: Option<usize>,
    #[command(flatten)]
    mcmc: Mcmc,
    #[command(flatten)]
    common: Common,
}

impl Common {
    fn apply(&self, name: &str) -> CliResult<RunConfig> {
        let mut c = RunConfig::load(self.config.as_deref())?;
        c.command = name.to_string();
        if let Some(s) = self.seed {
            c.seed = s;
        }
        if let Some(d) = &self.out_dir {
            c.out_dir = Some(d.clone());
        }
        if let Some(f) = &self.format {
            c.formats = f.clone();
        }
        if let Some(p) = &self.prior {
            c.prior = [p[0], p[1]];
        }
        if let Some(a) = self.alpha {
            c.alpha = a;
        }
        Ok(c)
    }
}

impl Filtering {
    fn apply(&self, c: &mut RunConfig) -> CliResult<()> {
        for cond in &self.filter {
            let Some((k, v)) = cond.split_once('=') else {
                return Err(CliError::Config(format!("--where expects FIELD=VALUE, got {cond:?}")));
            };
            c.filter.insert(k.trim().to_string(), v.trim().to_string());
        }
        if let Some(g) = &self.group_by {
            c.group_by = g.clone();
        }
        if let Some(m) = self.min_inspected {
            c.min_inspected = m;
        }
        Ok(())
    }
}

impl Mcmc {
    fn apply(&self, c: &mut RunConfig) {
        if let Some(n) = self.mcmc_iterations {
            c.mcmc.iterations = n;
        }
        if let Some(b) = self.burn_in {
            c.mcmc.burn_in = b;
        }
        if let Some(s) = self.proposal_sd {
            c.mcmc.proposal_sd = s;
        }
    }
}

fn set_inputs(c: &mut RunConfig, inputs: impl IntoIterator<Item = PathBuf>) {
    let v: Vec<PathBuf> = inputs.into_iter().collect();
    if !v.is_empty() {
        c.inputs = v;
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Summarize(a) => {
            let mut c = a.common.apply("summarize")?;
            set_inputs(&mut c, a.inputs);
            a.filtering.apply(&mut c)?;
            commands::summarize(&c.finish()?)
        }
        Command::Interval(a) => {
            let mut c = a.common.apply("interval")?;
            c.failed = a.failed.or(c.failed);
            c.inspected = a.inspected.or(c.inspected);
            c.classical |= a.classical;
            commands::interval(&c.finish()?)
        }
        Command::Operators(a) => {
            let mut c = a.common.apply("operators")?;
            set_inputs(&mut c, a.input);
            a.filtering.apply(&mut c)?;
            a.mcmc.apply(&mut c);
            if let Some(r) = a.resamples {
                c.resamples = r;
            }
            commands::operators(&c.finish()?)
        }
        Command::Complexity(a) => {
            let mut c = a.common.apply("complexity")?;
            set_inputs(&mut c, a.input);
            a.filtering.apply(&mut c)?;
            c.top_n = a.top_n.or(c.top_n);
            if let Some(k) = a.clusters {
                c.clusters = k;
            }
            if let Some(l) = a.linkage {
                c.linkage = l;
            }
            commands::complexity(&c.finish()?)
        }
        Command::Forecast(a) => {
            let mut c = a.common.apply("forecast")?;
            set_inputs(&mut c, a.input);
            c.iterations = a.iterations.or(c.iterations);
            if let Some(m) = a.mode {
                c.mode = match m {
                    ModeArg::WeldAverage => ForecastMode::WeldAverage,
                    ModeArg::Mixture => ForecastMode::Mixture,
                };
            }
            commands::forecast(&c.finish()?)
        }
        Command::Rework(a) => {
            let mut c = a.common.apply("rework")?;
            set_inputs(&mut c, a.input);
            c.actuals = a.actuals.or(c.actuals);
            c.iterations = a.iterations.or(c.iterations);
            c.sequential_update |= a.sequential_update;
            commands::rework(&c.finish()?)
        }
        Command::Chain(a) => {
            let mut c = a.common.apply("chain")?;
            c.failed = a.failed.or(c.failed);
            c.inspected = a.inspected.or(c.inspected);
            if let Some(l) = a.max_lag {
                c.max_lag = l;
            }
            a.mcmc.apply(&mut c);
            commands::chain(&c.finish()?)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("weldq: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
