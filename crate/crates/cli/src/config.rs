//! Run configuration: a JSON document mirroring every option, overridden by
//! command-line flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use weldq_core::{BetaParams64, ChainConfig64, ForecastMode, GroupField};

use crate::error::{config_err, CliError, CliResult};

pub const OUT_DIR_ENV: &str = "WELDQ_OUT_DIR";
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
    Txt,
}

impl Format {
    pub fn ext(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
            Self::Svg => "svg",
            Self::Txt => "txt",
        }
    }
}

/// Which distance the complexity clustering runs on.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Linkage {
    /// Complete linkage on the Hellinger matrix itself.
    Direct,
    /// Complete linkage on Euclidean distances between Hellinger matrix rows.
    #[default]
    Profile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: String,
    pub inputs: Vec<PathBuf>,
    /// Fields raw records are grouped on; empty means the command default.
    pub group_by: Vec<String>,
    /// `field → value` conditions on raw records (any ingest column).
    pub filter: BTreeMap<String, String>,
    pub min_inspected: u64,
    pub prior: [f64; 2],
    pub alpha: f64,
    pub mcmc: ChainConfig64,
    pub resamples: usize,
    /// Monte Carlo iterations; `None` means the command default.
    pub iterations: Option<usize>,
    pub seed: u64,
    /// Where files go. Not echoed into outputs, so moving a run elsewhere
    /// leaves its files unchanged.
    #[serde(skip_serializing)]
    pub out_dir: Option<PathBuf>,
    pub formats: Vec<Format>,
    pub failed: Option<u64>,
    pub inspected: Option<u64>,
    pub classical: bool,
    pub top_n: Option<usize>,
    pub clusters: usize,
    pub linkage: Linkage,
    pub mode: ForecastMode,
    pub actuals: Option<PathBuf>,
    pub sequential_update: bool,
    pub max_lag: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: String::new(),
            inputs: Vec::new(),
            group_by: Vec::new(),
            filter: BTreeMap::new(),
            min_inspected: 0,
            prior: [0.5, 0.5],
            alpha: 0.05,
            mcmc: ChainConfig64::default(),
            resamples: weldq_core::ab::DEFAULT_RESAMPLES,
            iterations: None,
            seed: DEFAULT_SEED,
            out_dir: None,
            formats: vec![Format::Csv, Format::Json, Format::Svg, Format::Txt],
            failed: None,
            inspected: None,
            classical: false,
            top_n: None,
            clusters: 4,
            linkage: Linkage::Profile,
            mode: ForecastMode::WeldAverage,
            actuals: None,
            sequential_update: false,
            max_lag: 50,
        }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("config {}: {e}", path.display())))
    }

    pub fn prior(&self) -> CliResult<BetaParams64> {
        BetaParams64::new(self.prior[0], self.prior[1])
            .map_err(|e| CliError::Config(format!("prior: {e}")))
    }

    pub fn group_fields(&self, default: &[GroupField]) -> CliResult<Vec<GroupField>> {
        if self.group_by.is_empty() {
            return Ok(default.to_vec());
        }
        self.group_by
            .iter()
            .map(|s| GroupField::parse(s).ok_or_else(|| CliError::Config(format!("unknown group field {s:?}"))))
            .collect()
    }

    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out_dir
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."))
    }

    pub fn input(&self, what: &str) -> CliResult<&Path> {
        match self.inputs.first() {
            Some(p) => Ok(p),
            None => config_err(format!("missing {what} input path")),
        }
    }

    /// Checks that hold for every command; the MCMC seed always follows the
    /// run seed.
    pub fn finish(mut self) -> CliResult<Self> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return config_err(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        self.prior()?;
        self.mcmc.seed = self.seed;
        self.mcmc.validate().map_err(|e| CliError::Config(format!("mcmc: {e}")))?;
        if self.formats.is_empty() {
            return config_err("no output formats selected");
        }
        if self.resamples == 0 {
            return config_err("resamples must be positive");
        }
        if self.iterations == Some(0) {
            return config_err("iterations must be positive");
        }
        Ok(self)
    }
}
