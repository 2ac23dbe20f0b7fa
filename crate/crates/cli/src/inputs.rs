//! Input tables beyond the raw weld export: count tables, project designs,
//! product specs and actual execution results.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use weldq_core::beta::{posterior, CountData};
use weldq_core::ingest::{self, GroupKey, Parsed, RejectionReport, Schema, WeldRecord};
use weldq_core::{BetaParams64, GroupField};

use crate::config::RunConfig;
use crate::error::{input_err, CliError, CliResult};

pub fn schema_for(path: &Path) -> Schema {
    match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("tsv") || e.eq_ignore_ascii_case("tab") => Schema::tab(),
        _ => Schema::default(),
    }
}

fn open(path: &Path) -> CliResult<File> {
    File::open(path).map_err(|e| CliError::Input(format!("cannot open {}: {e}", path.display())))
}

fn header_line(path: &Path) -> CliResult<String> {
    let mut line = String::new();
    BufReader::new(open(path)?)
        .read_line(&mut line)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(line.to_ascii_lowercase())
}

/// True when the file looks like a raw weld export rather than a count table.
pub fn is_raw_export(path: &Path) -> CliResult<bool> {
    Ok(header_line(path)?.contains("inspection_status"))
}

/// Raw records after parsing, cleaning and filtering, plus everything that
/// was dropped on the way.
pub struct RawInput {
    pub records: Vec<WeldRecord>,
    pub parse_errors: Vec<ingest::RowError>,
    pub rejections: RejectionReport,
    pub filtered_out: usize,
}

fn record_value<'a>(r: &'a WeldRecord, field: &str) -> Option<&'a str> {
    match field {
        "project_type" => Some(&r.project_type),
        _ => GroupField::parse(field).map(|f| r.field(f)),
    }
}

pub fn load_raw(paths: &[impl AsRef<Path>], cfg: &RunConfig) -> CliResult<RawInput> {
    for field in cfg.filter.keys() {
        if field != "project_type" && GroupField::parse(field).is_none() {
            return Err(CliError::Config(format!("unknown filter field {field:?}")));
        }
    }
    let mut all = Parsed::default();
    for path in paths {
        let path = path.as_ref();
        let parsed = ingest::parse_records(open(path)?, schema_for(path))
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        all.records.extend(parsed.records);
        all.errors.extend(parsed.errors);
    }
    let (clean, rejections) = ingest::clean(all.records);
    // rows with a bad status are reported by both steps; keep the cleaning entry
    let rejected: std::collections::BTreeSet<u64> = rejections.rejections.iter().map(|r| r.line).collect();
    all.errors.retain(|e| !rejected.contains(&e.line));
    let before = clean.len();
    let records: Vec<WeldRecord> = clean
        .into_iter()
        .filter(|r| cfg.filter.iter().all(|(k, v)| record_value(r, k) == Some(v.as_str())))
        .collect();
    Ok(RawInput { filtered_out: before - records.len(), records, parse_errors: all.errors, rejections })
}

/// A labelled count row, from either a raw export or a count table.
#[derive(Debug, Clone)]
pub struct Item {
    pub label: String,
    pub counts: CountData,
    pub total: Option<u64>,
}

fn key_label(key: &GroupKey) -> String {
    key.to_string()
}

/// Loads labelled counts from `path`; raw exports are grouped on the
/// configured fields (or `default_group`). Rows below `min_inspected` are
/// dropped.
pub fn load_items(path: &Path, cfg: &RunConfig, default_group: &[GroupField]) -> CliResult<Vec<Item>> {
    let items: Vec<Item> = if is_raw_export(path)? {
        let fields = cfg.group_fields(default_group)?;
        let raw = load_raw(&[path], cfg)?;
        ingest::summarize(&raw.records, &fields)
            .into_iter()
            .map(|s| Item { label: key_label(&s.key), counts: s.counts(), total: Some(s.total_welds) })
            .collect()
    } else {
        if !cfg.filter.is_empty() {
            return Err(CliError::Config("filters apply to raw weld exports only".into()));
        }
        ingest::read_count_table(open(path)?, schema_for(path))
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
            .into_iter()
            .map(|r| Item { label: r.label, counts: r.counts, total: r.total })
            .collect()
    };
    Ok(items.into_iter().filter(|i| i.counts.inspected >= cfg.min_inspected).collect())
}

/// Column lookup for small hand-written tables.
struct Columns {
    header: csv::StringRecord,
    path: String,
}

impl Columns {
    fn find(&self, names: &[&str]) -> Option<usize> {
        names
            .iter()
            .find_map(|n| self.header.iter().position(|h| h.trim().eq_ignore_ascii_case(n)))
    }

    fn require(&self, names: &[&str]) -> CliResult<usize> {
        self.find(names)
            .ok_or_else(|| CliError::Input(format!("{}: missing column {}", self.path, names.join("/"))))
    }
}

fn parse_cell<T: std::str::FromStr>(row: &csv::StringRecord, col: usize, what: &str, line: u64) -> CliResult<T> {
    row[col]
        .trim()
        .parse()
        .map_err(|_| CliError::Input(format!("line {line}: {what} is not a number: {:?}", &row[col])))
}

/// Posterior from `a`/`b` columns, or from inspected/repaired counts under
/// the configured prior.
struct PosteriorColumns {
    ab: Option<(usize, usize)>,
    counts: Option<(usize, usize)>,
}

impl PosteriorColumns {
    fn find(cols: &Columns) -> CliResult<Self> {
        let ab = cols.find(&["a", "shape1"]).zip(cols.find(&["b", "shape2"]));
        let counts = cols
            .find(&["inspected_welds", "inspected", "n"])
            .zip(cols.find(&["repaired_welds", "repaired", "failed", "x"]));
        if ab.is_none() && counts.is_none() {
            return input_err(format!("{}: need a,b posterior columns or inspected/repaired counts", cols.path));
        }
        Ok(Self { ab, counts })
    }

    fn read(&self, row: &csv::StringRecord, prior: &BetaParams64, line: u64) -> CliResult<BetaParams64> {
        if let Some((a, b)) = self.ab {
            let p = BetaParams64::new(parse_cell(row, a, "a", line)?, parse_cell(row, b, "b", line)?)
                .map_err(|e| CliError::Input(format!("line {line}: {e}")))?;
            return Ok(p);
        }
        let (n, x) = self.counts.expect("one of the two is present");
        let counts = CountData::new(parse_cell(row, x, "repaired", line)?, parse_cell(row, n, "inspected", line)?)
            .map_err(|e| CliError::Input(format!("line {line}: {e}")))?;
        Ok(posterior(&counts, prior))
    }
}

fn table(path: &Path) -> CliResult<(Columns, Vec<(u64, csv::StringRecord)>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(schema_for(path).delimiter)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(open(path)?);
    let header = rdr.headers()?.clone();
    let mut rows = Vec::new();
    for r in rdr.records() {
        let r = r?;
        let line = r.position().map_or(0, |p| p.line());
        rows.push((line, r));
    }
    Ok((Columns { header, path: path.display().to_string() }, rows))
}

fn label_of(cols: &Columns, row: &csv::StringRecord, idx: usize) -> String {
    cols.find(&["label", "id", "type", "product", "weld_type"])
        .map_or_else(|| (idx + 1).to_string(), |c| row[c].to_string())
}

/// Project design: one row per weld type with its planned weld count.
pub fn load_design(path: &Path, prior: &BetaParams64) -> CliResult<Vec<weldq_core::forecast::DesignEntry<f64>>> {
    let (cols, rows) = table(path)?;
    let welds = cols.require(&["welds", "weld_count", "count"])?;
    let post = PosteriorColumns::find(&cols)?;
    rows.iter()
        .enumerate()
        .map(|(i, (line, row))| {
            Ok(weldq_core::forecast::DesignEntry {
                label: label_of(&cols, row, i),
                posterior: post.read(row, prior, *line)?,
                welds: parse_cell(row, welds, "welds", *line)?,
            })
        })
        .collect()
}

/// Products in production order.
pub fn load_specs(path: &Path, prior: &BetaParams64) -> CliResult<Vec<weldq_core::ProductSpec64>> {
    let (cols, rows) = table(path)?;
    let hours = cols.require(&["estimated_hours", "hours", "t"])?;
    let efficiency = cols.find(&["efficiency", "eta"]);
    let type_key = cols.find(&["type_key", "type"]);
    let post = PosteriorColumns::find(&cols)?;
    rows.iter()
        .enumerate()
        .map(|(i, (line, row))| {
            let label = cols.find(&["label", "id", "product"]).map_or_else(|| (i + 1).to_string(), |c| row[c].to_string());
            let mut spec = weldq_core::ProductSpec64::new(label, post.read(row, prior, *line)?, parse_cell(row, hours, "hours", *line)?);
            if let Some(c) = type_key {
                spec.type_key = row[c].to_string();
            }
            if let Some(c) = efficiency {
                spec.efficiency = parse_cell(row, c, "efficiency", *line)?;
            }
            Ok(spec)
        })
        .collect()
}

fn parse_failed(raw: &str, line: u64) -> CliResult<bool> {
    match raw.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "fail" | "failed" | "2" => Ok(true),
        "0" | "false" | "no" | "pass" | "passed" => Ok(false),
        other => input_err(format!("line {line}: cannot read pass/fail value {other:?}")),
    }
}

/// Actual rework hours and pass/fail results of completed products, in
/// production order. An empty file means nothing is complete yet.
pub fn load_actuals(path: &Path) -> CliResult<(Vec<f64>, Vec<bool>)> {
    if std::fs::metadata(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?.len() == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let (cols, rows) = table(path)?;
    let hours = cols.require(&["actual_hours", "rework_hours", "hours"])?;
    let failed = cols.find(&["failed", "reworked", "result"]);
    let mut h = Vec::with_capacity(rows.len());
    let mut f = Vec::with_capacity(rows.len());
    for (line, row) in &rows {
        let x: f64 = parse_cell(row, hours, "hours", *line)?;
        h.push(x);
        // without a result column, any rework counts as a failed inspection
        f.push(match failed {
            Some(c) => parse_failed(&row[c], *line)?,
            None => x > 0.0,
        });
    }
    Ok((h, f))
}
