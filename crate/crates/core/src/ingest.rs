//! File-based data adapter: parse raw weld exports, clean them, and roll
//! them up into per-group inspection counts.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::beta::CountData;
use crate::error::{Error, Result};

/// Column names of the raw weld table, in canonical order.
pub const COLUMNS: [&str; 7] = [
    "operator_id",
    "weld_kind",
    "schedule",
    "nps",
    "material",
    "project_type",
    "inspection_status",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InspectionStatus {
    NotInspected = 0,
    Passed = 1,
    Failed = 2,
}

impl InspectionStatus {
    pub fn parse(raw: &str) -> Option<Self> {
        match raw.trim() {
            "0" => Some(Self::NotInspected),
            "1" => Some(Self::Passed),
            "2" => Some(Self::Failed),
            _ => None,
        }
    }

    pub fn is_inspected(self) -> bool {
        self != Self::NotInspected
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeldRecord {
    pub operator_id: String,
    pub weld_kind: String,
    pub schedule: String,
    pub nps: String,
    pub material: String,
    pub project_type: String,
    /// Status text exactly as read (trimmed).
    pub raw_status: String,
    /// `None` when `raw_status` is not one of 0, 1, 2.
    pub status: Option<InspectionStatus>,
    /// 1-based line of the source row (header is line 1).
    pub line: u64,
}

impl WeldRecord {
    pub fn field(&self, f: GroupField) -> &str {
        match f {
            GroupField::Nps => &self.nps,
            GroupField::Schedule => &self.schedule,
            GroupField::Material => &self.material,
            GroupField::WeldKind => &self.weld_kind,
            GroupField::OperatorId => &self.operator_id,
        }
    }
}

/// How the raw table is delimited.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Schema {
    pub delimiter: u8,
}

impl Default for Schema {
    fn default() -> Self {
        Self { delimiter: b',' }
    }
}

impl Schema {
    pub fn tab() -> Self {
        Self { delimiter: b'\t' }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowError {
    pub line: u64,
    pub message: String,
}

impl fmt::Display for RowError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Parsed {
    pub records: Vec<WeldRecord>,
    pub errors: Vec<RowError>,
}

/// Finds each required column in a header row. Names are matched after
/// trimming and ignoring ASCII case.
fn locate_columns<const N: usize>(header: &csv::StringRecord, names: [&str; N]) -> Result<[usize; N]> {
    let mut idx = [0usize; N];
    let mut missing = Vec::new();
    for (slot, name) in idx.iter_mut().zip(names) {
        match header.iter().position(|h| h.trim().eq_ignore_ascii_case(name)) {
            Some(i) => *slot = i,
            None => missing.push(name),
        }
    }
    if missing.is_empty() {
        Ok(idx)
    } else {
        Err(Error::Schema(format!("missing column(s): {}", missing.join(", "))))
    }
}

fn reader<R: Read>(input: R, schema: Schema) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .delimiter(schema.delimiter)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input)
}

/// Reads raw weld rows.
///
/// Rows with the wrong number of fields are reported and skipped. A status
/// outside {0, 1, 2} is reported but the row is kept, so that `clean`
/// can account for it.
pub fn parse_records<R: Read>(input: R, schema: Schema) -> Result<Parsed> {
    let mut rdr = reader(input, schema);
    let header = rdr.headers()?.clone();
    let idx = locate_columns(&header, COLUMNS)?;
    let mut out = Parsed::default();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        if row.len() != header.len() {
            out.errors.push(RowError {
                line,
                message: format!("expected {} fields, found {}", header.len(), row.len()),
            });
            continue;
        }
        let get = |i: usize| row[idx[i]].to_string();
        let raw_status = get(6);
        let status = InspectionStatus::parse(&raw_status);
        if status.is_none() {
            out.errors.push(RowError {
                line,
                message: format!("invalid inspection status {raw_status:?}"),
            });
        }
        out.records.push(WeldRecord {
            operator_id: get(0),
            weld_kind: get(1),
            schedule: get(2),
            nps: get(3),
            material: get(4),
            project_type: get(5),
            raw_status,
            status,
            line,
        });
    }
    Ok(out)
}

/// Canonical text for a nominal pipe size: numeric labels lose trailing
/// fractional zeros ("2.00" → "2", "1.50" → "1.5"); anything else is only
/// trimmed.
pub fn normalize_nps(raw: &str) -> String {
    let s = raw.trim();
    let numeric = !s.is_empty()
        && s.contains('.')
        && s.chars().all(|c| c.is_ascii_digit() || c == '.')
        && s.matches('.').count() == 1;
    if numeric {
        let t = s.trim_end_matches('0').trim_end_matches('.');
        if t.is_empty() {
            "0".to_string()
        } else {
            t.to_string()
        }
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RejectReason {
    /// Schedule, NPS or material is empty or a missing-value marker.
    BlankField(String),
    InvalidStatus(String),
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::BlankField(name) => write!(f, "blank field ({name})"),
            Self::InvalidStatus(raw) => write!(f, "invalid status {raw:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub line: u64,
    pub reason: RejectReason,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectionReport {
    pub blank_field: usize,
    pub invalid_status: usize,
    pub rejections: Vec<Rejection>,
}

impl RejectionReport {
    pub fn is_empty(&self) -> bool {
        self.rejections.is_empty()
    }

    pub fn total(&self) -> usize {
        self.rejections.len()
    }
}

fn is_blank(s: &str) -> bool {
    let t = s.trim();
    t.is_empty() || t.eq_ignore_ascii_case("na") || t.eq_ignore_ascii_case("null")
}

/// Drops rows with a blank schedule/NPS/material or an invalid status and
/// normalizes NPS labels. Every dropped row appears in the report.
pub fn clean(records: Vec<WeldRecord>) -> (Vec<WeldRecord>, RejectionReport) {
    let mut report = RejectionReport::default();
    let mut kept = Vec::with_capacity(records.len());
    for mut r in records {
        let blank = [("schedule", &r.schedule), ("nps", &r.nps), ("material", &r.material)]
            .into_iter()
            .find(|(_, v)| is_blank(v))
            .map(|(name, _)| name);
        let reason = if let Some(name) = blank {
            report.blank_field += 1;
            Some(RejectReason::BlankField(name.to_string()))
        } else if r.status.is_none() {
            report.invalid_status += 1;
            Some(RejectReason::InvalidStatus(r.raw_status.clone()))
        } else {
            None
        };
        match reason {
            Some(reason) => report.rejections.push(Rejection { line: r.line, reason }),
            None => {
                r.nps = normalize_nps(&r.nps);
                kept.push(r);
            }
        }
    }
    (kept, report)
}

/// Keeps records whose project type and weld kind match, where given.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordFilter {
    pub project_type: Option<String>,
    pub weld_kind: Option<String>,
}

impl RecordFilter {
    pub fn matches(&self, r: &WeldRecord) -> bool {
        self.project_type.as_ref().is_none_or(|p| *p == r.project_type)
            && self.weld_kind.as_ref().is_none_or(|k| *k == r.weld_kind)
    }

    pub fn apply(&self, records: Vec<WeldRecord>) -> Vec<WeldRecord> {
        records.into_iter().filter(|r| self.matches(r)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupField {
    Nps,
    Schedule,
    Material,
    WeldKind,
    OperatorId,
}

impl GroupField {
    /// The pipe-format key: NPS, schedule, material, weld kind.
    pub const PIPE_FORMAT: [GroupField; 4] = [Self::Nps, Self::Schedule, Self::Material, Self::WeldKind];

    pub fn name(self) -> &'static str {
        match self {
            Self::Nps => "nps",
            Self::Schedule => "schedule",
            Self::Material => "material",
            Self::WeldKind => "weld_kind",
            Self::OperatorId => "operator_id",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Self::Nps, Self::Schedule, Self::Material, Self::WeldKind, Self::OperatorId]
            .into_iter()
            .find(|f| f.name() == s.trim())
    }
}

/// Grouping key; fields not grouped on are `None`. Field order gives the sort
/// order: nps, schedule, material, weld kind, operator.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupKey {
    pub nps: Option<String>,
    pub schedule: Option<String>,
    pub material: Option<String>,
    pub weld_kind: Option<String>,
    pub operator_id: Option<String>,
}

impl GroupKey {
    fn slot(&mut self, f: GroupField) -> &mut Option<String> {
        match f {
            GroupField::Nps => &mut self.nps,
            GroupField::Schedule => &mut self.schedule,
            GroupField::Material => &mut self.material,
            GroupField::WeldKind => &mut self.weld_kind,
            GroupField::OperatorId => &mut self.operator_id,
        }
    }

    pub fn get(&self, f: GroupField) -> Option<&str> {
        match f {
            GroupField::Nps => self.nps.as_deref(),
            GroupField::Schedule => self.schedule.as_deref(),
            GroupField::Material => self.material.as_deref(),
            GroupField::WeldKind => self.weld_kind.as_deref(),
            GroupField::OperatorId => self.operator_id.as_deref(),
        }
    }

    pub fn with(mut self, f: GroupField, value: impl Into<String>) -> Self {
        *self.slot(f) = Some(value.into());
        self
    }

    /// Key of `r` restricted to `fields`.
    pub fn of(r: &WeldRecord, fields: &[GroupField]) -> Self {
        let mut k = Self::default();
        for &f in fields {
            *k.slot(f) = Some(r.field(f).to_string());
        }
        k
    }

    /// True when every field set in `pattern` equals this key's field.
    pub fn matches(&self, pattern: &GroupKey) -> bool {
        [GroupField::Nps, GroupField::Schedule, GroupField::Material, GroupField::WeldKind, GroupField::OperatorId]
            .into_iter()
            .all(|f| pattern.get(f).is_none_or(|want| self.get(f) == Some(want)))
    }
}

impl fmt::Display for GroupKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = [&self.nps, &self.schedule, &self.material, &self.weld_kind, &self.operator_id]
            .into_iter()
            .flatten()
            .map(String::as_str)
            .collect();
        f.write_str(&parts.join("/"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub key: GroupKey,
    pub total_welds: u64,
    pub inspected_welds: u64,
    pub repaired_welds: u64,
}

impl GroupSummary {
    pub fn counts(&self) -> CountData {
        CountData { failed: self.repaired_welds, inspected: self.inspected_welds }
    }
}

/// Counts per distinct key, sorted by key. Records without a valid status
/// are ignored (they should have been removed by [`clean`]).
pub fn summarize(records: &[WeldRecord], fields: &[GroupField]) -> Vec<GroupSummary> {
    let mut groups: BTreeMap<GroupKey, (u64, u64, u64)> = BTreeMap::new();
    for r in records {
        let Some(status) = r.status else { continue };
        let e = groups.entry(GroupKey::of(r, fields)).or_default();
        e.0 += 1;
        if status.is_inspected() {
            e.1 += 1;
        }
        if status == InspectionStatus::Failed {
            e.2 += 1;
        }
    }
    let out: Vec<GroupSummary> = groups
        .into_iter()
        .map(|(key, (total, inspected, repaired))| GroupSummary {
            key,
            total_welds: total,
            inspected_welds: inspected,
            repaired_welds: repaired,
        })
        .collect();
    for s in &out {
        assert!(
            s.repaired_welds <= s.inspected_welds && s.inspected_welds <= s.total_welds,
            "inconsistent counts for {}",
            s.key
        );
    }
    out
}

/// Keeps summaries matching `pattern` with at least `min_inspected`
/// inspected welds.
pub fn filter_summaries(summaries: &[GroupSummary], pattern: &GroupKey, min_inspected: u64) -> Vec<GroupSummary> {
    summaries
        .iter()
        .filter(|s| s.key.matches(pattern) && s.inspected_welds >= min_inspected)
        .cloned()
        .collect()
}

/// Writes summaries as a delimited table, one column per key field in use.
pub fn write_summaries_csv<W: Write>(out: W, summaries: &[GroupSummary], fields: &[GroupField]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = fields.iter().map(|f| f.name()).collect();
    header.extend(["total_welds", "inspected_welds", "repaired_welds"]);
    w.write_record(&header)?;
    for s in summaries {
        let mut row: Vec<String> = fields.iter().map(|&f| s.key.get(f).unwrap_or("").to_string()).collect();
        row.extend([s.total_welds, s.inspected_welds, s.repaired_welds].map(|c| c.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summaries_json<W: Write>(out: W, summaries: &[GroupSummary]) -> Result<()> {
    serde_json::to_writer_pretty(out, summaries).map_err(|e| Error::Io(e.into()))
}

/// One row of a pre-aggregated count table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRow {
    /// Value of the `id`/`label` column, or the 1-based row number.
    pub label: String,
    pub counts: CountData,
    pub total: Option<u64>,
    /// Remaining columns, by header name.
    pub extra: BTreeMap<String, String>,
}

const INSPECTED_NAMES: [&str; 3] = ["inspected_welds", "inspected", "n"];
const REPAIRED_NAMES: [&str; 4] = ["repaired_welds", "repaired", "failed", "x"];
const TOTAL_NAMES: [&str; 2] = ["total_welds", "total"];
const LABEL_NAMES: [&str; 3] = ["id", "label", "product"];

fn find_any(header: &csv::StringRecord, names: &[&str]) -> Option<usize> {
    names
        .iter()
        .find_map(|n| header.iter().position(|h| h.trim().eq_ignore_ascii_case(n)))
}

/// Reads an aggregated table with inspected and repaired counts per row.
///
/// Accepted column names: `inspected_welds`/`inspected`/`n`,
/// `repaired_welds`/`repaired`/`failed`/`x`, optionally
/// `total_welds`/`total` and `id`/`label`/`product`.
pub fn read_count_table<R: Read>(input: R, schema: Schema) -> Result<Vec<CountRow>> {
    let mut rdr = reader(input, schema);
    let header = rdr.headers()?.clone();
    let inspected = find_any(&header, &INSPECTED_NAMES)
        .ok_or_else(|| Error::Schema("missing inspected count column (inspected_welds)".into()))?;
    let repaired = find_any(&header, &REPAIRED_NAMES)
        .ok_or_else(|| Error::Schema("missing repaired count column (repaired_welds)".into()))?;
    let total = find_any(&header, &TOTAL_NAMES);
    let label = find_any(&header, &LABEL_NAMES);
    let known = [Some(inspected), Some(repaired), total, label];
    let mut out = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        if row.len() != header.len() {
            return Err(Error::Schema(format!(
                "line {line}: expected {} fields, found {}",
                header.len(),
                row.len()
            )));
        }
        let count = |col: usize| -> Result<u64> {
            row[col].parse::<u64>().map_err(|_| {
                Error::Schema(format!("line {line}: column {:?} is not a count: {:?}", &header[col], &row[col]))
            })
        };
        let counts = CountData::new(count(repaired)?, count(inspected)?)
            .map_err(|e| Error::Schema(format!("line {line}: {e}")))?;
        let total = total.map(count).transpose()?;
        if let Some(t) = total {
            if t < counts.inspected {
                return Err(Error::Schema(format!(
                    "line {line}: total {t} is below inspected {}",
                    counts.inspected
                )));
            }
        }
        let extra = header
            .iter()
            .enumerate()
            .filter(|(c, _)| !known.contains(&Some(*c)))
            .map(|(c, h)| (h.trim().to_string(), row[c].to_string()))
            .collect();
        out.push(CountRow {
            label: label.map_or_else(|| (i + 1).to_string(), |c| row[c].to_string()),
            counts,
            total,
            extra,
        });
    }
    Ok(out)
}
