//! Parameter sweeps, reference-table regeneration, extremum search and
//! report rendering.

use std::collections::HashSet;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cases::{evaluate_on, verify_radius_on, CaseId, CaseResult, Mode};
use crate::error::{Error, Result};
use crate::orthoscheme::{angle_sum_vs_half, Order, OrthoParams, Orthoscheme};

/// Largest tolerated closed-form vs oracle deviation for an emitted row.
pub const ORACLE_TOLERANCE: f64 = 1e-10;

const REFERENCE_TABLES: &str = include_str!("../data/reference_tables.csv");
const KNOWN_DISCREPANCIES: &str = include_str!("../data/known_discrepancies.csv");

/// Numeric cells of a reference row, in table order.
pub const FIELDS: [&str; 4] = ["r_or_R", "vol_W", "vol_B", "density"];

/// One row of the reference tables.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct TableRow {
    pub table_id: CaseId,
    pub mode: Mode,
    pub u: Order,
    pub v: Order,
    pub w: Order,
    /// `;`-separated markers: `bold`, `v->inf`, `w->inf`, `printed as ...`
    pub special_note: String,
    #[serde(rename = "r_or_R")]
    pub r_or_r: f64,
    #[serde(rename = "vol_W")]
    pub vol_w: f64,
    #[serde(rename = "vol_B")]
    pub vol_b: f64,
    pub density: f64,
}

impl TableRow {
    pub fn params(&self) -> Result<OrthoParams> {
        OrthoParams::new(self.u, self.v, self.w)
    }

    pub fn is_bold(&self) -> bool {
        self.notes().any(|n| n == "bold")
    }

    pub fn notes(&self) -> impl Iterator<Item = &str> {
        self.special_note.split(';').map(str::trim).filter(|n| !n.is_empty())
    }

    pub fn cells(&self) -> [f64; 4] {
        [self.r_or_r, self.vol_w, self.vol_b, self.density]
    }
}

fn read_rows<T: for<'de> Deserialize<'de>>(text: &str) -> Result<Vec<T>> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
        .deserialize()
        .collect::<std::result::Result<Vec<T>, _>>()
        .map_err(|e| Error::Dataset(e.to_string()))
}

/// The embedded reference tables in printed order.
pub fn dataset() -> Result<Vec<TableRow>> {
    read_rows(REFERENCE_TABLES)
}

/// A reference cell known to disagree with the computation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Deserialize)]
pub struct AllowEntry {
    pub table_id: CaseId,
    pub mode: Mode,
    pub u: Order,
    pub v: Order,
    pub w: Order,
    pub field: String,
    #[serde(default)]
    pub note: String,
}

pub fn parse_allowlist(text: &str) -> Result<Vec<AllowEntry>> {
    let entries: Vec<AllowEntry> = read_rows(text)?;
    for e in &entries {
        if !FIELDS.contains(&e.field.as_str()) {
            return Err(Error::Dataset(format!("unknown field {:?} in allowlist", e.field)));
        }
    }
    Ok(entries)
}

/// The allowlist shipped with the crate.
pub fn default_allowlist() -> Vec<AllowEntry> {
    parse_allowlist(KNOWN_DISCREPANCIES).expect("embedded allowlist parses")
}

/// Flat output row shared by the CSV and JSON renderings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub table_id: String,
    pub u: Order,
    pub v: Order,
    pub w: Order,
    pub case_id: CaseId,
    pub mode: Mode,
    pub radius: f64,
    pub vol_w: f64,
    pub vol_ball: f64,
    pub stab_order: String,
    pub halved: bool,
    pub density: f64,
    pub witness: String,
}

impl Record {
    pub fn new(table_id: Option<CaseId>, r: &CaseResult) -> Self {
        Record {
            table_id: table_id.map(|t| t.to_string()).unwrap_or_default(),
            u: r.params.u,
            v: r.params.v,
            w: r.params.w,
            case_id: r.case_id,
            mode: r.mode,
            radius: r.radius,
            vol_w: r.vol_w,
            vol_ball: r.vol_ball,
            stab_order: r.stab.to_string(),
            halved: r.stab.halved,
            density: r.density,
            witness: r.witness.clone(),
        }
    }

    pub fn params_label(&self) -> String {
        format!("({},{},{})", self.u, self.v, self.w)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Discrepancy {
    pub table_id: CaseId,
    pub mode: Mode,
    pub row: String,
    pub field: String,
    pub expected: f64,
    /// `None` when the row could not be evaluated.
    pub computed: Option<f64>,
    pub delta: f64,
    pub allowlisted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extrema {
    pub best_packing: Option<Record>,
    pub best_covering: Option<Record>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurveyReport {
    pub results: Vec<Record>,
    pub discrepancies: Vec<Discrepancy>,
    pub extrema: Option<Extrema>,
    /// Observations that are neither results nor discrepancies.
    pub notes: Vec<String>,
}

impl SurveyReport {
    pub fn unallowlisted(&self) -> impl Iterator<Item = &Discrepancy> {
        self.discrepancies.iter().filter(|d| !d.allowlisted)
    }
}

/// Evaluates a case and rejects it unless every closed-form distance agrees
/// with the generic oracle.
pub fn evaluate_checked(w: &Orthoscheme, case: CaseId, mode: Mode) -> Result<CaseResult> {
    let result = evaluate_on(w, case, mode)?;
    let report = verify_radius_on(w, case, mode);
    if !(report.max_deviation <= ORACLE_TOLERANCE) {
        let worst = report
            .checks
            .iter()
            .max_by(|a, b| a.deviation.total_cmp(&b.deviation))
            .map(|c| c.span.clone())
            .unwrap_or_default();
        return Err(Error::OracleMismatch {
            params: w.params,
            case,
            witness: worst,
            deviation: report.max_deviation,
        });
    }
    Ok(result)
}

/// Rows excluded by the stricter covering header of `1.s.i.c`.
fn strict_header_note(row: &TableRow) -> Option<String> {
    (row.table_id == CaseId::OneSIC
        && row.mode == Mode::Covering
        && angle_sum_vs_half(row.v, row.w) == std::cmp::Ordering::Equal)
        .then(|| {
            format!(
                "{} covering ({},{},{}) has 1/v+1/w = 1/2, outside the strict covering header",
                row.table_id, row.u, row.v, row.w
            )
        })
}

/// Recomputes the reference tables and lists every cell off by more than
/// `tolerance`.
pub fn regen_tables(which: Option<&[CaseId]>, tolerance: f64, allowlist: &[AllowEntry]) -> Result<SurveyReport> {
    let rows = dataset()?;
    let allowed: HashSet<(CaseId, Mode, Order, Order, Order, &str)> = allowlist
        .iter()
        .map(|e| (e.table_id, e.mode, e.u, e.v, e.w, e.field.as_str()))
        .collect();
    let mut report = SurveyReport { results: vec![], discrepancies: vec![], extrema: None, notes: vec![] };
    for row in rows.iter().filter(|r| which.is_none_or(|ids| ids.contains(&r.table_id))) {
        let label = format!("({},{},{})", row.u, row.v, row.w);
        for note in row.notes().filter(|n| n.starts_with("printed as")) {
            report.notes.push(format!("{} {} {label}: {note}", row.table_id, row.mode));
        }
        report.notes.extend(strict_header_note(row));
        let computed = row
            .params()
            .and_then(Orthoscheme::new)
            .and_then(|w| evaluate_checked(&w, row.table_id, row.mode));
        let values: [Option<f64>; 4] = match &computed {
            Ok(r) => {
                report.results.push(Record::new(Some(row.table_id), r));
                [Some(r.radius), Some(r.vol_w), Some(r.vol_ball), Some(r.density)]
            }
            Err(e) => {
                report.notes.push(format!("{} {} {label}: {e}", row.table_id, row.mode));
                [None; 4]
            }
        };
        for ((field, expected), value) in FIELDS.iter().zip(row.cells()).zip(values) {
            let delta = value.map_or(f64::INFINITY, |v| (v - expected).abs());
            if delta > tolerance {
                report.discrepancies.push(Discrepancy {
                    table_id: row.table_id,
                    mode: row.mode,
                    row: label.clone(),
                    field: field.to_string(),
                    expected,
                    computed: value,
                    delta,
                    allowlisted: allowed.contains(&(row.table_id, row.mode, row.u, row.v, row.w, *field)),
                });
            }
        }
    }
    Ok(report)
}

/// Parameter ranges, cases and modes of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub u: Vec<Order>,
    pub v: Vec<Order>,
    pub w: Vec<Order>,
    pub cases: Vec<CaseId>,
    pub modes: Vec<Mode>,
}

impl Default for SweepSpec {
    /// `u, v, w` in `3..=9` plus infinity, every case, both modes.
    fn default() -> Self {
        SweepSpec::parse("u=3..9,v=3..9,w=3..9,+inf").expect("default sweep parses")
    }
}

fn parse_range(axis: &str, text: &str) -> Result<Vec<Order>> {
    let bad = || Error::InvalidSweep(format!("{axis}={text}"));
    let (body, with_inf) = match text.strip_suffix("+inf") {
        Some(b) => (b, true),
        None => (text, false),
    };
    let mut out = vec![];
    if !body.is_empty() {
        let (lo, hi) = match body.split_once("..") {
            Some((lo, hi)) => (lo, hi.trim_start_matches('=')),
            None => (body, body),
        };
        let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
        if lo < 3 || hi < lo {
            return Err(bad());
        }
        out.extend((lo..=hi).map(Order::Finite));
    }
    if with_inf {
        out.push(Order::Infinite);
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

impl SweepSpec {
    /// Parses `u=3..9,v=3..9,w=3..9,+inf`. A bare `+inf` adds infinity to
    /// every axis, `u=3..9+inf` to one; axes left out default to `3..9`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut axes: [Option<Vec<Order>>; 3] = [None, None, None];
        let mut global_inf = false;
        for token in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            if token == "+inf" || token == "inf" {
                global_inf = true;
                continue;
            }
            let (axis, range) = token
                .split_once('=')
                .ok_or_else(|| Error::InvalidSweep(token.to_string()))?;
            let idx = match axis.trim() {
                "u" => 0,
                "v" => 1,
                "w" => 2,
                _ => return Err(Error::InvalidSweep(token.to_string())),
            };
            axes[idx] = Some(parse_range(axis, range.trim())?);
        }
        let [u, v, w] = axes.map(|a| {
            let mut a = a.unwrap_or_else(|| (3..=9).map(Order::Finite).collect());
            if global_inf && !a.contains(&Order::Infinite) {
                a.push(Order::Infinite);
            }
            a
        });
        Ok(SweepSpec { u, v, w, cases: CaseId::ALL.to_vec(), modes: Mode::BOTH.to_vec() })
    }

    pub fn with_cases(mut self, cases: Vec<CaseId>) -> Self {
        self.cases = cases;
        self
    }

    pub fn with_modes(mut self, modes: Vec<Mode>) -> Self {
        self.modes = modes;
        self
    }

    /// Hyperbolic triples of the sweep.
    pub fn params(&self) -> Vec<OrthoParams> {
        let mut out = vec![];
        for &u in &self.u {
            for &v in &self.v {
                for &w in &self.w {
                    if let Ok(p) = OrthoParams::new(u, v, w) {
                        out.push(p);
                    }
                }
            }
        }
        out
    }
}

/// Errors that only mean a case does not apply to a triple.
fn skippable(e: &Error) -> bool {
    matches!(
        e,
        Error::CaseInapplicable { .. }
            | Error::NotSymmetric { .. }
            | Error::CoveringUndefined { .. }
            | Error::InfiniteStabilizer { .. }
    )
}

/// Every applicable evaluation of the sweep, ordered by `(u, v, w, case, mode)`.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<CaseResult>> {
    let per_triple: Vec<Result<Vec<CaseResult>>> = spec
        .params()
        .par_iter()
        .map(|&p| {
            let w = Orthoscheme::new(p)?;
            let mut out = vec![];
            for &case in &spec.cases {
                for &mode in &spec.modes {
                    match evaluate_checked(&w, case, mode) {
                        Ok(r) => out.push(r),
                        Err(e) if skippable(&e) => {}
                        Err(e) => return Err(e),
                    }
                }
            }
            Ok(out)
        })
        .collect();
    let mut results = vec![];
    for r in per_triple {
        results.extend(r?);
    }
    results.sort_by(|a, b| {
        (a.params, a.case_id.as_str(), a.mode.to_string()).cmp(&(b.params, b.case_id.as_str(), b.mode.to_string()))
    });
    Ok(results)
}

/// Largest packing and smallest covering density; ties keep the first row.
pub fn extrema_of(results: &[Record]) -> Extrema {
    let mut best_packing: Option<&Record> = None;
    let mut best_covering: Option<&Record> = None;
    for r in results {
        match r.mode {
            Mode::Packing if best_packing.is_none_or(|b| r.density > b.density) => best_packing = Some(r),
            Mode::Covering if best_covering.is_none_or(|b| r.density < b.density) => best_covering = Some(r),
            _ => {}
        }
    }
    Extrema { best_packing: best_packing.cloned(), best_covering: best_covering.cloned() }
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SurveyReport> {
    let results: Vec<Record> = sweep(spec)?.iter().map(|r| Record::new(None, r)).collect();
    Ok(SurveyReport { results, discrepancies: vec![], extrema: None, notes: vec![] })
}

pub fn find_extrema(spec: &SweepSpec) -> Result<SurveyReport> {
    let mut report = run_sweep(spec)?;
    if report.results.is_empty() {
        return Err(Error::EmptySweep);
    }
    report.extrema = Some(extrema_of(&report.results));
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Markdown,
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "md" | "markdown" => Ok(Format::Markdown),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?}")),
        }
    }
}

pub const CSV_HEADER: [&str; 13] = [
    "table_id", "u", "v", "w", "case_id", "mode", "radius", "vol_w", "vol_ball", "stab_order", "halved",
    "density", "witness",
];

fn record_cells(r: &Record, precision: usize) -> [String; 13] {
    let f = |x: f64| format!("{x:.precision$}");
    [
        r.table_id.clone(),
        r.u.to_string(),
        r.v.to_string(),
        r.w.to_string(),
        r.case_id.to_string(),
        r.mode.to_string(),
        f(r.radius),
        f(r.vol_w),
        f(r.vol_ball),
        r.stab_order.clone(),
        r.halved.to_string(),
        f(r.density),
        r.witness.clone(),
    ]
}

pub fn render_csv(records: &[Record], precision: usize) -> String {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(CSV_HEADER).expect("write to memory");
    for r in records {
        w.write_record(record_cells(r, precision)).expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is utf-8")
}

/// Full-precision JSON of the whole report.
pub fn render_json(report: &SurveyReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

pub fn render_markdown(report: &SurveyReport, precision: usize) -> String {
    let mut s = String::new();
    if !report.results.is_empty() {
        let _ = writeln!(s, "| {} |", CSV_HEADER.join(" | "));
        let _ = writeln!(s, "|{}", "---|".repeat(CSV_HEADER.len()));
        for r in &report.results {
            let _ = writeln!(s, "| {} |", record_cells(r, precision).join(" | "));
        }
    }
    if let Some(ex) = &report.extrema {
        let _ = writeln!(s, "\n## Extrema\n");
        for (name, rec) in [("max packing", &ex.best_packing), ("min covering", &ex.best_covering)] {
            match rec {
                Some(r) => {
                    let _ = writeln!(
                        s,
                        "- {name}: {:.precision$} at {} {} (radius {:.precision$}, {})",
                        r.density,
                        r.params_label(),
                        r.case_id,
                        r.radius,
                        r.witness
                    );
                }
                None => {
                    let _ = writeln!(s, "- {name}: none");
                }
            }
        }
    }
    if !report.discrepancies.is_empty() {
        let _ = writeln!(s, "\n## Discrepancies\n");
        let _ = writeln!(s, "| table | mode | row | field | expected | computed | delta | allowlisted |");
        let _ = writeln!(s, "|---|---|---|---|---|---|---|---|");
        for d in &report.discrepancies {
            let computed = d.computed.map_or("error".to_string(), |c| format!("{c:.precision$}"));
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} | {:.precision$} | {} | {:.2e} | {} |",
                d.table_id, d.mode, d.row, d.field, d.expected, computed, d.delta, d.allowlisted
            );
        }
    }
    if !report.notes.is_empty() {
        let _ = writeln!(s, "\n## Notes\n");
        for n in &report.notes {
            let _ = writeln!(s, "- {n}");
        }
    }
    s
}

pub fn render(report: &SurveyReport, format: Format, precision: usize) -> String {
    match format {
        Format::Markdown => render_markdown(report, precision),
        Format::Csv => render_csv(&report.results, precision),
        Format::Json => render_json(report),
    }
}
