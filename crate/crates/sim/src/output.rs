//! Run results and their CSV rendering.
//!
//! Every real number is written with 12 significant digits in scientific
//! notation; flagged points are written as `nan`, and absent onsets or
//! recurrences as `inf` (beyond the simulated window).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use otoc_core::otoc::SeriesResult;

use crate::config::ScenarioConfig;
use crate::error::SimError;

/// A time × site grid of values.
#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap {
    /// Distinguishes the file, e.g. `theta=0.39269908169872414`.
    pub name: String,
    pub times: Vec<f64>,
    pub sites: Vec<usize>,
    /// `values[i][k]` at `sites[i]`, `times[k]`.
    pub values: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(u64),
    Real(f64),
    Bool(bool),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// One pass/fail line of a checking scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `measured ≤ tolerance` (NaN fails).
    pub fn at_most(name: &str, measured: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            measured,
            tolerance,
            passed: measured <= tolerance,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub series: Vec<SeriesResult>,
    pub heatmaps: Vec<Heatmap>,
    pub tables: Vec<Table>,
    pub checks: Vec<Check>,
    pub metadata: ScenarioConfig,
    pub wall_time: f64,
}

impl RunResult {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub fn fmt_real(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.11e}")
    }
}

fn fmt_cell(c: &Cell) -> String {
    match c {
        Cell::Text(s) => clean_text(s),
        Cell::Int(i) => i.to_string(),
        Cell::Real(v) => fmt_real(*v),
        Cell::Bool(b) => b.to_string(),
    }
}

/// Labels are free text; keep them to one CSV field.
fn clean_text(s: &str) -> String {
    s.chars().map(|c| if matches!(c, ',' | '"' | '\n' | '\r') { ';' } else { c }).collect()
}

fn file_stem(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '.' | '-' | '=' | '_') { c } else { '_' })
        .collect()
}

pub fn render_series(series: &[SeriesResult]) -> String {
    let mut out = String::from("time,value,label\n");
    for s in series {
        let label = clean_text(&s.label);
        for (t, v) in s.times.iter().zip(&s.values) {
            let _ = writeln!(out, "{},{},{label}", fmt_real(*t), fmt_real(*v));
        }
    }
    out
}

pub fn render_heatmap(h: &Heatmap) -> String {
    let mut out = String::from("time,site,value\n");
    for (k, t) in h.times.iter().enumerate() {
        for (i, site) in h.sites.iter().enumerate() {
            let _ = writeln!(out, "{},{site},{}", fmt_real(*t), fmt_real(h.values[i][k]));
        }
    }
    out
}

pub fn render_table(t: &Table) -> String {
    let mut out = t.header.join(",");
    out.push('\n');
    for row in &t.rows {
        let cells: Vec<String> = row.iter().map(fmt_cell).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn checks_table(checks: &[Check]) -> Table {
    let mut t = Table::new("checks", &["check", "measured", "tolerance", "passed"]);
    for c in checks {
        t.push(vec![Cell::Text(c.name.clone()), Cell::Real(c.measured), Cell::Real(c.tolerance), Cell::Bool(c.passed)]);
    }
    t
}

fn write_file(path: &Path, text: &str) -> Result<(), SimError> {
    fs::write(path, text).map_err(|source| SimError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Writes `series.csv`, one `heatmap_<name>.csv` per heatmap, one file per
/// table, `checks.csv` and the `metadata.toml` sidecar into `dir`. Returns the
/// paths written, in that order.
pub fn write_csv(result: &RunResult, dir: &Path) -> Result<Vec<PathBuf>, SimError> {
    fs::create_dir_all(dir).map_err(|source| SimError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let mut files: Vec<(PathBuf, String)> = Vec::new();
    if !result.series.is_empty() {
        files.push((dir.join("series.csv"), render_series(&result.series)));
    }
    for h in &result.heatmaps {
        files.push((dir.join(format!("heatmap_{}.csv", file_stem(&h.name))), render_heatmap(h)));
    }
    for t in &result.tables {
        files.push((dir.join(format!("{}.csv", file_stem(&t.name))), render_table(t)));
    }
    if !result.checks.is_empty() {
        files.push((dir.join("checks.csv"), render_table(&checks_table(&result.checks))));
    }
    files.push((dir.join("metadata.toml"), result.metadata.to_toml()));
    for (path, text) in &files {
        write_file(path, text)?;
    }
    Ok(files.into_iter().map(|(p, _)| p).collect())
}
