use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;
use tracekit::BoundReport;

use crate::config::ExperimentConfig;
use crate::CliError;

/// A CSV table written next to the JSON report.
#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, header: &[&'static str]) -> Self {
        Self {
            name: name.into(),
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// What a command produced, before it is written out.
#[derive(Debug, Default)]
pub struct Outcome {
    pub checks: Vec<BoundReport>,
    pub summary: BTreeMap<String, Value>,
    pub tables: Vec<Table>,
}

#[derive(Debug, Serialize)]
pub struct RunReport<'a> {
    pub command: &'static str,
    /// Seconds since the Unix epoch; the only field that varies between
    /// identical runs.
    pub timestamp: u64,
    pub config: &'a ExperimentConfig,
    /// `None` when no check carries a verdict.
    pub passed: Option<bool>,
    pub checks: &'a [BoundReport],
    pub summary: &'a BTreeMap<String, Value>,
    pub tables: Vec<String>,
}

pub fn verdict(checks: &[BoundReport]) -> Option<bool> {
    let judged: Vec<bool> = checks.iter().filter_map(|c| c.passed).collect();
    (!judged.is_empty()).then(|| judged.iter().all(|&b| b))
}

/// Writes `<command>.json` and every table as `<name>.csv` under `dir`;
/// returns the report path and the verdict.
pub fn write(
    dir: &Path,
    command: &'static str,
    config: &ExperimentConfig,
    outcome: &Outcome,
) -> Result<(PathBuf, Option<bool>), CliError> {
    fs::create_dir_all(dir)?;
    let mut names = Vec::new();
    for t in &outcome.tables {
        let file = format!("{}.csv", t.name);
        let mut w = csv::Writer::from_path(dir.join(&file))?;
        w.write_record(&t.header)?;
        for r in &t.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        names.push(file);
    }
    let passed = verdict(&outcome.checks);
    let report = RunReport {
        command,
        timestamp: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        config,
        passed,
        checks: &outcome.checks,
        summary: &outcome.summary,
        tables: names,
    };
    let path = dir.join(format!("{command}.json"));
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    fs::write(&path, text)?;
    Ok((path, passed))
}
