//! Result tables and summaries.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// One (parameter point, statistic) line of the results table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub point: String,
    pub statistic: String,
    pub value: f64,
    pub threshold: Option<f64>,
    pub pass: Option<bool>,
}

impl Row {
    pub fn info(point: impl Into<String>, statistic: &str, value: f64) -> Self {
        Self {
            point: point.into(),
            statistic: statistic.to_string(),
            value,
            threshold: None,
            pass: None,
        }
    }

    /// A checked row that passes when value <= threshold.
    pub fn below(point: impl Into<String>, statistic: &str, value: f64, threshold: f64) -> Self {
        Self {
            point: point.into(),
            statistic: statistic.to_string(),
            value,
            threshold: Some(threshold),
            pass: Some(value <= threshold),
        }
    }

    pub fn flag(point: impl Into<String>, statistic: &str, ok: bool) -> Self {
        Self {
            point: point.into(),
            statistic: statistic.to_string(),
            value: ok as u8 as f64,
            threshold: Some(1.0),
            pass: Some(ok),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub experiment: String,
    pub parameters: serde_json::Value,
    pub statistic: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub summary: Summary,
    pub rows: Vec<Row>,
}

impl Outcome {
    /// Summary passes only if every checked row passes.
    pub fn new<P: Serialize>(experiment: &str, parameters: &P, statistic: f64, threshold: f64, rows: Vec<Row>) -> Self {
        let pass = rows.iter().all(|r| r.pass != Some(false));
        Self {
            summary: Summary {
                experiment: experiment.to_string(),
                parameters: serde_json::to_value(parameters).expect("parameters serialize"),
                statistic,
                threshold,
                pass,
            },
            rows,
        }
    }

    pub fn pass(&self) -> bool {
        self.summary.pass
    }

    pub fn rows_csv(&self) -> String {
        let mut out = String::from("point,statistic,value,threshold,pass\n");
        for r in &self.rows {
            let threshold = r.threshold.map(fmt_float).unwrap_or_default();
            let pass = r.pass.map(|p| p.to_string()).unwrap_or_default();
            writeln!(out, "{},{},{},{},{}", r.point, r.statistic, fmt_float(r.value), threshold, pass)
                .expect("write to string");
        }
        out
    }

    pub fn rows_json(&self) -> String {
        serde_json::to_string_pretty(&self.rows).expect("rows serialize") + "\n"
    }

    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(&self.summary).expect("summary serialize") + "\n"
    }

    /// Writes results.csv or results.json, and summary.json, into `dir`.
    pub fn write(&self, dir: &Path, format: Format) -> io::Result<()> {
        fs::create_dir_all(dir)?;
        match format {
            Format::Csv => fs::write(dir.join("results.csv"), self.rows_csv())?,
            Format::Json => fs::write(dir.join("results.json"), self.rows_json())?,
        }
        fs::write(dir.join("summary.json"), self.summary_json())
    }
}

/// 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}
