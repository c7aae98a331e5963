use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde_json::{json, Value};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// A command result: the JSON payload plus a flat view for csv and table output.
pub struct Report {
    pub command: &'static str,
    pub result: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// False when a verification inside the command failed.
    pub ok: bool,
    pub failure: Option<String>,
}

impl Report {
    pub fn new(command: &'static str, result: Value) -> Self {
        Self { command, result, header: Vec::new(), rows: Vec::new(), ok: true, failure: None }
    }

    pub fn table(mut self, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        self.header = header.iter().map(|s| s.to_string()).collect();
        self.rows = rows;
        self
    }

    pub fn failed_if(mut self, failed: bool, why: impl Into<String>) -> Self {
        if failed {
            self.ok = false;
            self.failure = Some(why.into());
        }
        self
    }

    pub fn envelope(&self) -> Value {
        json!({
            "schema": nilmetriq::verify::SCHEMA,
            "command": self.command,
            "result": self.result,
        })
    }
}

pub fn emit(report: &Report, format: Format) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    let io = |e: std::io::Error| CliError::Failed(format!("write failed: {e}"));
    match format {
        Format::Json => {
            let text = serde_json::to_string_pretty(&report.envelope()).expect("values serialize");
            writeln!(out, "{text}").map_err(io)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            if !report.header.is_empty() {
                w.write_record(&report.header).map_err(|e| CliError::Failed(e.to_string()))?;
            }
            for r in &report.rows {
                w.write_record(r).map_err(|e| CliError::Failed(e.to_string()))?;
            }
            w.flush().map_err(io)?;
        }
        Format::Table => {
            let mut widths: Vec<usize> = report.header.iter().map(|h| h.chars().count()).collect();
            for r in &report.rows {
                for (i, c) in r.iter().enumerate() {
                    if i >= widths.len() {
                        widths.push(0);
                    }
                    widths[i] = widths[i].max(c.chars().count());
                }
            }
            let line = |cells: &[String]| {
                cells
                    .iter()
                    .enumerate()
                    .map(|(i, c)| format!("{c:<w$}", w = widths[i]))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            if !report.header.is_empty() {
                writeln!(out, "{}", line(&report.header)).map_err(io)?;
                let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
                writeln!(out, "{}", line(&rule)).map_err(io)?;
            }
            for r in &report.rows {
                writeln!(out, "{}", line(r)).map_err(io)?;
            }
        }
    }
    Ok(())
}

/// Compares the JSON envelope with a golden file.
pub fn compare(report: &Report, path: &Path) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let golden: Value =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{} is not JSON: {e}", path.display())))?;
    let got = report.envelope();
    // Accept either the full envelope or just the result payload.
    if golden == got || golden == got["result"] {
        Ok(())
    } else {
        Err(CliError::Mismatch(format!("output differs from {}", path.display())))
    }
}
