use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde_json::Value;
use soficlab_core::report::{Envelope, ReportNumber};
use soficlab_core::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Passed,
    Failed,
}

pub enum Body {
    /// Wrapped in an [`Envelope`] for JSON, flattened to `table` for CSV.
    Report { config: Value, result: Value, table: Table },
    /// Written verbatim regardless of format.
    Raw(String),
}

pub struct Report {
    pub body: Body,
    pub outcome: Outcome,
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub fn to_value<T: serde::Serialize>(value: &T) -> Result<Value> {
    serde_json::to_value(value).map_err(|e| Error::Evaluation(format!("serializing report: {e}")))
}

pub fn number_text(n: &ReportNumber) -> (String, &'static str) {
    match n {
        ReportNumber::Exact { value } => (value.clone(), "exact"),
        ReportNumber::Numeric { value, .. } => (value.to_string(), "numeric"),
    }
}

fn render(report: &Report, format: Format) -> Result<String> {
    match (&report.body, format) {
        (Body::Raw(text), _) => Ok(text.clone()),
        (Body::Report { config, result, .. }, Format::Json) => {
            let envelope = Envelope::new(config.clone(), result.clone());
            let mut text = serde_json::to_string_pretty(&envelope)
                .map_err(|e| Error::Evaluation(format!("serializing report: {e}")))?;
            text.push('\n');
            Ok(text)
        }
        (Body::Report { table, .. }, Format::Csv) => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Evaluation(format!("writing csv: {e}"));
            w.write_record(&table.header).map_err(io)?;
            for row in &table.rows {
                w.write_record(row).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Evaluation(format!("writing csv: {e}")))?;
            String::from_utf8(bytes).map_err(|e| Error::Evaluation(e.to_string()))
        }
    }
}

pub fn emit(report: &Report, format: Format, out: Option<&Path>) -> Result<Outcome> {
    let text = render(report, format)?;
    match out {
        Some(path) => crate::args::write_file(path, &text)?,
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::InvalidArgument(format!("stdout: {e}")))?,
    }
    Ok(report.outcome)
}

pub fn exit_code(error: &Error) -> u8 {
    match error {
        Error::Validation(_) => 1,
        _ => 2,
    }
}
