//! Serializable report values with explicit provenance.

use serde::{Deserialize, Serialize};

use crate::scalar::{format_rational, Rational, UNITARY_TOLERANCE};

/// A reported number: exact rational (as `"a/b"`) or a double with its tolerance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "provenance", rename_all = "kebab-case")]
pub enum ReportNumber {
    Exact { value: String },
    Numeric { value: f64, tolerance: f64 },
}

impl ReportNumber {
    pub fn exact(value: &Rational) -> Self {
        ReportNumber::Exact { value: format_rational(value) }
    }

    pub fn numeric(value: f64, tolerance: f64) -> Self {
        ReportNumber::Numeric { value, tolerance }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ReportNumber::Exact { .. })
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ReportNumber::Exact { value } => crate::scalar::parse_rational(value)
                .map(|r| crate::scalar::Scalar::to_f64(&r))
                .unwrap_or(f64::NAN),
            ReportNumber::Numeric { value, .. } => *value,
        }
    }
}

/// Scalars that know how to describe themselves in a report.
pub trait Reportable {
    fn report(&self) -> ReportNumber;
}

impl Reportable for Rational {
    fn report(&self) -> ReportNumber {
        ReportNumber::exact(self)
    }
}

impl Reportable for f64 {
    fn report(&self) -> ReportNumber {
        ReportNumber::numeric(*self, UNITARY_TOLERANCE)
    }
}

/// Top-level wrapper written by every tool invocation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub tool: String,
    pub version: String,
    pub config: serde_json::Value,
    pub result: T,
}

impl<T> Envelope<T> {
    pub fn new(config: serde_json::Value, result: T) -> Self {
        Envelope { tool: "soficlab".into(), version: crate::VERSION.into(), config, result }
    }
}
