use clap::Args;
use serde::Serialize;
use serde_json::json;
use soficlab_core::constructions::{check_floor, shift_floor};
use soficlab_core::groups::{off_diagonal_floor, GroupSpec};
use soficlab_core::report::Reportable;
use soficlab_core::scalar::format_rational;
use soficlab_core::{FiniteMetricGroup, Rational, Result, Scalar};

use crate::args::{opt_rational, rational};
use crate::output::{number_text, to_value, Body, Outcome, Report, Table};

#[derive(Args, Serialize)]
pub struct ValidateArgs {
    /// Group spec, e.g. shift(cyclic:p=13:metric=lee,eps=1/2).
    #[arg(long)]
    pub group: String,
    /// Required off-diagonal floor; defaults to eps/(1+eps) for shift specs.
    #[arg(long, value_parser = rational)]
    #[serde(serialize_with = "opt_rational::serialize")]
    pub floor: Option<Rational>,
    /// Validate in floating point.
    #[arg(long)]
    pub numeric: bool,
}

fn validate_in<S: Scalar + Reportable>(group: &FiniteMetricGroup<S>, floor: Option<&Rational>) -> (serde_json::Value, Vec<String>, bool) {
    let report = group.validate();
    let minimum = off_diagonal_floor(group);
    let floor_ok = floor.map(|f| check_floor(group, &S::from_rational(f)).is_ok());
    let passed = report.passed() && floor_ok.unwrap_or(true);
    let min_text = minimum.as_ref().map(|m| number_text(&m.report()).0).unwrap_or_default();
    let row = vec![
        report.group.clone(),
        passed.to_string(),
        report.checks.to_string(),
        report.violation_count.to_string(),
        min_text,
        floor.map(format_rational).unwrap_or_default(),
    ];
    let result = json!({
        "report": report,
        "off_diagonal_minimum": minimum.map(|m| m.report()),
        "floor": floor.map(|f| json!({ "required": format_rational(f), "holds": floor_ok })),
        "passed": passed,
    });
    (result, row, passed)
}

pub fn run(args: &ValidateArgs) -> Result<Report> {
    let spec: GroupSpec = args.group.parse()?;
    let group = spec.build()?;
    let floor = args.floor.clone().or_else(|| match &spec {
        GroupSpec::Shift { eps, .. } => Some(shift_floor(eps)),
        _ => None,
    });
    let (result, row, passed) = if args.numeric {
        validate_in(&group.to_numeric(), floor.as_ref())
    } else {
        validate_in(&group, floor.as_ref())
    };
    Ok(Report {
        body: Body::Report {
            config: to_value(&json!({ "command": "validate", "args": args }))?,
            result,
            table: Table {
                header: vec!["group", "passed", "checks", "violations", "off_diagonal_minimum", "floor"],
                rows: vec![row],
            },
        },
        outcome: if passed { Outcome::Passed } else { Outcome::Failed },
    })
}
