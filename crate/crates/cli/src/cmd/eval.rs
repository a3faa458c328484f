use clap::Args;
use serde::Serialize;
use serde_json::{json, Map, Value};
use soficlab_core::groups::build_group;
use soficlab_core::logic::{check_condition, evaluate, is_sup_sentence, parse, Assignment, Formula};
use soficlab_core::report::{ReportNumber, Reportable};
use soficlab_core::scalar::format_rational;
use soficlab_core::{Error, FiniteMetricGroup, Rational, Result, Scalar};

use crate::args::rational;
use crate::output::{number_text, to_value, Body, Outcome, Report, Table};

#[derive(Args, Serialize)]
pub struct EvalArgs {
    /// Group spec, e.g. cyclic:p=13:metric=lee.
    #[arg(long)]
    pub group: String,
    /// Formula, e.g. "sup x. sup y. d(x*y, y*x)".
    #[arg(long)]
    pub formula: String,
    /// Free-variable bindings `var=label`, comma-separated or repeated.
    #[arg(long, value_delimiter = ',')]
    pub assign: Vec<String>,
    /// Evaluate in floating point instead of exact rationals.
    #[arg(long)]
    pub numeric: bool,
    /// Treat the formula as a condition `F <= tol`; exit 1 when it fails.
    #[arg(long)]
    pub check: bool,
    #[arg(long, default_value = "0", value_parser = rational)]
    #[serde(with = "soficlab_core::scalar::rational_string")]
    pub tol: Rational,
}

fn assignment<S: Scalar>(group: &FiniteMetricGroup<S>, bindings: &[String]) -> Result<Assignment> {
    let mut out = Assignment::new();
    for b in bindings {
        let (var, label) = b
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("binding {b:?} is not var=label")))?;
        out.insert(var.trim().to_string(), group.parse_label(label.trim())?);
    }
    Ok(out)
}

fn run_in<S: Scalar + Reportable>(
    formula: &Formula,
    group: &FiniteMetricGroup<S>,
    args: &EvalArgs,
) -> Result<(ReportNumber, Option<bool>)> {
    let value = evaluate(formula, group, &assignment(group, &args.assign)?)?;
    let holds = if args.check {
        if !formula.is_sentence() {
            return Err(Error::InvalidArgument("--check needs a sentence".into()));
        }
        Some(check_condition(formula, group, &S::from_rational(&args.tol))?)
    } else {
        None
    };
    Ok((value.report(), holds))
}

pub fn run(args: &EvalArgs) -> Result<Report> {
    let formula = parse(&args.formula)?;
    let group = build_group(&args.group)?;
    let (value, holds) = if args.numeric { run_in(&formula, &group.to_numeric(), args)? } else { run_in(&formula, &group, args)? };
    let mut lipschitz = Map::new();
    for var in formula.free_vars() {
        lipschitz.insert(var.clone(), Value::String(format_rational(&formula.lipschitz_modulus(&var))));
    }
    let sup_sentence = if formula.is_sentence() { Some(is_sup_sentence(&formula)?) } else { None };
    let (text, provenance) = number_text(&value);
    let result = json!({
        "formula": formula.to_string(),
        "group": group.name(),
        "value": to_value(&value)?,
        "sentence": formula.is_sentence(),
        "sup_sentence": sup_sentence,
        "lipschitz_moduli": lipschitz,
        "condition": holds.map(|h| json!({ "tol": format_rational(&args.tol), "holds": h })),
    });
    Ok(Report {
        body: Body::Report {
            config: to_value(&json!({ "command": "eval", "args": args }))?,
            result,
            table: Table {
                header: vec!["formula", "group", "value", "provenance", "holds"],
                rows: vec![vec![
                    formula.to_string(),
                    group.name().to_string(),
                    text,
                    provenance.into(),
                    holds.map(|h| h.to_string()).unwrap_or_default(),
                ]],
            },
        },
        outcome: if holds == Some(false) { Outcome::Failed } else { Outcome::Passed },
    })
}
