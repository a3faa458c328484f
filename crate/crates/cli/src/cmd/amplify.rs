use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use serde_json::{json, Value};
use soficlab_core::amplifier::{linear_shift_amplify, shift_amplify, shift_degrees, MatrixWitness, PermWitness};
use soficlab_core::constructions::shift_metric;
use soficlab_core::groups::build_group;
use soficlab_core::scalar::format_rational;
use soficlab_core::{Error, FiniteMetricGroup, Rational, Result};

use crate::args::{rational, read_file, write_file};
use crate::output::{to_value, Body, Outcome, Report, Table};

#[derive(Args, Serialize)]
pub struct AmplifyArgs {
    /// Witness for the base metric (permutation or exponent-vector JSON).
    #[arg(long)]
    pub theta: PathBuf,
    /// Discrete witness (permutation) or d_omega witness (exponent-vector).
    #[arg(long)]
    pub theta_prime: Option<PathBuf>,
    #[arg(long, value_parser = rational)]
    #[serde(with = "soficlab_core::scalar::rational_string")]
    pub eps: Rational,
    /// Allowed deviation of output distances from the shifted metric.
    #[arg(long, default_value = "0", value_parser = rational)]
    #[serde(with = "soficlab_core::scalar::rational_string")]
    pub tol: Rational,
    /// Group spec carrying d_omega, for exponent-vector witnesses.
    #[arg(long)]
    pub omega_group: Option<String>,
    /// Also write the amplified witness.
    #[arg(long)]
    #[serde(skip)]
    pub witness_out: Option<PathBuf>,
}

fn kind_of(text: &str) -> Result<String> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("witness file: {e}")))?;
    Ok(v.get("kind").and_then(Value::as_str).unwrap_or_default().to_string())
}

fn label_table(group: &FiniteMetricGroup, labels: &[String]) -> Result<Vec<Vec<Rational>>> {
    let idx = labels.iter().map(|l| group.parse_label(l)).collect::<Result<Vec<_>>>()?;
    Ok(idx.iter().map(|&i| idx.iter().map(|&j| group.distance(i, j)).collect()).collect())
}

struct Comparison {
    pairs: Vec<Value>,
    rows: Vec<Vec<String>>,
    all_within: bool,
}

fn compare(labels: &[String], actual: impl Fn(usize, usize) -> Result<Rational>, expected: Option<&Vec<Vec<Rational>>>, tol: &Rational) -> Result<Comparison> {
    let mut out = Comparison { pairs: Vec::new(), rows: Vec::new(), all_within: true };
    for i in 0..labels.len() {
        for j in i + 1..labels.len() {
            let d = actual(i, j)?;
            let target = expected.map(|t| t[i][j].clone());
            let within = target.as_ref().map(|t| {
                let gap = if d > *t { &d - t } else { t - &d };
                gap <= *tol
            });
            out.all_within &= within.unwrap_or(true);
            out.pairs.push(json!({
                "g": labels[i],
                "h": labels[j],
                "distance": format_rational(&d),
                "expected": target.as_ref().map(format_rational),
                "within_tol": within,
            }));
            out.rows.push(vec![
                labels[i].clone(),
                labels[j].clone(),
                format_rational(&d),
                target.as_ref().map(format_rational).unwrap_or_default(),
                within.map(|w| w.to_string()).unwrap_or_default(),
            ]);
        }
    }
    Ok(out)
}

fn permutation(args: &AmplifyArgs, theta_text: &str) -> Result<(Value, Comparison)> {
    let theta = PermWitness::from_json(theta_text)?;
    let theta_prime = args.theta_prime.as_deref().map(read_file).transpose()?.map(|t| PermWitness::from_json(&t)).transpose()?;
    let out = shift_amplify(&theta, theta_prime.as_ref(), &args.eps)?;
    let shifted = match build_group(theta.source()) {
        Ok(base) if theta_prime.is_some() => Some(shift_metric(&base, &args.eps)?),
        Ok(base) => Some(base),
        Err(_) => None,
    };
    let expected = shifted.as_ref().map(|g| label_table(g, out.fragment())).transpose()?;
    let cmp = compare(out.fragment(), |i, j| Ok(out.distance(i, j)), expected.as_ref(), &args.tol)?;
    let degrees = match &theta_prime {
        Some(tp) => {
            let (r, m, rest) = shift_degrees(&theta, tp, &args.eps)?;
            json!({ "theta": theta.degree(), "theta_prime": tp.degree(), "theta_prime_copies": r, "theta_copies": rest / theta.degree(), "m": m, "m_prime": m + rest })
        }
        None => json!({ "theta": theta.degree(), "m": 0, "m_prime": out.degree() }),
    };
    let defect = match &shifted {
        Some(g) => Some(to_value(&out.defect_against(g)?)?),
        None => None,
    };
    if let Some(path) = &args.witness_out {
        let declared = shifted.as_ref().map(|g| out.defect_against(g)).transpose()?;
        write_file(path, &(out.to_json(declared.as_ref())? + "\n"))?;
    }
    let result = json!({
        "kind": "permutation",
        "source": out.source(),
        "degrees": degrees,
        "pairs": cmp.pairs,
        "defect": defect,
        "verified": expected.is_some(),
    });
    Ok((result, cmp))
}

fn exponent(args: &AmplifyArgs, theta_text: &str) -> Result<(Value, Comparison)> {
    let theta = MatrixWitness::from_json(theta_text)?;
    let path = args
        .theta_prime
        .as_deref()
        .ok_or_else(|| Error::InvalidArgument("the rank pipeline needs --theta-prime".into()))?;
    let theta_prime = MatrixWitness::from_json(&read_file(path)?)?;
    let omega = args.omega_group.as_deref().map(build_group).transpose()?;
    let omega_table = omega.as_ref().map(|g| label_table(g, theta.fragment())).transpose()?;
    let out = linear_shift_amplify(&theta, &theta_prime, omega_table.as_deref(), &args.eps, &args.tol)?;
    let expected = match (build_group(theta.source()), &omega_table) {
        (Ok(base), Some(w)) => {
            let d = label_table(&base, theta.fragment())?;
            let one = Rational::from_integer(1.into());
            Some(
                d.iter()
                    .zip(w)
                    .map(|(dr, wr)| dr.iter().zip(wr).map(|(x, y)| (x + &args.eps * y) / (&one + &args.eps)).collect())
                    .collect(),
            )
        }
        _ => None,
    };
    let cmp = compare(out.fragment(), |i, j| out.rank_distance(i, j), expected.as_ref(), &args.tol)?;
    if let Some(path) = &args.witness_out {
        write_file(path, &(out.to_json()? + "\n"))?;
    }
    let result = json!({
        "kind": "exponent-vector",
        "source": out.source(),
        "degrees": { "theta": theta.dimension(), "theta_prime": theta_prime.dimension(), "m_prime": out.dimension() },
        "pairs": cmp.pairs,
        "verified": expected.is_some(),
    });
    Ok((result, cmp))
}

pub fn run(args: &AmplifyArgs) -> Result<Report> {
    let theta_text = read_file(&args.theta)?;
    let (result, cmp) = match kind_of(&theta_text)?.as_str() {
        "permutation" => permutation(args, &theta_text)?,
        "exponent-vector" => exponent(args, &theta_text)?,
        other => {
            return Err(Error::InvalidArgument(format!(
                "amplify takes permutation or exponent-vector witnesses, found kind {other:?}"
            )))
        }
    };
    let theta_prime_text = args.theta_prime.as_deref().map(read_file).transpose()?;
    Ok(Report {
        body: Body::Report {
            config: to_value(&json!({ "command": "amplify", "args": args, "theta": serde_json::from_str::<Value>(&theta_text).ok(), "theta_prime": theta_prime_text.and_then(|t| serde_json::from_str::<Value>(&t).ok()) }))?,
            result,
            table: Table { header: vec!["g", "h", "distance", "expected", "within_tol"], rows: cmp.rows },
        },
        outcome: if cmp.all_within { Outcome::Passed } else { Outcome::Failed },
    })
}
