use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::json;
use soficlab_core::amplifier::{MatrixImages, MatrixWitness, PermWitness};
use soficlab_core::groups::build_group;
use soficlab_core::report::Reportable;
use soficlab_core::solver::{
    solve_discrete, solve_exhaustive_cyclic, solve_local_search, solve_local_search_powers, ApproxInstance, Budget,
    CyclicFamily, Defect, InstanceFile, Mode, Outcome as SearchOutcome, TargetFamily,
};
use soficlab_core::{Error, Permutation, Rational, Result};

use crate::args::{opt_rational, rational, read_file, write_file};
use crate::output::{number_text, to_value, Body, Outcome, Report, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// `discrete` for alpha instances, `local` otherwise.
    Auto,
    /// Random-restart local search over maps into S_n.
    Local,
    /// Regular embedding, then local search, for alpha instances.
    Discrete,
    /// Exact cyclic actions of Z(p) on n points (needs --p, --n, --delta).
    ExhaustiveCyclic,
    /// Local search over powers of one order-p permutation (needs --p, --n, --delta).
    Powers,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CyclicTarget {
    Symmetric,
    Rank,
}

#[derive(Args, Serialize)]
pub struct SolveArgs {
    /// Instance file of key=value lines.
    #[arg(long, conflicts_with_all = ["group", "target"])]
    pub instance: Option<PathBuf>,
    /// Source group spec, e.g. symmetric:n=3:metric=hamming.
    #[arg(long)]
    pub group: Option<String>,
    /// `all` or comma-separated element labels.
    #[arg(long, default_value = "all")]
    pub fragment: String,
    /// Target family, e.g. symmetric:6.
    #[arg(long)]
    pub target: Option<String>,
    /// Acceptance threshold for every defect component.
    #[arg(long, value_parser = rational)]
    #[serde(serialize_with = "opt_rational::serialize")]
    pub delta: Option<Rational>,
    /// Constant alpha off the identity; switches to discrete mode.
    #[arg(long, value_parser = rational)]
    #[serde(serialize_with = "opt_rational::serialize")]
    pub alpha: Option<Rational>,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    pub method: Method,
    /// Prime order for the cyclic methods.
    #[arg(long)]
    pub p: Option<u64>,
    /// Degree (or dimension) for the cyclic methods.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum, default_value_t = CyclicTarget::Symmetric)]
    pub family: CyclicTarget,
    /// Local-search seed (default 0).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Restarts x steps, e.g. 256x2000.
    #[arg(long)]
    pub budget: Option<String>,
    /// Also write the best map as a witness file.
    #[arg(long)]
    #[serde(skip)]
    pub witness_out: Option<PathBuf>,
}

fn required<T: Clone>(value: &Option<T>, flag: &str, method: &str) -> Result<T> {
    value.clone().ok_or_else(|| Error::InvalidArgument(format!("--method {method} needs {flag}")))
}

fn load_instance(args: &SolveArgs) -> Result<(ApproxInstance, u64, Budget)> {
    let (instance, seed, budget) = if let Some(path) = &args.instance {
        let file: InstanceFile = read_file(path)?.parse()?;
        (file.instance, file.seed, file.budget)
    } else {
        let group = build_group(&required(&args.group, "--group or --instance", "local")?)?;
        let fragment = if args.fragment == "all" {
            group.elements().collect()
        } else {
            args.fragment.split(',').map(|l| group.parse_label(l.trim())).collect::<Result<Vec<_>>>()?
        };
        let target: TargetFamily = required(&args.target, "--target", "local")?.parse()?;
        let delta = required(&args.delta, "--delta", "local")?;
        let mut instance = ApproxInstance::new(group, fragment, delta, target)?;
        if let Some(alpha) = &args.alpha {
            instance = instance.with_constant_alpha(alpha.clone())?;
        }
        (instance, 0, Budget::default())
    };
    let seed = args.seed.unwrap_or(seed);
    let budget = match &args.budget {
        Some(b) => b.parse()?,
        None => budget,
    };
    Ok((instance, seed, budget))
}

fn images_json(gamma: &[Permutation]) -> Vec<Vec<usize>> {
    gamma.iter().map(|g| g.images().iter().map(|&x| x as usize + 1).collect()).collect()
}

fn defect_row(method: &str, found: bool, d: &Defect<Rational>) -> Vec<String> {
    let cell = |x: Option<&Rational>| x.map(|v| number_text(&v.report()).0).unwrap_or_default();
    vec![
        method.to_string(),
        if found { "witness" } else { "no-witness" }.to_string(),
        cell(Some(&d.hom)),
        cell(Some(&d.identity)),
        cell(d.metric.as_ref()),
        cell(d.alpha.as_ref()),
        cell(Some(&d.max_component())),
    ]
}

const HEADER: [&str; 7] = ["method", "outcome", "hom", "identity", "metric", "alpha", "max"];

fn search_result(
    method: &str,
    instance: &ApproxInstance,
    outcome: &SearchOutcome<Permutation>,
    extra: serde_json::Value,
) -> Result<(serde_json::Value, Vec<String>)> {
    let w = outcome.witness();
    let result = json!({
        "method": method,
        "source": instance.source().name(),
        "fragment": instance.fragment_labels(),
        "target": instance.target().to_string(),
        "delta": number_text(&instance.delta().report()).0,
        "mode": match instance.mode() { Mode::Metric => "metric", Mode::Alpha(_) => "alpha" },
        "outcome": if outcome.is_witness() { "witness" } else { "no-witness" },
        "defect": to_value(&w.defect)?,
        "images": images_json(&w.gamma),
        "search": extra,
    });
    Ok((result, defect_row(method, outcome.is_witness(), &w.defect)))
}

fn write_perm_witness(path: &Option<PathBuf>, instance: &ApproxInstance, outcome: &SearchOutcome<Permutation>) -> Result<()> {
    if let Some(path) = path {
        let w = outcome.witness();
        let file = PermWitness::new(instance.source().name(), instance.fragment_labels(), w.gamma.clone())?;
        write_file(path, &(file.to_json(Some(&w.defect))? + "\n"))?;
    }
    Ok(())
}

pub fn run(args: &SolveArgs) -> Result<Report> {
    let instance_text = args.instance.as_deref().map(read_file).transpose()?;
    let (result, row) = match args.method {
        Method::ExhaustiveCyclic => {
            let name = "exhaustive-cyclic";
            let (p, n, delta) = (required(&args.p, "--p", name)?, required(&args.n, "--n", name)?, required(&args.delta, "--delta", name)?);
            let family = match args.family {
                CyclicTarget::Symmetric => CyclicFamily::Symmetric,
                CyclicTarget::Rank => CyclicFamily::Rank,
            };
            let solution = solve_exhaustive_cyclic(p, n, family, &delta)?;
            if let Some(path) = &args.witness_out {
                let text = match family {
                    CyclicFamily::Symmetric => {
                        let w = solution.permutation_witness(delta.clone())?;
                        let labels = (0..p).map(|m| m.to_string()).collect();
                        PermWitness::new(format!("cyclic:p={p}:metric=lee"), labels, w.gamma.clone())?.to_json(Some(&w.defect))?
                    }
                    CyclicFamily::Rank => {
                        let w = solution.rank_witness(delta.clone())?;
                        let labels = (0..p).map(|m| m.to_string()).collect();
                        MatrixWitness::new(format!("cyclic:p={p}:metric=lee"), labels, MatrixImages::Exponent(w.gamma))?.to_json()?
                    }
                };
                write_file(path, &(text + "\n"))?;
            }
            let row = vec![
                name.to_string(),
                if solution.accepted { "witness" } else { "no-witness" }.into(),
                "0".into(),
                "0".into(),
                number_text(&solution.defect.report()).0,
                String::new(),
                number_text(&solution.defect.report()).0,
            ];
            (json!({ "method": name, "solution": to_value(&solution)? }), row)
        }
        Method::Powers => {
            let name = "powers";
            let (p, n, delta) = (required(&args.p, "--p", name)?, required(&args.n, "--n", name)?, required(&args.delta, "--delta", name)?);
            let budget = match &args.budget {
                Some(b) => b.parse()?,
                None => Budget::default(),
            };
            let report = solve_local_search_powers(p, n, delta.clone(), budget, args.seed.unwrap_or(0))?;
            let group = build_group(&format!("cyclic:p={p}:metric=lee"))?;
            let instance = ApproxInstance::full(group, delta, TargetFamily::Symmetric(n))?;
            write_perm_witness(&args.witness_out, &instance, &report.outcome)?;
            search_result(name, &instance, &report.outcome, to_value(&report)?)?
        }
        Method::Auto | Method::Local | Method::Discrete => {
            let (instance, seed, budget) = load_instance(args)?;
            let discrete = match args.method {
                Method::Auto => matches!(instance.mode(), Mode::Alpha(_)),
                m => m == Method::Discrete,
            };
            if discrete {
                let outcome = solve_discrete(&instance, budget, seed)?;
                write_perm_witness(&args.witness_out, &instance, &outcome)?;
                search_result("discrete", &instance, &outcome, json!({ "seed": seed, "budget": budget }))?
            } else {
                let report = solve_local_search(&instance, budget, seed)?;
                write_perm_witness(&args.witness_out, &instance, &report.outcome)?;
                search_result("local", &instance, &report.outcome, to_value(&report)?)?
            }
        }
    };
    Ok(Report {
        body: Body::Report {
            config: to_value(&json!({ "command": "solve", "args": args, "instance_file": instance_text }))?,
            result,
            table: Table { header: HEADER.to_vec(), rows: vec![row] },
        },
        outcome: Outcome::Passed,
    })
}
