use clap::Args;
use serde::Serialize;
use soficlab_core::certifier::{certify, CertifyOptions, Family};
use soficlab_core::{Rational, Result};

use crate::output::{number_text, to_value, Body, Outcome, Report, Table};

#[derive(Args, Serialize)]
pub struct CertifyArgs {
    /// Prime order of the cyclic group.
    #[arg(long)]
    pub p: u64,
    /// symmetric, rank, hs or all.
    #[arg(long, default_value = "all")]
    pub family: String,
    /// Largest degree in the exact enumeration.
    #[arg(long, default_value_t = 200)]
    pub n_max: usize,
    /// Upper end of the transfer-bound table.
    #[arg(long, default_value = "1/100", value_parser = crate::args::rational)]
    #[serde(with = "soficlab_core::scalar::rational_string")]
    pub delta_max: Rational,
    /// Simplex grid resolution for the Hilbert–Schmidt floor.
    #[arg(long, default_value_t = 100)]
    pub resolution: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random order-p elements checked for equilaterality.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
}

pub fn run(args: &CertifyArgs) -> Result<Report> {
    let families = Family::parse_list(&args.family)?;
    let options = CertifyOptions {
        n_max: args.n_max,
        delta_max: args.delta_max.clone(),
        resolution: args.resolution,
        seed: args.seed,
        samples: args.samples,
    };
    let bundle = certify(args.p, &families, &options)?;
    let rows = bundle
        .certificates
        .iter()
        .map(|c| {
            let (floor, provenance) = number_text(&c.floor);
            let family = to_value(&c.family).map(|v| v.as_str().unwrap_or_default().to_string())?;
            let (lo, hi) = c.n_range.map_or((String::new(), String::new()), |[a, b]| (a.to_string(), b.to_string()));
            Ok(vec![family, c.p.to_string(), floor, provenance.into(), c.obstruction.to_string(), lo, hi])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Report {
        body: Body::Report {
            config: to_value(&serde_json::json!({ "command": "certify", "args": args }))?,
            result: to_value(&bundle)?,
            table: Table { header: vec!["family", "p", "floor", "provenance", "obstruction", "n_min", "n_max"], rows },
        },
        outcome: Outcome::Passed,
    })
}
