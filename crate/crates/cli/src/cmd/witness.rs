use clap::Args;
use soficlab_core::amplifier::PermWitness;
use soficlab_core::groups::build_group;
use soficlab_core::{Error, Result};

use crate::output::{Body, Outcome, Report};

#[derive(Args)]
#[command(group(clap::ArgGroup::new("kind").required(true).args(["natural", "regular"])))]
pub struct WitnessArgs {
    /// Identity map of (S_n, d_H) into S_n.
    #[arg(long)]
    pub natural: Option<usize>,
    /// Left-regular action of the given group spec.
    #[arg(long)]
    pub regular: Option<String>,
    /// `all` or comma-separated labels (regular witnesses only).
    #[arg(long, default_value = "all")]
    pub fragment: String,
}

pub fn run(args: &WitnessArgs) -> Result<Report> {
    let witness = match (&args.natural, &args.regular) {
        (Some(n), _) => PermWitness::natural_symmetric(*n)?,
        (None, Some(spec)) => {
            let group = build_group(spec)?;
            let fragment = if args.fragment == "all" {
                group.elements().collect()
            } else {
                args.fragment.split(',').map(|l| group.parse_label(l.trim())).collect::<Result<Vec<_>>>()?
            };
            PermWitness::regular(&group, &fragment)?
        }
        (None, None) => return Err(Error::InvalidArgument("pass --natural or --regular".into())),
    };
    Ok(Report { body: Body::Raw(witness.to_json(None)? + "\n"), outcome: Outcome::Passed })
}
