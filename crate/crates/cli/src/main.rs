//! `soficlab`: certificates, witness search, shift amplification, formula
//! evaluation and metric validation for finite bi-invariant metric groups.

use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod args;
mod cmd;
mod output;

use output::{Format, Outcome};

#[derive(Parser)]
#[command(name = "soficlab", version, about = "Computation with finite bi-invariant metric groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Lower bounds on the metric defect of (Z(p), d_Lee).
    Certify(cmd::certify::CertifyArgs),
    /// Search for approximate embeddings of a fragment into a target family.
    Solve(cmd::solve::SolveArgs),
    /// Run the shift-amplification pipeline on witness files.
    Amplify(cmd::amplify::AmplifyArgs),
    /// Evaluate a continuous-logic formula in a finite metric group.
    Eval(cmd::eval::EvalArgs),
    /// Check the bi-invariant metric axioms of a group.
    Validate(cmd::validate::ValidateArgs),
    /// Write a natural or regular permutation witness file.
    Witness(cmd::witness::WitnessArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Certify(a) => cmd::certify::run(a),
        Command::Solve(a) => cmd::solve::run(a),
        Command::Amplify(a) => cmd::amplify::run(a),
        Command::Eval(a) => cmd::eval::run(a),
        Command::Validate(a) => cmd::validate::run(a),
        Command::Witness(a) => cmd::witness::run(a),
    };
    let outcome = result.and_then(|report| output::emit(&report, cli.format, cli.out.as_deref()));
    match outcome {
        Ok(Outcome::Passed) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("soficlab: {e}");
            ExitCode::from(output::exit_code(&e))
        }
    }
}
