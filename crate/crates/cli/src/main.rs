//! `snlkit` — check positivity, maximality, and duality structure of
//! subspaces under symmetric nonexpansive pairings.
//!
//! Commands read a JSON instance file and write a JSON report to stdout
//! (and, with `--json`, to a file — same bytes). Exit codes: 0 for
//! `Pass`/`Inconclusive` verdicts and pure computations, 1 for `Fail`,
//! 2 for any error (bad input, missing fields, violated invariants).

mod commands;
mod error;
mod instance;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{FixtureOptions, FixtureOutput, Overrides};
use error::CliError;
use instance::InstanceFile;
use snlkit_core::convex::Kind;

#[derive(Parser)]
#[command(name = "snlkit", version, about, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags common to the instance-driven commands. Flags override the
/// matching instance-file fields, which override built-in defaults.
#[derive(Args, Debug)]
struct InstanceArgs {
    /// Path to the instance JSON file.
    instance: PathBuf,
    /// Numeric tolerance for the check.
    #[arg(long)]
    tol: Option<f64>,
    /// Seed for any randomized step.
    #[arg(long)]
    seed: Option<u64>,
    /// Trial budget for search procedures.
    #[arg(long)]
    trials: Option<usize>,
    /// Sample count for randomized sweeps.
    #[arg(long)]
    samples: Option<usize>,
    /// Also write the report to this path (byte-identical to stdout).
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check that the spanned subspace is positive for the pairing.
    CheckPositive(InstanceArgs),
    /// Check that the spanned subspace is negative for the pairing.
    CheckNegative(InstanceArgs),
    /// Check maximal positivity via negativity of the polar.
    CheckMaximal(InstanceArgs),
    /// Check maximal negativity via positivity of the polar.
    CheckMaximalNegative(InstanceArgs),
    /// Compute an orthonormal basis of the polar subspace.
    Polar(InstanceArgs),
    /// Compute the adjoint of the relation whose graph is spanned by `basis`.
    Adjoint(InstanceArgs),
    /// Evaluate the conjugate of the pairing form restricted to an affine set at `bstar`.
    Conjugate(InstanceArgs),
    /// Compute the subdifferential of the restricted form at `b`.
    Subdiff {
        #[command(flatten)]
        args: InstanceArgs,
        /// Base function: `q` (pairing form) or `p` (pairing form plus half the squared norm).
        #[arg(long, default_value = "q")]
        kind: String,
    },
    /// Minimize the augmented form over the affine set (value and argmin).
    InfPc(InstanceArgs),
    /// Turn an approximate subgradient pair (`b`, `bstar`) with gap at most eta^2 into an exact pair.
    BrRefine {
        #[command(flatten)]
        args: InstanceArgs,
        /// Bound: the duality gap of the input pair must be at most eta^2.
        #[arg(long)]
        eta: f64,
    },
    /// Check the negative-infimum property of a monotone relation (four-way pattern).
    NiCheck(InstanceArgs),
    /// Check that maximality, adjoint monotonicity, adjoint maximality, and the
    /// negative-infimum property agree (constant truth table).
    BbCheck(InstanceArgs),
    /// Verify the dual-pairing identities on random samples.
    ValidateDual(InstanceArgs),
    /// Search for a positive extension refuting maximality of the subspace.
    Oracle(InstanceArgs),
    /// Emit a named example instance, or run the helix pairwise-positivity harness.
    Fixtures {
        /// One of: identity, negidentity, swap3, cyclic3, product, line-1m12,
        /// helix, scaled-helix.
        name: String,
        /// Dimension for identity/negidentity, half-dimension for product.
        #[arg(long)]
        dim: Option<usize>,
        /// Helix pitch scale.
        #[arg(long)]
        lambda: Option<f64>,
        /// Number of scanned pairs for the helix harness.
        #[arg(long)]
        samples: Option<usize>,
        /// Parameter range half-width for the helix harness.
        #[arg(long)]
        theta_max: Option<f64>,
        /// Scan seed for the helix harness.
        #[arg(long)]
        seed: Option<u64>,
        /// Also write the output to this path (byte-identical to stdout).
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((output, json_path, code)) => {
            if let Some(path) = json_path {
                if let Err(err) = std::fs::write(&path, &output) {
                    eprintln!("error: io error: {err}");
                    return ExitCode::from(2);
                }
            }
            print!("{output}");
            ExitCode::from(code)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

type Outcome = (String, Option<PathBuf>, u8);

fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::CheckPositive(args) => instance_command(args, commands::check_positive),
        Command::CheckNegative(args) => instance_command(args, commands::check_negative),
        Command::CheckMaximal(args) => instance_command(args, commands::check_maximal),
        Command::CheckMaximalNegative(args) => {
            instance_command(args, commands::check_maximal_negative)
        }
        Command::Polar(args) => instance_command(args, |inst, _| commands::polar(inst)),
        Command::Adjoint(args) => instance_command(args, |inst, _| commands::adjoint(inst)),
        Command::Conjugate(args) => instance_command(args, |inst, _| commands::conjugate(inst)),
        Command::Subdiff { args, kind } => {
            let kind = parse_kind(&kind)?;
            instance_command(args, move |inst, _| commands::subdiff(inst, kind))
        }
        Command::InfPc(args) => instance_command(args, |inst, _| commands::inf_pc(inst)),
        Command::BrRefine { args, eta } => {
            instance_command(args, move |inst, _| commands::br_refine(inst, eta))
        }
        Command::NiCheck(args) => instance_command(args, commands::ni_check),
        Command::BbCheck(args) => instance_command(args, commands::bb_check),
        Command::ValidateDual(args) => instance_command(args, commands::validate_dual),
        Command::Oracle(args) => instance_command(args, commands::oracle),
        Command::Fixtures {
            name,
            dim,
            lambda,
            samples,
            theta_max,
            seed,
            json,
        } => {
            let opts = FixtureOptions {
                dim,
                lambda,
                samples,
                theta_max,
                seed,
            };
            match commands::fixtures(&name, &opts)? {
                FixtureOutput::Instance(text) => Ok((text, json, 0)),
                FixtureOutput::Report(report) => {
                    Ok((report.to_json(), json, report.exit_code() as u8))
                }
            }
        }
    }
}

fn instance_command<F>(args: InstanceArgs, handler: F) -> Result<Outcome, CliError>
where
    F: FnOnce(&InstanceFile, &Overrides) -> Result<report::ReportFile, CliError>,
{
    let inst = InstanceFile::load(&args.instance)?;
    let overrides = Overrides {
        tol: args.tol,
        seed: args.seed,
        trials: args.trials,
        samples: args.samples,
    };
    let report = handler(&inst, &overrides)?;
    Ok((report.to_json(), args.json, report.exit_code() as u8))
}

fn parse_kind(text: &str) -> Result<Kind, CliError> {
    match text {
        "q" | "Q" => Ok(Kind::Q),
        "p" | "P" => Ok(Kind::P),
        other => Err(CliError::command(format!(
            "unknown kind `{other}`, expected `q` or `p`"
        ))),
    }
}
