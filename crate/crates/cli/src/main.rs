//! `logconn`: runs a JSON job against the finite model and prints a JSON report.
//!
//! Exit codes: 0 success, 1 a verification failed (report still written), 2 bad input.

mod commands;
mod expr;
mod job;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{Options, Outcome};
use job::JobSpec;

#[derive(Parser)]
#[command(name = "logconn", version, about = "Exact checks on finite models of logarithmic flat connections")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Weight bases, U_0 bases and H^0/H^1 representatives.
    Basis(Common),
    /// Maurer-Cartan residuals for a connection or a parametric family.
    Mc(Common),
    /// Gauge a pure C connection into the H^1 complement.
    Normalize(Common),
    /// Cohomology dimensions of the tangent complex.
    Tangent(Common),
    /// Contraction and perturbation identity checks.
    Hpt {
        #[command(flatten)]
        common: Common,
        /// Debug: replace every homotopy by zero to exercise the failure report.
        #[arg(long, hide = true)]
        inject_zero_homotopy: bool,
    },
    /// Manin triple axiom checks.
    Manin(Common),
}

#[derive(Args)]
struct Common {
    /// Job file (JSON); `-` reads stdin.
    #[arg(long)]
    input: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Weight truncation bound, overriding the job.
    #[arg(long)]
    wmax: Option<i64>,
    /// Seed for randomized sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn read_input(path: &PathBuf) -> Result<String, String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).map_err(|e| format!("reading stdin: {e}"))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))
    }
}

fn run(cli: Cli) -> Result<(Outcome, Option<PathBuf>), String> {
    let (common, inject) = match &cli.cmd {
        Cmd::Hpt { common, inject_zero_homotopy } => (common, *inject_zero_homotopy),
        Cmd::Basis(c) | Cmd::Mc(c) | Cmd::Normalize(c) | Cmd::Tangent(c) | Cmd::Manin(c) => (c, false),
    };
    let spec = JobSpec::parse(&read_input(&common.input)?)?;
    let job = spec.validate(common.wmax)?;
    let opts = Options { seed: common.seed, inject_zero_homotopy: inject };
    let outcome = match &cli.cmd {
        Cmd::Basis(_) => commands::basis(&job),
        Cmd::Mc(_) => commands::mc(&job, &opts),
        Cmd::Normalize(_) => commands::normalize(&job),
        Cmd::Tangent(_) => commands::tangent(&job),
        Cmd::Hpt { .. } => commands::hpt(&job, &opts),
        Cmd::Manin(_) => commands::manin(&job),
    }?;
    Ok((outcome, common.out.clone()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (outcome, out) = match run(cli) {
        Ok(x) => x,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let mut text = serde_json::to_string_pretty(&outcome.report).expect("report is valid JSON");
    text.push('\n');
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, &text) {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
