//! Command-line front end for constructing biclique-free nearly-orthogonal
//! families and certifying their spectral and rank bounds.

mod commands;
mod config;
mod error;
mod formats;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{PartialConfig, RunConfig};
use error::{error_json, CliError};
use formats::ReportFormat;

#[derive(Parser)]
#[command(name = "orthorep", version, about = "biclique-free nearly-orthogonal vector families and their spectral/rank certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct CommonArgs {
    /// Sign-vector length (even, <= 28); give together with --m
    #[arg(long)]
    k: Option<u32>,
    /// Tensor power
    #[arg(long)]
    m: Option<u32>,
    /// Number of vertices / sampled vectors
    #[arg(long)]
    n: Option<usize>,
    /// Forbidden biclique size per side
    #[arg(long)]
    t: Option<usize>,
    /// Sampling seed (all randomness derives from it; no wall-clock seeding)
    #[arg(long)]
    seed: Option<u64>,
    /// Forbidden-intersection constant for schedule mode, in (0, 1/4)
    #[arg(long)]
    epsilon: Option<f64>,
    /// Resampling attempts after the first failure
    #[arg(long)]
    max_retries: Option<u32>,
    /// Nominal work cap for the biclique search (n * C(n, t))
    #[arg(long)]
    budget: Option<u64>,
    /// Zero/nonzero classification tolerance for explicit representations
    #[arg(long)]
    tol: Option<f64>,
    /// Report format: json carries full precision, text rounds to 6 digits
    #[arg(long, value_enum)]
    format: Option<ReportFormat>,
    /// Output directory for generated files
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// JSON config file; flags override it, it overrides defaults
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print the effective configuration and exit
    #[arg(long)]
    print_config: bool,
}

impl CommonArgs {
    fn partial(&self) -> PartialConfig {
        PartialConfig {
            k: self.k,
            m: self.m,
            n: self.n,
            t: self.t,
            seed: self.seed,
            epsilon: self.epsilon,
            max_retries: self.max_retries,
            budget: self.budget,
            tol: self.tol,
            format: self.format,
            out_dir: self.out_dir.clone(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sample a family, build its non-orthogonality graph, and verify
    /// biclique-freeness; writes graph.json, family.json, and a summary
    Construct {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Re-validate a graph/family pair and run the inequality checks
    Verify {
        graph: PathBuf,
        family: PathBuf,
        /// Also export the Gram matrix as CSV (17 significant digits)
        #[arg(long)]
        gram_csv: Option<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Re-verify biclique-freeness and emit the rank-gap report
    Gap {
        graph: PathBuf,
        family: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Solve both semidefinite programs for a graph (n <= 32)
    Sdp {
        graph: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Print the derived (k, m) parameters for (t, n, epsilon)
    Schedule {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    let common = match &cli.command {
        Command::Construct { common }
        | Command::Verify { common, .. }
        | Command::Gap { common, .. }
        | Command::Sdp { common, .. }
        | Command::Schedule { common } => common,
    };
    let cfg = RunConfig::resolve(common.partial(), common.config.as_ref())?;
    if common.print_config {
        println!("{}", serde_json::to_string_pretty(&cfg).expect("config serializes"));
        return Ok(());
    }
    match &cli.command {
        Command::Construct { .. } => commands::construct(&cfg),
        Command::Verify { graph, family, gram_csv, .. } => {
            commands::verify(&cfg, graph, family, gram_csv.as_ref())
        }
        Command::Gap { graph, family, .. } => commands::gap(&cfg, graph, family),
        Command::Sdp { graph, .. } => commands::sdp(&cfg, graph),
        Command::Schedule { .. } => commands::schedule(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", error_json(&err));
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
