use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use fnls_harness::{emit, run_experiment, ExperimentConfig, ExperimentKind, HarnessError};

/// Spectral experiments for the defocusing mass-critical fourth-order NLS on
/// a periodic torus.
#[derive(Parser)]
#[command(name = "fnls", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory for report.json and series.csv.
    #[arg(long)]
    out: PathBuf,
    /// Bound the internal data parallelism (defaults to all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Suppress progress output.
    #[arg(long)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the equation and record conserved-quantity series.
    Run(Common),
    /// Almost-conservation experiment: modified-energy increments per cutoff.
    Almost(Common),
    /// Interaction Morawetz monitors along a run.
    Morawetz(Common),
    /// Exact bookkeeping arithmetic (thresholds, lambda, L, minimal N, alpha).
    Budget(Common),
    /// Quick invariant battery on small grids.
    Check(Common),
    /// Self-convergence study over dyadic dt levels.
    Convergence(Common),
}

impl Command {
    fn split(&self) -> (ExperimentKind, &Common) {
        match self {
            Command::Run(c) => (ExperimentKind::Run, c),
            Command::Almost(c) => (ExperimentKind::Almost, c),
            Command::Morawetz(c) => (ExperimentKind::Morawetz, c),
            Command::Budget(c) => (ExperimentKind::Budget, c),
            Command::Check(c) => (ExperimentKind::Check, c),
            Command::Convergence(c) => (ExperimentKind::Convergence, c),
        }
    }
}

fn run(kind: ExperimentKind, common: &Common) -> Result<usize, HarnessError> {
    #[cfg(feature = "parallel")]
    if let Some(n) = common.threads {
        // A later duplicate initialization only fails if the pool exists; fine.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let text = std::fs::read_to_string(&common.config)?;
    let config = ExperimentConfig::from_toml(&text)?;
    let output = run_experiment(kind, &config, common.quiet)?;
    emit(&output.record, &output.series, &common.out)?;
    if !common.quiet {
        println!(
            "wrote {} and {}",
            common.out.join("report.json").display(),
            common.out.join("series.csv").display()
        );
    }
    Ok(output.check_failures)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, common) = cli.command.split();
    let kind_str = kind.to_string();
    // subcommand name doubles as the config kind when the file omits it
    let _ = ExperimentKind::from_str(&kind_str).expect("subcommands map to kinds");
    match run(kind, common) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(failed) => {
            eprintln!("{failed} check(s) failed; see series.csv for the table");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
