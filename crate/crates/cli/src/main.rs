mod config;
mod run;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use config::RunConfig;

/// Stability analysis of viscous open-channel flow under boundary feedback.
#[derive(Parser, Debug)]
#[command(name = "svstab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Flat `key = value` configuration file.
    #[arg(long, overrides_with = "config")]
    config: Option<PathBuf>,
    /// Output directory (overrides the `out` key).
    #[arg(long, overrides_with = "out")]
    out: Option<PathBuf>,
    /// Viscosity (overrides file and --set).
    #[arg(long, overrides_with = "mu")]
    mu: Option<f64>,
    /// Number of grid points (overrides file and --set).
    #[arg(long, overrides_with = "n")]
    n: Option<usize>,
    /// Extra `key=value` setting; repeatable, applied in order after the file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve for the steady state and write its profiles.
    Steady(Common),
    /// Run the full stability certificate and write a JSON report.
    Check(Common),
    /// Simulate the linearized dynamics and write the decay trace.
    Simulate(Common),
    /// Evaluate the certificate over a cartesian grid of parameters.
    Sweep(Common),
    /// Show why a non-diagonal weight cannot work.
    DemoOffdiag(Common),
    /// Eigenvalues of the semi-discrete linearized operator.
    Spectrum(Common),
}

/// Exit status for an error chain: 2 when the steady state leaves the
/// admissible region, 3 when a simulation diverges, 1 otherwise.
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<svstab_core::Error>() {
            return match e {
                svstab_core::Error::OmegaExit { .. } => 2,
                svstab_core::Error::Diverged { .. } => 3,
                _ => 1,
            };
        }
    }
    1
}

fn init_pool() -> Result<()> {
    if let Ok(v) = std::env::var("SVSTAB_THREADS") {
        let threads: usize = v.trim().parse().with_context(|| format!("SVSTAB_THREADS: `{v}` is not a count"))?;
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    init_pool()?;
    let (common, cmd): (&Common, fn(&RunConfig) -> Result<()>) = match &cli.command {
        Command::Steady(c) => (c, run::steady),
        Command::Check(c) => (c, run::check),
        Command::Simulate(c) => (c, run::simulate_cmd),
        Command::Sweep(c) => (c, run::sweep),
        Command::DemoOffdiag(c) => (c, run::demo_offdiag),
        Command::Spectrum(c) => (c, run::spectrum_cmd),
    };
    let cfg = RunConfig::load(common.config.as_deref(), &common.set, common.mu, common.n, common.out.as_deref())?;
    cmd(&cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
