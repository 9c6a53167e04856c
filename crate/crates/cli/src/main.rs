mod config;
mod error;
mod output;
mod scenarios;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use config::{parse_pair, RunConfig};
use error::CliError;

/// Squeezed-cat generation, phase-space and metrology runs with reproducible outputs.
#[derive(Parser)]
#[command(name = "sqcat", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derived frame parameters and the rotating-wave report.
    Derive(Common),
    /// Time evolution from vacuum or one photon with fidelity to the cat target.
    Simulate(Common),
    /// Stationary state of the chosen tier.
    Steady(Common),
    /// Wigner function on a phase-space grid.
    Wigner(Common),
    /// Closed-form quantum Fisher information of a state family.
    Qfi(Common),
    /// Best QFI at a fixed total photon number.
    Optimize(Common),
    /// Polynomial scaling fit of the optimal QFI.
    Fit(Common),
}

#[derive(Args)]
struct Common {
    /// Flat key = value file; `#` starts a comment.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Model tier: reduced, approx or exact.
    #[arg(long)]
    tier: Option<String>,
    /// Mode truncations, e.g. 20,4,3.
    #[arg(long)]
    dims: Option<String>,
    /// Fail when the rotating-wave validity report fails.
    #[arg(long)]
    strict_rwa: bool,
    /// Override a config key; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", value_parser = parse_pair)]
    set: Vec<(String, String)>,
}

impl Command {
    fn split(self) -> (&'static str, Common) {
        match self {
            Command::Derive(c) => ("derive", c),
            Command::Simulate(c) => ("simulate", c),
            Command::Steady(c) => ("steady", c),
            Command::Wigner(c) => ("wigner", c),
            Command::Qfi(c) => ("qfi", c),
            Command::Optimize(c) => ("optimize", c),
            Command::Fit(c) => ("fit", c),
        }
    }
}

fn execute(scenario: &str, common: Common) -> Result<(), CliError> {
    let mut overrides = common.set;
    if let Some(t) = common.tier {
        overrides.push(("tier".into(), t));
    }
    if let Some(d) = common.dims {
        overrides.push(("dims".into(), d));
    }
    if common.strict_rwa {
        overrides.push(("strict_rwa".into(), "true".into()));
    }
    let cfg = RunConfig::load(scenario, common.config.as_deref(), overrides)?;
    let start = Instant::now();
    let written = scenarios::run(&cfg, &common.out)?;
    for path in written {
        println!("{}", path.display());
    }
    eprintln!("{scenario} finished in {:.3} s", start.elapsed().as_secs_f64());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (scenario, common) = cli.command.split();
    match execute(scenario, common) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sqcat: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
