use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gaugefield_cli::commands;
use gaugefield_cli::config::RunConfig;
use gaugefield_cli::CliError;

/// Reconstruct electromagnetic gauge potentials from field data and verify
/// the flux-cylinder identities. Exit codes: 0 pass, 1 verification failure,
/// 2 config/usage error, 3 numerical failure.
#[derive(Parser)]
#[command(name = "gaugefield", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reconstruct A (from B) or V (from E) at probe points; emits CSV.
    Potential(RunArgs),
    /// Circulation, winding, enclosed flux and AB phase for a loop; emits JSON.
    Abphase(RunArgs),
    /// Run the verification battery; emits a JSON report.
    Verify(RunArgs),
    /// Analytic solenoid reference table over a rho sweep; emits CSV.
    Solenoid(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output file; overrides the config's output path. Stdout if neither
    /// is given.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, run): (&RunArgs, fn(&RunConfig) -> Result<(String, bool), CliError>) =
        match &cli.command {
            Command::Potential(a) => (a, |c| commands::cmd_potential(c).map(|s| (s, true))),
            Command::Abphase(a) => (a, |c| commands::cmd_abphase(c).map(|s| (s, true))),
            Command::Verify(a) => (a, commands::cmd_verify),
            Command::Solenoid(a) => (a, |c| commands::cmd_solenoid(c).map(|s| (s, true))),
        };

    match execute(args, run) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn execute(
    args: &RunArgs,
    run: fn(&RunConfig) -> Result<(String, bool), CliError>,
) -> Result<bool, CliError> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", args.config.display())))?;
    let cfg = RunConfig::parse(&text)?;
    let (output, passed) = run(&cfg)?;

    let target = args
        .out
        .clone()
        .or_else(|| cfg.output.as_ref().and_then(|o| o.path.clone().map(PathBuf::from)));
    match target {
        Some(path) => fs::write(&path, output)
            .map_err(|e| CliError::Numerical(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{output}"),
    }
    Ok(passed)
}
