mod config;
mod error;
mod run;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::Command as RunCommand;
use error::CliError;

/// Lattice Dirac path-summation experiments.
#[derive(Parser)]
#[command(name = "dqlg", version, about)]
struct Cli {
    #[command(subcommand)]
    command: CommandArg,
}

#[derive(Args)]
struct RunArgs {
    /// Run configuration document (key = value lines); defaults apply when
    /// omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for CSV/binary results and manifest.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum CommandArg {
    /// Path-count tables and enumerated kernel amplitudes.
    Oracle(RunArgs),
    /// Per-mode operator diagnostics over the full grid.
    Modes(RunArgs),
    /// Time scale factor curve and the Schwarzschild comparison.
    Dilation(RunArgs),
    /// Wavepacket evolution with observables and a field snapshot.
    Evolve(RunArgs),
    /// Lattice dispersion table and continuum-limit fit.
    Dispersion(RunArgs),
    /// Generator residual scan.
    Generator(RunArgs),
}

fn main() {
    let cli = Cli::parse();
    let (command, args) = match &cli.command {
        CommandArg::Oracle(a) => (RunCommand::Oracle, a),
        CommandArg::Modes(a) => (RunCommand::Modes, a),
        CommandArg::Dilation(a) => (RunCommand::Dilation, a),
        CommandArg::Evolve(a) => (RunCommand::Evolve, a),
        CommandArg::Dispersion(a) => (RunCommand::Dispersion, a),
        CommandArg::Generator(a) => (RunCommand::Generator, a),
    };
    if let Err(e) = configure_threads() {
        eprintln!("{}", e.record());
        std::process::exit(e.exit_code());
    }
    match execute(command, args) {
        Ok(files) => {
            for f in files {
                println!("{}", args.out.join(f).display());
            }
        }
        Err(e) => {
            eprintln!("{}", e.record());
            std::process::exit(e.exit_code());
        }
    }
}

fn execute(command: RunCommand, args: &RunArgs) -> error::Result<Vec<String>> {
    let text = match &args.config {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => String::new(),
    };
    let cfg = config::parse_config(&text, Some(command))?;
    run::run(&cfg, &args.out)
}

/// DQLG_THREADS caps worker parallelism; 0 or unset picks the default.
fn configure_threads() -> error::Result<()> {
    match std::env::var("DQLG_THREADS") {
        Err(_) => Ok(()),
        Ok(v) => {
            let n: usize = v.parse().map_err(|_| {
                CliError::Config(format!("DQLG_THREADS=`{v}` is not a non-negative integer"))
            })?;
            if n == 0 {
                return Ok(());
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| CliError::Config(format!("thread pool: {e}")))
        }
    }
}
