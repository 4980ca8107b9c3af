use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cyclab_cli::Command;

/// Cyclicity experiments in weighted Fourier sequence spaces.
#[derive(Parser)]
#[command(name = "cyclab", version)]
struct Args {
    #[command(subcommand)]
    command: Sub,
    /// TOML experiment configuration.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    out: PathBuf,
    /// Seed for randomized sweeps; overrides `seed` in the config.
    #[arg(long, global = true, value_name = "INT")]
    seed: Option<u64>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true, value_name = "INT")]
    workers: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Sub {
    /// Best-approximation scans and certificates over a (p, beta, lambda) grid.
    Scan,
    /// Level tables, h-covers and Eidlin series of Cantor schemes.
    Cantor,
    /// Capacity bounds over an exponent grid.
    Capacity,
    /// Randomized inequality suites.
    Verify,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let command = match args.command {
        Sub::Scan => Command::Scan,
        Sub::Cantor => Command::Cantor,
        Sub::Capacity => Command::Capacity,
        Sub::Verify => Command::Verify,
    };
    let Some(config) = args.config else {
        eprintln!("error: --config is required");
        return ExitCode::from(2);
    };
    let workers = args.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    match cyclab_cli::run(command, &config, &args.out, args.seed, workers) {
        Ok(paths) => {
            for path in paths {
                println!("{}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
