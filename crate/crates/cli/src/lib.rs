//! Batch experiment runner for `cyclab-core`.
//!
//! Each subcommand reads one TOML configuration, evaluates its grid on a
//! bounded worker pool and emits CSV tables, JSON reports and a manifest.
//! Output bytes depend only on the configuration and the seed.

pub mod commands;
pub mod config;
pub mod output;

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context as _};
use rayon::prelude::*;

pub use config::{ConfigError, ExperimentConfig, LoadedConfig};
pub use output::Artifact;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Scan,
    Cantor,
    Capacity,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Scan => "scan",
            Command::Cantor => "cantor",
            Command::Capacity => "capacity",
            Command::Verify => "verify",
        }
    }
}

/// Shared state for one command invocation.
pub struct Context {
    pub seed: Option<u64>,
    pool: rayon::ThreadPool,
}

impl Context {
    pub fn new(seed: Option<u64>, workers: usize) -> anyhow::Result<Self> {
        if workers == 0 {
            bail!("--workers must be at least 1");
        }
        let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build()?;
        Ok(Context { seed, pool })
    }

    /// Evaluates `task` on every item in parallel and returns the results
    /// in input order.
    pub fn map<T, R, F>(&self, items: &[T], task: F) -> anyhow::Result<Vec<R>>
    where
        T: Sync,
        R: Send,
        F: Fn(usize, &T) -> anyhow::Result<R> + Sync,
    {
        self.pool.install(|| items.par_iter().enumerate().map(|(i, item)| task(i, item)).collect())
    }

    pub fn require_seed(&self, command: Command) -> anyhow::Result<u64> {
        self.seed.with_context(|| format!("{} needs a seed: pass --seed or set `seed` in the config", command.name()))
    }
}

/// Runs `command` on the configuration `source` and returns every output,
/// with the manifest last.
pub fn execute(command: Command, source: &str, seed: Option<u64>, workers: usize) -> anyhow::Result<Vec<Artifact>> {
    let loaded = LoadedConfig::parse(source)?;
    let ctx = Context::new(seed.or(loaded.config.seed), workers)?;
    let mut artifacts = match command {
        Command::Scan => commands::scan::run(&loaded.config, &ctx)?,
        Command::Cantor => commands::cantor::run(&loaded.config, &ctx)?,
        Command::Capacity => commands::capacity::run(&loaded.config, &ctx)?,
        Command::Verify => commands::verify::run(&loaded.config, &ctx)?,
    };
    let manifest = output::Manifest {
        command: command.name().to_string(),
        seed: ctx.seed,
        config_sha256: output::sha256_hex(source.as_bytes()),
        cli_version: env!("CARGO_PKG_VERSION").to_string(),
        core_version: cyclab_core::VERSION.to_string(),
        outputs: artifacts.iter().map(output::OutputEntry::describe).collect(),
    };
    artifacts.push(output::json(MANIFEST_FILE, &manifest)?);
    Ok(artifacts)
}

/// Reads the config at `config_path`, runs `command` and writes the
/// outputs into `out_dir`, returning their paths.
pub fn run(
    command: Command,
    config_path: &Path,
    out_dir: &Path,
    seed: Option<u64>,
    workers: usize,
) -> anyhow::Result<Vec<PathBuf>> {
    let source =
        fs::read_to_string(config_path).with_context(|| format!("reading config {}", config_path.display()))?;
    let artifacts =
        execute(command, &source, seed, workers).with_context(|| format!("in {}", config_path.display()))?;
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    artifacts
        .iter()
        .map(|a| {
            let path = out_dir.join(&a.name);
            fs::write(&path, &a.bytes).with_context(|| format!("writing {}", path.display()))?;
            Ok(path)
        })
        .collect()
}
