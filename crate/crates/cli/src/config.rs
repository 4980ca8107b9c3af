//! Experiment configuration read from TOML.
//!
//! Every table rejects unknown keys. Values that need more than a type check
//! keep their source span so that errors can name the offending line.

use std::ops::Range;

use serde::Deserialize;
use toml::Spanned;

#[derive(Debug, thiserror::Error)]
#[error("config line {line}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Seed for randomized sweeps; `--seed` takes precedence.
    pub seed: Option<u64>,
    pub scan: Option<ScanConfig>,
    pub cantor: Option<CantorConfig>,
    pub capacity: Option<CapacityConfig>,
    pub verify: Option<VerifyConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub p: Spanned<Vec<f64>>,
    pub beta: Spanned<Vec<f64>>,
    pub lambda: Spanned<Vec<String>>,
    pub degrees: Spanned<Vec<u32>>,
    /// Ramp width, in unit length, of the function vanishing on the cover.
    #[serde(default = "default_ramp")]
    pub ramp: Spanned<f64>,
    /// Frequencies kept in the test function.
    #[serde(default = "default_truncation")]
    pub truncation: u32,
    /// Levels above the first one at which the cover is taken.
    #[serde(default = "default_level_offset")]
    pub level_offset: u32,
    #[serde(default)]
    pub solver: SolverSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_max_iters")]
    pub max_iters: u32,
}

impl Default for SolverSection {
    fn default() -> Self {
        SolverSection { tolerance: default_tolerance(), max_iters: default_max_iters() }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CantorConfig {
    pub lambda: Spanned<Vec<String>>,
    #[serde(default = "default_k")]
    pub k: Spanned<u32>,
    /// Number of levels tabulated from the first one.
    #[serde(default = "default_levels")]
    pub levels: u32,
    #[serde(default = "default_alphas")]
    pub alphas: Spanned<Vec<f64>>,
    /// Levels of the Eidlin series above the first one.
    #[serde(default = "default_series_levels")]
    pub series_levels: u32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapacityConfig {
    pub lambda: Spanned<Vec<String>>,
    #[serde(default = "default_k")]
    pub k: Spanned<u32>,
    pub alphas: Spanned<Vec<f64>>,
    #[serde(default = "default_series_levels")]
    pub series_levels: u32,
    /// Frequencies entering the energy quadratic form exactly.
    #[serde(default = "default_max_freq")]
    pub max_freq: u32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    /// `[p, beta]` pairs.
    #[serde(default = "default_grid")]
    pub grid: Spanned<Vec<[f64; 2]>>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Largest frequency of the random sequences.
    #[serde(default = "default_radius")]
    pub radius: u32,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { grid: unspanned(default_grid_values()), samples: default_samples(), radius: default_radius() }
    }
}

fn unspanned<T>(value: T) -> Spanned<T> {
    // Defaults have no position; an empty span maps to line 1.
    Spanned::new(0..0, value)
}

fn default_ramp() -> Spanned<f64> {
    unspanned(0.005)
}
fn default_truncation() -> u32 {
    512
}
fn default_level_offset() -> u32 {
    1
}
fn default_tolerance() -> f64 {
    1e-10
}
fn default_max_iters() -> u32 {
    500
}
fn default_k() -> Spanned<u32> {
    unspanned(1)
}
fn default_levels() -> u32 {
    30
}
fn default_alphas() -> Spanned<Vec<f64>> {
    unspanned(vec![0.45, 0.55])
}
fn default_series_levels() -> u32 {
    40
}
fn default_max_freq() -> u32 {
    1024
}
fn default_grid_values() -> Vec<[f64; 2]> {
    vec![[4.0 / 3.0, 0.1], [4.0 / 3.0, 0.2], [1.5, 0.3], [1.8, 0.05]]
}
fn default_grid() -> Spanned<Vec<[f64; 2]>> {
    unspanned(default_grid_values())
}
fn default_samples() -> usize {
    1000
}
fn default_radius() -> u32 {
    12
}

/// A parsed config together with its source, for line lookups.
pub struct LoadedConfig {
    pub config: ExperimentConfig,
    pub source: String,
}

impl LoadedConfig {
    pub fn parse(source: &str) -> Result<Self, ConfigError> {
        let config = toml::from_str(source).map_err(|e| ConfigError {
            line: e.span().map_or(1, |s| line_of(source, s.start)),
            message: e.message().to_string(),
        })?;
        let loaded = LoadedConfig { config, source: source.to_string() };
        loaded.validate()?;
        Ok(loaded)
    }

    fn error(&self, span: Range<usize>, message: impl Into<String>) -> ConfigError {
        ConfigError { line: line_of(&self.source, span.start), message: message.into() }
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if let Some(scan) = &self.config.scan {
            for &p in scan.p.get_ref() {
                if !(p > 1.0 && p < 2.0) {
                    return Err(self.error(scan.p.span(), format!("scan p must lie in (1, 2), got {p}")));
                }
            }
            for &beta in scan.beta.get_ref() {
                let admissible = scan.p.get_ref().iter().all(|&p| beta * p / (p - 1.0) <= 1.0);
                if beta < 0.0 || !admissible {
                    return Err(self.error(
                        scan.beta.span(),
                        format!("scan beta must satisfy 0 <= beta and beta q <= 1 for every p, got {beta}"),
                    ));
                }
            }
            self.lambdas(&scan.lambda)?;
            let degrees = scan.degrees.get_ref();
            if degrees.windows(2).any(|w| w[0] >= w[1]) {
                return Err(self.error(scan.degrees.span(), "degrees must be strictly increasing"));
            }
            let ramp = *scan.ramp.get_ref();
            if !(ramp > 0.0 && ramp < 0.5) {
                return Err(self.error(scan.ramp.span(), format!("ramp must lie in (0, 1/2), got {ramp}")));
            }
        }
        if let Some(cantor) = &self.config.cantor {
            self.lambdas(&cantor.lambda)?;
            self.positive_k(&cantor.k)?;
            self.unit_alphas(&cantor.alphas)?;
        }
        if let Some(capacity) = &self.config.capacity {
            self.lambdas(&capacity.lambda)?;
            self.positive_k(&capacity.k)?;
            for &alpha in capacity.alphas.get_ref() {
                if !(0.0..1.0).contains(&alpha) {
                    return Err(self.error(capacity.alphas.span(), format!("alpha must lie in [0, 1), got {alpha}")));
                }
            }
        }
        if let Some(verify) = &self.config.verify {
            for &[p, beta] in verify.grid.get_ref() {
                let q = p / (p - 1.0);
                if !(p > 1.0 && p < 2.0) || !(0.0..0.5).contains(&beta) || beta * q > 1.0 {
                    return Err(self.error(
                        verify.grid.span(),
                        format!("grid point ({p}, {beta}) needs 1 < p < 2, 0 <= beta < 1/2 and beta q <= 1"),
                    ));
                }
            }
        }
        Ok(())
    }

    fn lambdas(&self, list: &Spanned<Vec<String>>) -> Result<Vec<(u32, u32)>, ConfigError> {
        list.get_ref()
            .iter()
            .map(|text| parse_fraction(text).ok_or_else(|| self.error(list.span(), format!("invalid lambda {text:?}; expected \"p/q\" with 0 < p/q < 1"))))
            .collect()
    }

    fn positive_k(&self, k: &Spanned<u32>) -> Result<(), ConfigError> {
        if *k.get_ref() == 0 {
            return Err(self.error(k.span(), "k must be at least 1"));
        }
        Ok(())
    }

    fn unit_alphas(&self, alphas: &Spanned<Vec<f64>>) -> Result<(), ConfigError> {
        for &alpha in alphas.get_ref() {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(self.error(alphas.span(), format!("alpha must lie in (0, 1), got {alpha}")));
            }
        }
        Ok(())
    }
}

/// Parses `"p/q"` with `0 < p < q`.
pub fn parse_fraction(text: &str) -> Option<(u32, u32)> {
    let (numer, denom) = text.split_once('/')?;
    let numer: u32 = numer.trim().parse().ok()?;
    let denom: u32 = denom.trim().parse().ok()?;
    (numer > 0 && numer < denom).then_some((numer, denom))
}

fn line_of(source: &str, offset: usize) -> usize {
    source[..offset.min(source.len())].matches('\n').count() + 1
}
