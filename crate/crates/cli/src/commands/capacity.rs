//! Capacity lower bounds and Eidlin evidence over exponent grids.

use anyhow::{Context as _, Result};
use cyclab_core::measures::{capacity_bounds, CapacityConfig, CapacityReport};
use serde::Serialize;

use super::{scheme, sorted_floats, sorted_lambdas};
use crate::config::ExperimentConfig;
use crate::output::{self, float, Artifact};
use crate::Context;

pub const CSV_FILE: &str = "capacity.csv";
pub const JSON_FILE: &str = "capacity.json";

pub const HEADER: [&str; 14] = [
    "lambda",
    "k",
    "alpha",
    "dim",
    "level",
    "weights",
    "equal_weight_energy",
    "optimized_energy",
    "tail_bound",
    "lower_bound",
    "iterations",
    "converged",
    "eidlin_verdict",
    "eidlin_growth_log2",
];

#[derive(Debug, Serialize)]
pub struct CapacityRun {
    pub rows: Vec<CapacityRow>,
}

#[derive(Debug, Serialize)]
pub struct CapacityRow {
    pub lambda: String,
    pub k: u32,
    pub dim: f64,
    pub report: CapacityReport,
}

pub fn run(config: &ExperimentConfig, ctx: &Context) -> Result<Vec<Artifact>> {
    let section = config.capacity.as_ref().context("capacity needs a [capacity] table in the config")?;
    let k = *section.k.get_ref();
    let mut grid = Vec::new();
    for lambda in sorted_lambdas(section.lambda.get_ref()) {
        for &alpha in &sorted_floats(section.alphas.get_ref()) {
            grid.push((lambda.clone(), alpha));
        }
    }
    let rows = ctx.map(&grid, |_, (lambda, alpha)| {
        let scheme = scheme(lambda, k)?;
        let settings = CapacityConfig {
            max_freq: section.max_freq,
            eidlin_max_level: Some(scheme.n0() + section.series_levels),
            ..CapacityConfig::default()
        };
        let report = capacity_bounds(&scheme, *alpha, &settings)
            .with_context(|| format!("capacity lambda = {lambda}, k = {k}, alpha = {alpha}"))?;
        Ok(CapacityRow { lambda: lambda.clone(), k, dim: scheme.dimension(), report })
    })?;

    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|row| {
            let r = &row.report;
            let (verdict, growth) = match &r.upper_evidence {
                Some(e) => (verdict_label(e.verdict).to_string(), float(e.log2_growth)),
                None => (String::new(), String::new()),
            };
            vec![
                row.lambda.clone(),
                row.k.to_string(),
                float(r.alpha),
                float(row.dim),
                r.level.to_string(),
                r.weights.to_string(),
                float(r.equal_weight_energy),
                float(r.optimized_energy),
                float(r.tail_bound),
                float(r.lower_bound),
                r.iterations.to_string(),
                r.converged.to_string(),
                verdict,
                growth,
            ]
        })
        .collect();
    Ok(vec![output::csv(CSV_FILE, &HEADER, &table)?, output::json(JSON_FILE, &CapacityRun { rows })?])
}

fn verdict_label(verdict: cyclab_core::sets::Verdict) -> &'static str {
    use cyclab_core::sets::Verdict;
    match verdict {
        Verdict::Bounded => "bounded",
        Verdict::Diverging => "diverging",
        Verdict::Inconclusive => "inconclusive",
    }
}
