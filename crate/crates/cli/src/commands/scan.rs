//! Best-approximation scans with dual certificates over a `(p, β, λ)` grid.

use anyhow::{Context as _, Result};
use cyclab_core::cyclicity::{
    cyclicity_scan, noncyclicity_certificate, zero_set_function, SolverConfig, Trend, TrendConfig,
};
use cyclab_core::measures::MeasureCoeffs;
use cyclab_core::sets::theorem_thresholds;
use cyclab_core::spaces::{pwl_fourier, SpaceParams};
use serde::Serialize;

use super::{scheme, sorted_floats, sorted_lambdas};
use crate::config::{ExperimentConfig, ScanConfig};
use crate::output::{self, float, optional_float, Artifact};
use crate::Context;

pub const CSV_FILE: &str = "scan.csv";
pub const JSON_FILE: &str = "scan.json";

pub const HEADER: [&str; 10] =
    ["p", "beta", "lambda", "dim", "cyclic_below", "noncyclic_above", "degree", "error", "certificate", "trend"];

#[derive(Debug, Serialize)]
pub struct ScanReport {
    pub points: Vec<ScanPoint>,
}

#[derive(Debug, Serialize)]
pub struct ScanPoint {
    pub p: f64,
    pub beta: f64,
    pub lambda: String,
    pub dim: f64,
    pub cyclic_below: f64,
    pub noncyclic_above: f64,
    /// Level of the interval cover on which the test function vanishes.
    pub level: u32,
    pub trend: Trend,
    pub monotone: bool,
    pub degrees: Vec<DegreeRow>,
}

#[derive(Debug, Serialize)]
pub struct DegreeRow {
    pub degree: u32,
    pub error: f64,
    pub converged: bool,
    pub solver_iters: u32,
    /// Lower bound valid for every polynomial of this degree; absent when
    /// the certificate could not be formed.
    pub certificate: Option<f64>,
}

pub fn run(config: &ExperimentConfig, ctx: &Context) -> Result<Vec<Artifact>> {
    let scan = config.scan.as_ref().context("scan needs a [scan] table in the config")?;
    let mut grid = Vec::new();
    for &p in &sorted_floats(scan.p.get_ref()) {
        for &beta in &sorted_floats(scan.beta.get_ref()) {
            for lambda in sorted_lambdas(scan.lambda.get_ref()) {
                grid.push((p, beta, lambda));
            }
        }
    }
    let points = ctx.map(&grid, |_, (p, beta, lambda)| scan_point(scan, *p, *beta, lambda))?;

    let rows: Vec<Vec<String>> = points
        .iter()
        .flat_map(|pt| {
            pt.degrees.iter().map(move |d| {
                vec![
                    float(pt.p),
                    float(pt.beta),
                    pt.lambda.clone(),
                    float(pt.dim),
                    float(pt.cyclic_below),
                    float(pt.noncyclic_above),
                    d.degree.to_string(),
                    float(d.error),
                    optional_float(d.certificate),
                    trend_label(&pt.trend).to_string(),
                ]
            })
        })
        .collect();
    Ok(vec![output::csv(CSV_FILE, &HEADER, &rows)?, output::json(JSON_FILE, &ScanReport { points })?])
}

fn trend_label(trend: &Trend) -> &'static str {
    match trend {
        Trend::Decaying => "decaying",
        Trend::Plateau { .. } => "plateau",
        Trend::Inconclusive => "inconclusive",
    }
}

fn scan_point(scan: &ScanConfig, p: f64, beta: f64, lambda: &str) -> Result<ScanPoint> {
    let context = || format!("scan point p = {p}, beta = {beta}, lambda = {lambda}");
    let params = SpaceParams::new(p, beta).with_context(context)?;
    let thresholds = theorem_thresholds(p, beta).with_context(context)?;
    let scheme = scheme(lambda, 1)?;
    let level = scheme.n0() + scan.level_offset;
    let cover = scheme.level_intervals(level).with_context(context)?;
    let g = zero_set_function(&cover, *scan.ramp.get_ref()).with_context(context)?;
    let f = pwl_fourier(&g, scan.truncation).with_context(context)?;

    let solver = SolverConfig {
        tolerance: scan.solver.tolerance,
        max_iters: scan.solver.max_iters,
        ..SolverConfig::default()
    };
    let result = cyclicity_scan(&f, &params, scan.degrees.get_ref(), &solver, &TrendConfig::default())
        .with_context(context)?;
    let mu = MeasureCoeffs::digit_measure(&scheme);
    let degrees = result
        .results
        .iter()
        .map(|r| DegreeRow {
            degree: r.degree,
            error: r.error,
            converged: r.converged,
            solver_iters: r.solver_iters,
            certificate: noncyclicity_certificate(&f, &mu, &params, r.degree).ok().map(|c| c.bound),
        })
        .collect();
    Ok(ScanPoint {
        p,
        beta,
        lambda: lambda.to_string(),
        dim: scheme.dimension(),
        cyclic_below: thresholds.cyclic_below,
        noncyclic_above: thresholds.noncyclic_above,
        level,
        trend: result.trend,
        monotone: result.monotone,
        degrees,
    })
}
