//! Level tables, h-cover sums and Eidlin series for Cantor schemes.

use anyhow::{Context as _, Result};
use cyclab_core::sets::{eidlin_criterion, h_cover_value, EidlinReport, HFunction, LevelSummary};
use serde::Serialize;

use super::{scheme, sorted_floats, sorted_lambdas};
use crate::config::ExperimentConfig;
use crate::output::{self, float, Artifact};
use crate::Context;

pub const LEVELS_FILE: &str = "cantor_levels.csv";
pub const HCOVER_FILE: &str = "cantor_hcover.csv";
pub const JSON_FILE: &str = "cantor.json";

pub const LEVELS_HEADER: [&str; 7] = ["lambda", "k", "level", "nu", "length_log2", "count_log2", "branching_log2"];
pub const HCOVER_HEADER: [&str; 5] = ["lambda", "k", "alpha", "level", "h_cover_log2"];

#[derive(Debug, Serialize)]
pub struct CantorReport {
    pub schemes: Vec<SchemeReport>,
}

#[derive(Debug, Serialize)]
pub struct SchemeReport {
    pub lambda: String,
    pub k: u32,
    pub n0: u32,
    pub dim: f64,
    pub levels: Vec<LevelSummary>,
    pub h_covers: Vec<HCover>,
    pub eidlin: Vec<EidlinReport>,
}

#[derive(Debug, Serialize)]
pub struct HCover {
    pub alpha: f64,
    /// `log2(#intervals · l_N^α)` for each tabulated level.
    pub values_log2: Vec<f64>,
}

pub fn run(config: &ExperimentConfig, ctx: &Context) -> Result<Vec<Artifact>> {
    let cantor = config.cantor.as_ref().context("cantor needs a [cantor] table in the config")?;
    let k = *cantor.k.get_ref();
    let alphas = sorted_floats(cantor.alphas.get_ref());
    let lambdas = sorted_lambdas(cantor.lambda.get_ref());

    let schemes = ctx.map(&lambdas, |_, lambda| {
        let scheme = scheme(lambda, k)?;
        let context = || format!("cantor lambda = {lambda}, k = {k}");
        let n0 = scheme.n0();
        let level_range = n0..n0 + cantor.levels;
        let levels = level_range.clone().map(|n| scheme.level_summary(n)).collect::<Result<Vec<_>, _>>().with_context(context)?;
        let h_covers = alphas
            .iter()
            .map(|&alpha| {
                let h = HFunction::power(alpha)?;
                let values_log2 = level_range.clone().map(|n| h_cover_value(&scheme, n, &h)).collect::<Result<_, _>>()?;
                Ok(HCover { alpha, values_log2 })
            })
            .collect::<cyclab_core::Result<Vec<_>>>()
            .with_context(context)?;
        let eidlin = alphas
            .iter()
            .map(|&alpha| eidlin_criterion(&scheme, alpha, n0 + cantor.series_levels))
            .collect::<cyclab_core::Result<Vec<_>>>()
            .with_context(context)?;
        Ok(SchemeReport { lambda: lambda.clone(), k, n0, dim: scheme.dimension(), levels, h_covers, eidlin })
    })?;

    let mut level_rows = Vec::new();
    let mut hcover_rows = Vec::new();
    for s in &schemes {
        for l in &s.levels {
            level_rows.push(vec![
                s.lambda.clone(),
                k.to_string(),
                l.level.to_string(),
                l.nu.to_string(),
                float(l.log2_length),
                float(l.log2_count),
                float(l.log2_branching),
            ]);
        }
        for h in &s.h_covers {
            for (l, value) in s.levels.iter().zip(&h.values_log2) {
                hcover_rows.push(vec![s.lambda.clone(), k.to_string(), float(h.alpha), l.level.to_string(), float(*value)]);
            }
        }
    }
    Ok(vec![
        output::csv(LEVELS_FILE, &LEVELS_HEADER, &level_rows)?,
        output::csv(HCOVER_FILE, &HCOVER_HEADER, &hcover_rows)?,
        output::json(JSON_FILE, &CantorReport { schemes })?,
    ])
}
