//! Hausdorff covers, the Eidlin capacity series and the threshold formulas.

use std::f64::consts::{LN_10, LN_2};

use serde::{Deserialize, Serialize};

use super::checks::log2_add;
use super::scheme::{CantorScheme, MAX_SCALE};
use crate::spaces::SpaceParams;
use crate::{Error, Result};

/// Gauge function for Hausdorff measures.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum HFunction {
    /// `h(t) = t^α`.
    Power { alpha: f64 },
    /// `h(t) = t^α / ln(e/t)^γ`.
    Log { alpha: f64, gamma: f64 },
}

impl HFunction {
    pub fn power(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::invalid(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        Ok(HFunction::Power { alpha })
    }

    pub fn log(alpha: f64, gamma: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) || !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::invalid(format!(
                "log gauge needs alpha in (0, 1] and gamma > 0, got ({alpha}, {gamma})"
            )));
        }
        Ok(HFunction::Log { alpha, gamma })
    }

    /// `log2 h(t)` given `log2 t`, for `0 < t <= 1`.
    pub fn log2_value(&self, log2_t: f64) -> f64 {
        match *self {
            HFunction::Power { alpha } => alpha * log2_t,
            HFunction::Log { alpha, gamma } => {
                alpha * log2_t - gamma * (1.0 - log2_t * LN_2).log2()
            }
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else {
            self.log2_value(t.log2()).exp2()
        }
    }
}

/// `log2` of the level-`N` cover sum `#intervals · h(l_N)`.
pub fn h_cover_value(scheme: &CantorScheme, level: u32, h: &HFunction) -> Result<f64> {
    let log2_length = scheme.log2_level_length(level)?;
    Ok(scheme.log2_count(level) + h.log2_value(log2_length))
}

/// Three-valued label for a sequence of partial sums. These are heuristics
/// on finite data, not proofs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Bounded,
    Diverging,
    Inconclusive,
}

/// Thresholds on the natural-log increments `ln S_i − ln S_{i−1}` of the
/// last `window` partial sums.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictThresholds {
    pub diverging_increment: f64,
    pub bounded_increment: f64,
    pub window: usize,
}

impl Default for VerdictThresholds {
    fn default() -> Self {
        VerdictThresholds { diverging_increment: LN_10, bounded_increment: 1e-6, window: 3 }
    }
}

impl VerdictThresholds {
    pub fn classify(&self, increments: &[f64]) -> Verdict {
        if self.window == 0 || increments.len() < self.window {
            return Verdict::Inconclusive;
        }
        let tail = &increments[increments.len() - self.window..];
        if tail.iter().all(|&d| d > self.diverging_increment) {
            Verdict::Diverging
        } else if tail.iter().all(|&d| d < self.bounded_increment) {
            Verdict::Bounded
        } else {
            Verdict::Inconclusive
        }
    }
}

/// Partial sums of `Σ_{N>=N0} 1 / (p_{N0} ⋯ p_{N−1} l_N^α)`, whose
/// divergence is equivalent to `C_α(S_λ^k) = 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EidlinReport {
    pub alpha: f64,
    pub levels: Vec<u32>,
    pub log2_terms: Vec<f64>,
    pub log2_partial_sums: Vec<f64>,
    /// `ln S_N − ln S_{N−1}` for each level after the first.
    pub ln_increments: Vec<f64>,
    /// `log2 S_{N_max} − log2 S_{N0}`.
    pub log2_growth: f64,
    pub verdict: Verdict,
}

pub fn eidlin_criterion(scheme: &CantorScheme, alpha: f64, max_level: u32) -> Result<EidlinReport> {
    eidlin_criterion_with(scheme, alpha, max_level, &VerdictThresholds::default())
}

pub fn eidlin_criterion_with(
    scheme: &CantorScheme,
    alpha: f64,
    max_level: u32,
    thresholds: &VerdictThresholds,
) -> Result<EidlinReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let n0 = scheme.n0();
    if max_level < n0 + 2 || max_level > MAX_SCALE - 2 {
        return Err(Error::invalid(format!(
            "max level must lie in [{}, {}], got {max_level}",
            n0 + 2,
            MAX_SCALE - 2
        )));
    }
    let levels: Vec<u32> = (n0..=max_level).collect();
    let mut log2_terms = Vec::with_capacity(levels.len());
    let mut log2_partial_sums = Vec::with_capacity(levels.len());
    let mut log2_branching_product = 0.0;
    let mut running = f64::NEG_INFINITY;
    for &level in &levels {
        let term = -log2_branching_product - alpha * scheme.log2_level_length(level)?;
        running = log2_add(running, term);
        log2_terms.push(term);
        log2_partial_sums.push(running);
        log2_branching_product += scheme.log2_branching(level)?;
    }
    let ln_increments: Vec<f64> = log2_partial_sums.windows(2).map(|w| (w[1] - w[0]) * LN_2).collect();
    let log2_growth = log2_partial_sums.last().unwrap_or(&0.0) - log2_partial_sums.first().unwrap_or(&0.0);
    Ok(EidlinReport {
        alpha,
        levels,
        log2_terms,
        log2_partial_sums,
        verdict: thresholds.classify(&ln_increments),
        ln_increments,
        log2_growth,
    })
}

/// Verdicts over an increasing `α` grid and where they change.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlipBracket {
    pub verdicts: Vec<(f64, Verdict)>,
    /// Largest `α` labelled bounded.
    pub last_bounded: Option<f64>,
    /// Smallest `α` labelled diverging.
    pub first_diverging: Option<f64>,
}

impl FlipBracket {
    /// The flip lies inside `[lo, hi]` and the labels are ordered.
    pub fn bracketed_within(&self, lo: f64, hi: f64) -> bool {
        match (self.last_bounded, self.first_diverging) {
            (Some(b), Some(d)) => lo <= b && b < d && d <= hi,
            _ => false,
        }
    }
}

pub fn eidlin_flip_bracket(scheme: &CantorScheme, alphas: &[f64], max_level: u32) -> Result<FlipBracket> {
    let verdicts = alphas
        .iter()
        .map(|&a| eidlin_criterion(scheme, a, max_level).map(|r| (a, r.verdict)))
        .collect::<Result<Vec<_>>>()?;
    let last_bounded = verdicts.iter().filter(|(_, v)| *v == Verdict::Bounded).map(|(a, _)| *a).reduce(f64::max);
    let first_diverging =
        verdicts.iter().filter(|(_, v)| *v == Verdict::Diverging).map(|(a, _)| *a).reduce(f64::min);
    Ok(FlipBracket { verdicts, last_bounded, first_diverging })
}

/// Dimension thresholds separating cyclic and non-cyclic zero sets in
/// `A^p_β` for `1 < p < 2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Thresholds {
    pub p: f64,
    pub beta: f64,
    pub q: f64,
    /// Zero sets of dimension below `(2/q)(1 − βq)` allow cyclicity.
    pub cyclic_below: f64,
    /// Zero sets with positive `(1 − βq)`-capacity prevent it.
    pub noncyclic_above: f64,
    /// `k = [q/2]`.
    pub k: u32,
    /// `max((2/q)(1 − βq) k, 1 − 2(k + 1)β)`, the k-fold sumset bound.
    pub mixed_bound: f64,
    /// `p = 2k/(2k − 1)`, where the two thresholds meet the sumset bound.
    pub optimal_case: bool,
}

pub fn theorem_thresholds(p: f64, beta: f64) -> Result<Thresholds> {
    if !(p > 1.0 && p < 2.0) {
        return Err(Error::precondition(format!("thresholds need 1 < p < 2, got {p}")));
    }
    let q = SpaceParams::new(p, beta)?.q();
    if beta < 0.0 || beta * q > 1.0 {
        return Err(Error::precondition(format!("thresholds need beta >= 0 and beta*q <= 1, got beta = {beta}")));
    }
    let cyclic_below = 2.0 / q * (1.0 - beta * q);
    let k = (q / 2.0).floor() as u32;
    let kf = f64::from(k);
    let mixed_bound = (cyclic_below * kf).max(1.0 - 2.0 * (kf + 1.0) * beta);
    let optimal_case = k >= 1 && (p - 2.0 * kf / (2.0 * kf - 1.0)).abs() < 1e-12;
    Ok(Thresholds {
        p,
        beta,
        q,
        cyclic_below,
        noncyclic_above: 1.0 - beta * q,
        k,
        mixed_bound,
        optimal_case,
    })
}
