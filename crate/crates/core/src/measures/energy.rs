use serde::Serialize;

use super::coeffs::{Envelope, MeasureCoeffs};
use crate::sets::{Verdict, VerdictThresholds};
use crate::{Error, Result};

/// Partial sums of `I_α(μ) = Σ_{n>=1} |μ̂(n)|² (1+n)^{α−1}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnergyReport {
    pub alpha: f64,
    /// Truncation points `N` (powers of two, then `N_max`).
    pub checkpoints: Vec<u64>,
    /// Upper partial sums with coefficient errors folded in.
    pub partial_sums: Vec<f64>,
    /// Certified bound on `Σ_{n>N_max}`, when available.
    pub tail_bound: Option<f64>,
    pub verdict: Verdict,
}

impl EnergyReport {
    pub fn final_sum(&self) -> f64 {
        self.partial_sums.last().copied().unwrap_or(0.0)
    }

    /// Certified upper bound on the full energy, when the tail is certified.
    pub fn upper_bound(&self) -> Option<f64> {
        self.tail_bound.map(|t| self.final_sum() + t)
    }
}

pub(crate) fn checkpoints(max: u64) -> Vec<u64> {
    let mut points: Vec<u64> = (0..64).map(|k| 1u64 << k).take_while(|&c| c < max).collect();
    points.push(max);
    points
}

pub(crate) fn ln_increments(sums: &[f64]) -> Vec<f64> {
    sums.windows(2)
        .map(|w| if w[0] > 0.0 { w[1].ln() - w[0].ln() } else if w[1] > 0.0 { f64::INFINITY } else { 0.0 })
        .collect()
}

/// `Σ_{n>N} n^{-s} ln(en)^{-g}`, or `None` when the bound is not summable.
pub(crate) fn envelope_tail(n: u64, s: f64, g: f64) -> Option<f64> {
    let nf = n.max(1) as f64;
    let log_factor = 1.0 + nf.ln();
    if s > 1.0 + 1e-12 {
        Some(log_factor.powf(-g) * nf.powf(1.0 - s) / (s - 1.0))
    } else if (s - 1.0).abs() <= 1e-12 && g > 1.0 {
        Some(log_factor.powf(1.0 - g) / (g - 1.0))
    } else {
        None
    }
}

fn energy_tail(mu: &MeasureCoeffs, alpha: f64, n_max: u64) -> Option<f64> {
    if let Some(radius) = mu.support_radius() {
        if mu.has_error_bounds() && radius.unsigned_abs() <= n_max {
            return Some(0.0);
        }
    }
    let Envelope { alpha: a, gamma, .. } = mu.envelope()?;
    // |μ̂(n)|² (1+n)^{α−1} <= n^{-a} ln(en)^{-γ} n^{α−1}
    envelope_tail(n_max, a + 1.0 - alpha, gamma)
}

/// Energy partial sums up to `n_max`, checkpointed at powers of two.
///
/// The verdict is `Bounded` whenever the tail is certified, and otherwise
/// follows the shared increment thresholds.
pub fn alpha_energy(mu: &MeasureCoeffs, alpha: f64, n_max: u64) -> Result<EnergyReport> {
    alpha_energy_with(mu, alpha, n_max, VerdictThresholds::default())
}

pub fn alpha_energy_with(
    mu: &MeasureCoeffs,
    alpha: f64,
    n_max: u64,
    thresholds: VerdictThresholds,
) -> Result<EnergyReport> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::invalid(format!("energy exponent must lie in [0, 1), got {alpha}")));
    }
    if n_max == 0 {
        return Err(Error::invalid("n_max must be positive"));
    }
    if !mu.has_error_bounds() {
        return Err(Error::MissingErrorBounds("energy partial sums need coefficient errors".into()));
    }
    let points = checkpoints(n_max);
    let mut partial_sums = Vec::with_capacity(points.len());
    let mut sum = 0.0;
    let mut next = 0;
    for n in 1..=n_max {
        let c = mu.coefficient(n as i64);
        let magnitude = c.magnitude_upper().expect("bounds checked above");
        sum += magnitude * magnitude * (1.0 + n as f64).powf(alpha - 1.0);
        if n == points[next] {
            partial_sums.push(sum);
            next += 1;
        }
    }
    let tail_bound = energy_tail(mu, alpha, n_max);
    let verdict = if tail_bound.is_some() {
        Verdict::Bounded
    } else {
        thresholds.classify(&ln_increments(&partial_sums))
    };
    Ok(EnergyReport { alpha, checkpoints: points, partial_sums, tail_bound, verdict })
}
