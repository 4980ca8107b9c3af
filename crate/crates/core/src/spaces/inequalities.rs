use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::params::{SpaceParams, WeightKind};
use super::pwl::PiecewiseLinear;
use super::seq::FourierSeq;
use crate::{Error, Result};

/// Both sides of the interpolation inequality
/// `‖f‖_{A^p_β} <= C^{1/p} ‖f‖_{A²}^{3/2−1/p−β} (‖f‖_{A²} + ‖f′‖_{A²})^{1/p−1/2+β}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterpolationReport {
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    pub holds: bool,
}

/// The constant `C = max(2^{βp}, 2^p (γ − 1)^{p/2 − 1})` with
/// `γ = 2p(1 − β)/(2 − p)`.
pub fn interpolation_constant(p: f64, beta: f64) -> Result<f64> {
    check_interpolation_domain(p, beta)?;
    let gamma = 2.0 * p * (1.0 - beta) / (2.0 - p);
    let first = 2f64.powf(beta * p);
    let second = 2f64.powf(p) * (1.0 / (gamma - 1.0)).powf(1.0 - p / 2.0);
    Ok(first.max(second))
}

fn check_interpolation_domain(p: f64, beta: f64) -> Result<()> {
    if !(1.0..2.0).contains(&p) {
        return Err(Error::precondition(format!("interpolation needs 1 <= p < 2, got p = {p}")));
    }
    if beta < 0.0 {
        return Err(Error::precondition(format!("interpolation needs beta >= 0, got {beta}")));
    }
    let q = super::params::conjugate(p);
    let beta_q = if beta == 0.0 { 0.0 } else { beta * q };
    if beta_q > 1.0 {
        return Err(Error::precondition(format!("interpolation needs beta*q <= 1, got {beta_q}")));
    }
    Ok(())
}

pub fn check_interpolation(f: &FourierSeq, params: &SpaceParams) -> Result<InterpolationReport> {
    if params.weight_kind() != WeightKind::Power {
        return Err(Error::precondition("interpolation is stated for power weights"));
    }
    let (p, beta) = (params.p(), params.beta());
    let constant = interpolation_constant(p, beta)?;
    let lhs = f.weighted_norm(params);
    let l2 = f.iter().map(|(_, c)| c.norm_sqr()).sum::<f64>().sqrt();
    let h1 = f.iter().map(|(n, c)| (n as f64).powi(2) * c.norm_sqr()).sum::<f64>().sqrt();
    let rhs = constant.powf(1.0 / p)
        * l2.powf(1.5 - 1.0 / p - beta)
        * (l2 + h1).powf(1.0 / p - 0.5 + beta);
    Ok(InterpolationReport { lhs, rhs, constant, holds: lhs <= rhs })
}

/// Partial sum of `Σ |ĝ(n)| (1+|n|)^β` over `|n| <= truncation`, with a
/// certified bound on the rest of the series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncatedNorm {
    pub truncation: i64,
    pub partial_sum: f64,
    pub tail_bound: f64,
}

/// Comparison of `‖g‖_∞ + 2√((2−2β)/(1−2β)) ‖g′‖_∞` with the `A¹_β` norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupDerivativeReport {
    pub bound: f64,
    pub truncations: Vec<TruncatedNorm>,
    /// `bound − (partial sum + tail)` at the largest truncation; non-negative
    /// means the bound is confirmed for the full series.
    pub margin: f64,
    /// Every partial sum stays below the bound.
    pub holds: bool,
}

const SUP_TRUNCATIONS: [i64; 6] = [8, 32, 128, 512, 2048, 8192];

pub fn sup_derivative_bound(g: &PiecewiseLinear, beta: f64) -> Result<SupDerivativeReport> {
    if !(0.0..0.5).contains(&beta) {
        return Err(Error::precondition(format!("sup-derivative bound needs 0 <= beta < 1/2, got {beta}")));
    }
    let bound = g.sup_norm() + 2.0 * ((2.0 - 2.0 * beta) / (1.0 - 2.0 * beta)).sqrt() * g.sup_derivative();
    let variation = g.slope_variation();
    let mut partial = g.coefficient(0).norm();
    let mut next = 1i64;
    let mut truncations = Vec::with_capacity(SUP_TRUNCATIONS.len());
    for &cut in &SUP_TRUNCATIONS {
        while next <= cut {
            let weight = (1.0 + next as f64).powf(beta);
            partial += (g.coefficient(next).norm() + g.coefficient(-next).norm()) * weight;
            next += 1;
        }
        // |ĝ(n)| <= V/(4π²n²) and (1+n)^β <= ((1+M)/M)^β n^β for n > M.
        let m = cut as f64;
        let tail_bound = variation / (2.0 * PI * PI)
            * ((1.0 + m) / m).powf(beta)
            * m.powf(beta - 1.0)
            / (1.0 - beta);
        truncations.push(TruncatedNorm { truncation: cut, partial_sum: partial, tail_bound });
    }
    let last = truncations.last().expect("at least one truncation");
    let margin = bound - (last.partial_sum + last.tail_bound);
    let holds = truncations.iter().all(|t| t.partial_sum <= bound);
    Ok(SupDerivativeReport { bound, truncations, margin, holds })
}

/// Upper bound for the norm of the embedding `A^r_β ⊂ A^s_γ`, or `None`
/// when the embedding fails.
pub fn inclusion_constant(r: f64, beta: f64, s: f64, gamma: f64) -> Option<f64> {
    if r.is_nan() || s.is_nan() || r < 1.0 || s < 1.0 || !beta.is_finite() || !gamma.is_finite() {
        return None;
    }
    if r <= s {
        return (gamma <= beta).then_some(1.0);
    }
    let gap = 1.0 / s - 1.0 / r;
    if beta - gamma <= gap + 1e-12 {
        return None;
    }
    // Hölder with exponents r/s and r/(r−s) leaves Σ (1+|n|)^e to the power
    // 1/s − 1/r.
    let exponent = if r.is_infinite() { s * (gamma - beta) } else { r * s * (gamma - beta) / (r - s) };
    const CUT: u32 = 100_000;
    let head: f64 = (2..=CUT + 1).rev().map(|m| f64::from(m).powf(exponent)).sum();
    let tail = f64::from(CUT + 1).powf(exponent + 1.0) / (-exponent - 1.0);
    Some((1.0 + 2.0 * (head + tail)).powf(gap))
}

/// Whether `A^p_β` is a Banach algebra under pointwise multiplication.
pub fn banach_algebra_check(params: &SpaceParams) -> bool {
    if params.p() == 1.0 {
        params.beta() >= 0.0
    } else {
        params.beta() * params.q() > 1.0
    }
}
