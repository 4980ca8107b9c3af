use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::measures::{MeasureCoeffs, MeasureKind};
use crate::spaces::{FourierSeq, SpaceParams};
use crate::{Error, Result};

/// Degree-limited lower bound on `‖1 − P f‖` over `deg P <= valid_degree`.
///
/// The functional used is `L = μ + T`, where the trigonometric polynomial
/// `T` cancels the computed pairings `⟨μ, e_n f⟩` for `|n| <= N`. What is
/// left of those pairings after the correction, including coefficient
/// errors, enters through `residual_slack`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub bound: f64,
    /// Upper estimate of the dual norm of `L` on the frequencies reachable
    /// by `1 − P f`.
    pub mu_norm: f64,
    /// Same estimate for `μ` alone, before the correction.
    pub measure_norm: f64,
    /// `‖r‖₂ / σ`, the slack from uncancelled residuals `r`.
    pub residual_slack: f64,
    /// `‖(⟨μ, e_n f⟩)_n‖₂` before correction.
    pub raw_residual: f64,
    /// Lower bound on the smallest singular value of `P ↦ P f`.
    pub singular_value: f64,
    /// `|⟨L, 1⟩|`.
    pub pairing_at_one: f64,
    pub valid_degree: u32,
}

const ROUNDOFF: f64 = 8.0 * f64::EPSILON;

pub fn noncyclicity_certificate(
    f: &FourierSeq,
    mu: &MeasureCoeffs,
    params: &SpaceParams,
    degree: u32,
) -> Result<Certificate> {
    if mu.kind() == MeasureKind::SyntheticEnvelope {
        return Err(Error::precondition("synthetic envelopes are not measures and cannot certify"));
    }
    if !mu.has_error_bounds() {
        return Err(Error::MissingErrorBounds("certificates need certified coefficients".into()));
    }
    let p = params.p();
    if !(1.0..=2.0).contains(&p) || params.beta() < 0.0 {
        return Err(Error::precondition(format!(
            "certificates need 1 <= p <= 2 and beta >= 0, got ({p}, {})",
            params.beta()
        )));
    }
    let q = params.q();
    let n = i64::from(degree);
    // μ̂ on every frequency that can pair with 1 − P f.
    let (first, last) = match f.support() {
        Some((lo, hi)) => ((-hi - n).min(0), (n - lo).max(0)),
        None => (0, 0),
    };
    let coeffs: Vec<_> = (first..=last).map(|j| mu.coefficient(j)).collect();
    let at = |j: i64| &coeffs[(j - first) as usize];

    let size = (2 * n + 1) as usize;
    let f_abs: f64 = f.iter().map(|(_, c)| c.norm()).sum();
    let mut rho = DVector::<Complex64>::zeros(size);
    let mut rho_err = vec![0.0; size];
    for (row, m) in (-n..=n).enumerate() {
        let mut magnitude = 0.0;
        for (k, c) in f.iter() {
            let coefficient = at(-m - k);
            rho[row] += c * coefficient.value;
            rho_err[row] += c.norm() * coefficient.error.expect("bounds checked above");
            magnitude += c.norm() * coefficient.value.norm();
        }
        rho_err[row] += ROUNDOFF * f.len() as f64 * magnitude;
    }
    let raw_residual = rho.norm();

    // A_{n,m} = f̂(−m−n), so that (A t)_n = ⟨T, e_n f⟩ with T̂(m) = t_m.
    let a = DMatrix::from_fn(size, size, |row, col| f.get(-(col as i64 - n) - (row as i64 - n)));
    let correction = if raw_residual > 0.0 {
        a.clone().lu().solve(&(-&rho)).filter(|t| t.iter().all(|c| c.is_finite()))
    } else {
        None
    }
    .unwrap_or_else(|| DVector::zeros(size));

    let solved = &rho + &a * &correction;
    let t_abs: f64 = correction.iter().map(|c| c.norm()).sum();
    let residual = (0..size)
        .map(|row| {
            let allowance = ROUNDOFF * (size as f64 + f.len() as f64) * (f_abs * t_abs.max(1.0));
            (rho_err[row] + solved[row].norm() + allowance).powi(2)
        })
        .sum::<f64>()
        .sqrt();

    let singular_value = smallest_singular_value(f, n);
    let residual_slack = if residual == 0.0 {
        0.0
    } else if singular_value > 0.0 {
        residual / singular_value
    } else {
        f64::INFINITY
    };

    let t_at = |j: i64| if j.abs() <= n { correction[(j + n) as usize] } else { Complex64::new(0.0, 0.0) };
    let dual_norm = |with_correction: bool| -> f64 {
        let terms = (first..=last).map(|j| {
            let c = at(j);
            let extra = if with_correction { t_at(j).norm() } else { 0.0 };
            (c.value.norm() + c.error.expect("bounds checked above") + extra) / params.weight(j)
        });
        let norm = if params.q_is_infinite() {
            terms.fold(0.0, f64::max)
        } else {
            terms.map(|x| x.powf(q)).sum::<f64>().powf(1.0 / q)
        };
        norm * (1.0 + ROUNDOFF * (last - first + 1) as f64)
    };
    let mu_norm = dual_norm(true);
    let measure_norm = dual_norm(false);

    let pairing_at_one = (Complex64::new(1.0, 0.0) + t_at(0)).norm() * (1.0 - ROUNDOFF);
    // ‖P‖₂ <= ‖P f‖₂ / σ <= (‖1‖₂ + ‖1 − P f‖) / σ, since the norm of the
    // space dominates the ℓ² norm for p <= 2 and weights >= 1.
    let numerator = pairing_at_one - residual_slack;
    let bound = if numerator > 0.0 && residual_slack.is_finite() {
        (numerator / (mu_norm + residual_slack) * (1.0 - ROUNDOFF)).max(0.0)
    } else {
        0.0
    };
    Ok(Certificate {
        bound,
        mu_norm,
        measure_norm,
        residual_slack,
        raw_residual,
        singular_value,
        pairing_at_one,
        valid_degree: degree,
    })
}

/// `σ_min` of `P ↦ P f` on `|m| <= n`, from the Toeplitz Gram matrix
/// `G_{m,m'} = Σ_k conj(f̂(k)) f̂(k + m − m')`, less a roundoff margin.
fn smallest_singular_value(f: &FourierSeq, n: i64) -> f64 {
    if f.is_empty() {
        return 0.0;
    }
    let autocorrelation = |d: i64| -> Complex64 { f.iter().map(|(k, c)| c.conj() * f.get(k + d)).sum() };
    let size = (2 * n + 1) as usize;
    let lags: Vec<Complex64> = (-2 * n..=2 * n).map(autocorrelation).collect();
    let gram = DMatrix::from_fn(size, size, |row, col| lags[(row as i64 - col as i64 + 2 * n) as usize]);
    let eigen = gram.symmetric_eigen();
    let lowest = eigen.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let margin = 64.0 * f64::EPSILON * size as f64 * lags[(2 * n) as usize].re;
    (lowest - margin).max(0.0).sqrt()
}
