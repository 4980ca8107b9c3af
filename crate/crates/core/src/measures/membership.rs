use serde::Serialize;

use super::coeffs::MeasureCoeffs;
use super::energy::{alpha_energy, checkpoints, envelope_tail, EnergyReport};
use crate::sets::Verdict;
use crate::{Error, Result};

/// Threshold on the last per-frequency contributions used when no envelope
/// settles the question.
pub const DEFAULT_INCREMENT_THRESHOLD: f64 = 1e-8;

/// Partial sums of `Σ_n |μ̂(n)|^q (1+|n|)^{−βq}` over `|n| <= N`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MembershipReport {
    pub q: f64,
    pub beta: f64,
    pub checkpoints: Vec<u64>,
    pub partial_sums: Vec<f64>,
    /// Contributions of `±n` for the last three frequencies `n`.
    pub last_increments: Vec<f64>,
    pub tail_bound: Option<f64>,
    /// Summability of the certified envelope, when the measure has one.
    pub envelope_verdict: Option<Verdict>,
    pub verdict: Verdict,
    /// Energy `I_{1−βq}`, whose finiteness implies membership; absent when
    /// `βq` falls outside `(0, 1]`.
    pub chain_energy: Option<EnergyReport>,
}

impl MembershipReport {
    pub fn increments_below(&self, threshold: f64) -> bool {
        self.last_increments.len() == 3 && self.last_increments.iter().all(|&d| d < threshold)
    }
}

#[allow(non_snake_case)]
pub fn membership_Aq(mu: &MeasureCoeffs, q: f64, beta: f64, n_max: u64) -> Result<MembershipReport> {
    if !(q >= 2.0 && q.is_finite()) || !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::invalid(format!("membership needs q >= 2 and beta >= 0, got ({q}, {beta})")));
    }
    if n_max < 3 {
        return Err(Error::invalid("n_max must be at least 3"));
    }
    if !mu.has_error_bounds() {
        return Err(Error::MissingErrorBounds("membership partial sums need coefficient errors".into()));
    }
    let points = checkpoints(n_max);
    let mut partial_sums = Vec::with_capacity(points.len());
    let mut sum = 1.0;
    let mut increments = Vec::with_capacity(3);
    let mut next = 0;
    for n in 1..=n_max {
        let weight = (1.0 + n as f64).powf(-beta * q);
        let plus = mu.coefficient(n as i64).magnitude_upper().expect("bounds checked above");
        let minus = mu.coefficient(-(n as i64)).magnitude_upper().expect("bounds checked above");
        let increment = (plus.powf(q) + minus.powf(q)) * weight;
        sum += increment;
        if n + 3 > n_max {
            increments.push(increment);
        }
        if n == points[next] {
            partial_sums.push(sum);
            next += 1;
        }
    }

    let mut tail_bound = None;
    let mut envelope_verdict = None;
    if let Some(radius) = mu.support_radius() {
        if radius.unsigned_abs() <= n_max {
            tail_bound = Some(0.0);
            envelope_verdict = Some(Verdict::Bounded);
        }
    } else if let Some(env) = mu.envelope() {
        // |μ̂(n)|^q (1+n)^{−βq} <= n^{−(αq/2 + βq)} ln(en)^{−γq/2}
        let s = env.alpha * q / 2.0 + beta * q;
        let g = env.gamma * q / 2.0;
        tail_bound = envelope_tail(n_max, s, g).map(|t| 2.0 * t);
        envelope_verdict = Some(match tail_bound {
            Some(_) => Verdict::Bounded,
            None if env.attained => Verdict::Diverging,
            None => Verdict::Inconclusive,
        });
    }
    let verdict = envelope_verdict.unwrap_or(if increments.iter().all(|&d| d < DEFAULT_INCREMENT_THRESHOLD) {
        Verdict::Bounded
    } else {
        Verdict::Inconclusive
    });

    let chain_alpha = 1.0 - beta * q;
    let chain_energy = if (0.0..1.0).contains(&chain_alpha) { Some(alpha_energy(mu, chain_alpha, n_max)?) } else { None };

    Ok(MembershipReport {
        q,
        beta,
        checkpoints: points,
        partial_sums,
        last_increments: increments,
        tail_bound,
        envelope_verdict,
        verdict,
        chain_energy,
    })
}
