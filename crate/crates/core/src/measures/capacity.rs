use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::sets::{eidlin_criterion, CantorScheme, EidlinReport};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CapacityConfig {
    /// Cover level; defaults to one above the first level of the scheme.
    pub level: Option<u32>,
    /// Frequencies `1..=max_freq` enter the quadratic form exactly.
    pub max_freq: u32,
    pub max_iters: u32,
    /// Stop when the energy decreases by less than this, relatively.
    pub tolerance: f64,
    /// Largest number of weights the dense solver accepts.
    pub max_weights: usize,
    /// Last level for the Eidlin evidence; defaults to ten above the first.
    pub eidlin_max_level: Option<u32>,
}

impl Default for CapacityConfig {
    fn default() -> Self {
        CapacityConfig {
            level: None,
            max_freq: 4096,
            max_iters: 5000,
            tolerance: 1e-12,
            max_weights: 1024,
            eidlin_max_level: None,
        }
    }
}

/// Capacity evidence for a Cantor scheme at one exponent.
///
/// `lower_bound` is a rigorous lower bound on the capacity of the level
/// cover `E_N`, which contains the set; `upper_evidence` concerns the set
/// itself.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CapacityReport {
    pub alpha: f64,
    pub level: u32,
    pub weights: usize,
    pub equal_weight_energy: f64,
    pub optimized_energy: f64,
    /// Certified bound on the energy carried by frequencies above `max_freq`.
    pub tail_bound: f64,
    pub lower_bound: f64,
    pub iterations: u32,
    pub converged: bool,
    /// Eidlin partial sums for the set itself; absent at `α = 0`.
    pub upper_evidence: Option<EidlinReport>,
}

/// Left endpoints of the level intervals as doubles.
fn left_endpoints(scheme: &CantorScheme, level: u32, max: usize) -> Result<Vec<f64>> {
    let free = scheme.free_digits(0, 1u128 << level);
    if free.len() >= usize::BITS as usize || (1usize << free.len()) > max {
        return Err(Error::Budget {
            what: "capacity weights",
            requested: format!("2^{}", free.len()),
            budget: max.to_string(),
        });
    }
    let mut points = vec![0.0f64];
    for &digit in &free {
        let step = (-(digit as f64) - 1.0).exp2();
        let shifted: Vec<f64> = points.iter().map(|a| a + step).collect();
        points.extend(shifted);
    }
    points.sort_by(f64::total_cmp);
    Ok(points)
}

/// Euclidean projection onto the probability simplex.
fn project_to_simplex(v: &mut [f64]) {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut shift = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        cumulative += x;
        let candidate = (cumulative - 1.0) / (i as f64 + 1.0);
        if x - candidate > 0.0 {
            shift = candidate;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - shift).max(0.0);
    }
}

fn quadratic(q: &[Vec<f64>], w: &[f64]) -> f64 {
    q.iter().zip(w).map(|(row, wi)| wi * row.iter().zip(w).map(|(a, b)| a * b).sum::<f64>()).sum()
}

/// Upper bound on `Σ_{n>K} (1+n)^{α−1} min(1, 1/(πnl))²`.
fn frequency_tail(alpha: f64, length: f64, k: u32) -> f64 {
    let k = f64::from(k);
    let turn = (1.0 / (PI * length)).max(k);
    let flat = if alpha > 0.0 {
        ((1.0 + turn).powf(alpha) - (1.0 + k).powf(alpha)) / alpha
    } else {
        ((1.0 + turn) / (1.0 + k)).ln()
    };
    let decaying = (PI * length).powi(-2) * turn.powf(alpha - 2.0) / (2.0 - alpha);
    flat + decaying
}

/// Minimizes the truncated energy of measures spreading mass uniformly
/// inside each level interval, over the interval weights.
pub fn capacity_bounds(scheme: &CantorScheme, alpha: f64, config: &CapacityConfig) -> Result<CapacityReport> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::invalid(format!("capacity exponent must lie in [0, 1), got {alpha}")));
    }
    let level = config.level.unwrap_or(scheme.n0() + 1);
    let starts = left_endpoints(scheme, level, config.max_weights)?;
    let length = scheme.log2_level_length(level)?.exp2();
    let m = starts.len();

    // Q_ij = Σ_n (1+n)^{α−1} sinc²(πnl) cos(2πn(a_i − a_j)); the common
    // centring phase cancels.
    let spectral: Vec<f64> = (1..=config.max_freq)
        .map(|n| {
            let x = PI * f64::from(n) * length;
            let sinc = if x == 0.0 { 1.0 } else { x.sin() / x };
            (1.0 + f64::from(n)).powf(alpha - 1.0) * sinc * sinc
        })
        .collect();
    let mut q = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in i..m {
            let d = starts[i] - starts[j];
            let value: f64 = spectral
                .iter()
                .enumerate()
                .map(|(idx, s)| s * (TAU * ((idx as f64 + 1.0) * d).rem_euclid(1.0)).cos())
                .sum();
            q[i][j] = value;
            q[j][i] = value;
        }
    }

    let mut weights = vec![1.0 / m as f64; m];
    let equal_weight_energy = quadratic(&q, &weights);
    let lipschitz = 2.0 * q.iter().map(|row| row.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0f64, f64::max);
    let mut energy = equal_weight_energy;
    let mut iterations = 0;
    let mut converged = lipschitz == 0.0;
    while !converged && iterations < config.max_iters {
        iterations += 1;
        let gradient: Vec<f64> = q.iter().map(|row| 2.0 * row.iter().zip(&weights).map(|(a, b)| a * b).sum::<f64>()).collect();
        let mut next: Vec<f64> = weights.iter().zip(&gradient).map(|(w, g)| w - g / lipschitz).collect();
        project_to_simplex(&mut next);
        let next_energy = quadratic(&q, &next);
        if next_energy > energy {
            converged = true;
            break;
        }
        let decrease = energy - next_energy;
        weights = next;
        energy = next_energy;
        converged = decrease <= config.tolerance * energy.max(f64::MIN_POSITIVE);
    }

    let tail_bound = frequency_tail(alpha, length, config.max_freq);
    // Every summand of the truncated sum is bounded by its exact value up to
    // a few ulps per frequency.
    let roundoff = 8.0 * f64::EPSILON * f64::from(config.max_freq) * spectral.first().copied().unwrap_or(0.0);
    let lower_bound = 1.0 / (energy + roundoff + tail_bound);
    let eidlin_level = config.eidlin_max_level.unwrap_or(scheme.n0() + 10);
    let upper_evidence = if alpha > 0.0 { Some(eidlin_criterion(scheme, alpha, eidlin_level)?) } else { None };
    Ok(CapacityReport {
        alpha,
        level,
        weights: m,
        equal_weight_energy,
        optimized_energy: energy,
        tail_bound,
        lower_bound,
        iterations,
        converged,
        upper_evidence,
    })
}
