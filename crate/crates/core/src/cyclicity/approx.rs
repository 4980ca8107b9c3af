use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::spaces::{FourierSeq, SpaceParams};
use crate::{Error, Result};

/// Iteration budget for the reweighted least-squares solver.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Stop a smoothing stage when the objective decreases by less than
    /// this, relatively.
    pub tolerance: f64,
    pub max_iters: u32,
    pub smoothing_start: f64,
    pub smoothing_end: f64,
    /// Iterations allowed per smoothing stage.
    pub stage_iters: u32,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { tolerance: 1e-10, max_iters: 500, smoothing_start: 1e-3, smoothing_end: 1e-12, stage_iters: 60 }
    }
}

/// Best approximation of `1` by `P f` with `deg P <= degree`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproxResult {
    pub degree: u32,
    /// `‖1 − P f‖` evaluated exactly at the returned `P`.
    pub error: f64,
    pub coefficients: FourierSeq,
    pub solver_iters: u32,
    pub converged: bool,
}

/// Dense convolution operator `P ↦ P f` restricted to `|m| <= degree`,
/// with rows indexed by the output frequencies.
struct Convolution {
    first_row: i64,
    matrix: DMatrix<Complex64>,
    weights: Vec<f64>,
    degree: i64,
}

impl Convolution {
    fn new(f: &FourierSeq, params: &SpaceParams, degree: u32) -> Result<Self> {
        let (lo, hi) = f.support().ok_or_else(|| Error::precondition("cannot approximate with f = 0"))?;
        let degree = i64::from(degree);
        let first_row = (lo - degree).min(0);
        let last_row = (hi + degree).max(0);
        let rows = (last_row - first_row + 1) as usize;
        let cols = (2 * degree + 1) as usize;
        let mut matrix = DMatrix::zeros(rows, cols);
        for col in 0..cols {
            let m = col as i64 - degree;
            for (k, c) in f.iter() {
                matrix[((k + m - first_row) as usize, col)] = c;
            }
        }
        let weights = (first_row..=last_row).map(|j| params.weight(j)).collect();
        Ok(Convolution { first_row, matrix, weights, degree })
    }

    /// `1 − C x` as a vector over the rows.
    fn residual(&self, x: &DVector<Complex64>) -> DVector<Complex64> {
        let mut r = -(&self.matrix * x);
        r[(-self.first_row) as usize] += Complex64::new(1.0, 0.0);
        r
    }

    fn objective(&self, r: &DVector<Complex64>, p: f64) -> f64 {
        let terms: Vec<f64> = r.iter().zip(&self.weights).map(|(c, w)| c.norm() * w).collect();
        let peak = terms.iter().copied().fold(0.0, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        peak * terms.iter().map(|t| (t / peak).powf(p)).sum::<f64>().powf(1.0 / p)
    }

    /// Minimizes `Σ u_j |1 − (Cx)_j|²` for nonnegative row weights `u`.
    fn weighted_least_squares(&self, u: &[f64]) -> Option<DVector<Complex64>> {
        let mut scaled = self.matrix.clone();
        for (mut row, &uj) in scaled.row_iter_mut().zip(u) {
            row *= Complex64::new(uj.sqrt(), 0.0);
        }
        let gram = scaled.ad_mul(&scaled);
        let zero_row = (-self.first_row) as usize;
        let rhs = self.matrix.row(zero_row).adjoint() * Complex64::new(u[zero_row], 0.0);
        match gram.clone().cholesky() {
            Some(chol) => Some(chol.solve(&rhs)),
            None => gram.lu().solve(&rhs),
        }
    }

    fn to_seq(&self, x: &DVector<Complex64>) -> FourierSeq {
        FourierSeq::from_pairs(x.iter().enumerate().map(|(i, &c)| (i as i64 - self.degree, c)))
    }

    fn unknowns_of(&self, s: &FourierSeq) -> DVector<Complex64> {
        DVector::from_fn((2 * self.degree + 1) as usize, |i, _| s.get(i as i64 - self.degree))
    }
}

/// `‖1 − P f‖` in the space norm.
pub fn approx_objective(f: &FourierSeq, p: &FourierSeq, params: &SpaceParams) -> f64 {
    FourierSeq::one().sub(&p.multiply(f)).weighted_norm(params)
}

pub fn best_approx(f: &FourierSeq, params: &SpaceParams, degree: u32, config: &SolverConfig) -> Result<ApproxResult> {
    best_approx_from(f, params, degree, config, None)
}

/// As [`best_approx`], also trying `warm` (truncated to the degree) as a
/// starting point; the result is never worse than `warm`.
pub fn best_approx_from(
    f: &FourierSeq,
    params: &SpaceParams,
    degree: u32,
    config: &SolverConfig,
    warm: Option<&FourierSeq>,
) -> Result<ApproxResult> {
    let p = params.p();
    if !(1.0..=2.0).contains(&p) {
        return Err(Error::precondition(format!("best approximation needs 1 <= p <= 2, got {p}")));
    }
    let op = Convolution::new(f, params, degree)?;
    let weights_p: Vec<f64> = op.weights.iter().map(|w| w.powf(p)).collect();
    let squared: Vec<f64> = op.weights.iter().map(|w| w * w).collect();

    let mut best: Option<(f64, DVector<Complex64>)> = None;
    let consider = |x: DVector<Complex64>, best: &mut Option<(f64, DVector<Complex64>)>| {
        let value = op.objective(&op.residual(&x), p);
        if value.is_finite() && best.as_ref().is_none_or(|(b, _)| value < *b) {
            *best = Some((value, x));
        }
    };
    if let Some(w) = warm {
        consider(op.unknowns_of(&w.truncate(i64::from(degree))), &mut best);
    }
    let start = op.weighted_least_squares(&squared);
    if let Some(x) = start.clone() {
        consider(x, &mut best);
    }

    let mut iterations = 0;
    let mut converged = p == 2.0 && start.is_some();
    if p < 2.0 {
        let mut x = best.as_ref().map(|(_, x)| x.clone()).unwrap_or_else(|| op.unknowns_of(&FourierSeq::zero()));
        let mut smoothing = config.smoothing_start;
        'stages: loop {
            let last_stage = smoothing <= config.smoothing_end * (1.0 + 1e-9);
            let mut previous = f64::INFINITY;
            let mut stage_done = false;
            for _ in 0..config.stage_iters {
                if iterations >= config.max_iters {
                    break 'stages;
                }
                iterations += 1;
                let r = op.residual(&x);
                let eps2 = smoothing * smoothing;
                let u: Vec<f64> = r
                    .iter()
                    .zip(&weights_p)
                    .map(|(c, wp)| wp * (c.norm_sqr() + eps2).powf(0.5 * p - 1.0))
                    .collect();
                let Some(next) = op.weighted_least_squares(&u) else { break 'stages };
                x = next;
                let r = op.residual(&x);
                let smoothed: f64 = r
                    .iter()
                    .zip(&weights_p)
                    .map(|(c, wp)| wp * (c.norm_sqr() + eps2).powf(0.5 * p))
                    .sum();
                consider(x.clone(), &mut best);
                if previous.is_finite() && previous - smoothed <= config.tolerance * smoothed.abs() {
                    stage_done = true;
                    break;
                }
                previous = smoothed;
            }
            if last_stage {
                converged = stage_done;
                break;
            }
            smoothing = (smoothing / 10.0).max(config.smoothing_end);
        }
    }

    let (_, x) = best.ok_or_else(|| Error::Numerical("least-squares system is singular".into()))?;
    let coefficients = op.to_seq(&x);
    let error = approx_objective(f, &coefficients, params);
    Ok(ApproxResult { degree, error, coefficients, solver_iters: iterations, converged })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "label")]
pub enum Trend {
    Decaying,
    Plateau { level: f64 },
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrendConfig {
    /// First error over last error needed to call the scan decaying.
    pub decay_factor: f64,
    /// Relative spread of the last three errors that counts as a plateau.
    pub plateau_tolerance: f64,
}

impl Default for TrendConfig {
    fn default() -> Self {
        TrendConfig { decay_factor: 1.25, plateau_tolerance: 1e-2 }
    }
}

impl TrendConfig {
    pub fn classify(&self, errors: &[f64]) -> Trend {
        let (Some(&first), Some(&last)) = (errors.first(), errors.last()) else {
            return Trend::Inconclusive;
        };
        if errors.len() >= 2 && (last == 0.0 && first > 0.0 || last > 0.0 && first / last >= self.decay_factor) {
            return Trend::Decaying;
        }
        if errors.len() >= 3 {
            let tail = &errors[errors.len() - 3..];
            let hi = tail.iter().copied().fold(f64::MIN, f64::max);
            let lo = tail.iter().copied().fold(f64::MAX, f64::min);
            if hi - lo <= self.plateau_tolerance * hi.abs() {
                return Trend::Plateau { level: last };
            }
        }
        Trend::Inconclusive
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanResult {
    pub results: Vec<ApproxResult>,
    pub trend: Trend,
    /// Errors never increase along the scan.
    pub monotone: bool,
}

/// Warm-started best approximations over increasing degrees.
pub fn cyclicity_scan(
    f: &FourierSeq,
    params: &SpaceParams,
    degrees: &[u32],
    solver: &SolverConfig,
    trend: &TrendConfig,
) -> Result<ScanResult> {
    if degrees.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("scan degrees must be strictly increasing"));
    }
    let mut results: Vec<ApproxResult> = Vec::with_capacity(degrees.len());
    for &degree in degrees {
        let warm = results.last().map(|r| &r.coefficients);
        results.push(best_approx_from(f, params, degree, solver, warm)?);
    }
    let errors: Vec<f64> = results.iter().map(|r| r.error).collect();
    let monotone = errors.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
    Ok(ScanResult { trend: trend.classify(&errors), results, monotone })
}
