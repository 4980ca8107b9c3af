use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::sets::{gap_profile, IntervalUnion};
use crate::spaces::{PiecewiseLinear, SpaceParams};
use crate::{Error, Result};

/// Frequencies at which the `A^p_β` norm of `ψ` is summed.
const NORM_TRUNCATIONS: [i64; 4] = [256, 1024, 4096, 16384];

/// Inputs of the construction, all lengths in the `R/2πZ` variable.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NewmanParams {
    pub alpha: f64,
    pub epsilon: f64,
    /// Number of largest gaps used.
    pub n: usize,
    /// Width `ε n^{-1/α}` of the ramps inside each gap.
    pub ramp: f64,
    /// Length left after removing the `n` largest gaps.
    pub remaining: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormEstimate {
    pub truncation: i64,
    /// `Σ_{|k|<=M} |ψ̂(k)|^p (1+|k|)^{βp}`.
    pub partial_sum: f64,
    /// Certified bound on the rest of the series.
    pub tail_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NewmanReport {
    pub params: NewmanParams,
    pub psi: PiecewiseLinear,
    /// `Σ |ψ̂(k)|²`.
    pub l2_norm_sq: f64,
    /// `3 ε n^{1−1/α}`.
    pub l2_bound: f64,
    /// `Σ k² |ψ̂(k)|²`.
    pub derivative_l2_norm_sq: f64,
    /// `2 n^{1+1/α} / ε`.
    pub derivative_bound: f64,
    pub norm_estimates: Vec<NormEstimate>,
    /// Upper estimate of `‖ψ‖_{A^p_β}` from the largest truncation.
    pub norm_upper: f64,
    /// `C' ε^{1−1/p−β}`.
    pub norm_bound: f64,
    pub constant: f64,
    pub bounds_hold: [bool; 3],
}

impl NewmanReport {
    pub fn all_bounds_hold(&self) -> bool {
        self.bounds_hold.iter().all(|&b| b)
    }
}

/// Height profile `ψ` equal to one off the chosen gaps and ramping down to
/// zero over `ramp` (unit-parameter length) from each gap endpoint.
pub(crate) fn gap_ramps(gaps: &[(f64, f64)], ramp: f64) -> Result<PiecewiseLinear> {
    let mut points: Vec<(f64, f64)> = Vec::with_capacity(4 * gaps.len() + 2);
    for &(start, length) in gaps {
        points.push((start, 1.0));
        if length > 2.0 * ramp {
            points.push((start + ramp, 0.0));
            points.push((start + length - ramp, 0.0));
        } else {
            points.push((start + 0.5 * length, 1.0 - 0.5 * length / ramp));
        }
        points.push((start + length, 1.0));
    }
    let mut points: Vec<(f64, f64)> = points.into_iter().map(|(x, v)| (x.rem_euclid(1.0), v)).collect();
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    points.dedup_by(|b, a| a.0 == b.0);
    if points.len() < 2 {
        points = vec![(0.0, 1.0), (0.5, 1.0)];
    }
    let (xs, vs) = points.into_iter().unzip();
    PiecewiseLinear::new(xs, vs)
}

/// `min(dist(x, E) / δ, 1)` for a closed union `E`, with `δ` in unit
/// length. It vanishes on `E` and equals one far from it.
pub fn zero_set_function(set: &IntervalUnion, delta: f64) -> Result<PiecewiseLinear> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::invalid(format!("ramp width must lie in (0, 1/2), got {delta}")));
    }
    let gaps: Vec<(f64, f64)> = set.gaps()?.iter().map(|g| (g.start.to_f64(), g.length.to_f64())).collect();
    let psi = gap_ramps(&gaps, delta)?;
    PiecewiseLinear::new(psi.breakpoints().to_vec(), psi.values().iter().map(|v| 1.0 - v).collect())
}

/// The constant of the interpolation estimate between `A²`, `A²_1` and
/// `A^p_β`.
fn interpolation_constant(p: f64, beta: f64) -> f64 {
    let gamma = 2.0 * p * (1.0 - beta) / (2.0 - p);
    (2f64.powf(beta * p)).max(2f64.powf(p) * (1.0 / (gamma - 1.0)).powf(1.0 - p / 2.0))
}

/// Distance-ramp approximant `ψ = max(1 − ρ/δ, 0)` with `ρ` the distance to the
/// complement of the `n` largest gaps of `set`, together with its norms and
/// the three estimates they must satisfy.
pub fn newman_psi(
    set: &IntervalUnion,
    n: usize,
    epsilon: f64,
    alpha: f64,
    params: &SpaceParams,
) -> Result<NewmanReport> {
    let (p, beta) = (params.p(), params.beta());
    if !(p > 1.0 && p < 2.0) || beta < 0.0 || beta * params.q() > 1.0 {
        return Err(Error::precondition(format!("needs 1 < p < 2, beta >= 0, beta q <= 1; got ({p}, {beta})")));
    }
    if !(alpha > 0.0 && alpha <= 1.0) || epsilon.is_nan() || epsilon <= 0.0 || n == 0 {
        return Err(Error::invalid(format!("needs 0 < alpha <= 1, epsilon > 0, n >= 1; got ({alpha}, {epsilon}, {n})")));
    }
    let profile = gap_profile(set)?;
    let remaining = profile
        .remaining_after(n)
        .ok_or_else(|| Error::precondition(format!("the set has only {} gaps, {n} requested", profile.gaps.len())))?;
    let nf = n as f64;
    let ramp = epsilon * nf.powf(-1.0 / alpha);
    if ramp >= 1.0 {
        return Err(Error::precondition(format!("epsilon n^(-1/alpha) = {ramp} must be below 1")));
    }
    let budget = epsilon * nf.powf(1.0 - 1.0 / alpha);
    if remaining >= budget {
        return Err(Error::precondition(format!(
            "remaining length {remaining} must be below epsilon n^(1 - 1/alpha) = {budget}"
        )));
    }
    let gaps: Vec<(f64, f64)> =
        profile.gaps[..n].iter().map(|g| (g.start.to_f64(), g.length.to_f64())).collect();
    let psi = gap_ramps(&gaps, ramp / TAU)?;

    let l2_norm_sq = psi.l2_norm_sq();
    let derivative_l2_norm_sq = psi.derivative_l2_norm_sq();
    let l2_bound = 3.0 * budget;
    let derivative_bound = 2.0 * nf.powf(1.0 + 1.0 / alpha) / epsilon;

    // |ψ̂(k)| <= V/(4π²k²) bounds the tail beyond each truncation M:
    // Σ_{|k|>M} (V/(4π²k²))^p (1+k)^{βp} <= 2 (V/4π²)^p ((1+M)/M)^{βp} M^{1−2p+βp}/(2p−1−βp).
    let variation = psi.slope_variation();
    let mut partial = psi.coefficient(0).norm().powf(p);
    let mut next = 1i64;
    let mut norm_estimates = Vec::with_capacity(NORM_TRUNCATIONS.len());
    for &cut in &NORM_TRUNCATIONS {
        while next <= cut {
            let weight = params.weight(next).powf(p);
            partial += (psi.coefficient(next).norm().powf(p) + psi.coefficient(-next).norm().powf(p)) * weight;
            next += 1;
        }
        let m = cut as f64;
        let decay = 2.0 * p - 1.0 - beta * p;
        let tail_bound = 2.0 * (variation / (4.0 * PI * PI)).powf(p) * ((1.0 + m) / m).powf(beta * p)
            * m.powf(-decay)
            / decay;
        norm_estimates.push(NormEstimate { truncation: cut, partial_sum: partial, tail_bound });
    }
    let last = norm_estimates.last().expect("at least one truncation");
    let norm_upper = (last.partial_sum + last.tail_bound).powf(1.0 / p);

    let a_exp = 0.75 - 0.5 / p - 0.5 * beta;
    let b_exp = 0.5 / p - 0.25 + 0.5 * beta;
    let constant = interpolation_constant(p, beta).powf(1.0 / p) * 3f64.powf(a_exp) * 5f64.powf(b_exp);
    let norm_bound = constant * epsilon.powf(1.0 - 1.0 / p - beta);

    let bounds_hold = [l2_norm_sq <= l2_bound, derivative_l2_norm_sq <= derivative_bound, norm_upper <= norm_bound];
    Ok(NewmanReport {
        params: NewmanParams { alpha, epsilon, n, ramp, remaining },
        psi,
        l2_norm_sq,
        l2_bound,
        derivative_l2_norm_sq,
        derivative_bound,
        norm_estimates,
        norm_upper,
        norm_bound,
        constant,
        bounds_hold,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LipschitzRow {
    pub epsilon: f64,
    /// `‖f − 1‖ = ‖ψ‖` for `f = 1 − ψ`.
    pub distance: f64,
    /// Ratio to the previous row's distance.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LipschitzTable {
    /// `1 − 1/p − β`; decay in ε is only expected when positive.
    pub exponent: f64,
    pub warning: Option<String>,
    pub rows: Vec<LipschitzRow>,
}

/// Distances from `1` of the Lipschitz functions `1 − ψ_ε`, which vanish
/// on the set, for each `ε`. Uses `α = (2/q)(1 − βq)`.
pub fn lipschitz_approximant_check(
    set: &IntervalUnion,
    n: usize,
    params: &SpaceParams,
    epsilons: &[f64],
) -> Result<LipschitzTable> {
    let (p, beta) = (params.p(), params.beta());
    if !(0.0..0.5).contains(&beta) {
        return Err(Error::precondition(format!("needs 0 <= beta < 1/2, got {beta}")));
    }
    let exponent = 1.0 - 1.0 / p - beta;
    let warning = (exponent <= 0.0)
        .then(|| format!("exponent 1 - 1/p - beta = {exponent} is not positive; no decay in epsilon expected"));
    let alpha = 2.0 / params.q() * (1.0 - beta * params.q());
    let mut rows: Vec<LipschitzRow> = Vec::with_capacity(epsilons.len());
    for &epsilon in epsilons {
        let report = newman_psi(set, n, epsilon, alpha, params)?;
        let ratio = rows.last().map(|r| report.norm_upper / r.distance);
        rows.push(LipschitzRow { epsilon, distance: report.norm_upper, ratio });
    }
    Ok(LipschitzTable { exponent, warning, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::CantorScheme;

    fn single_gap_set() -> IntervalUnion {
        // E = [0, 1/16], one gap (1/16, 1).
        IntervalUnion::from_f64_arcs(&[(0.0, 0.0625)]).unwrap()
    }

    #[test]
    fn ramps_inside_one_gap() {
        let set = single_gap_set();
        let params = SpaceParams::new(1.5, 0.1).unwrap();
        let alpha = 0.5;
        let report = newman_psi(&set, 1, 0.5, alpha, &params).unwrap();
        let ramp = report.params.ramp / TAU;
        assert!((ramp - 0.5 / TAU).abs() < 1e-15);
        let psi = &report.psi;
        assert_eq!(psi.evaluate(0.03), 1.0);
        assert_eq!(psi.evaluate(0.0625), 1.0);
        assert_eq!(psi.evaluate(0.5), 0.0);
        assert!((psi.evaluate(0.0625 + ramp / 2.0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn hypotheses_are_enforced() {
        let set = single_gap_set();
        let params = SpaceParams::new(1.5, 0.1).unwrap();
        // remaining length π/8 exceeds ε n^{1−1/α} = ε for small ε
        assert!(matches!(newman_psi(&set, 1, 0.3, 0.5, &params), Err(Error::Precondition(_))));
        assert!(matches!(newman_psi(&set, 2, 0.5, 0.5, &params), Err(Error::Precondition(_))));
        assert!(matches!(newman_psi(&set, 1, 1.5, 0.5, &params), Err(Error::Precondition(_))));
    }

    #[test]
    fn cantor_level_satisfies_the_three_estimates() {
        let scheme = CantorScheme::from_fraction(1, 3, 1).unwrap();
        let set = scheme.level_intervals(4).unwrap();
        let params = SpaceParams::new(4.0 / 3.0, 0.1).unwrap();
        let alpha = 2.0 / params.q() * (1.0 - params.beta() * params.q());
        for (n, epsilon) in [(16, 400.0), (16, 100.0), (8, 50.0)] {
            let report = newman_psi(&set, n, epsilon, alpha, &params).unwrap();
            assert!(report.all_bounds_hold(), "n={n} eps={epsilon}: {:?}", report.bounds_hold);
        }
    }

    #[test]
    fn zero_set_function_vanishes_on_the_set() {
        let scheme = CantorScheme::from_fraction(1, 3, 1).unwrap();
        let set = scheme.level_intervals(3).unwrap();
        let f = zero_set_function(&set, 0.01).unwrap();
        for (start, length) in set.to_f64_arcs() {
            for t in [0.0, 0.5, 1.0] {
                assert!(f.evaluate(start + t * length).abs() < 1e-9);
            }
        }
        assert!(f.sup_norm() <= 1.0);
        assert!(zero_set_function(&set, 0.0).is_err());
    }

    #[test]
    fn lipschitz_table_warns_on_nonpositive_exponent() {
        let set = single_gap_set();
        let params = SpaceParams::new(1.1, 0.45).unwrap();
        match lipschitz_approximant_check(&set, 1, &params, &[1.0]) {
            Ok(table) => assert!(table.warning.is_some()),
            Err(e) => assert!(matches!(e, Error::Precondition(_))),
        }
        let params = SpaceParams::new(4.0 / 3.0, 0.1).unwrap();
        assert!(lipschitz_approximant_check(&set, 1, &params, &[0.01]).is_err());
    }
}
