use std::f64::consts::TAU;

use serde::Serialize;

use super::dyadic::Dyadic;
use super::union::{Arc, IntervalUnion};
use crate::{Error, Result};

/// Complementary arcs of a closed set, largest first, with the remaining
/// lengths after removing them one at a time.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapProfile {
    /// Gaps by non-increasing length; ties go to the smaller start.
    pub gaps: Vec<Arc>,
    /// `remaining[n] = 2π (1 − Σ_{k<=n} |gap_k|)`, circle-scaled.
    pub remaining: Vec<f64>,
}

impl GapProfile {
    /// Circle length left after removing the `n` largest gaps (`n >= 1`).
    pub fn remaining_after(&self, n: usize) -> Option<f64> {
        n.checked_sub(1).and_then(|i| self.remaining.get(i).copied())
    }
}

pub fn gap_profile(set: &IntervalUnion) -> Result<GapProfile> {
    let mut gaps = set.gaps()?;
    gaps.sort_by(|a, b| b.length.cmp(&a.length).then_with(|| a.start.cmp(&b.start)));
    let mut left = Dyadic::one();
    let remaining = gaps
        .iter()
        .map(|g| {
            left = left.checked_sub(&g.length).expect("gaps never exceed the circle");
            TAU * left.to_f64()
        })
        .collect();
    Ok(GapProfile { gaps, remaining })
}

/// `r_n · n^{1/α − 1}` for `n = 1, …, #gaps`, where `r_n` is the length
/// left after removing the `n` largest gaps. The set has strong `α`-measure
/// zero when this tends to zero along an infinite gap sequence.
pub fn strong_measure_trend(set: &IntervalUnion, alpha: f64) -> Result<Vec<f64>> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::invalid(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    let profile = gap_profile(set)?;
    let exponent = 1.0 / alpha - 1.0;
    Ok(profile
        .remaining
        .iter()
        .enumerate()
        .map(|(i, r)| r * ((i + 1) as f64).powf(exponent))
        .collect())
}
