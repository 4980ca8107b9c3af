use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Weight family used by a space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightKind {
    /// `w(n) = (1 + |n|)^β`.
    Power,
    /// `w(n) = ln(e + |n|)^β`.
    Log,
}

/// Exponent and weight of an `A^p_β` space.
///
/// `p` ranges over `[1, ∞]`; the value `∞` only arises as the conjugate of
/// `p = 1` and selects the weighted sup norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceParams {
    p: f64,
    beta: f64,
    weight: WeightKind,
}

impl SpaceParams {
    /// Power-weighted space `A^p_β`.
    pub fn new(p: f64, beta: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::invalid(format!("exponent p must satisfy p >= 1, got {p}")));
        }
        if !beta.is_finite() {
            return Err(Error::invalid(format!("weight exponent must be finite, got {beta}")));
        }
        Ok(SpaceParams { p, beta, weight: WeightKind::Power })
    }

    /// Space with the logarithmic weight `ln(e + |n|)^β`, `β >= 0`.
    pub fn log_weight(p: f64, beta: f64) -> Result<Self> {
        let mut params = Self::new(p, beta)?;
        if beta < 0.0 {
            return Err(Error::invalid("logarithmic weights need beta >= 0"));
        }
        params.weight = WeightKind::Log;
        Ok(params)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn weight_kind(&self) -> WeightKind {
        self.weight
    }

    /// Hölder conjugate `q = p/(p − 1)`; infinite for `p = 1`, one for `p = ∞`.
    pub fn q(&self) -> f64 {
        conjugate(self.p)
    }

    pub fn q_is_infinite(&self) -> bool {
        self.q().is_infinite()
    }

    /// The dual space `A^q_{−β}` under the pairing `Σ Ŝ(n) T̂(−n)`.
    pub fn dual(&self) -> SpaceParams {
        SpaceParams { p: self.q(), beta: -self.beta, weight: self.weight }
    }

    /// Same weight, different exponent.
    pub fn with_p(&self, p: f64) -> Result<SpaceParams> {
        let mut out = SpaceParams::new(p, self.beta)?;
        out.weight = self.weight;
        Ok(out)
    }

    pub fn weight(&self, n: i64) -> f64 {
        let m = n.unsigned_abs() as f64;
        match self.weight {
            WeightKind::Power => (1.0 + m).powf(self.beta),
            WeightKind::Log => (std::f64::consts::E + m).ln().powf(self.beta),
        }
    }

    /// Constant `C` with `w(n + k) <= C w(n) w(k)` when the weight is a
    /// genuine (submultiplicative, `>= 1`) weight, `None` otherwise.
    pub fn submultiplicativity_constant(&self) -> Option<f64> {
        if self.beta < 0.0 {
            return None;
        }
        match self.weight {
            // 1 + |n + k| <= (1 + |n|)(1 + |k|)
            WeightKind::Power => Some(1.0),
            // ln(e+|n+k|) <= ln(e+|n|) + ln(e+|k|) <= 2 ln(e+|n|) ln(e+|k|)
            WeightKind::Log => Some(2f64.powf(self.beta)),
        }
    }
}

pub(crate) fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}
