use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::seq::FourierSeq;
use crate::{Error, Result};

/// Continuous periodic function, linear between consecutive breakpoints.
///
/// Breakpoints are unit-parameter positions in `[0, 1)`; the last segment
/// wraps from the final breakpoint back to the first one through `1 ≡ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseLinear {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

/// One linear piece: start position, length, start and end values.
#[derive(Debug, Clone, Copy)]
struct Segment {
    start: f64,
    length: f64,
    from: f64,
    to: f64,
}

impl Segment {
    fn slope(&self) -> f64 {
        (self.to - self.from) / self.length
    }

    fn midpoint(&self) -> f64 {
        self.start + 0.5 * self.length
    }
}

impl PiecewiseLinear {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(Error::invalid("breakpoints and values differ in length"));
        }
        if breakpoints.len() < 2 {
            return Err(Error::invalid("a piecewise-linear function needs at least two breakpoints"));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("breakpoint value {v}")));
        }
        if breakpoints.iter().any(|x| !(0.0..1.0).contains(x)) {
            return Err(Error::invalid("breakpoints must lie in [0, 1)"));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("breakpoints must be strictly increasing"));
        }
        Ok(PiecewiseLinear { breakpoints, values })
    }

    pub fn constant(value: f64) -> Result<Self> {
        Self::new(vec![0.0, 0.5], vec![value, value])
    }

    /// The triangle kernel `Δ_h(t) = h^{-1}(1 − |t|/h)^+` on `R/2πZ`,
    /// which has unit integral; `0 < h < π`.
    pub fn triangle(h: f64) -> Result<Self> {
        if !(h > 0.0 && h < PI) {
            return Err(Error::invalid(format!("triangle half-width must lie in (0, π), got {h}")));
        }
        let half_width = h / TAU;
        Self::new(vec![0.0, half_width, 1.0 - half_width], vec![1.0 / h, 0.0, 0.0])
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        let count = self.breakpoints.len();
        (0..count).map(move |k| {
            let next = (k + 1) % count;
            let end = if next == 0 { self.breakpoints[0] + 1.0 } else { self.breakpoints[next] };
            Segment {
                start: self.breakpoints[k],
                length: end - self.breakpoints[k],
                from: self.values[k],
                to: self.values[next],
            }
        })
    }

    /// Value at the unit-parameter point `x` (reduced mod 1).
    pub fn evaluate(&self, x: f64) -> f64 {
        let x = x.rem_euclid(1.0);
        let count = self.breakpoints.len();
        // Index of the last breakpoint <= x, or the wrap segment.
        let idx = match self.breakpoints.partition_point(|&b| b <= x) {
            0 => count - 1,
            i => i - 1,
        };
        let seg = self.segments().nth(idx).expect("segment index in range");
        let offset = (x - seg.start).rem_euclid(1.0);
        seg.from + seg.slope() * offset
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `sup |g′|` with the derivative taken in the `R/2πZ` variable.
    pub fn sup_derivative(&self) -> f64 {
        self.segments().fold(0.0f64, |m, s| m.max(s.slope().abs())) / TAU
    }

    /// Normalized `L²` norm squared, equal to `Σ |ĝ(n)|²`.
    pub fn l2_norm_sq(&self) -> f64 {
        self.segments()
            .map(|s| s.length * (s.from * s.from + s.from * s.to + s.to * s.to) / 3.0)
            .sum()
    }

    /// `Σ n² |ĝ(n)|²`, the normalized `L²` norm squared of `g′` on `R/2πZ`.
    pub fn derivative_l2_norm_sq(&self) -> f64 {
        let unit: f64 = self.segments().map(|s| (s.to - s.from).powi(2) / s.length).sum();
        unit / (TAU * TAU)
    }

    /// Total variation of the unit-parameter slope around the circle, so
    /// that `|ĝ(n)| <= V / (4π² n²)` for `n ≠ 0`.
    pub fn slope_variation(&self) -> f64 {
        let slopes: Vec<f64> = self.segments().map(|s| s.slope()).collect();
        let count = slopes.len();
        (0..count).map(|k| (slopes[k] - slopes[(k + count - 1) % count]).abs()).sum()
    }

    /// Exact Fourier coefficient `ĝ(n)`.
    pub fn coefficient(&self, n: i64) -> Complex64 {
        if n == 0 {
            let mean: f64 = self.segments().map(|s| 0.5 * s.length * (s.from + s.to)).sum();
            return Complex64::new(mean, 0.0);
        }
        let freq = n as f64;
        let omega = TAU * freq;
        let sum: Complex64 = self
            .segments()
            .map(|s| {
                // Reduce n·L mod 2 and n·m mod 1 before scaling by π so that
                // large frequencies keep full relative accuracy.
                let sine = (PI * (freq * s.length).rem_euclid(2.0)).sin();
                let phase = -TAU * (freq * s.midpoint()).rem_euclid(1.0);
                s.slope() * sine * Complex64::cis(phase)
            })
            .sum();
        Complex64::new(0.0, -2.0 / (omega * omega)) * sum
    }
}

/// Exact coefficients `ĝ(n)` for `|n| <= max_freq`.
pub fn pwl_fourier(g: &PiecewiseLinear, max_freq: u32) -> Result<FourierSeq> {
    let max_freq = i64::from(max_freq);
    let coeffs: Vec<(i64, Complex64)> =
        (-max_freq..=max_freq).map(|n| (n, g.coefficient(n))).collect();
    if let Some((n, c)) = coeffs.iter().find(|(_, c)| !c.is_finite()) {
        return Err(Error::NonFinite(format!("coefficient {c} at frequency {n}")));
    }
    Ok(FourierSeq::from_pairs(coeffs))
}
