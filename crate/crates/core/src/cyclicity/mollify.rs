use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::spaces::FourierSeq;
use crate::{Error, Result};

/// `Δ̂_h(n) = (1/2π) · 4 sin²(nh/2) / (nh)²`, the coefficients of the
/// unit-mass triangle of half-width `h` on `R/2πZ`.
pub fn triangle_coefficient(h: f64, n: i64) -> f64 {
    if n == 0 {
        return 1.0 / TAU;
    }
    let x = n as f64 * h;
    let s = (0.5 * x).sin();
    4.0 * s * s / (x * x) / TAU
}

/// `S_h = S * Δ_h`, coefficient by coefficient.
pub fn mollify(s: &FourierSeq, h: f64) -> Result<FourierSeq> {
    if !(h > 0.0 && h < 0.5) {
        return Err(Error::invalid(format!("mollifier width must lie in (0, 1/2), got {h}")));
    }
    Ok(s.map_coeffs(|n, c| c * Complex64::new(triangle_coefficient(h, n), 0.0)))
}
