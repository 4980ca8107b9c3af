//! Weighted Fourier sequence spaces `A^p_β(T)`.
//!
//! A distribution on the circle is represented by a finite map from integer
//! frequency to complex amplitude ([`FourierSeq`]). Its `A^p_β` norm is the
//! weighted `ℓ^p` norm of the coefficient sequence with weight
//! `(1 + |n|)^β` (or a logarithmic weight, see [`SpaceParams::log_weight`]).
//! All sums here are exact finite sums over the stored support.

mod inequalities;
mod params;
mod pwl;
mod seq;

pub use inequalities::{
    banach_algebra_check, check_interpolation, inclusion_constant, interpolation_constant,
    sup_derivative_bound, InterpolationReport, SupDerivativeReport,
};
pub use params::{SpaceParams, WeightKind};
pub use pwl::{pwl_fourier, PiecewiseLinear};
pub use seq::{FourierSeq, PRUNE_THRESHOLD};

pub use num_complex::Complex64;

/// `‖S‖_{A^p_β}`.
pub fn weighted_norm(s: &FourierSeq, params: &SpaceParams) -> f64 {
    s.weighted_norm(params)
}

/// Coefficient convolution `f·S`.
pub fn multiply(f: &FourierSeq, s: &FourierSeq) -> FourierSeq {
    f.multiply(s)
}

/// Duality pairing `⟨S, T⟩ = Σ_n Ŝ(n) T̂(−n)`.
pub fn pair(s: &FourierSeq, t: &FourierSeq) -> Complex64 {
    s.pair(t)
}

/// Distributional derivative `n ↦ i n Ŝ(n)`.
pub fn derivative(s: &FourierSeq) -> FourierSeq {
    s.derivative()
}
