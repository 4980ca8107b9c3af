//! Probability measures on the circle given by their Fourier coefficients,
//! with certified error bounds, and the quantities built from them:
//! energies, capacity lower bounds and membership in the dual spaces.
//!
//! Coefficients use the unit parameterization `μ̂(n) = ∫ e^{-2πinx} dμ(x)`.

mod capacity;
mod coeffs;
mod energy;
mod membership;

pub use capacity::{capacity_bounds, CapacityConfig, CapacityReport};
pub use coeffs::{
    pair_with_measure, Coefficient, CoefficientRow, Envelope, MeasureCoeffs, MeasureKind, DEFAULT_DIGIT_TOLERANCE,
};
pub use energy::{alpha_energy, alpha_energy_with, EnergyReport};
pub use membership::{membership_Aq, MembershipReport, DEFAULT_INCREMENT_THRESHOLD};

pub fn digit_measure(scheme: &crate::sets::CantorScheme) -> MeasureCoeffs {
    MeasureCoeffs::digit_measure(scheme)
}

pub fn level_uniform_measure(scheme: &crate::sets::CantorScheme, level: u32) -> crate::Result<MeasureCoeffs> {
    MeasureCoeffs::level_uniform(scheme, level)
}

pub fn synthetic_envelope_measure(alpha: f64, gamma: f64) -> crate::Result<MeasureCoeffs> {
    MeasureCoeffs::synthetic_envelope(alpha, gamma)
}
