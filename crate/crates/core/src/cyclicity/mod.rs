//! Finite-degree evidence for cyclicity in weighted Fourier spaces.
//!
//! The positive side minimizes `‖1 − P f‖` over trigonometric polynomials
//! of bounded degree. The negative side produces lower bounds for the same
//! quantity from measures living on the zero set of `f`. Distance-ramp
//! approximants and the triangle mollifier round out the toolkit.

mod approx;
mod certificate;
mod mollify;
mod newman;

pub use approx::{
    approx_objective, best_approx, best_approx_from, cyclicity_scan, ApproxResult, ScanResult, SolverConfig, Trend,
    TrendConfig,
};
pub use certificate::{noncyclicity_certificate, Certificate};
pub use mollify::{mollify, triangle_coefficient};
pub use newman::{
    lipschitz_approximant_check, newman_psi, zero_set_function, LipschitzRow, LipschitzTable, NewmanParams,
    NewmanReport, NormEstimate,
};
