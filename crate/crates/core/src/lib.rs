//! Numerical laboratory for cyclic vectors in weighted Fourier sequence spaces.
//!
//! A sequence `u` is cyclic in `A^p_β(T)` when the translates of `u` span a
//! dense subspace, or equivalently when `‖1 − P·f‖` can be driven to zero by
//! trigonometric polynomials `P`, where `f` is the Fourier transform of `u`.
//! Whether that happens is governed by the size of the zero set of `f`:
//! Hausdorff dimension, capacity and gap structure.
//!
//! The crate is organised bottom-up:
//!
//! * [`spaces`]: finite Fourier sequences, weighted `ℓ^p` norms, products,
//!   duality, exact coefficients of piecewise-linear functions and the
//!   functional inequalities those spaces satisfy.
//! * [`sets`]: exact dyadic interval unions on the circle, the Cantor-type
//!   sets `S_λ^k`, gap profiles, Hausdorff covers and the Eidlin capacity
//!   series.
//! * [`measures`]: Fourier coefficients of probability measures with
//!   certified error bounds, energies, capacity bounds and dual-space
//!   membership.
//! * [`cyclicity`]: best approximation of `1` by `P·f`, dual-measure lower
//!   bound certificates, distance-ramp approximants and the triangle mollifier.
//!
//! Positions on the circle are carried in the unit parameterization `[0, 1)`;
//! Fourier coefficients follow `ĝ(n) = (1/2π)∫ g(t) e^{−int} dt` on
//! `T = R/2πZ`, so a probability measure has `μ̂(0) = 1`.

pub mod cyclicity;
mod error;
pub mod measures;
pub mod sets;
pub mod spaces;

pub use error::{Error, Result};

/// Version of this crate, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
