use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::sets::CantorScheme;
use crate::spaces::FourierSeq;
use crate::{Error, Result};

/// Default certified truncation error of digit-product coefficients.
pub const DEFAULT_DIGIT_TOLERANCE: f64 = 1e-12;

/// Generous per-operation roundoff allowance for products of unit factors.
const ROUNDOFF_PER_FACTOR: f64 = 4.0 * f64::EPSILON;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureKind {
    DigitProduct,
    LevelUniform,
    SyntheticEnvelope,
    ExplicitList,
}

/// A Fourier coefficient with an optional certified absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub value: Complex64,
    pub error: Option<f64>,
}

impl Coefficient {
    fn exact(value: Complex64) -> Self {
        Coefficient { value, error: Some(0.0) }
    }

    /// `|μ̂(n)| + error`, or `None` when no error bound is known.
    pub fn magnitude_upper(&self) -> Option<f64> {
        self.error.map(|e| self.value.norm() + e)
    }
}

/// Certified decay `|μ̂(n)| <= (|n|^α ln(e|n|)^γ)^{-1/2}` for `n ≠ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub alpha: f64,
    pub gamma: f64,
    /// The magnitudes equal the envelope rather than merely obeying it.
    pub attained: bool,
}

impl Envelope {
    pub fn magnitude(&self, n: i64) -> f64 {
        if n == 0 {
            return 1.0;
        }
        let m = n.unsigned_abs() as f64;
        (m.powf(self.alpha) * (1.0 + m.ln()).powf(self.gamma)).powf(-0.5)
    }
}

#[derive(Clone, Debug)]
enum DigitSet {
    Scheme(Box<CantorScheme>),
    Finite(Vec<u32>),
}

impl DigitSet {
    fn allows(&self, i: u32) -> bool {
        match self {
            DigitSet::Scheme(s) => !s.is_forced(u128::from(i)),
            DigitSet::Finite(list) => list.binary_search(&i).is_ok(),
        }
    }
}

#[derive(Clone, Debug)]
enum Generator {
    Digits { digits: DigitSet, offset: f64, tolerance: f64 },
    LevelUniform { free: Vec<u32>, length: f64, level: u32 },
    Envelope(Envelope),
    Explicit { coeffs: FourierSeq, errors: Option<Vec<(i64, f64)>> },
}

/// Fourier coefficients `μ̂(n) = ∫ e^{-2πinx} dμ(x)` of a probability
/// measure on `R/Z`, generated on demand.
#[derive(Clone, Debug)]
pub struct MeasureCoeffs {
    generator: Generator,
}

/// `e^{-iθ/2} cos(θ/2) = (1 + e^{-iθ})/2` for `θ = 2π n 2^{-(i+1)}`, with
/// `n` reduced modulo `2^{i+1}` into a symmetric range first.
fn digit_factor(n: i64, i: u32) -> Complex64 {
    let half_turns = if i >= 100 {
        n as f64 * (-(f64::from(i) + 1.0)).exp2()
    } else {
        let modulus = 1i128 << (i + 1);
        let mut r = i128::from(n).rem_euclid(modulus);
        if r > modulus / 2 {
            r -= modulus;
        }
        r as f64 / modulus as f64
    };
    // θ/2 = π · half_turns
    let half = PI * half_turns;
    Complex64::cis(-half) * half.cos()
}

impl MeasureCoeffs {
    /// Product of independent fair bits on the free digits of the scheme.
    pub fn digit_measure(scheme: &CantorScheme) -> Self {
        Self::digit_measure_with_tolerance(scheme, DEFAULT_DIGIT_TOLERANCE)
    }

    pub fn digit_measure_with_tolerance(scheme: &CantorScheme, tolerance: f64) -> Self {
        MeasureCoeffs {
            generator: Generator::Digits {
                digits: DigitSet::Scheme(Box::new(scheme.clone())),
                offset: 0.0,
                tolerance,
            },
        }
    }

    /// Fair bits on a finite list of digit positions, all others zero,
    /// translated by `offset`.
    pub fn finite_digit_measure(mut digits: Vec<u32>, offset: f64) -> Result<Self> {
        if !offset.is_finite() {
            return Err(Error::NonFinite(format!("offset {offset}")));
        }
        digits.sort_unstable();
        digits.dedup();
        Ok(MeasureCoeffs {
            generator: Generator::Digits { digits: DigitSet::Finite(digits), offset, tolerance: 0.0 },
        })
    }

    /// Unit point mass at the unit-parameter position `x`.
    pub fn point_mass(x: f64) -> Result<Self> {
        Self::finite_digit_measure(Vec::new(), x)
    }

    /// Uniform density on the level-`N` cover, equal mass per interval.
    pub fn level_uniform(scheme: &CantorScheme, level: u32) -> Result<Self> {
        let log2_length = scheme.log2_level_length(level)?;
        let free = scheme.free_digits(0, 1u128 << level).into_iter().map(|d| d as u32).collect();
        Ok(MeasureCoeffs {
            generator: Generator::LevelUniform { free, length: log2_length.exp2(), level },
        })
    }

    /// Coefficients with magnitudes `(|n|^α ln(e|n|)^γ)^{-1/2}` and zero
    /// phase. Not the transform of an actual measure; used for decay
    /// arithmetic only.
    pub fn synthetic_envelope(alpha: f64, gamma: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) || !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::invalid(format!(
                "envelope needs alpha in (0, 1) and gamma > 0, got ({alpha}, {gamma})"
            )));
        }
        Ok(MeasureCoeffs { generator: Generator::Envelope(Envelope { alpha, gamma, attained: true }) })
    }

    /// Finitely many coefficients, zero elsewhere. `errors` lists certified
    /// bounds per stored frequency; without it the measure carries no bounds.
    pub fn explicit(coeffs: FourierSeq, errors: Option<Vec<(i64, f64)>>) -> Result<Self> {
        let zeroth = coeffs.get(0);
        if (zeroth - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
            return Err(Error::invalid(format!("a probability measure has mu(0) = 1, got {zeroth}")));
        }
        let errors = errors.map(|mut e| {
            e.sort_unstable_by_key(|&(n, _)| n);
            e
        });
        Ok(MeasureCoeffs { generator: Generator::Explicit { coeffs, errors } })
    }

    /// Normalized Lebesgue measure.
    pub fn lebesgue() -> Self {
        Self::explicit(FourierSeq::one(), Some(vec![(0, 0.0)])).expect("valid coefficients")
    }

    pub fn kind(&self) -> MeasureKind {
        match self.generator {
            Generator::Digits { .. } => MeasureKind::DigitProduct,
            Generator::LevelUniform { .. } => MeasureKind::LevelUniform,
            Generator::Envelope(_) => MeasureKind::SyntheticEnvelope,
            Generator::Explicit { .. } => MeasureKind::ExplicitList,
        }
    }

    pub fn has_error_bounds(&self) -> bool {
        match &self.generator {
            Generator::Explicit { errors, .. } => errors.is_some(),
            _ => true,
        }
    }

    /// Certified decay envelope, when one is known.
    pub fn envelope(&self) -> Option<Envelope> {
        match self.generator {
            Generator::Envelope(e) => Some(e),
            _ => None,
        }
    }

    /// Largest frequency with a nonzero coefficient, for finite lists.
    pub fn support_radius(&self) -> Option<i64> {
        match &self.generator {
            Generator::Explicit { coeffs, .. } => Some(coeffs.radius()),
            _ => None,
        }
    }

    /// Level of a level-uniform measure.
    pub fn level(&self) -> Option<u32> {
        match self.generator {
            Generator::LevelUniform { level, .. } => Some(level),
            _ => None,
        }
    }

    pub fn coefficient(&self, n: i64) -> Coefficient {
        if n == 0 {
            return Coefficient::exact(Complex64::new(1.0, 0.0));
        }
        match &self.generator {
            Generator::Digits { digits, offset, tolerance } => {
                let (product, error) = digit_product(digits, n, *tolerance);
                let phase = Complex64::cis(-TAU * (n as f64 * offset).rem_euclid(1.0));
                Coefficient { value: product * phase, error: Some(error + ROUNDOFF_PER_FACTOR) }
            }
            Generator::LevelUniform { free, length, .. } => level_uniform_coefficient(free, *length, n),
            Generator::Envelope(e) => {
                let value = e.magnitude(n);
                Coefficient { value: Complex64::new(value, 0.0), error: Some(value * ROUNDOFF_PER_FACTOR) }
            }
            Generator::Explicit { coeffs, errors } => {
                let error = errors.as_ref().map(|list| {
                    list.binary_search_by_key(&n, |&(m, _)| m).map_or(0.0, |idx| list[idx].1)
                });
                Coefficient { value: coeffs.get(n), error }
            }
        }
    }

    pub fn coefficients(&self, max_freq: i64) -> Vec<(i64, Coefficient)> {
        (-max_freq..=max_freq).map(|n| (n, self.coefficient(n))).collect()
    }

    /// Coefficients for `|n| <= max_freq` as a finite sequence.
    pub fn to_seq(&self, max_freq: i64) -> FourierSeq {
        FourierSeq::from_pairs(self.coefficients(max_freq).into_iter().map(|(n, c)| (n, c.value)))
    }

    /// Rows `(n, re, im, error)` for export.
    pub fn coefficient_table(&self, max_freq: i64) -> Vec<CoefficientRow> {
        self.coefficients(max_freq)
            .into_iter()
            .map(|(n, c)| CoefficientRow { n, re: c.value.re, im: c.value.im, error: c.error })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoefficientRow {
    pub n: i64,
    pub re: f64,
    pub im: f64,
    pub error: Option<f64>,
}

/// Product over allowed digits `i < I(n)` with `I(n)` the smallest index
/// such that `π|n| 2^{-I} <= tolerance`. Each omitted factor is within
/// `π|n| 2^{-(i+1)}` of one and all factors lie in the unit disk, so the
/// omitted tail moves the product by at most `π|n| 2^{-I}`.
fn digit_product(digits: &DigitSet, n: i64, tolerance: f64) -> (Complex64, f64) {
    let mut product = Complex64::new(1.0, 0.0);
    let mut factors = 0u32;
    match digits {
        DigitSet::Finite(list) => {
            for &i in list {
                product *= digit_factor(n, i);
                factors += 1;
            }
            (product, f64::from(factors) * ROUNDOFF_PER_FACTOR)
        }
        DigitSet::Scheme(_) => {
            let spread = PI * n.unsigned_abs() as f64;
            let cutoff = if tolerance > 0.0 { (spread / tolerance).log2().ceil().max(0.0) as u32 } else { 160 };
            for i in 0..cutoff {
                if digits.allows(i) {
                    product *= digit_factor(n, i);
                    factors += 1;
                }
            }
            let tail = spread * (-f64::from(cutoff)).exp2();
            (product, tail + f64::from(factors) * ROUNDOFF_PER_FACTOR)
        }
    }
}

/// `μ̂(n) = 2^{-F} Σ_a e^{-2πin(a + l/2)} sinc(π n l)` over the left
/// endpoints `a`, with the endpoint sum factorized over the `F` free digits.
fn level_uniform_coefficient(free: &[u32], length: f64, n: i64) -> Coefficient {
    let spread = PI * n.unsigned_abs() as f64;
    let mut product = Complex64::new(1.0, 0.0);
    let mut factors = 0u32;
    let mut tail = 0.0;
    for &i in free {
        let reach = spread * (-(f64::from(i) + 1.0)).exp2();
        if reach < 1e-20 {
            // Remaining factors are within `reach` each of one and their
            // offsets halve from here on.
            tail = 2.0 * reach;
            break;
        }
        product *= digit_factor(n, i);
        factors += 1;
    }
    let x = spread * length;
    let sinc = if x == 0.0 { 1.0 } else { x.sin() / x };
    let centre = Complex64::cis(-TAU * (0.5 * n as f64 * length).rem_euclid(1.0));
    Coefficient {
        value: product * centre * sinc,
        error: Some(tail + f64::from(factors + 3) * ROUNDOFF_PER_FACTOR),
    }
}

/// `Σ_n P̂(n) μ̂(−n)` over the support of `P`, with the propagated error.
pub fn pair_with_measure(p: &FourierSeq, mu: &MeasureCoeffs) -> (Complex64, Option<f64>) {
    let mut total = Complex64::new(0.0, 0.0);
    let mut error = Some(0.0);
    for (n, c) in p.iter() {
        let m = mu.coefficient(-n);
        total += c * m.value;
        error = error.zip(m.error).map(|(acc, e)| acc + c.norm() * e);
    }
    (total, error)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn two_point_measure() {
        let mu = MeasureCoeffs::finite_digit_measure(vec![0], 0.0).unwrap();
        for n in -9..=9i64 {
            let expected = if n % 2 == 0 { 1.0 } else { 0.0 };
            let got = mu.coefficient(n);
            assert!((got.value - c(expected, 0.0)).norm() <= got.error.unwrap(), "n={n}");
        }
    }

    #[test]
    fn point_mass_phase() {
        let mu = MeasureCoeffs::point_mass(0.25).unwrap();
        assert!((mu.coefficient(1).value - c(0.0, -1.0)).norm() < 1e-15);
        assert!((mu.coefficient(2).value - c(-1.0, 0.0)).norm() < 1e-15);
        assert_eq!(mu.kind(), MeasureKind::DigitProduct);
    }

    /// Explicit average over all allowed digit strings of a tiny digit set.
    #[test]
    fn finite_digits_match_enumeration() {
        let digits = vec![0u32, 2, 3, 7];
        let mu = MeasureCoeffs::finite_digit_measure(digits.clone(), 0.1).unwrap();
        for n in [-13i64, -1, 1, 5, 100, 1023] {
            let mut sum = c(0.0, 0.0);
            for mask in 0u32..16 {
                let x: f64 = digits
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| mask >> b & 1 == 1)
                    .map(|(_, &i)| (-(f64::from(i) + 1.0)).exp2())
                    .sum::<f64>()
                    + 0.1;
                sum += Complex64::cis(-TAU * n as f64 * x);
            }
            let expected = sum / 16.0;
            assert!((mu.coefficient(n).value - expected).norm() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn probability_normalization_and_symmetry() {
        let scheme = CantorScheme::from_fraction(1, 3, 1).unwrap();
        for mu in [MeasureCoeffs::digit_measure(&scheme), MeasureCoeffs::level_uniform(&scheme, 5).unwrap()] {
            assert_eq!(mu.coefficient(0).value, c(1.0, 0.0));
            for n in 1..300i64 {
                let a = mu.coefficient(n);
                let b = mu.coefficient(-n);
                assert!((a.value - b.value.conj()).norm() < 1e-14);
                assert!(a.value.norm() <= 1.0 + a.error.unwrap());
            }
        }
    }

    #[test]
    fn digit_error_is_certified() {
        let scheme = CantorScheme::from_fraction(1, 2, 1).unwrap();
        let coarse = MeasureCoeffs::digit_measure_with_tolerance(&scheme, 1e-4);
        let fine = MeasureCoeffs::digit_measure_with_tolerance(&scheme, 1e-15);
        for n in [1i64, 7, 64, 255, 4096] {
            let (a, b) = (coarse.coefficient(n), fine.coefficient(n));
            assert!((a.value - b.value).norm() <= a.error.unwrap() + b.error.unwrap());
            assert!(a.error.unwrap() <= 1e-4 + 1e-13);
        }
    }

    #[test]
    fn level_uniform_single_interval() {
        // For a level whose free digits are all beyond reach the measure is
        // uniform on [0, l]: μ̂(n) = e^{-πinl} sin(πnl)/(πnl).
        let mu = MeasureCoeffs {
            generator: Generator::LevelUniform { free: vec![], length: 0.3, level: 0 },
        };
        for n in [1i64, 2, -5] {
            let x = PI * n as f64 * 0.3;
            let expected = Complex64::cis(-x) * (x.sin() / x);
            assert!((mu.coefficient(n).value - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn level_uniform_matches_interval_sum() {
        let scheme = CantorScheme::from_fraction(1, 3, 1).unwrap();
        let level = 4;
        let mu = MeasureCoeffs::level_uniform(&scheme, level).unwrap();
        let arcs = scheme.level_intervals(level).unwrap().to_f64_arcs();
        let l = scheme.log2_level_length(level).unwrap().exp2();
        for n in [1i64, 3, 17, -40] {
            let x = PI * n as f64 * l;
            let sum: Complex64 = arcs
                .iter()
                .map(|(a, _)| Complex64::cis(-TAU * (n as f64 * (a + l / 2.0)).rem_euclid(1.0)) * (x.sin() / x))
                .sum();
            let expected = sum / arcs.len() as f64;
            assert!((mu.coefficient(n).value - expected).norm() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn synthetic_magnitudes() {
        let mu = MeasureCoeffs::synthetic_envelope(0.3, 0.6).unwrap();
        assert!((mu.coefficient(1).value.re - 1.0).abs() < 1e-15);
        let mags: Vec<f64> = (1..2000).map(|n| mu.coefficient(n).value.re).collect();
        assert!(mags.windows(2).all(|w| w[1] <= w[0]));
        assert!(MeasureCoeffs::synthetic_envelope(1.0, 0.5).is_err());
        assert_eq!(mu.kind(), MeasureKind::SyntheticEnvelope);
        assert!(mu.envelope().unwrap().attained);
    }

    #[test]
    fn explicit_lists() {
        assert!(MeasureCoeffs::explicit(FourierSeq::monomial(1, c(1.0, 0.0)), None).is_err());
        let mu = MeasureCoeffs::explicit(
            FourierSeq::from_pairs([(0, c(1.0, 0.0)), (2, c(0.5, 0.0)), (-2, c(0.5, 0.0))]),
            None,
        )
        .unwrap();
        assert!(!mu.has_error_bounds());
        assert_eq!(mu.support_radius(), Some(2));
        assert_eq!(mu.coefficient(2).error, None);
        let leb = MeasureCoeffs::lebesgue();
        assert!(leb.has_error_bounds());
        assert_eq!(leb.coefficient(5).value, c(0.0, 0.0));
        assert_eq!(leb.coefficient_table(1).len(), 3);
    }

    #[test]
    fn pairing_with_polynomial_is_integration() {
        // ∫ P dμ for the two-point measure {0, 1/2} is (P(0) + P(1/2))/2.
        let mu = MeasureCoeffs::finite_digit_measure(vec![0], 0.0).unwrap();
        let p = FourierSeq::from_pairs([(0, c(0.5, 0.0)), (1, c(2.0, 1.0)), (-3, c(0.0, 1.5)), (4, c(1.0, 0.0))]);
        let direct = (p.evaluate_unit(0.0) + p.evaluate_unit(0.5)) / 2.0;
        let (value, error) = pair_with_measure(&p, &mu);
        assert!((value - direct).norm() < 1e-12);
        assert!(error.unwrap() < 1e-13);
    }
}
