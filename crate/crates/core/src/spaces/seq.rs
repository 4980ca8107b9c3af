use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::params::SpaceParams;

/// Amplitudes with modulus below this are dropped from the stored support.
pub const PRUNE_THRESHOLD: f64 = 1e-15;

/// Finitely supported Fourier coefficient sequence `n ↦ ŝ(n)`.
///
/// Stored sparsely and kept canonical: no entry has modulus below
/// [`PRUNE_THRESHOLD`], so two sequences compare equal exactly when their
/// stored supports and amplitudes agree.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FourierSeq {
    coeffs: BTreeMap<i64, Complex64>,
}

impl FourierSeq {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant function `1`.
    pub fn one() -> Self {
        Self::monomial(0, Complex64::new(1.0, 0.0))
    }

    /// `c·e_n`, where `e_n(t) = e^{int}`.
    pub fn monomial(n: i64, c: Complex64) -> Self {
        Self::from_pairs([(n, c)])
    }

    /// Builds a sequence from `(frequency, amplitude)` pairs; repeated
    /// frequencies are summed.
    pub fn from_pairs<I: IntoIterator<Item = (i64, Complex64)>>(pairs: I) -> Self {
        let mut coeffs = BTreeMap::new();
        for (n, c) in pairs {
            *coeffs.entry(n).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        let mut out = FourierSeq { coeffs };
        out.prune();
        out
    }

    pub fn from_real_pairs<I: IntoIterator<Item = (i64, f64)>>(pairs: I) -> Self {
        Self::from_pairs(pairs.into_iter().map(|(n, x)| (n, Complex64::new(x, 0.0))))
    }

    fn prune(&mut self) {
        self.coeffs.retain(|_, c| c.norm() >= PRUNE_THRESHOLD);
    }

    pub fn get(&self, n: i64) -> Complex64 {
        self.coeffs.get(&n).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&n, &c)| (n, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Smallest and largest stored frequency.
    pub fn support(&self) -> Option<(i64, i64)> {
        let lo = *self.coeffs.keys().next()?;
        let hi = *self.coeffs.keys().next_back()?;
        Some((lo, hi))
    }

    /// Largest `|n|` in the support, zero for the empty sequence.
    pub fn radius(&self) -> i64 {
        self.support().map_or(0, |(lo, hi)| lo.abs().max(hi.abs()))
    }

    /// Multiplication by `e_k`.
    pub fn shift(&self, k: i64) -> Self {
        FourierSeq { coeffs: self.coeffs.iter().map(|(&n, &c)| (n + k, c)).collect() }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::from_pairs(self.iter().map(|(n, c)| (n, c * factor)))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_pairs(self.iter().chain(other.iter()))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_pairs(self.iter().chain(other.iter().map(|(n, c)| (n, -c))))
    }

    /// Keeps only frequencies with `|n| <= max_freq`.
    pub fn truncate(&self, max_freq: i64) -> Self {
        FourierSeq {
            coeffs: self.coeffs.range(-max_freq..=max_freq).map(|(&n, &c)| (n, c)).collect(),
        }
    }

    /// Applies `c ↦ m(n)·c` to every stored coefficient.
    pub fn map_coeffs(&self, mut multiplier: impl FnMut(i64, Complex64) -> Complex64) -> Self {
        Self::from_pairs(self.iter().map(|(n, c)| (n, multiplier(n, c))))
    }

    /// Value of `Σ ŝ(n) e^{int}` at `t ∈ R/2πZ`.
    pub fn evaluate(&self, t: f64) -> Complex64 {
        self.iter().map(|(n, c)| c * Complex64::cis(n as f64 * t)).sum()
    }

    /// Value at the unit-parameter point `x ∈ [0, 1)`, i.e. at `t = 2πx`.
    pub fn evaluate_unit(&self, x: f64) -> Complex64 {
        self.iter()
            .map(|(n, c)| {
                // Reduce n·x mod 1 first so large frequencies keep their phase.
                let phase = (n as f64 * x).rem_euclid(1.0);
                c * Complex64::cis(TAU * phase)
            })
            .sum()
    }

    /// Coefficient convolution, i.e. the pointwise product of the functions.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut acc: BTreeMap<i64, Complex64> = BTreeMap::new();
        for (n, a) in self.iter() {
            for (m, b) in other.iter() {
                *acc.entry(n + m).or_default() += a * b;
            }
        }
        let mut out = FourierSeq { coeffs: acc };
        out.prune();
        out
    }

    /// `Σ_n ŝ(n) t̂(−n)`.
    pub fn pair(&self, other: &Self) -> Complex64 {
        let (small, large) =
            if self.len() <= other.len() { (self, other) } else { (other, self) };
        small.iter().map(|(n, c)| c * large.get(-n)).sum()
    }

    /// `n ↦ i n ŝ(n)`.
    pub fn derivative(&self) -> Self {
        self.map_coeffs(|n, c| Complex64::new(0.0, n as f64) * c)
    }

    /// Weighted `ℓ^p` norm of the coefficients; the sup norm when `p = ∞`.
    pub fn weighted_norm(&self, params: &SpaceParams) -> f64 {
        let p = params.p();
        if p.is_infinite() {
            return self
                .iter()
                .map(|(n, c)| c.norm() * params.weight(n))
                .fold(0.0, f64::max);
        }
        // Factor out the largest term so high weights do not overflow.
        let terms: Vec<f64> = self.iter().map(|(n, c)| c.norm() * params.weight(n)).collect();
        let peak = terms.iter().copied().fold(0.0, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        let sum: f64 = terms.iter().map(|t| (t / peak).powf(p)).sum();
        peak * sum.powf(1.0 / p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn params(p: f64, beta: f64) -> SpaceParams {
        SpaceParams::new(p, beta).unwrap()
    }

    #[test]
    fn norm_examples() {
        assert_eq!(FourierSeq::one().weighted_norm(&params(1.7, 0.4)), 1.0);
        let s = FourierSeq::from_real_pairs([(1, 1.0), (-1, 1.0)]);
        assert!((s.weighted_norm(&params(2.0, 1.0)) - 2.0 * 2f64.sqrt()).abs() < 1e-14);
        let s = FourierSeq::from_real_pairs([(0, 1.0), (2, -0.5)]);
        assert!((s.weighted_norm(&params(1.0, 0.0)) - 1.5).abs() < 1e-15);
        assert_eq!(FourierSeq::zero().weighted_norm(&params(2.0, 0.0)), 0.0);
        let sup = s.weighted_norm(&params(1.0, 1.0).dual());
        assert!((sup - 1.0).abs() < 1e-15);
    }

    #[test]
    fn canonical_form_drops_tiny_and_cancelled_entries() {
        let s = FourierSeq::from_real_pairs([(3, 1.0), (3, -1.0), (4, 1e-17), (5, 2.0)]);
        assert_eq!(s.len(), 1);
        assert_eq!(s.support(), Some((5, 5)));
        assert_eq!(s.radius(), 5);
    }

    #[test]
    fn telescoping_product() {
        let f = FourierSeq::from_real_pairs([(0, 1.0), (1, -1.0)]);
        let s = FourierSeq::from_real_pairs((0..4).map(|n| (n, 1.0)));
        assert_eq!(f.multiply(&s), FourierSeq::from_real_pairs([(0, 1.0), (4, -1.0)]));
    }

    #[test]
    fn character_product_is_shift() {
        let s = FourierSeq::from_pairs([(0, c(1.0, 2.0)), (-3, c(0.5, 0.0))]);
        assert_eq!(FourierSeq::monomial(7, c(1.0, 0.0)).multiply(&s), s.shift(7));
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(FourierSeq::one().pair(&FourierSeq::one()), c(1.0, 0.0));
        let a = FourierSeq::monomial(3, c(1.0, 0.0));
        let b = FourierSeq::monomial(-3, c(1.0, 0.0));
        assert_eq!(a.pair(&b), c(1.0, 0.0));
        assert_eq!(a.pair(&a), c(0.0, 0.0));
    }

    #[test]
    fn derivative_examples() {
        assert!(FourierSeq::monomial(0, c(5.0, 0.0)).derivative().is_empty());
        assert_eq!(FourierSeq::monomial(1, c(1.0, 0.0)).derivative(), FourierSeq::monomial(1, c(0.0, 1.0)));
        assert_eq!(
            FourierSeq::monomial(-2, c(1.0, 0.0)).derivative(),
            FourierSeq::monomial(-2, c(0.0, -2.0))
        );
    }

    #[test]
    fn evaluation_matches_both_parameterizations() {
        let s = FourierSeq::from_pairs([(0, c(1.0, 0.0)), (2, c(0.0, 1.0)), (-5, c(0.3, -0.2))]);
        for x in [0.0, 0.1, 0.37, 0.9] {
            let a = s.evaluate(TAU * x);
            let b = s.evaluate_unit(x);
            assert!((a - b).norm() < 1e-12);
        }
    }

    fn seq_strategy(max_len: usize) -> impl Strategy<Value = FourierSeq> {
        prop::collection::vec((-12i64..=12, -1.0f64..1.0, -1.0f64..1.0), 0..max_len)
            .prop_map(|v| FourierSeq::from_pairs(v.into_iter().map(|(n, a, b)| (n, c(a, b)))))
    }

    fn brute_convolution(a: &FourierSeq, b: &FourierSeq) -> FourierSeq {
        let mut out = Vec::new();
        for n in -30..=30 {
            let mut acc = c(0.0, 0.0);
            for k in -30..=30 {
                acc += a.get(k) * b.get(n - k);
            }
            out.push((n, acc));
        }
        FourierSeq::from_pairs(out)
    }

    fn close(a: &FourierSeq, b: &FourierSeq, tol: f64) -> bool {
        a.sub(b).iter().all(|(_, c)| c.norm() <= tol)
    }

    proptest! {
        #[test]
        fn product_matches_brute_force(a in seq_strategy(10), b in seq_strategy(10)) {
            prop_assert!(close(&a.multiply(&b), &brute_convolution(&a, &b), 1e-13));
        }

        #[test]
        fn product_is_commutative_associative_unital(
            a in seq_strategy(6), b in seq_strategy(6), d in seq_strategy(6)
        ) {
            prop_assert!(close(&a.multiply(&b), &b.multiply(&a), 1e-13));
            prop_assert!(close(&a.multiply(&b).multiply(&d), &a.multiply(&b.multiply(&d)), 1e-12));
            prop_assert_eq!(FourierSeq::one().multiply(&a), a);
        }

        #[test]
        fn holder_pairing(
            s in seq_strategy(12), t in seq_strategy(12),
            p in 1.0f64..3.0, beta in -1.0f64..1.0
        ) {
            let sp = params(p, beta);
            let bound = s.weighted_norm(&sp) * t.weighted_norm(&sp.dual());
            prop_assert!(s.pair(&t).norm() <= bound * (1.0 + 1e-9) + 1e-300);
        }

        #[test]
        fn submultiplicative(f in seq_strategy(8), s in seq_strategy(8), p in 1.0f64..2.5, beta in 0.0f64..1.5) {
            let sp = params(p, beta);
            let l1 = params(1.0, beta);
            let lhs = f.multiply(&s).weighted_norm(&sp);
            prop_assert!(lhs <= f.weighted_norm(&l1) * s.weighted_norm(&sp) * (1.0 + 1e-12) + 1e-12);
        }

        #[test]
        fn multiplication_is_self_adjoint_in_pairing(
            f in seq_strategy(6), s in seq_strategy(6), t in seq_strategy(6)
        ) {
            let lhs = f.multiply(&s).pair(&t);
            let rhs = s.pair(&f.multiply(&t));
            prop_assert!((lhs - rhs).norm() <= 1e-12);
        }

        #[test]
        fn derivative_kills_constant_term(s in seq_strategy(10)) {
            prop_assert_eq!(s.derivative().get(0), c(0.0, 0.0));
        }
    }
}
