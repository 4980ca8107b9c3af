//! Measure coefficients checked against direct integration and against each
//! other.

use std::f64::consts::TAU;

use cyclab_core::measures::{
    alpha_energy, digit_measure, level_uniform_measure, membership_Aq, pair_with_measure, synthetic_envelope_measure,
};
use cyclab_core::sets::{CantorScheme, Verdict};
use cyclab_core::spaces::{Complex64, FourierSeq};
use proptest::prelude::*;

/// `∫_a^{a+l} e^{2πimx} dx` in closed form.
fn exponential_integral(m: i64, a: f64, l: f64) -> Complex64 {
    if m == 0 {
        return Complex64::new(l, 0.0);
    }
    let w = TAU * m as f64;
    (Complex64::cis(w * (a + l)) - Complex64::cis(w * a)) / Complex64::new(0.0, w)
}

#[test]
fn pairing_matches_per_interval_integration() {
    // Coarse intervals keep the closed-form integrals well conditioned.
    let scheme = CantorScheme::from_fraction(1, 5, 1).unwrap();
    let level = scheme.n0();
    let mu = level_uniform_measure(&scheme, level).unwrap();
    let arcs = scheme.level_intervals(level).unwrap().to_f64_arcs();
    let l = scheme.log2_level_length(level).unwrap().exp2();
    let count = arcs.len() as f64;
    let p = FourierSeq::from_pairs([
        (0, Complex64::new(0.3, 0.0)),
        (1, Complex64::new(1.0, 0.5)),
        (-2, Complex64::new(-0.25, 0.1)),
        (5, Complex64::new(0.0, 2.0)),
        (-13, Complex64::new(0.7, -0.7)),
    ]);
    let direct: Complex64 = arcs
        .iter()
        .map(|&(a, _)| p.iter().map(|(m, c)| c * exponential_integral(m, a, l)).sum::<Complex64>())
        .sum::<Complex64>()
        / (count * l);
    let (value, error) = pair_with_measure(&p, &mu);
    assert!((value - direct).norm() < 1e-10, "{value} vs {direct}");
    assert!(error.unwrap() < 1e-10);
}

#[test]
fn digit_and_level_uniform_agree_at_level_twelve() {
    for (numer, denom) in [(1, 3), (1, 2)] {
        let scheme = CantorScheme::from_fraction(numer, denom, 1).unwrap();
        let digits = digit_measure(&scheme);
        let uniform = level_uniform_measure(&scheme, 12).unwrap();
        for n in -256..=256i64 {
            let (a, b) = (digits.coefficient(n), uniform.coefficient(n));
            let allowed = a.error.unwrap() + b.error.unwrap();
            assert!(allowed <= 1e-5);
            assert!((a.value - b.value).norm() <= allowed, "λ={numer}/{denom} n={n}");
        }
    }
}

#[test]
fn level_uniform_approaches_digit_measure() {
    let scheme = CantorScheme::from_fraction(1, 3, 1).unwrap();
    let digits = digit_measure(&scheme);
    let gap = |level: u32| -> f64 {
        let uniform = level_uniform_measure(&scheme, level).unwrap();
        (1..=64).map(|n| (uniform.coefficient(n).value - digits.coefficient(n).value).norm()).fold(0.0, f64::max)
    };
    let (coarse, fine) = (gap(scheme.n0()), gap(scheme.n0() + 2));
    assert!(fine <= coarse);
    assert!(fine < 1e-9);
}

#[test]
fn envelope_membership_threshold() {
    let (q, beta) = (4.0, 0.1);
    let alpha = 2.0 / q * (1.0 - beta * q);
    let report = membership_Aq(&synthetic_envelope_measure(alpha, 0.6).unwrap(), q, beta, 1 << 14).unwrap();
    assert_eq!(report.verdict, Verdict::Bounded);
    let report = membership_Aq(&synthetic_envelope_measure(alpha, 0.5).unwrap(), q, beta, 1 << 14).unwrap();
    assert_eq!(report.verdict, Verdict::Diverging);
}

#[test]
fn dirac_energy_grows_like_power_sum() {
    let point = cyclab_core::measures::MeasureCoeffs::point_mass(0.5).unwrap();
    let report = alpha_energy(&point, 0.5, 1 << 12).unwrap();
    let last = *report.partial_sums.last().unwrap();
    // Σ_{n<=N} (1+n)^{-1/2} lies between 2(√(N+2) − √2) and 2(√(N+1) − 1).
    let n = 4096.0f64;
    assert!(last >= 2.0 * ((n + 2.0).sqrt() - 2f64.sqrt()) - 1e-9);
    assert!(last <= 2.0 * ((n + 1.0).sqrt() - 1.0) + 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn energy_is_monotone_in_alpha_and_truncation(a in 0.0f64..0.9, da in 0.0f64..0.09, shift in 0.0f64..1.0) {
        let mu = cyclab_core::measures::MeasureCoeffs::finite_digit_measure(vec![0, 3, 4, 9], shift).unwrap();
        let low = alpha_energy(&mu, a, 512).unwrap();
        let high = alpha_energy(&mu, a + da, 512).unwrap();
        for (x, y) in low.partial_sums.iter().zip(&high.partial_sums) {
            prop_assert!(x <= y);
        }
        prop_assert!(low.partial_sums.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn coefficients_are_bounded_and_symmetric(n in -100_000i64..100_000) {
        let scheme = CantorScheme::from_fraction(1, 5, 1).unwrap();
        let mu = digit_measure(&scheme);
        let (a, b) = (mu.coefficient(n), mu.coefficient(-n));
        prop_assert!(a.value.norm() <= 1.0 + a.error.unwrap());
        prop_assert!((a.value - b.value.conj()).norm() <= 1e-14);
    }
}
