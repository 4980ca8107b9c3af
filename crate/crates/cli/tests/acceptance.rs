//! Acceptance suite: runs the twelve desk-scale criteria and prints one
//! pass/fail line per criterion.
//!
//! Two criteria are known to fail at the stated sizes (see README). They are
//! listed in `EXPECTED_FAILURES`; the process exits non-zero only when some
//! outcome differs from its expectation.

use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use cyclab_cli::commands::verify::{run_suite, stream, Suite};
use cyclab_cli::{run, Command};
use cyclab_core::cyclicity::{
    best_approx, cyclicity_scan, lipschitz_approximant_check, newman_psi, noncyclicity_certificate,
    zero_set_function, SolverConfig, TrendConfig,
};
use cyclab_core::measures::{digit_measure, level_uniform_measure, membership_Aq, synthetic_envelope_measure};
use cyclab_core::sets::{
    check_nesting, check_sum_containment, eidlin_criterion, eidlin_flip_bracket, theorem_thresholds, CantorScheme,
    Verdict,
};
use cyclab_core::spaces::{pwl_fourier, FourierSeq, PiecewiseLinear, SpaceParams};
use nalgebra::{DMatrix, DVector};
use num_rational::Ratio;

const EXPECTED_FAILURES: [u32; 2] = [6, 8];

const SEED: u64 = 20_240_611;
const GRID: [(f64, f64); 4] = [(4.0 / 3.0, 0.1), (4.0 / 3.0, 0.2), (1.5, 0.3), (1.8, 0.05)];
const SAMPLES: usize = 1000;
const RADIUS: u32 = 12;

/// Certificate bound for criterion 9 from the first certified run.
const GOLDEN_CERTIFICATE: f64 = 0.541_911_472_664_722_4;

type Check = anyhow::Result<(bool, String)>;
type Criterion = (u32, &'static str, fn() -> Check);

fn suite_criterion(suite: Suite, offset: u64) -> Check {
    let mut details = Vec::new();
    let mut ok = true;
    for (index, &(p, beta)) in GRID.iter().enumerate() {
        let params = SpaceParams::new(p, beta)?;
        let outcome = run_suite(suite, &params, SAMPLES, RADIUS, &mut stream(SEED, 16 * offset + index as u64))?;
        ok &= outcome.failed() == 0;
        details.push(format!("({p:.4},{beta}) {}/{} worst margin {:.3e}", outcome.passed, outcome.samples, outcome.worst_margin));
    }
    Ok((ok, details.join("; ")))
}

fn triangle_closed_form(h: f64, n: i64) -> f64 {
    let tau = std::f64::consts::TAU;
    if n == 0 {
        return 1.0 / tau;
    }
    let x = n as f64 * h;
    4.0 * (x / 2.0).sin().powi(2) / (x * x) / tau
}

fn criterion_4() -> Check {
    let mut worst: f64 = 0.0;
    for h in [0.01, 0.1] {
        let coeffs = pwl_fourier(&PiecewiseLinear::triangle(h)?, 512)?;
        for n in -512..=512i64 {
            worst = worst.max((coeffs.get(n) - triangle_closed_form(h, n)).norm());
        }
    }
    Ok((worst <= 1e-12, format!("max abs error {worst:.3e}")))
}

fn criterion_5() -> Check {
    let mut ok = true;
    let mut checked = 0;
    for (numer, denom) in [(1, 5), (1, 3), (1, 2)] {
        let lambda = Ratio::new(numer, denom);
        let mut first_levels = Vec::new();
        for k in 1..=2 {
            let scheme = CantorScheme::new(lambda, k)?;
            first_levels.push(scheme.n0());
            for level in scheme.n0()..=scheme.n0() + 3 {
                ok &= check_nesting(&scheme, level)?.holds(1e-12);
                checked += 1;
            }
        }
        let start = first_levels.into_iter().max().unwrap_or(0);
        for level in start..=start + 3 {
            ok &= check_sum_containment(lambda, 2, level)?.contained;
            checked += 1;
        }
    }
    Ok((ok, format!("{checked} nesting and containment checks")))
}

fn criterion_6() -> Check {
    let scheme = CantorScheme::from_fraction(1, 3, 1)?;
    let max_level = scheme.n0() + 10;
    let above = eidlin_criterion(&scheme, 0.55, max_level)?;
    let below = eidlin_criterion(&scheme, 0.45, max_level)?;
    let tail = &below.ln_increments[below.ln_increments.len() - 3..];
    let alphas: Vec<f64> = (40..=60).map(|i| f64::from(i) / 100.0).collect();
    let bracket = eidlin_flip_bracket(&scheme, &alphas, max_level)?;

    let diverges = above.verdict == Verdict::Diverging && above.log2_growth >= 1000f64.log2();
    let bounded = below.verdict == Verdict::Bounded && tail.iter().all(|&d| d < 1e-6);
    let flipped = bracket.bracketed_within(0.48, 0.52);
    Ok((
        diverges && bounded && flipped,
        format!(
            "alpha 0.55: {:?}, growth 2^{:.1}; alpha 0.45: {:?}, last increments {:.2e} {:.2e} {:.2e}; bracket [{:?}, {:?}]",
            above.verdict,
            above.log2_growth,
            below.verdict,
            tail[0],
            tail[1],
            tail[2],
            bracket.last_bounded,
            bracket.first_diverging
        ),
    ))
}

fn criterion_7() -> Check {
    let mut worst_gap: f64 = 0.0;
    let mut worst_allowed: f64 = 0.0;
    let mut ok = true;
    for (numer, denom) in [(1, 3), (1, 2)] {
        let scheme = CantorScheme::from_fraction(numer, denom, 1)?;
        let digits = digit_measure(&scheme);
        let uniform = level_uniform_measure(&scheme, 12)?;
        for n in -256..=256i64 {
            let (a, b) = (digits.coefficient(n), uniform.coefficient(n));
            let allowed = a.error.unwrap_or(f64::INFINITY) + b.error.unwrap_or(f64::INFINITY);
            let gap = (a.value - b.value).norm();
            ok &= gap <= allowed && allowed <= 1e-5;
            worst_gap = worst_gap.max(gap);
            worst_allowed = worst_allowed.max(allowed);
        }
    }
    Ok((ok, format!("max gap {worst_gap:.3e}, max certified error {worst_allowed:.3e}")))
}

/// Weighted least squares for `p = 2` through the normal equations.
fn normal_equation_error(f: &FourierSeq, beta: f64, degree: i64) -> f64 {
    let (lo, hi) = f.support().expect("non-zero f");
    let rows: Vec<i64> = ((lo - degree).min(0)..=(hi + degree).max(0)).collect();
    let cols = (2 * degree + 1) as usize;
    let weight = |j: i64| (1.0 + j.unsigned_abs() as f64).powf(beta);
    let a = DMatrix::from_fn(rows.len(), cols, |r, c| f.get(rows[r] - (c as i64 - degree)).re * weight(rows[r]));
    let b = DVector::from_fn(rows.len(), |r, _| if rows[r] == 0 { 1.0 } else { 0.0 });
    let gram = a.transpose() * &a;
    let rhs = a.transpose() * &b;
    let x = gram.cholesky().expect("positive definite").solve(&rhs);
    (b - a * x).norm()
}

fn criterion_8() -> Check {
    let f = FourierSeq::from_real_pairs([(0, 1.0), (1, -1.0)]);
    let params = SpaceParams::new(4.0 / 3.0, 0.1)?;
    let scan = cyclicity_scan(&f, &params, &[8, 16, 32, 64], &SolverConfig::default(), &TrendConfig::default())?;
    let errors: Vec<f64> = scan.results.iter().map(|r| r.error).collect();
    let decreasing = errors.windows(2).all(|w| w[1] < w[0]);
    let last = *errors.last().unwrap_or(&f64::INFINITY);

    let quadratic = best_approx(&f, &SpaceParams::new(2.0, 0.1)?, 8, &SolverConfig::default())?;
    let dense = normal_equation_error(&f, 0.1, 8);
    let agreement = (quadratic.error - dense).abs();
    Ok((
        decreasing && last < 0.1 && agreement <= 1e-9,
        format!(
            "errors {:.4} {:.4} {:.4} {:.4} (decreasing: {decreasing}, final < 0.1: {}); p = 2 gap {agreement:.2e}",
            errors[0],
            errors[1],
            errors[2],
            errors[3],
            last < 0.1
        ),
    ))
}

fn criterion_9() -> Check {
    let params = SpaceParams::new(4.0 / 3.0, 0.2)?;
    let thresholds = theorem_thresholds(4.0 / 3.0, 0.2)?;
    // (1 − λ)/(1 + λ) = 0.4 for λ = 3/7.
    let scheme = CantorScheme::from_fraction(3, 7, 1)?;
    let cover = scheme.level_intervals(scheme.n0() + 1)?;
    let f = pwl_fourier(&zero_set_function(&cover, 0.005)?, 512)?;
    let mu = digit_measure(&scheme);
    let certificate = noncyclicity_certificate(&f, &mu, &params, 64)?;
    let degrees = [1, 2, 4, 8, 16, 32, 64];
    let scan = cyclicity_scan(&f, &params, &degrees, &SolverConfig::default(), &TrendConfig::default())?;
    let smallest = scan.results.iter().map(|r| r.error).fold(f64::INFINITY, f64::min);
    let golden = ((certificate.bound - GOLDEN_CERTIFICATE) / GOLDEN_CERTIFICATE).abs() <= 1e-6;
    let ok = (scheme.dimension() - 0.4).abs() < 1e-12
        && scheme.dimension() > thresholds.noncyclic_above
        && certificate.bound > 0.01
        && golden
        && smallest >= certificate.bound - 1e-9;
    Ok((
        ok,
        format!(
            "bound {:.10} (golden {GOLDEN_CERTIFICATE:.10}), smallest error over degrees <= 64: {smallest:.4}",
            certificate.bound
        ),
    ))
}

fn criterion_10() -> Check {
    let params = SpaceParams::new(4.0 / 3.0, 0.1)?;
    let q = params.q();
    let alpha = 2.0 / q * (1.0 - 0.1 * q);
    let scheme = CantorScheme::from_fraction(1, 3, 1)?;
    let set = scheme.level_intervals(4)?;
    let n = 16;
    let epsilons = [400.0, 200.0, 100.0, 50.0];
    let mut bounds_ok = true;
    for &epsilon in &epsilons {
        bounds_ok &= newman_psi(&set, n, epsilon, alpha, &params)?.all_bounds_hold();
    }
    let table = lipschitz_approximant_check(&set, n, &params, &epsilons)?;
    let target = 2f64.powf(-table.exponent);
    let ratios: Vec<f64> = table.rows.iter().filter_map(|r| r.ratio).collect();
    let ratios_ok = ratios.len() >= 3 && ratios.iter().all(|r| (r / target - 1.0).abs() <= 0.25);
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.3}")).collect();
    Ok((
        bounds_ok && ratios_ok,
        format!("{} (n, eps) pairs, bounds hold: {bounds_ok}; ratios {} vs {target:.3}", epsilons.len(), shown.join(" ")),
    ))
}

fn criterion_11() -> Check {
    let (q, beta) = (4.0, 0.1);
    let alpha = 2.0 / q * (1.0 - beta * q);
    let n_max = 1 << 23;
    let bounded = membership_Aq(&synthetic_envelope_measure(alpha, 0.6)?, q, beta, n_max)?;
    let diverging = membership_Aq(&synthetic_envelope_measure(alpha, 0.4)?, q, beta, n_max)?;
    let ok = bounded.verdict == Verdict::Bounded
        && bounded.increments_below(1e-8)
        && diverging.verdict == Verdict::Diverging;
    Ok((
        ok,
        format!(
            "gamma 0.6: {:?}, last increment {:.2e}; gamma 0.4: {:?}",
            bounded.verdict,
            bounded.last_increments.last().copied().unwrap_or(f64::NAN),
            diverging.verdict
        ),
    ))
}

fn criterion_12() -> Check {
    let dir = tempfile::tempdir()?;
    let config = dir.path().join("verify.toml");
    let grid: Vec<String> = GRID.iter().map(|(p, b)| format!("[{p:?}, {b:?}]")).collect();
    fs::write(&config, format!("seed = {SEED}\n[verify]\nsamples = 200\ngrid = [{}]\n", grid.join(", ")))?;
    let first = run(Command::Verify, &config, &dir.path().join("first"), None, 2)?;
    let second = run(Command::Verify, &config, &dir.path().join("second"), None, 1)?;
    let mut identical = first.len() == second.len();
    for (a, b) in first.iter().zip(&second) {
        identical &= a.file_name() == b.file_name() && fs::read(a)? == fs::read(b)?;
    }
    Ok((identical, format!("{} files compared", first.len())))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        (1, "duality pairing bound", || suite_criterion(Suite::Holder, 0)),
        (2, "submultiplicativity", || suite_criterion(Suite::Submultiplicativity, 1)),
        (3, "interpolation inequality", || suite_criterion(Suite::Interpolation, 2)),
        (4, "triangle kernel coefficients", criterion_4),
        (5, "Cantor structure", criterion_5),
        (6, "Eidlin threshold", criterion_6),
        (7, "digit vs level-uniform measure", criterion_7),
        (8, "cyclic-regime evidence", criterion_8),
        (9, "non-cyclic certificate", criterion_9),
        (10, "distance-ramp approximant bounds", criterion_10),
        (11, "envelope membership", criterion_11),
        (12, "verify determinism", criterion_12),
    ];
    let mut surprises = 0;
    for (id, name, check) in criteria {
        let start = Instant::now();
        let (pass, detail) = check().unwrap_or_else(|e| (false, format!("error: {e:#}")));
        let expected_fail = EXPECTED_FAILURES.contains(&id);
        let status = match (pass, expected_fail) {
            (true, false) => "PASS",
            (false, true) => "FAIL (expected)",
            (true, true) => "PASS (unexpected)",
            (false, false) => "FAIL",
        };
        if pass == expected_fail {
            surprises += 1;
        }
        println!("criterion {id:>2} {status}: {name}: {detail} [{:.1}s]", start.elapsed().as_secs_f64());
    }
    if surprises == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{surprises} criteria differ from their expected outcome");
        ExitCode::FAILURE
    }
}
