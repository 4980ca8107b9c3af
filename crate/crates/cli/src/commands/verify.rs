//! Randomized checks of the duality, product, interpolation and
//! sup-derivative inequalities.
//!
//! Every `(grid point, suite)` pair draws from its own ChaCha8 stream, so
//! results do not depend on the number of workers.

use anyhow::Result;
use cyclab_core::spaces::{
    check_interpolation, sup_derivative_bound, Complex64, FourierSeq, PiecewiseLinear, SpaceParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{ExperimentConfig, VerifyConfig};
use crate::output::{self, float, Artifact};
use crate::{Command, Context};

pub const CSV_FILE: &str = "verify.csv";
pub const JSON_FILE: &str = "verify.json";

pub const HEADER: [&str; 7] = ["suite", "p", "beta", "samples", "passed", "failed", "worst_margin"];

/// Relative slack allowed in the pairing bound.
pub const HOLDER_TOLERANCE: f64 = 1e-9;
/// Absolute slack allowed in the product bound.
pub const PRODUCT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Holder,
    Submultiplicativity,
    Interpolation,
    SupDerivative,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Holder, Suite::Submultiplicativity, Suite::Interpolation, Suite::SupDerivative];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Holder => "holder",
            Suite::Submultiplicativity => "submultiplicativity",
            Suite::Interpolation => "interpolation",
            Suite::SupDerivative => "sup-derivative",
        }
    }
}

/// Pass counts for one suite at one grid point. Margins are normalized so
/// that a negative value is a violation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteOutcome {
    pub suite: Suite,
    pub p: f64,
    pub beta: f64,
    pub samples: usize,
    pub passed: usize,
    pub worst_margin: f64,
}

impl SuiteOutcome {
    pub fn failed(&self) -> usize {
        self.samples - self.passed
    }
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub samples: usize,
    pub radius: u32,
    pub outcomes: Vec<SuiteOutcome>,
}

/// Random sequence on `[−radius, radius]`: each frequency is present with
/// probability one half, with real and imaginary parts uniform in `[−1, 1]`.
pub fn random_sequence(rng: &mut ChaCha8Rng, radius: u32) -> FourierSeq {
    let radius = i64::from(radius);
    let mut pairs = Vec::new();
    for n in -radius..=radius {
        if rng.gen_bool(0.5) {
            pairs.push((n, Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))));
        }
    }
    if pairs.is_empty() {
        let n = rng.gen_range(-radius..=radius);
        pairs.push((n, Complex64::new(1.0, 0.0)));
    }
    FourierSeq::from_pairs(pairs)
}

/// Random continuous piecewise-linear function with 2 to 8 breakpoints.
pub fn random_piecewise_linear(rng: &mut ChaCha8Rng) -> PiecewiseLinear {
    loop {
        let count = rng.gen_range(2..=8);
        let mut xs: Vec<f64> = (0..count).map(|_| rng.gen_range(0.0..1.0)).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        let values = xs.iter().map(|_| rng.gen_range(-1.0..=1.0)).collect();
        if let Ok(g) = PiecewiseLinear::new(xs, values) {
            return g;
        }
    }
}

pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Runs `suite` on `samples` random inputs at `(p, β)`.
pub fn run_suite(
    suite: Suite,
    params: &SpaceParams,
    samples: usize,
    radius: u32,
    rng: &mut ChaCha8Rng,
) -> Result<SuiteOutcome> {
    let mut passed = 0;
    let mut worst_margin = f64::INFINITY;
    for _ in 0..samples {
        let (ok, margin) = match suite {
            Suite::Holder => {
                let s = random_sequence(rng, radius);
                let t = random_sequence(rng, radius);
                let lhs = s.pair(&t).norm();
                let rhs = s.weighted_norm(params) * t.weighted_norm(&params.dual());
                (lhs <= rhs * (1.0 + HOLDER_TOLERANCE), 1.0 - lhs / rhs)
            }
            Suite::Submultiplicativity => {
                let f = random_sequence(rng, radius);
                let s = random_sequence(rng, radius);
                let lhs = f.multiply(&s).weighted_norm(params);
                let rhs = f.weighted_norm(&params.with_p(1.0)?) * s.weighted_norm(params);
                (lhs <= rhs + PRODUCT_TOLERANCE, rhs - lhs)
            }
            Suite::Interpolation => {
                let f = random_sequence(rng, radius);
                let report = check_interpolation(&f, params)?;
                (report.holds, (report.rhs - report.lhs) / report.rhs)
            }
            Suite::SupDerivative => {
                let g = random_piecewise_linear(rng);
                let report = sup_derivative_bound(&g, params.beta())?;
                let worst_partial = report.truncations.iter().map(|t| t.partial_sum).fold(0.0, f64::max);
                (report.holds, (report.bound - worst_partial) / report.bound)
            }
        };
        passed += usize::from(ok);
        worst_margin = worst_margin.min(margin);
    }
    Ok(SuiteOutcome { suite, p: params.p(), beta: params.beta(), samples, passed, worst_margin })
}

pub fn run(config: &ExperimentConfig, ctx: &Context) -> Result<Vec<Artifact>> {
    let seed = ctx.require_seed(Command::Verify)?;
    let default = VerifyConfig::default();
    let verify = config.verify.as_ref().unwrap_or(&default);
    let mut tasks = Vec::new();
    for (index, &[p, beta]) in verify.grid.get_ref().iter().enumerate() {
        for (offset, &suite) in Suite::ALL.iter().enumerate() {
            tasks.push((p, beta, suite, (index * Suite::ALL.len() + offset) as u64));
        }
    }
    let outcomes = ctx.map(&tasks, |_, &(p, beta, suite, id)| {
        let params = SpaceParams::new(p, beta)?;
        run_suite(suite, &params, verify.samples, verify.radius, &mut stream(seed, id))
    })?;

    let rows: Vec<Vec<String>> = outcomes
        .iter()
        .map(|o| {
            vec![
                o.suite.name().to_string(),
                float(o.p),
                float(o.beta),
                o.samples.to_string(),
                o.passed.to_string(),
                o.failed().to_string(),
                float(o.worst_margin),
            ]
        })
        .collect();
    let report = VerifyReport { seed, samples: verify.samples, radius: verify.radius, outcomes };
    Ok(vec![output::csv(CSV_FILE, &HEADER, &rows)?, output::json(JSON_FILE, &report)?])
}
