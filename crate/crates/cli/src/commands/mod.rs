//! One module per subcommand. Each turns its config table into artifacts.

pub mod cantor;
pub mod capacity;
pub mod scan;
pub mod verify;

use anyhow::Context as _;
use cyclab_core::sets::CantorScheme;

use crate::config::parse_fraction;

/// A validated `λ` entry: its text as written and the scheme it defines.
pub(crate) fn scheme(text: &str, k: u32) -> anyhow::Result<CantorScheme> {
    let (numer, denom) = parse_fraction(text).with_context(|| format!("invalid lambda {text:?}"))?;
    CantorScheme::from_fraction(numer, denom, k).with_context(|| format!("lambda = {text}, k = {k}"))
}

/// `λ` values sorted by magnitude, so rows follow the parameter order.
pub(crate) fn sorted_lambdas(list: &[String]) -> Vec<String> {
    let mut lambdas: Vec<(f64, String)> = list
        .iter()
        .map(|t| {
            let (n, d) = parse_fraction(t).unwrap_or((0, 1));
            (f64::from(n) / f64::from(d), canonical(t))
        })
        .collect();
    lambdas.sort_by(|a, b| a.0.total_cmp(&b.0));
    lambdas.into_iter().map(|(_, t)| t).collect()
}

fn canonical(text: &str) -> String {
    parse_fraction(text).map_or_else(|| text.to_string(), |(n, d)| format!("{n}/{d}"))
}

pub(crate) fn sorted_floats(values: &[f64]) -> Vec<f64> {
    let mut values = values.to_vec();
    values.sort_by(f64::total_cmp);
    values
}
