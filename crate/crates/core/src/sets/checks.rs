//! Exact structural checks on the level covers of a [`CantorScheme`].

use std::f64::consts::LN_2;

use num_bigint::BigUint;
use num_rational::Ratio;
use serde::Serialize;

use super::dyadic::Dyadic;
use super::scheme::CantorScheme;
use super::union::{k_fold_sum, IntervalUnion};
use crate::{Error, Result};

/// Outcome of the nesting checks between levels `N` and `N + 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NestingReport {
    pub level: u32,
    /// `2^{N+1} − ν_N`.
    pub expected_branching_log2: u128,
    /// Free digits in `[2^N, 2^{N+1})`; children per parent is two to this.
    pub child_count_log2: u128,
    /// Free digits in `[2^N, 2^{N+1})` are exactly `[ν_N, 2^{N+1})`, so
    /// child offsets are all multiples of `2^{-2^{N+1}}` below `2^{-ν_N}`.
    pub digit_block_contiguous: bool,
    /// Children have length below the offset spacing `2^{-2^{N+1}}`.
    pub children_disjoint: bool,
    /// `max offset + l_{N+1} = l_N` holds exactly for the stored lengths,
    /// so the first and last child share the parent's endpoints.
    pub length_identity_exact: bool,
    /// `|log2(span_N + l_{N+1}) − log2 l_N| / |log2 l_N|` for the full series.
    pub log2_identity_residual: f64,
    /// Enumerated containment check, when both levels fit the budget.
    pub enumerated: Option<EnumeratedNesting>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnumeratedNesting {
    pub nested: bool,
    pub min_children: usize,
    pub max_children: usize,
}

impl NestingReport {
    pub fn holds(&self, tolerance: f64) -> bool {
        let counts_match = self.child_count_log2 == self.expected_branching_log2
            && self.enumerated.as_ref().is_none_or(|e| {
                e.nested
                    && e.min_children == e.max_children
                    && (e.max_children as u128) == (1u128 << self.expected_branching_log2)
            });
        counts_match
            && self.digit_block_contiguous
            && self.children_disjoint
            && self.length_identity_exact
            && self.log2_identity_residual <= tolerance
    }
}

pub fn check_nesting(scheme: &CantorScheme, level: u32) -> Result<NestingReport> {
    if level + 1 > scheme.depth() {
        return Err(Error::invalid(format!(
            "nesting at level {level} needs depth >= {}, scheme depth is {}",
            level + 1,
            scheme.depth()
        )));
    }
    let nu = scheme.nu(level)?;
    let top = 1u128 << (level + 1);
    let free = scheme.free_digits(1u128 << level, top);
    let expected: Vec<u128> = (nu as u128..top).collect();
    let expected_branching_log2 = top - nu as u128;

    let parent_length = scheme.level_length(level)?;
    let child_length = scheme.level_length(level + 1)?;
    let spacing = Dyadic::pow2_neg(top as u32);
    let span = Dyadic::pow2_neg(nu as u32).checked_sub(&spacing).expect("nu_N < 2^{N+1}");
    let length_identity_exact = span.add(&child_length) == parent_length;

    let log2_parent = scheme.log2_level_length(level)?;
    let log2_child = scheme.log2_level_length(level + 1)?;
    let log2_span = scheme.log2_child_span(level)?;
    let log2_sum = log2_add(log2_span, log2_child);
    let log2_identity_residual = ((log2_sum - log2_parent) / log2_parent).abs();

    let enumerated = match (scheme.interval_count(level), scheme.interval_count(level + 1)) {
        (Ok(_), Ok(_)) => Some(enumerate_nesting(scheme, level)?),
        _ => None,
    };

    Ok(NestingReport {
        level,
        expected_branching_log2,
        child_count_log2: free.len() as u128,
        digit_block_contiguous: free == expected,
        children_disjoint: child_length < spacing,
        length_identity_exact,
        log2_identity_residual,
        enumerated,
    })
}

fn enumerate_nesting(scheme: &CantorScheme, level: u32) -> Result<EnumeratedNesting> {
    let parents = scheme.level_intervals(level)?;
    let children = scheme.level_intervals(level + 1)?;
    let bits = parents.bits().max(children.bits());
    let lift = |u: &IntervalUnion| -> Vec<(BigUint, BigUint)> {
        let shift = bits - u.bits();
        u.raw_arcs().iter().map(|(s, l)| (s << shift, (s + l) << shift)).collect()
    };
    let (outer, inner) = (lift(&parents), lift(&children));
    let mut counts = vec![0usize; outer.len()];
    let mut nested = true;
    for (a, b) in &inner {
        let idx = outer.partition_point(|(s, _)| s <= a);
        if idx == 0 || *b > outer[idx - 1].1 {
            nested = false;
            continue;
        }
        counts[idx - 1] += 1;
    }
    Ok(EnumeratedNesting {
        nested,
        min_children: counts.iter().copied().min().unwrap_or(0),
        max_children: counts.iter().copied().max().unwrap_or(0),
    })
}

/// `log2(2^a + 2^b)`.
pub(crate) fn log2_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + ((lo - hi) * LN_2).exp().ln_1p() / LN_2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContainmentMethod {
    /// `k × E_N(S_λ)` formed explicitly and tested arc by arc.
    Enumerated,
    /// Digit and length conditions that imply the containment level by level.
    Digitwise,
}

/// Whether `k × E_N(S_λ) ⊂ E_N(S_λ^k)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContainmentReport {
    pub lambda: String,
    pub k: u32,
    pub level: u32,
    pub method: ContainmentMethod,
    pub contained: bool,
}

/// Largest level-`N` interval count for which the k-fold sum is formed
/// explicitly.
const ENUMERATION_LIMIT: usize = 2048;

/// Checks `k × S_λ ⊂ S_λ^k` on level-`N` covers.
///
/// When the covers are small the sumset is built explicitly. Otherwise the
/// containment follows by induction on `t = 2, …, k` from two exact facts:
/// every forced digit `m` of `S_λ^t` below `2^N` has `m` and `m + 1` forced
/// in both `S_λ^{t−1}` and `S_λ`, so adding left endpoints produces no carry
/// into forced positions; and `l_N^{(t−1)} + l_N^{(1)} <= l_N^{(t)}`.
pub fn check_sum_containment(lambda: Ratio<u32>, k: u32, level: u32) -> Result<ContainmentReport> {
    if k < 2 {
        return Err(Error::invalid("sum containment needs k >= 2"));
    }
    let plain: Vec<CantorScheme> =
        (1..=k).map(|t| CantorScheme::new(lambda, t)).collect::<Result<_>>()?;
    let depth = plain.iter().map(CantorScheme::depth).max().unwrap_or(0).max(level);
    let schemes: Vec<CantorScheme> = plain
        .into_iter()
        .map(|s| if s.depth() == depth { Ok(s) } else { s.with_depth(depth) })
        .collect::<Result<_>>()?;
    let base = &schemes[0];
    let target = &schemes[k as usize - 1];
    if schemes.iter().any(|s| level < s.n0()) {
        return Err(Error::invalid(format!("level {level} is below the first admissible level")));
    }
    let lambda_text = lambda.to_string();
    if let Ok(count) = base.interval_count(level) {
        if count <= ENUMERATION_LIMIT {
            let sum = k_fold_sum(base.level_intervals(level)?.as_ref(), k)?;
            let contained = target.level_intervals(level)?.contains(&sum);
            return Ok(ContainmentReport {
                lambda: lambda_text,
                k,
                level,
                method: ContainmentMethod::Enumerated,
                contained,
            });
        }
    }
    let limit = 1u128 << level;
    let mut contained = true;
    for t in 2..=k as usize {
        let (current, previous) = (&schemes[t - 1], &schemes[t - 2]);
        let forced_in_both = |m: u128| m >= limit || (previous.is_forced(m) && base.is_forced(m));
        let digits_ok = (0..limit)
            .filter(|&m| current.is_forced(m))
            .all(|m| forced_in_both(m) && forced_in_both(m + 1));
        let lengths_ok = previous.level_length(level)?.add(&base.level_length(level)?)
            <= current.level_length(level)?;
        contained &= digits_ok && lengths_ok;
    }
    Ok(ContainmentReport { lambda: lambda_text, k, level, method: ContainmentMethod::Digitwise, contained })
}
