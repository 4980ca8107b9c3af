//! Exact circle geometry and the Cantor-type sets `S_λ^k`.
//!
//! Interval endpoints are dyadic rationals held exactly, so containment and
//! nesting questions have exact answers. Quantities that grow or shrink
//! doubly exponentially with the level (interval lengths, branching
//! products, Hausdorff cover sums, the Eidlin series) are carried as base-2
//! logarithms.

mod capacity;
mod checks;
mod dyadic;
mod gaps;
mod scheme;
mod union;

pub use capacity::{
    eidlin_criterion, eidlin_criterion_with, eidlin_flip_bracket, h_cover_value, theorem_thresholds,
    EidlinReport, FlipBracket, HFunction, Thresholds, Verdict, VerdictThresholds,
};
pub use checks::{
    check_nesting, check_sum_containment, ContainmentMethod, ContainmentReport, EnumeratedNesting,
    NestingReport,
};
pub use dyadic::Dyadic;
pub use gaps::{gap_profile, strong_measure_trend, GapProfile};
pub use scheme::{
    CantorScheme, LevelSummary, Sandwich, DEFAULT_INTERVAL_BUDGET, MAX_DEPTH, MAX_SCALE,
};
pub use union::{k_fold_sum, minkowski_sum, minkowski_sum_with_budget, Arc, IntervalUnion, DEFAULT_PAIR_BUDGET};


/// All `m <= max_index` in some block `[2^j, 2^j(1+λ+1/j) − k + 1]`, `j >= 1`.
pub fn k_lambda_indices(scheme: &CantorScheme, max_index: u128) -> Vec<u128> {
    (0..=max_index).filter(|&m| scheme.is_forced(m)).collect()
}
