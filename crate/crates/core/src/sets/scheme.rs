use std::collections::BTreeMap;
use std::f64::consts::LN_2;
use std::sync::{Arc as Shared, RwLock};

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::One;
use serde::Serialize;

use super::dyadic::Dyadic;
use super::union::IntervalUnion;
use crate::{Error, Result};

/// Largest scale index `j` for which `ν_j` is tabulated.
pub const MAX_SCALE: u32 = 64;
/// Default cap on the number of level intervals a scheme will enumerate.
pub const DEFAULT_INTERVAL_BUDGET: usize = 1 << 20;
/// Largest supported truncation depth; endpoints then need `2^{21}` bits.
pub const MAX_DEPTH: u32 = 20;

/// The Cantor-type set `S_λ^k ⊂ R/Z` of points `x = Σ_i x_i 2^{-(i+1)}`
/// whose binary digits vanish on
/// `K_λ^k = ⋃_{j>=1} [2^j, 2^j(1+λ+1/j) − k + 1] ∩ Z`.
///
/// Level `N` covers `S_λ^k` by intervals whose left endpoints range over
/// all admissible digit strings below position `2^N`. Their common length
/// `l_N = Σ_{j>=N} (2^{-ν_j} − 2^{-2^{j+1}})` is an infinite series; exact
/// interval endpoints use the series truncated after `j = depth`, which
/// keeps every structural identity exact. Logarithmic quantities use the
/// full series.
#[derive(Debug)]
pub struct CantorScheme {
    lambda: Ratio<u32>,
    k: u32,
    /// `nu[j]` for `1 <= j <= MAX_SCALE`; index 0 is unused.
    nu: Vec<i128>,
    n0: u32,
    depth: u32,
    interval_budget: usize,
    levels: RwLock<BTreeMap<u32, Shared<IntervalUnion>>>,
}

impl Clone for CantorScheme {
    fn clone(&self) -> Self {
        CantorScheme {
            lambda: self.lambda,
            k: self.k,
            nu: self.nu.clone(),
            n0: self.n0,
            depth: self.depth,
            interval_budget: self.interval_budget,
            levels: RwLock::default(),
        }
    }
}

/// Per-level numbers in log-domain.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelSummary {
    pub level: u32,
    pub nu: i128,
    pub log2_length: f64,
    /// `log2` of the number of level intervals.
    pub log2_count: f64,
    /// `log2 p_N = 2^{N+1} − ν_N`, children per interval at the next level.
    pub log2_branching: f64,
}

/// The two-sided comparison of `l_N` with `2^{-2^N(1+λ+1/N)}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sandwich {
    pub level: u32,
    pub constant: f64,
    pub log2_reference: f64,
    pub log2_length: f64,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

impl CantorScheme {
    pub fn new(lambda: Ratio<u32>, k: u32) -> Result<Self> {
        if *lambda.numer() > *lambda.denom() {
            return Err(Error::invalid(format!("lambda must lie in [0, 1], got {lambda}")));
        }
        if k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        let (a, b) = (u128::from(*lambda.numer()), u128::from(*lambda.denom()));
        let mut nu = vec![0i128; MAX_SCALE as usize + 1];
        for j in 1..=MAX_SCALE {
            let jj = u128::from(j);
            // floor(2^j (1 + λ + 1/j)) = floor(2^j (j b + j a + b) / (j b))
            let numerator = (jj * (a + b) + b) << j;
            let floor = (numerator / (jj * b)) as i128;
            nu[j as usize] = floor - i128::from(k) + 2;
        }
        let in_window = |j: u32| {
            let v = nu[j as usize];
            (1i128 << j) < v && v < (1i128 << (j + 1))
        };
        if !in_window(MAX_SCALE) {
            return Err(Error::invalid(format!(
                "no level N0 <= {MAX_SCALE} with 2^j < nu_j < 2^(j+1) for all j >= N0 (lambda = {lambda}, k = {k})"
            )));
        }
        let mut n0 = MAX_SCALE;
        while n0 > 1 && in_window(n0 - 1) {
            n0 -= 1;
        }
        if n0 >= MAX_DEPTH {
            return Err(Error::invalid(format!("first admissible level {n0} is beyond the supported depth")));
        }
        let depth = (n0 + 5).clamp(8, MAX_DEPTH);
        Ok(CantorScheme {
            lambda,
            k,
            nu,
            n0,
            depth,
            interval_budget: DEFAULT_INTERVAL_BUDGET,
            levels: RwLock::default(),
        })
    }

    /// Convenience constructor for `λ = numer/denom`.
    pub fn from_fraction(numer: u32, denom: u32, k: u32) -> Result<Self> {
        if denom == 0 {
            return Err(Error::invalid("lambda denominator must be positive"));
        }
        Self::new(Ratio::new(numer, denom), k)
    }

    /// Sets the last scale kept in exact level lengths. Levels up to
    /// `depth` can be enumerated; nesting checks need `level + 1 <= depth`.
    pub fn with_depth(mut self, depth: u32) -> Result<Self> {
        if depth <= self.n0 || depth > MAX_DEPTH {
            return Err(Error::invalid(format!(
                "depth must lie in ({}, {MAX_DEPTH}], got {depth}",
                self.n0
            )));
        }
        self.depth = depth;
        self.levels = RwLock::default();
        Ok(self)
    }

    pub fn with_interval_budget(mut self, budget: usize) -> Self {
        self.interval_budget = budget;
        self
    }

    pub fn lambda(&self) -> Ratio<u32> {
        self.lambda
    }

    pub fn lambda_f64(&self) -> f64 {
        f64::from(*self.lambda.numer()) / f64::from(*self.lambda.denom())
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n0(&self) -> u32 {
        self.n0
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn interval_budget(&self) -> usize {
        self.interval_budget
    }

    /// Critical exponent `(1 − λ)/(1 + λ)`, the Hausdorff dimension of `S_λ^k`.
    pub fn dimension(&self) -> f64 {
        let lambda = self.lambda_f64();
        (1.0 - lambda) / (1.0 + lambda)
    }

    /// `ν_j = [2^j(1+λ+1/j) − k + 1] + 1` for `1 <= j <= 64`.
    pub fn nu(&self, j: u32) -> Result<i128> {
        if j == 0 || j > MAX_SCALE {
            return Err(Error::invalid(format!("nu_j is tabulated for 1 <= j <= {MAX_SCALE}, got {j}")));
        }
        Ok(self.nu[j as usize])
    }

    fn nu_at(&self, j: u32) -> i128 {
        self.nu[j as usize]
    }

    /// Whether digit `i` is forced to zero, i.e. `i ∈ K_λ^k`.
    pub fn is_forced(&self, i: u128) -> bool {
        if i < 2 {
            return false;
        }
        let top = i.ilog2();
        // Block j lies inside [2^j, 3·2^j), so only the two scales below
        // and at log2(i) can reach i.
        [top, top.saturating_sub(1)].into_iter().filter(|&j| (1..=MAX_SCALE).contains(&j)).any(|j| {
            let lo = 1u128 << j;
            lo <= i && (i as i128) < self.nu_at(j)
        })
    }

    /// Number of forced digits in `[0, limit)`.
    pub fn forced_count_below(&self, limit: u128) -> u128 {
        let mut count = 0u128;
        let mut covered_to = 0u128; // forced digits below this are counted
        for j in 1..=MAX_SCALE {
            let lo = 1u128 << j;
            if lo >= limit {
                break;
            }
            let end = self.nu_at(j).max(0) as u128; // exclusive
            let hi = end.min(limit);
            let from = lo.max(covered_to);
            if hi > from {
                count += hi - from;
            }
            covered_to = covered_to.max(hi);
        }
        count
    }

    /// Free digit positions in `[from, to)`.
    pub fn free_digits(&self, from: u128, to: u128) -> Vec<u128> {
        (from..to).filter(|&i| !self.is_forced(i)).collect()
    }

    fn check_level(&self, level: u32, max: u32) -> Result<()> {
        if level < self.n0 || level > max {
            return Err(Error::invalid(format!(
                "level must lie in [{}, {max}] for this scheme, got {level}",
                self.n0
            )));
        }
        Ok(())
    }

    /// `log2` of the number of level-`N` intervals (free digits below `2^N`).
    pub fn log2_count(&self, level: u32) -> f64 {
        let limit = 1u128 << level;
        (limit - self.forced_count_below(limit)) as f64
    }

    /// `log2 p_N = 2^{N+1} − ν_N`.
    pub fn log2_branching(&self, level: u32) -> Result<f64> {
        self.check_level(level, MAX_SCALE - 1)?;
        Ok(((1i128 << (level + 1)) - self.nu_at(level)) as f64)
    }

    /// `log2 l_N` from the full series; terms beyond `j = 64` are below
    /// `2^{ν_N − 2^{64}}` relative and cannot affect a double.
    pub fn log2_level_length(&self, level: u32) -> Result<f64> {
        self.check_level(level, MAX_SCALE - 2)?;
        let base = self.nu_at(level);
        let mut relative = 0.0;
        for j in (level..=MAX_SCALE).rev() {
            if j > level {
                relative += exp2_i128(base - self.nu_at(j));
            }
            relative -= exp2_i128(base - (1i128 << (j + 1)));
        }
        Ok(-(base as f64) + relative.ln_1p() / LN_2)
    }

    /// `log2` of the offset span `2^{-ν_N} − 2^{-2^{N+1}}` between the first
    /// and last child of a level-`N` interval.
    pub fn log2_child_span(&self, level: u32) -> Result<f64> {
        self.check_level(level, MAX_SCALE - 1)?;
        let base = self.nu_at(level);
        Ok(-(base as f64) + (-exp2_i128(base - (1i128 << (level + 1)))).ln_1p() / LN_2)
    }

    /// Level length truncated after scale `depth`, exactly.
    pub fn level_length(&self, level: u32) -> Result<Dyadic> {
        self.check_level(level, self.depth)?;
        let bits = self.endpoint_bits();
        let mut numerator = BigUint::default();
        for j in level..=self.depth {
            numerator += BigUint::one() << (bits - self.nu_at(j) as u32);
            numerator -= BigUint::one() << (bits - (1u32 << (j + 1)));
        }
        Ok(Dyadic::new(numerator, bits))
    }

    /// Denominator exponent of every exact endpoint.
    pub(crate) fn endpoint_bits(&self) -> u32 {
        1u32 << (self.depth + 1)
    }

    /// Exact number of level intervals, if it fits the budget.
    pub fn interval_count(&self, level: u32) -> Result<usize> {
        let free = self.log2_count(level) as u32;
        let count = 1usize.checked_shl(free).filter(|&c| free < usize::BITS && c <= self.interval_budget);
        count.ok_or_else(|| Error::Budget {
            what: "level intervals",
            requested: format!("2^{free}"),
            budget: self.interval_budget.to_string(),
        })
    }

    /// The level-`N` cover `E_N` as an exact interval union.
    pub fn level_intervals(&self, level: u32) -> Result<Shared<IntervalUnion>> {
        self.check_level(level, self.depth)?;
        if let Some(found) = self.levels.read().expect("level cache lock").get(&level) {
            return Ok(found.clone());
        }
        let count = self.interval_count(level)?;
        let bits = self.endpoint_bits();
        let mut starts = Vec::with_capacity(count);
        starts.push(BigUint::default());
        for digit in self.free_digits(0, 1u128 << level) {
            let weight = BigUint::one() << (bits - 1 - digit as u32);
            let extended: Vec<BigUint> = starts.iter().map(|s| s + &weight).collect();
            starts.extend(extended);
        }
        let length = self.level_length(level)?.numerator_at(bits);
        let union = IntervalUnion::from_raw(bits, starts.into_iter().map(|s| (s, length.clone())).collect());
        let union = Shared::new(union);
        // Concurrent fills compute identical values; keep whichever landed first.
        let mut cache = self.levels.write().expect("level cache lock");
        Ok(cache.entry(level).or_insert(union).clone())
    }

    pub fn level_summary(&self, level: u32) -> Result<LevelSummary> {
        Ok(LevelSummary {
            level,
            nu: self.nu(level)?,
            log2_length: self.log2_level_length(level)?,
            log2_count: self.log2_count(level),
            log2_branching: self.log2_branching(level)?,
        })
    }

    /// Checks `(1/C) 2^{-2^N(1+λ+1/N)} <= l_N <= 3C 2^{-2^N(1+λ+1/N)}` with
    /// `C = max(2^{k−1}/3, 1/(2^{k−2}(1 − s_N)))`, where
    /// `s_N = Σ_{j>=N} 2^{ν_N − 2^{j+1}}` bounds the subtracted part.
    pub fn sandwich(&self, level: u32) -> Result<Sandwich> {
        let log2_length = self.log2_level_length(level)?;
        let base = self.nu_at(level);
        let s: f64 = (level..=MAX_SCALE).map(|j| exp2_i128(base - (1i128 << (j + 1)))).sum();
        let k = f64::from(self.k);
        let constant = (2f64.powf(k - 1.0) / 3.0).max(1.0 / (2f64.powf(k - 2.0) * (1.0 - s)));
        let n = f64::from(level);
        let log2_reference = -(2f64.powi(level as i32)) * (1.0 + self.lambda_f64() + 1.0 / n);
        let slack = 1e-9 * log2_length.abs();
        Ok(Sandwich {
            level,
            constant,
            log2_reference,
            log2_length,
            lower_holds: log2_length >= log2_reference - constant.log2() - slack,
            upper_holds: log2_length <= log2_reference + (3.0 * constant).log2() + slack,
        })
    }
}

/// `2^e` for an integer exponent, zero on underflow.
pub(crate) fn exp2_i128(e: i128) -> f64 {
    if e < -1100 {
        0.0
    } else {
        (e as f64).exp2()
    }
}
