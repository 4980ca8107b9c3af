use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::dyadic::Dyadic;
use crate::{Error, Result};

/// Closed arc `[start, start + length]` on the unit circle `R/Z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Arc {
    pub start: Dyadic,
    pub length: Dyadic,
}

impl Arc {
    pub fn new(start: Dyadic, length: Dyadic) -> Result<Self> {
        if start >= Dyadic::one() {
            return Err(Error::invalid(format!("arc start {start} is not in [0, 1)")));
        }
        if length.is_zero() || length > Dyadic::one() {
            return Err(Error::invalid(format!("arc length {length} is not in (0, 1]")));
        }
        Ok(Arc { start, length })
    }

    pub fn from_f64(start: f64, length: f64) -> Result<Self> {
        Self::new(Dyadic::from_f64(start)?, Dyadic::from_f64(length)?)
    }
}

/// Default cap on the number of arc pairs a Minkowski sum may visit.
pub const DEFAULT_PAIR_BUDGET: usize = 1 << 22;

/// Finite union of closed arcs with exact dyadic endpoints.
///
/// Arcs are stored over a common denominator `2^bits` as
/// `(start, length)` numerators, sorted by start, pairwise disjoint and
/// non-touching. At most one arc (the last) wraps through `0`. The whole
/// circle is the single arc `(0, 2^bits)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalUnion {
    bits: u32,
    arcs: Vec<(BigUint, BigUint)>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion { bits: 0, arcs: Vec::new() }
    }

    pub fn full() -> Self {
        IntervalUnion { bits: 0, arcs: vec![(BigUint::zero(), BigUint::one())] }
    }

    pub fn new(arcs: Vec<Arc>) -> Self {
        let bits = arcs.iter().map(|a| a.start.bits().max(a.length.bits())).max().unwrap_or(0);
        let raw = arcs.iter().map(|a| (a.start.numerator_at(bits), a.length.numerator_at(bits))).collect();
        Self::from_raw(bits, raw)
    }

    /// Union of arcs given as `(start, length)` doubles, converted exactly.
    pub fn from_f64_arcs(arcs: &[(f64, f64)]) -> Result<Self> {
        let arcs = arcs.iter().map(|&(s, l)| Arc::from_f64(s, l)).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(arcs))
    }

    /// Normalizes raw `(start, length)` numerators over `2^bits`. Starts
    /// are reduced mod 1 and lengths are capped at the full circle.
    pub(crate) fn from_raw(bits: u32, raw: Vec<(BigUint, BigUint)>) -> Self {
        let one = BigUint::one() << bits;
        let mut pieces: Vec<(BigUint, BigUint)> = Vec::with_capacity(raw.len() + 1);
        for (start, length) in raw {
            if length.is_zero() {
                continue;
            }
            if length >= one {
                return Self::full();
            }
            let start = start % &one;
            let end = &start + &length;
            // An arc ending exactly at 1 also contains the point 0; the
            // degenerate piece [0, 0] lets it merge with arcs starting there.
            if end >= one {
                pieces.push((BigUint::zero(), end - &one));
                pieces.push((start, one.clone()));
            } else {
                pieces.push((start, end));
            }
        }
        pieces.sort_unstable();
        let mut merged: Vec<(BigUint, BigUint)> = Vec::with_capacity(pieces.len());
        for (start, end) in pieces {
            match merged.last_mut() {
                Some(last) if start <= last.1 => {
                    if end > last.1 {
                        last.1 = end;
                    }
                }
                _ => merged.push((start, end)),
            }
        }
        if merged.len() == 1 && merged[0].0.is_zero() && merged[0].1 == one {
            return Self::full();
        }
        let wraps = merged.len() >= 2
            && merged[0].0.is_zero()
            && merged.last().is_some_and(|last| last.1 == one);
        let mut arcs: Vec<(BigUint, BigUint)> = Vec::with_capacity(merged.len());
        let mut head_length = BigUint::zero();
        for (i, (start, end)) in merged.into_iter().enumerate() {
            if wraps && i == 0 {
                head_length = end;
                continue;
            }
            let length = end - &start;
            arcs.push((start, length));
        }
        if wraps {
            if let Some(last) = arcs.last_mut() {
                last.1 += head_length;
            }
        }
        let mut out = IntervalUnion { bits, arcs };
        out.reduce_bits();
        out
    }

    /// Drops common factors of two from every numerator.
    fn reduce_bits(&mut self) {
        let shift = self
            .arcs
            .iter()
            .flat_map(|(s, l)| [s, l])
            .filter(|x| !x.is_zero())
            .map(|x| x.trailing_zeros().unwrap_or(0))
            .min()
            .unwrap_or(u64::from(self.bits))
            .min(u64::from(self.bits));
        if shift > 0 {
            for (s, l) in &mut self.arcs {
                *s >>= shift;
                *l >>= shift;
            }
            self.bits -= shift as u32;
        }
    }

    fn rescaled(&self, bits: u32) -> Vec<(BigUint, BigUint)> {
        let shift = bits - self.bits;
        self.arcs.iter().map(|(s, l)| (s << shift, l << shift)).collect()
    }

    /// Common denominator exponent of the stored endpoints.
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.arcs.len() == 1 && self.arcs[0].1 == (BigUint::one() << self.bits)
    }

    pub fn arcs(&self) -> Vec<Arc> {
        self.arcs
            .iter()
            .map(|(s, l)| Arc {
                start: Dyadic::new(s.clone(), self.bits),
                length: Dyadic::new(l.clone(), self.bits),
            })
            .collect()
    }

    /// `(start, length)` pairs rounded to doubles.
    pub fn to_f64_arcs(&self) -> Vec<(f64, f64)> {
        self.arcs().iter().map(|a| (a.start.to_f64(), a.length.to_f64())).collect()
    }

    pub(crate) fn raw_arcs(&self) -> &[(BigUint, BigUint)] {
        &self.arcs
    }

    pub fn total_length(&self) -> Dyadic {
        let sum = self.arcs.iter().fold(BigUint::zero(), |acc, (_, l)| acc + l);
        Dyadic::new(sum, self.bits)
    }

    /// Non-wrapping closed pieces `[a, b] ⊂ [0, 2^bits]`, sorted.
    fn linear_pieces(&self, bits: u32) -> Vec<(BigUint, BigUint)> {
        let one = BigUint::one() << bits;
        let mut pieces = Vec::with_capacity(self.arcs.len() + 1);
        for (start, length) in self.rescaled(bits) {
            let end = &start + &length;
            if end >= one {
                pieces.push((BigUint::zero(), end - &one));
                pieces.push((start, one.clone()));
            } else {
                pieces.push((start, end));
            }
        }
        pieces.sort_unstable();
        pieces
    }

    pub fn contains_point(&self, x: &Dyadic) -> bool {
        let x = Dyadic::new(x.numerator() % (BigUint::one() << x.bits()), x.bits());
        let bits = self.bits.max(x.bits());
        let point = x.numerator_at(bits);
        let pieces = self.linear_pieces(bits);
        let idx = pieces.partition_point(|(a, _)| *a <= point);
        idx > 0 && point <= pieces[idx - 1].1
    }

    /// Whether `other ⊂ self`.
    pub fn contains(&self, other: &IntervalUnion) -> bool {
        if other.is_empty() || self.is_full() {
            return true;
        }
        let bits = self.bits.max(other.bits);
        let outer = self.linear_pieces(bits);
        other.linear_pieces(bits).iter().all(|(a, b)| {
            let idx = outer.partition_point(|(s, _)| s <= a);
            idx > 0 && *b <= outer[idx - 1].1
        })
    }

    /// Arcs of the complement, i.e. the gaps between consecutive arcs,
    /// listed by start position. Their endpoints belong to `self`.
    pub fn gaps(&self) -> Result<Vec<Arc>> {
        if self.is_full() {
            return Err(Error::FullCircle);
        }
        if self.is_empty() {
            return Err(Error::invalid("the empty set has no gap structure"));
        }
        let one = BigUint::one() << self.bits;
        let count = self.arcs.len();
        let mut gaps = Vec::with_capacity(count);
        for i in 0..count {
            let (start, length) = &self.arcs[i];
            let end = (start + length) % &one;
            let next_start = &self.arcs[(i + 1) % count].0;
            let gap = if *next_start >= end { next_start - &end } else { next_start + &one - &end };
            if !gap.is_zero() {
                gaps.push(Arc {
                    start: Dyadic::new(end, self.bits),
                    length: Dyadic::new(gap, self.bits),
                });
            }
        }
        gaps.sort_by(|a, b| a.start.cmp(&b.start));
        Ok(gaps)
    }
}

/// Circular sumset `A + B`.
pub fn minkowski_sum(a: &IntervalUnion, b: &IntervalUnion) -> Result<IntervalUnion> {
    minkowski_sum_with_budget(a, b, DEFAULT_PAIR_BUDGET)
}

pub fn minkowski_sum_with_budget(
    a: &IntervalUnion,
    b: &IntervalUnion,
    pair_budget: usize,
) -> Result<IntervalUnion> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid("Minkowski sums need nonempty operands"));
    }
    let pairs = a.len().saturating_mul(b.len());
    if pairs > pair_budget {
        return Err(Error::Budget {
            what: "Minkowski sum arc pairs",
            requested: pairs.to_string(),
            budget: pair_budget.to_string(),
        });
    }
    let bits = a.bits.max(b.bits);
    let (lhs, rhs) = (a.rescaled(bits), b.rescaled(bits));
    let mut raw = Vec::with_capacity(pairs);
    for (sa, la) in &lhs {
        for (sb, lb) in &rhs {
            raw.push((sa + sb, la + lb));
        }
    }
    Ok(IntervalUnion::from_raw(bits, raw))
}

/// `k × A = A + ⋯ + A` (`k` summands).
pub fn k_fold_sum(a: &IntervalUnion, k: u32) -> Result<IntervalUnion> {
    if k == 0 {
        return Err(Error::invalid("k-fold sums need k >= 1"));
    }
    let mut acc = a.clone();
    for _ in 1..k {
        acc = minkowski_sum(&acc, a)?;
    }
    Ok(acc)
}

impl Serialize for IntervalUnion {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("IntervalUnion", 3)?;
        s.serialize_field("arc_count", &self.len())?;
        s.serialize_field("total_length", &self.total_length())?;
        s.serialize_field("arcs", &self.arcs())?;
        s.end()
    }
}
