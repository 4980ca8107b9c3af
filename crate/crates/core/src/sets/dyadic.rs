use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::{Error, Result};

/// Non-negative dyadic rational `numerator / 2^bits` in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numerator: BigUint,
    bits: u32,
}

impl Dyadic {
    pub fn new(numerator: BigUint, bits: u32) -> Self {
        if numerator.is_zero() {
            return Dyadic { numerator, bits: 0 };
        }
        let shift = numerator.trailing_zeros().unwrap_or(0).min(u64::from(bits)) as u32;
        Dyadic { numerator: numerator >> shift, bits: bits - shift }
    }

    pub fn zero() -> Self {
        Dyadic { numerator: BigUint::zero(), bits: 0 }
    }

    pub fn one() -> Self {
        Dyadic { numerator: BigUint::from(1u8), bits: 0 }
    }

    /// `2^{-exponent}`.
    pub fn pow2_neg(exponent: u32) -> Self {
        Dyadic { numerator: BigUint::from(1u8), bits: exponent }
    }

    /// Exact conversion of a finite non-negative double.
    pub fn from_f64(x: f64) -> Result<Self> {
        if !x.is_finite() || x < 0.0 {
            return Err(Error::invalid(format!("expected a finite non-negative number, got {x}")));
        }
        if x == 0.0 {
            return Ok(Self::zero());
        }
        let bits = x.to_bits();
        let exponent = ((bits >> 52) & 0x7ff) as i32;
        let fraction = bits & ((1u64 << 52) - 1);
        let (mantissa, exp2) = if exponent == 0 {
            (fraction, -1074)
        } else {
            (fraction | (1u64 << 52), exponent - 1075)
        };
        let mantissa = BigUint::from(mantissa);
        Ok(if exp2 >= 0 {
            Self::new(mantissa << exp2 as u32, 0)
        } else {
            Self::new(mantissa, (-exp2) as u32)
        })
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    /// Base-two logarithm of the denominator.
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Numerator over `2^bits`; `bits` must be at least [`Dyadic::bits`].
    pub fn numerator_at(&self, bits: u32) -> BigUint {
        debug_assert!(bits >= self.bits);
        &self.numerator << (bits - self.bits)
    }

    /// Nearest double; underflows to zero for very small values.
    pub fn to_f64(&self) -> f64 {
        let (mantissa, exponent) = self.split();
        scale_by_pow2(mantissa, exponent)
    }

    /// `log2` of the value; `-∞` for zero.
    pub fn log2(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (mantissa, exponent) = self.split();
        mantissa.log2() + exponent as f64
    }

    /// Value as `mantissa · 2^exponent` with the leading 64 bits kept.
    fn split(&self) -> (f64, i64) {
        let len = self.numerator.bits();
        let drop = len.saturating_sub(64);
        let top = (&self.numerator >> drop).to_f64().unwrap_or(0.0);
        (top, drop as i64 - i64::from(self.bits))
    }

    pub fn add(&self, other: &Self) -> Self {
        let bits = self.bits.max(other.bits);
        Self::new(self.numerator_at(bits) + other.numerator_at(bits), bits)
    }

    /// `self − other`, or `None` when the difference would be negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let bits = self.bits.max(other.bits);
        let (a, b) = (self.numerator_at(bits), other.numerator_at(bits));
        (a >= b).then(|| Self::new(a - b, bits))
    }

    pub fn mul_u64(&self, factor: u64) -> Self {
        Self::new(&self.numerator * factor, self.bits)
    }
}

/// `x · 2^exponent`, applied in steps so no intermediate scale factor
/// underflows or overflows on its own.
fn scale_by_pow2(mut x: f64, mut exponent: i64) -> f64 {
    while exponent < -1000 && x != 0.0 {
        x *= 2f64.powi(-1000);
        exponent += 1000;
    }
    while exponent > 1000 && x.is_finite() {
        x *= 2f64.powi(1000);
        exponent -= 1000;
    }
    x * 2f64.powi(exponent as i32)
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let bits = self.bits.max(other.bits);
        self.numerator_at(bits).cmp(&other.numerator_at(bits))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.numerator, self.bits)
    }
}

/// Serialized as the exact numerator (decimal string), the denominator
/// exponent and a floating approximation.
impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Dyadic", 3)?;
        s.serialize_field("numerator", &self.numerator.to_str_radix(10))?;
        s.serialize_field("denominator_log2", &self.bits)?;
        s.serialize_field("approx", &self.to_f64())?;
        s.end()
    }
}
