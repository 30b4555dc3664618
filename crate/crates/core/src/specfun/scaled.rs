//! Floating-point values with an out-of-band binary exponent.
//!
//! A [`ScaledValue`] stores `mantissa * 2^exponent` with the mantissa
//! normalised into `[1, 2)` (or its negative mirror). The exponent is a
//! 64-bit integer, so products of thousands of probabilities or Hermite
//! values far outside the `f64` range stay representable.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg};

/// `mantissa * 2^exponent`, normalised.
#[derive(Clone, Copy, PartialEq)]
pub struct ScaledValue {
    mantissa: f64,
    exponent: i64,
}

const EXP_MASK: u64 = 0x7ff0_0000_0000_0000;
const ONE_EXP_BITS: u64 = 0x3ff0_0000_0000_0000;

/// `2^k` for `k` in the normal range `[-1022, 1023]`.
#[inline]
fn pow2(k: i64) -> f64 {
    debug_assert!((-1022..=1023).contains(&k));
    f64::from_bits(((k + 1023) as u64) << 52)
}

/// Splits a finite nonzero `x` into `(m, e)` with `|m|` in `[1, 2)`.
#[inline]
fn split(x: f64) -> (f64, i64) {
    let bits = x.to_bits();
    let biased = ((bits & EXP_MASK) >> 52) as i64;
    if biased == 0 {
        // subnormal: lift into the normal range first
        let (m, e) = split(x * pow2(64));
        return (m, e - 64);
    }
    let m = f64::from_bits((bits & !EXP_MASK) | ONE_EXP_BITS);
    (m, biased - 1023)
}

/// `m * 2^e` with a single rounding, saturating to `±inf` / `±0`.
#[inline]
pub(crate) fn ldexp(m: f64, e: i64) -> f64 {
    if m == 0.0 || !m.is_finite() {
        return m;
    }
    if e > 1023 {
        // m may be below 1, so try to absorb part of the exponent first
        if e > 2100 {
            return m.signum() * f64::INFINITY;
        }
        return ldexp(m * pow2(1023), e - 1023);
    }
    if e >= -1022 {
        return m * pow2(e);
    }
    if e < -1200 {
        return ldexp(m * pow2(-1022), e + 1022);
    }
    // lift exactly, then round once into the subnormal range
    (m * pow2(e + 600)) * pow2(-600)
}

impl ScaledValue {
    pub const ZERO: ScaledValue = ScaledValue {
        mantissa: 0.0,
        exponent: 0,
    };
    pub const ONE: ScaledValue = ScaledValue {
        mantissa: 1.0,
        exponent: 0,
    };

    /// Builds `mantissa * 2^exponent`, renormalising as needed.
    ///
    /// Panics if `mantissa` is not finite.
    pub fn new(mantissa: f64, exponent: i64) -> Self {
        assert!(mantissa.is_finite(), "ScaledValue mantissa must be finite");
        if mantissa == 0.0 {
            return Self::ZERO;
        }
        let (m, e) = split(mantissa);
        ScaledValue {
            mantissa: m,
            exponent: exponent + e,
        }
    }

    /// Exact encoding of a finite double.
    pub fn from_f64(x: f64) -> Self {
        Self::new(x, 0)
    }

    /// `exp(log_value)` for any finite `log_value`, never overflowing.
    pub fn from_ln(log_value: f64) -> Self {
        assert!(log_value.is_finite(), "from_ln needs a finite argument");
        let log2 = log_value / std::f64::consts::LN_2;
        let e = log2.floor();
        // the fractional part carries the full relative precision available
        let frac = log_value - e * std::f64::consts::LN_2;
        Self::new(frac.exp(), e as i64)
    }

    pub fn mantissa(self) -> f64 {
        self.mantissa
    }

    pub fn exponent(self) -> i64 {
        self.exponent
    }

    pub fn is_zero(self) -> bool {
        self.mantissa == 0.0
    }

    pub fn is_sign_negative(self) -> bool {
        self.mantissa < 0.0
    }

    /// Nearest double; saturates to `±inf` or rounds to `±0` outside range.
    pub fn to_f64(self) -> f64 {
        ldexp(self.mantissa, self.exponent)
    }

    /// Natural logarithm of the absolute value (`-inf` for zero).
    pub fn ln_abs(self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.mantissa.abs().ln() + self.exponent as f64 * std::f64::consts::LN_2
    }

    /// Base-2 logarithm of the absolute value (`-inf` for zero).
    pub fn log2_abs(self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.mantissa.abs().log2() + self.exponent as f64
    }

    /// Multiplies by `2^k` exactly.
    pub fn scale_pow2(self, k: i64) -> Self {
        if self.is_zero() {
            return self;
        }
        ScaledValue {
            mantissa: self.mantissa,
            exponent: self.exponent + k,
        }
    }

    pub fn abs(self) -> Self {
        ScaledValue {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    /// `self / other`; panics on division by zero.
    pub fn div(self, other: ScaledValue) -> Self {
        assert!(!other.is_zero(), "ScaledValue division by zero");
        if self.is_zero() {
            return Self::ZERO;
        }
        Self::new(self.mantissa / other.mantissa, self.exponent - other.exponent)
    }

    /// Compares absolute values.
    pub fn cmp_abs(self, other: ScaledValue) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (false, false) => self
                .exponent
                .cmp(&other.exponent)
                .then_with(|| self.mantissa.abs().total_cmp(&other.mantissa.abs())),
        }
    }
}

impl Default for ScaledValue {
    fn default() -> Self {
        Self::ZERO
    }
}

impl Mul for ScaledValue {
    type Output = ScaledValue;

    fn mul(self, rhs: ScaledValue) -> ScaledValue {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        Self::new(self.mantissa * rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl Mul<f64> for ScaledValue {
    type Output = ScaledValue;

    fn mul(self, rhs: f64) -> ScaledValue {
        self * ScaledValue::from_f64(rhs)
    }
}

impl Add for ScaledValue {
    type Output = ScaledValue;

    fn add(self, rhs: ScaledValue) -> ScaledValue {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.exponent >= rhs.exponent {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let shift = big.exponent - small.exponent;
        if shift > 60 {
            return big;
        }
        Self::new(big.mantissa + small.mantissa * pow2(-shift), big.exponent)
    }
}

impl Neg for ScaledValue {
    type Output = ScaledValue;

    fn neg(self) -> ScaledValue {
        ScaledValue {
            mantissa: -self.mantissa,
            exponent: self.exponent,
        }
    }
}

impl fmt::Debug for ScaledValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}

impl fmt::Display for ScaledValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // decimal mantissa/exponent without passing through f64 range
        let log10 = self.log2_abs() * std::f64::consts::LOG10_2;
        let e10 = log10.floor();
        let m10 = 10f64.powf(log10 - e10) * self.mantissa.signum();
        write!(f, "{m10:.16}e{e10}")
    }
}
