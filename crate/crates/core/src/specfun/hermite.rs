//! Variance-`tau` Hermite polynomials.
//!
//! `C_k` is the monic polynomial family with
//! `C_{k+1}(x) = x C_k(x) - tau k C_{k-1}(x)`, `C_0 = 1`, `C_1 = x`. For
//! `tau > 0` it equals `(tau/2)^{k/2} H_k(x / sqrt(2 tau))`; at `tau = 0` it
//! is `x^k`, and negative `tau` is regular. The degree-normalised form
//! `C_k / sqrt(k!)` is evaluated with a tracked binary exponent so nothing
//! overflows for degrees in the tens of thousands.

use super::scaled::{ldexp, ScaledValue};
use crate::error::{Error, Result};

/// Largest polynomial degree accepted by the evaluators.
pub const MAX_DEGREE: usize = 20_000;

/// Rescaling threshold, as a power of two, for tracked recurrences.
const RESCALE_BITS: i64 = 400;

fn check_degree(k: usize) -> Result<()> {
    if k > MAX_DEGREE {
        return Err(Error::Config(format!(
            "Hermite degree {k} exceeds the configured maximum {MAX_DEGREE}"
        )));
    }
    Ok(())
}

/// `C_k(x)` via the monic three-term recurrence.
pub fn scaled_hermite(k: usize, tau: f64, x: f64) -> Result<f64> {
    check_degree(k)?;
    if k == 0 {
        return Ok(1.0);
    }
    let (mut prev, mut cur) = (1.0, x);
    for i in 1..k {
        let next = x * cur - tau * i as f64 * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Iterator over `C_k(x) / sqrt(k!)` for `k = 0, 1, 2, ...`.
///
/// Values are yielded as [`ScaledValue`]s; an optional constant log-factor
/// (for instance a Gaussian weight) is folded into every term.
#[derive(Clone, Debug)]
pub struct NormalizedHermite {
    tau: f64,
    x: f64,
    k: usize,
    prev: f64,
    cur: f64,
    exponent: i64,
    factor: ScaledValue,
}

impl NormalizedHermite {
    pub fn new(tau: f64, x: f64) -> Self {
        Self::with_factor(tau, x, ScaledValue::ONE)
    }

    /// Every yielded value is multiplied by `factor`.
    pub fn with_factor(tau: f64, x: f64, factor: ScaledValue) -> Self {
        NormalizedHermite {
            tau,
            x,
            k: 0,
            prev: 0.0,
            cur: 1.0,
            exponent: 0,
            factor,
        }
    }

    /// Gaussian weight `exp(-x^2 / (2 (1 + tau)))` folded in.
    pub fn weighted(tau: f64, x: f64) -> Self {
        Self::with_factor(tau, x, weight(tau, x))
    }

    /// Current unweighted value as `(significand, exponent)`; the
    /// significand is not normalised.
    #[inline]
    pub(crate) fn parts(&self) -> (f64, i64) {
        (self.cur, self.exponent)
    }

    #[inline]
    fn advance(&mut self) {
        let k = self.k as f64;
        let next = (self.x * self.cur - self.tau * k.sqrt() * self.prev) / (k + 1.0).sqrt();
        self.prev = self.cur;
        self.cur = next;
        self.k += 1;
        let mag = self.cur.abs().max(self.prev.abs());
        if mag > ldexp(1.0, RESCALE_BITS) {
            self.rescale(-RESCALE_BITS);
        } else if mag != 0.0 && mag < ldexp(1.0, -RESCALE_BITS) {
            self.rescale(RESCALE_BITS);
        }
    }

    #[inline]
    fn rescale(&mut self, bits: i64) {
        let f = ldexp(1.0, bits);
        self.cur *= f;
        self.prev *= f;
        self.exponent -= bits;
    }

    /// Advances without producing a value.
    #[inline]
    pub(crate) fn step(&mut self) {
        self.advance();
    }

    pub(crate) fn degree(&self) -> usize {
        self.k
    }
}

impl Iterator for NormalizedHermite {
    type Item = ScaledValue;

    fn next(&mut self) -> Option<ScaledValue> {
        let (m, e) = self.parts();
        let value = ScaledValue::new(m, e) * self.factor;
        self.advance();
        Some(value)
    }
}

/// `exp(-x^2 / (2 (1 + tau)))` without underflow.
pub fn weight(tau: f64, x: f64) -> ScaledValue {
    ScaledValue::from_ln(-x * x / (2.0 * (1.0 + tau)))
}

/// `exp(-x^2/(2(1+tau))) C_k(x) / sqrt(k!)` as an exponent-tracked value.
pub fn normalized_hermite_weighted(k: usize, tau: f64, x: f64) -> Result<ScaledValue> {
    check_degree(k)?;
    let mut it = NormalizedHermite::new(tau, x);
    for _ in 0..k {
        it.advance();
    }
    let (m, e) = it.parts();
    Ok(ScaledValue::new(m, e) * weight(tau, x))
}

/// Partial sum `sum_{j<terms} (t/2)^{2j} H_{2j}(x) H_{2j}(y) / (2j)!` of the
/// even part of the Mehler kernel, for `t` in `(0, 1)`.
pub fn mehler_even_partial(t: f64, x: f64, y: f64, terms: usize) -> f64 {
    // (t/2)^{2j} H_{2j}(x) H_{2j}(y) / (2j)! = D_{2j}(X) D_{2j}(Y), X = sqrt(2t) x
    let s = (2.0 * t).sqrt();
    let mut hx = NormalizedHermite::new(t, s * x);
    let mut hy = NormalizedHermite::new(t, s * y);
    let mut acc = ScaledValue::ZERO;
    for _ in 0..terms {
        let a = hx.next().expect("infinite");
        let b = hy.next().expect("infinite");
        acc = acc + a * b;
        hx.advance();
        hy.advance();
    }
    acc.to_f64()
}

/// Closed form of the infinite even Mehler sum.
pub fn mehler_even_closed(t: f64, x: f64, y: f64) -> f64 {
    let d = 1.0 - t * t;
    (-t * t * (x * x + y * y) / d).exp() * (2.0 * t * x * y / d).cosh() / d.sqrt()
}
