//! Exact distribution of the number of real eigenvalues at finite `N`.
//!
//! `sum_k p_{N,2k} z^k = prod_i ((1 - lambda_i) + lambda_i z)` over the
//! eigenvalues of the generating matrix; the coefficients are extracted by
//! convolving the linear factors one at a time. Every addend is
//! nonnegative, so nothing cancels and tiny probabilities survive in
//! exponent-tracked form.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::{CompensatedSum, ScaledValue};
use crate::spectrum::Spectrum;

/// Eigenvalues may stray outside `[0, 1]` by this much before the input is
/// rejected; within the slack they are clamped.
pub const LAMBDA_SLACK: f64 = 1e-12;

/// Tolerance of the normalisation check on the computed distribution.
pub const SUM_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct RealCountDistribution {
    /// Matrix dimension `N = 2n`.
    pub dim: usize,
    pub tau: f64,
    /// `probs[k] = p_{N,2k}`.
    pub probs: Vec<ScaledValue>,
    pub log_p_zero: f64,
}

impl RealCountDistribution {
    pub fn n(&self) -> usize {
        self.dim / 2
    }

    /// `p_{N,2k}` as a double (may underflow to zero).
    pub fn prob(&self, k: usize) -> f64 {
        self.probs[k].to_f64()
    }

    pub fn probs_f64(&self) -> Vec<f64> {
        self.probs.iter().map(|p| p.to_f64()).collect()
    }

    /// `ln p_{N,2k}` (`-inf` for an exact zero).
    pub fn log_prob(&self, k: usize) -> f64 {
        self.probs[k].ln_abs()
    }

    pub fn total(&self) -> f64 {
        let mut acc = CompensatedSum::new();
        for p in &self.probs {
            acc.add(p.to_f64());
        }
        acc.value()
    }
}

/// Eigenvalues clamped into `[0, 1]`, rejecting anything beyond the slack.
pub fn checked_lambdas(s: &Spectrum) -> Result<Vec<f64>> {
    s.lambdas
        .iter()
        .map(|&l| {
            if !(-LAMBDA_SLACK..=1.0 + LAMBDA_SLACK).contains(&l) {
                Err(Error::Invariant(format!(
                    "eigenvalue {l:e} lies outside [0, 1] beyond the slack {LAMBDA_SLACK:e}"
                )))
            } else {
                Ok(l.clamp(0.0, 1.0))
            }
        })
        .collect()
}

pub fn distribution(s: &Spectrum) -> Result<RealCountDistribution> {
    let lambdas = checked_lambdas(s)?;
    let n = lambdas.len();
    let mut coeffs = vec![ScaledValue::ZERO; n + 1];
    coeffs[0] = ScaledValue::ONE;
    for (i, &l) in lambdas.iter().enumerate() {
        let keep = ScaledValue::from_f64(1.0 - l);
        let take = ScaledValue::from_f64(l);
        // degree grows to i + 1; update from the top down in place
        coeffs[i + 1] = coeffs[i] * take;
        for k in (1..=i).rev() {
            coeffs[k] = coeffs[k] * keep + coeffs[k - 1] * take;
        }
        coeffs[0] = coeffs[0] * keep;
    }
    let log_p_zero = log_p_zero(&lambdas);
    let dist = RealCountDistribution {
        dim: 2 * n,
        tau: s.tau,
        probs: coeffs,
        log_p_zero,
    };
    let total = dist.total();
    if (total - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::Invariant(format!(
            "probabilities sum to {total}, not 1 within {SUM_TOLERANCE:e}"
        )));
    }
    Ok(dist)
}

fn log_p_zero(lambdas: &[f64]) -> f64 {
    let mut acc = CompensatedSum::new();
    for &l in lambdas.iter().rev() {
        acc.add((-l).ln_1p());
    }
    acc.value()
}

/// Result of truncating the log-series at order `K`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TruncatedLog {
    pub k: usize,
    /// `-sum_{m<=K} Tr(M^m) / m`.
    pub truncated: f64,
    /// `sum_i sum_{m>K} lambda_i^m / m`.
    pub remainder: f64,
}

/// Series summation is used for the remainder when `lambda^{K+1}` is at
/// most this value, and the difference form otherwise.
const SERIES_SWITCH: f64 = 0.25;
const SERIES_MAX_TERMS: usize = 2_000_000;

/// `sum_{m<=K} lambda^m / m`.
fn partial_log_series(l: f64, k: usize) -> f64 {
    let mut acc = CompensatedSum::new();
    let mut p = 1.0;
    for m in 1..=k {
        p *= l;
        if p == 0.0 {
            break;
        }
        acc.add(p / m as f64);
    }
    acc.value()
}

/// `-ln(1 - lambda) - sum_{m<=K} lambda^m / m`, computed without
/// cancellation when the remainder is small.
pub fn log_series_remainder(l: f64, k: usize) -> f64 {
    if l <= 0.0 {
        return 0.0;
    }
    if l >= 1.0 {
        return f64::INFINITY;
    }
    let lead = ((k + 1) as f64 * l.ln()).exp();
    if lead <= SERIES_SWITCH {
        let terms_needed = (40.0 / -l.ln()).ceil();
        if terms_needed < SERIES_MAX_TERMS as f64 {
            let mut acc = CompensatedSum::new();
            let mut p = lead;
            let mut m = k + 1;
            loop {
                let t = p / m as f64;
                acc.add(t);
                if t <= 1e-18 * acc.value() || p == 0.0 {
                    break;
                }
                p *= l;
                m += 1;
            }
            return acc.value();
        }
    }
    (-(-l).ln_1p() - partial_log_series(l, k)).max(0.0)
}

/// Truncated log-series for `ln p_{N,0}` and its exact remainder.
pub fn log_p_zero_truncated(s: &Spectrum, k: usize) -> Result<TruncatedLog> {
    if k == 0 {
        return Err(Error::Argument("truncation order K must be >= 1".into()));
    }
    let lambdas = checked_lambdas(s)?;
    let mut truncated = CompensatedSum::new();
    let mut remainder = CompensatedSum::new();
    for &l in lambdas.iter().rev() {
        truncated.add(-partial_log_series(l, k));
        remainder.add(log_series_remainder(l, k));
    }
    Ok(TruncatedLog {
        k,
        truncated: truncated.value(),
        remainder: remainder.value(),
    })
}

/// Upper bound `sum_i lambda_i^{K+1} / (sqrt(2K+1) sqrt(1 - lambda_i))` on
/// the remainder.
pub fn remainder_bound(s: &Spectrum, k: usize) -> Result<f64> {
    let lambdas = checked_lambdas(s)?;
    let mut acc = CompensatedSum::new();
    for &l in lambdas.iter().rev() {
        acc.add(eigenvalue_remainder_bound(l, k));
    }
    Ok(acc.value())
}

/// Single-eigenvalue form of [`remainder_bound`].
pub fn eigenvalue_remainder_bound(l: f64, k: usize) -> f64 {
    if l <= 0.0 {
        return 0.0;
    }
    ((k + 1) as f64 * l.ln()).exp() / ((2 * k + 1) as f64).sqrt() / (1.0 - l).sqrt()
}

/// `ln sum_k p_{N,2k} x^k = sum_i ln(1 + (x - 1) lambda_i)` for `x` in `[0, 2]`.
pub fn log_generating(s: &Spectrum, x: f64) -> Result<f64> {
    if !(0.0..=2.0).contains(&x) {
        return Err(Error::Argument(format!(
            "generating function argument must lie in [0, 2], got {x}"
        )));
    }
    let lambdas = checked_lambdas(s)?;
    let mut acc = CompensatedSum::new();
    for &l in lambdas.iter().rev() {
        acc.add(((x - 1.0) * l).ln_1p());
    }
    Ok(acc.value())
}

/// `p_{2n,0}` for `n` in `{1, 2}` from the alternative determinant with
/// closed-form entries `beta_{2j-1, 2m}`, `s = sqrt(1 + tau)`.
///
/// `beta_{3,4}` carries `s^2` in its second numerator term; the entry was
/// checked against two-dimensional quadrature of its defining integral.
pub fn prob_zero_forrester_nagao(n: usize, tau: f64) -> Result<f64> {
    if !(tau > -1.0 && tau <= 1.0) {
        return Err(Error::Argument(format!("tau must lie in (-1, 1], got {tau}")));
    }
    let s = (1.0 + tau).sqrt();
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let r2 = std::f64::consts::SQRT_2;
    let beta12 = 2.0 * sqrt_pi * (r2 - s) / s;
    let det = match n {
        1 => beta12,
        2 => {
            let s3 = s * s * s;
            let s5 = s3 * s * s;
            let beta34 = sqrt_pi
                * (12.0 * r2 - 16.0 * r2 * s * s + 12.0 * r2 * s3 * s - 7.0 * s5)
                / (2.0 * s5);
            let beta32 = -sqrt_pi * (2.0 * r2 - 2.0 * r2 * s * s + s3) / s3;
            let beta14 = -sqrt_pi * (2.0 * r2 - 6.0 * r2 * s * s + 5.0 * s3) / s3;
            beta12 * beta34 - beta14 * beta32
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "closed-form determinant entries exist only for n in {{1, 2}}, got {n}"
            )))
        }
    };
    // prod_{l=1}^{2n} Gamma(l/2)
    let gamma_prod = match n {
        1 => sqrt_pi,
        _ => sqrt_pi * sqrt_pi / 2.0,
    };
    let nf = n as f64;
    let pref = ((1.0 + tau) / 2.0).powf(nf * (2.0 * nf - 1.0) / 2.0) / (2f64.powi(n as i32) * gamma_prod);
    Ok(pref * det)
}
