//! Statistical comparisons of sampled counts with exact and limiting laws.

use serde::Serialize;

use super::sampler::EmpiricalCounts;
use crate::error::{Error, Result};
use crate::specfun::erfc;

#[derive(Clone, Debug, Serialize)]
pub struct CltReport {
    pub samples: u64,
    pub exact_mean: f64,
    pub sigma2_predicted: f64,
    /// Mean of `(k - E) / sqrt(E)`.
    pub standardized_mean: f64,
    /// Sample variance of `(k - E) / sqrt(E)`.
    pub standardized_variance: f64,
    /// Kolmogorov distance to `N(E, sigma^2 E)` with continuity correction.
    pub ks_distance: f64,
}

/// Minimum sample size for [`clt_check`].
pub const CLT_MIN_SAMPLES: u64 = 1000;

/// Standardizes the counts with the exact mean and compares with the
/// predicted normal law.
pub fn clt_check(counts: &EmpiricalCounts, exact_mean: f64, sigma2: f64) -> Result<CltReport> {
    if counts.samples < CLT_MIN_SAMPLES {
        return Err(Error::Argument(format!(
            "CLT check needs at least {CLT_MIN_SAMPLES} samples, got {}",
            counts.samples
        )));
    }
    if !(exact_mean > 0.0) {
        return Err(Error::Argument(format!("exact mean must be positive, got {exact_mean}")));
    }
    let s = counts.samples as f64;
    let sd = exact_mean.sqrt();
    let z = |k: usize| (k as f64 - exact_mean) / sd;
    let mean: f64 = counts.counts.iter().map(|(&k, &c)| z(k) * c as f64).sum::<f64>() / s;
    let var: f64 = counts
        .counts
        .iter()
        .map(|(&k, &c)| (z(k) - mean).powi(2) * c as f64)
        .sum::<f64>()
        / (s - 1.0);
    Ok(CltReport {
        samples: counts.samples,
        exact_mean,
        sigma2_predicted: sigma2,
        standardized_mean: mean,
        standardized_variance: var,
        ks_distance: ks_normal_lattice(counts, exact_mean, sigma2 * exact_mean),
    })
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Kolmogorov distance between the empirical law of the counts (a lattice
/// of step 2) and `N(mean, variance)`, comparing the empirical CDF at `k`
/// with the normal CDF at the midpoint `k + 1`.
pub fn ks_normal_lattice(counts: &EmpiricalCounts, mean: f64, variance: f64) -> f64 {
    let s = counts.samples as f64;
    let sd = variance.sqrt();
    let mut cum = 0u64;
    let mut worst: f64 = 0.0;
    let start = counts.n % 2;
    for k in (start..=counts.n).step_by(2) {
        cum += counts.counts.get(&k).copied().unwrap_or(0);
        let emp = cum as f64 / s;
        let model = if sd > 0.0 {
            normal_cdf((k as f64 + 1.0 - mean) / sd)
        } else if (k as f64 + 1.0) >= mean {
            1.0
        } else {
            0.0
        };
        worst = worst.max((emp - model).abs());
    }
    worst
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentSummary {
    pub empirical_mean: f64,
    pub empirical_variance: f64,
    pub exact_mean: f64,
    pub exact_variance: f64,
    /// `|empirical - exact| / standard error` for the mean.
    pub mean_z: f64,
}

/// Compares the sample mean and variance with exact values.
pub fn moment_summary(counts: &EmpiricalCounts, exact_mean: f64, exact_variance: f64) -> MomentSummary {
    let (m, v) = counts.mean_variance();
    let se = (exact_variance / counts.samples as f64).sqrt();
    MomentSummary {
        empirical_mean: m,
        empirical_variance: v,
        exact_mean,
        exact_variance,
        mean_z: if se > 0.0 { (m - exact_mean).abs() / se } else { (m - exact_mean).abs() },
    }
}
