//! Matrix sampling and the parallel sampling driver.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::schur::{count_real_eigenvalues_in_place, matrix_hash};
use crate::error::{Error, Result};

pub const HISTOGRAM_SCHEMA_VERSION: u32 = 1;

/// Largest tolerated fraction of samples whose Schur iteration failed.
pub const FAILURE_BUDGET: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerKind {
    /// `sqrt((1+tau)/2) S + sqrt((1-tau)/2) A` with `S` from the GOE and `A`
    /// antisymmetric Gaussian.
    #[default]
    GoeAntisymmetric,
    /// Each transposed pair drawn directly with correlation `tau`.
    CorrelatedPairs,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    /// Matrix dimension `N`, even.
    pub n: usize,
    pub tau: f64,
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
    #[serde(default)]
    pub sampler: SamplerKind,
}

impl SamplerConfig {
    pub fn new(n: usize, tau: f64, samples: u64, seed: u64) -> SamplerConfig {
        SamplerConfig {
            n,
            tau,
            samples,
            seed,
            workers: 1,
            sampler: SamplerKind::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n % 2 == 1 {
            return Err(Error::Argument(format!(
                "matrix dimension N must be even and positive, got {}",
                self.n
            )));
        }
        if !(self.tau > -1.0 && self.tau <= 1.0) {
            return Err(Error::Argument(format!(
                "tau must lie in (-1, 1], got {}",
                self.tau
            )));
        }
        if self.samples == 0 {
            return Err(Error::Argument("samples must be positive".into()));
        }
        if self.workers == 0 {
            return Err(Error::Argument("workers must be positive".into()));
        }
        Ok(())
    }
}

/// Histogram of real-eigenvalue counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalCounts {
    pub schema_version: u32,
    #[serde(rename = "N")]
    pub n: usize,
    pub tau: f64,
    /// Samples that entered the histogram.
    pub samples: u64,
    pub seed: u64,
    pub sampler: SamplerKind,
    /// Samples dropped after a Schur iteration failure.
    pub failures: u64,
    pub counts: BTreeMap<usize, u64>,
}

impl EmpiricalCounts {
    /// Fraction of samples with exactly `k` real eigenvalues.
    pub fn frequency(&self, k: usize) -> f64 {
        *self.counts.get(&k).unwrap_or(&0) as f64 / self.samples as f64
    }

    /// Mean and unbiased variance of the count.
    pub fn mean_variance(&self) -> (f64, f64) {
        let s = self.samples as f64;
        let mean = self.counts.iter().map(|(&k, &c)| k as f64 * c as f64).sum::<f64>() / s;
        let ss: f64 = self
            .counts
            .iter()
            .map(|(&k, &c)| (k as f64 - mean).powi(2) * c as f64)
            .sum();
        (mean, ss / (s - 1.0).max(1.0))
    }
}

/// Generator for sample `index`: ChaCha8 keyed by `seed` (expanded through
/// `seed_from_u64`), with the sample index as the 64-bit stream id.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// One `n x n` row-major eGinOE matrix with `E M_ij^2 = 1/n`,
/// `E M_ij M_ji = tau/n` and `E M_ii^2 = (1+tau)/n`.
pub fn sample_matrix<R: Rng + ?Sized>(
    n: usize,
    tau: f64,
    kind: SamplerKind,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let mut out = vec![0.0; n * n];
    fill_matrix(&mut out, n, tau, kind, rng)?;
    Ok(out)
}

fn fill_matrix<R: Rng + ?Sized>(
    out: &mut [f64],
    n: usize,
    tau: f64,
    kind: SamplerKind,
    rng: &mut R,
) -> Result<()> {
    if !(-1.0..=1.0).contains(&tau) {
        return Err(Error::Argument(format!("tau must lie in [-1, 1], got {tau}")));
    }
    let scale = 1.0 / (n as f64).sqrt();
    let mut g = || -> f64 { rng.sample::<f64, _>(StandardNormal) };
    match kind {
        SamplerKind::GoeAntisymmetric => {
            let a = (0.5 * (1.0 + tau)).sqrt() * scale;
            let b = (0.5 * (1.0 - tau)).sqrt() * scale;
            for i in 0..n {
                out[i * n + i] = a * std::f64::consts::SQRT_2 * g();
                for j in i + 1..n {
                    let s = a * g();
                    let t = b * g();
                    out[i * n + j] = s + t;
                    out[j * n + i] = s - t;
                }
            }
        }
        SamplerKind::CorrelatedPairs => {
            let c = (1.0 - tau * tau).max(0.0).sqrt();
            let d = (1.0 + tau).sqrt() * scale;
            for i in 0..n {
                out[i * n + i] = d * g();
                for j in i + 1..n {
                    let g1 = g();
                    let g2 = g();
                    out[i * n + j] = scale * g1;
                    out[j * n + i] = scale * (tau * g1 + c * g2);
                }
            }
        }
    }
    Ok(())
}

/// Samples `config.samples` matrices and histograms their real-eigenvalue
/// counts. Sample `i` always draws from [`substream`]`(seed, i)`, so the
/// result does not depend on `workers` or on scheduling.
pub fn run(config: &SamplerConfig) -> Result<EmpiricalCounts> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let n = config.n;
    let outcomes: Vec<std::result::Result<usize, String>> = pool.install(|| {
        (0..config.samples)
            .into_par_iter()
            .map_init(
                || vec![0.0; n * n],
                |buf, i| {
                    let mut rng = substream(config.seed, i);
                    fill_matrix(buf, n, config.tau, config.sampler, &mut rng)
                        .map_err(|e| e.to_string())?;
                    let hash_source = buf.clone();
                    count_real_eigenvalues_in_place(buf, n)
                        .map_err(|e| format!("sample {i}: {e} (matrix {})", matrix_hash(&hash_source)))
                },
            )
            .collect()
    });
    let mut counts = BTreeMap::new();
    let mut failures = Vec::new();
    for o in outcomes {
        match o {
            Ok(k) => {
                if k % 2 != n % 2 || k > n {
                    return Err(Error::Invariant(format!(
                        "real-eigenvalue count {k} is inconsistent with N = {n}"
                    )));
                }
                *counts.entry(k).or_insert(0u64) += 1;
            }
            Err(msg) => failures.push(msg),
        }
    }
    if failures.len() as f64 > FAILURE_BUDGET * config.samples as f64 {
        return Err(Error::Numerical(format!(
            "{} of {} samples failed; first: {}",
            failures.len(),
            config.samples,
            failures[0]
        )));
    }
    Ok(EmpiricalCounts {
        schema_version: HISTOGRAM_SCHEMA_VERSION,
        n,
        tau: config.tau,
        samples: config.samples - failures.len() as u64,
        seed: config.seed,
        sampler: config.sampler,
        failures: failures.len() as u64,
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extreme_tau_structure() {
        let mut rng = substream(1, 0);
        let m = sample_matrix(6, 1.0, SamplerKind::GoeAntisymmetric, &mut rng).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(m[i * 6 + j], m[j * 6 + i]);
            }
        }
        let m = sample_matrix(6, -1.0, SamplerKind::GoeAntisymmetric, &mut rng).unwrap();
        for i in 0..6 {
            assert_eq!(m[i * 6 + i], 0.0);
            for j in 0..6 {
                assert_eq!(m[i * 6 + j], -m[j * 6 + i]);
            }
        }
    }

    #[test]
    fn pair_covariance() {
        for kind in [SamplerKind::GoeAntisymmetric, SamplerKind::CorrelatedPairs] {
            let n = 300;
            let (mut cov, mut var, mut diag, mut pairs) = (0.0, 0.0, 0.0, 0.0);
            for s in 0..4 {
                let m = sample_matrix(n, 0.5, kind, &mut substream(9, s)).unwrap();
                for i in 0..n {
                    diag += m[i * n + i].powi(2);
                    for j in i + 1..n {
                        cov += m[i * n + j] * m[j * n + i];
                        var += m[i * n + j].powi(2);
                        pairs += 1.0;
                    }
                }
            }
            let nn = n as f64;
            assert!((cov / pairs * nn - 0.5).abs() < 0.02, "{kind:?}");
            assert!((var / pairs * nn - 1.0).abs() < 0.02, "{kind:?}");
            assert!((diag / (4.0 * nn) * nn - 1.5).abs() < 0.15, "{kind:?}");
        }
    }

    #[test]
    fn deterministic_across_workers() {
        let mut c = SamplerConfig::new(6, 0.3, 400, 11);
        let a = run(&c).unwrap();
        c.workers = 3;
        let b = run(&c).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.counts.values().sum::<u64>(), 400);
        assert!(a.counts.keys().all(|k| k % 2 == 0));
    }

    #[test]
    fn config_checks() {
        assert!(SamplerConfig::new(3, 0.0, 1, 0).validate().is_err());
        assert!(SamplerConfig::new(4, -1.0, 1, 0).validate().is_err());
        assert!(SamplerConfig::new(4, 1.0, 1, 0).validate().is_ok());
    }

    #[test]
    fn symmetric_limit_all_real() {
        let c = SamplerConfig::new(8, 1.0, 50, 3);
        let h = run(&c).unwrap();
        assert_eq!(h.counts.get(&8), Some(&50));
    }

    #[test]
    fn near_symmetric_windows_converge() {
        // stalled under a +-c real shift pair; counts from LAPACK dgeev
        use crate::montecarlo::count_real_eigenvalues;
        for (n, tau, seed, index, want) in [(100, 0.99, 3, 12_066, 74), (400, 1.0 - 1.0 / 400.0, 7, 1830, 302)] {
            let a = sample_matrix(n, tau, SamplerKind::GoeAntisymmetric, &mut substream(seed, index)).unwrap();
            assert_eq!(count_real_eigenvalues(&a, n).unwrap(), want);
        }
    }
}
