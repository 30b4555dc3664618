//! Finite-`N` large-deviation and generating-function values set against
//! their limits, with the log-series truncation sandwich.

use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::{predict, Quantity, Regime, Relation};
use crate::error::{Error, Result};
use crate::genmatrix::build;
use crate::probabilities::{log_generating, log_p_zero_truncated, remainder_bound};
use crate::spectrum::{eigendecompose, Spectrum};

/// Cap on the truncation order chosen by [`default_truncation`].
pub const MAX_TRUNCATION: usize = 100_000;

/// Range of `x` accepted by [`genfun_limit_check`].
pub const GENFUN_X_RANGE: (f64, f64) = (0.05, 1.95);

/// `ceil(10 sqrt(N) ln N)`, at least 1 and at most [`MAX_TRUNCATION`].
pub fn default_truncation(big_n: usize) -> usize {
    let n = big_n as f64;
    let k = (10.0 * n.sqrt() * n.ln()).ceil();
    (k as usize).clamp(1, MAX_TRUNCATION)
}

#[derive(Clone, Debug, Serialize)]
pub struct LdpEstimate {
    #[serde(rename = "N")]
    pub big_n: usize,
    pub regime: Regime,
    pub tau: f64,
    /// `log p_{N,0}` over `sqrt(N)` (strong) or `N` (weak).
    pub scaled_log_p: f64,
    pub limit: f64,
    /// `upper_bound` in the weak regime: only `limsup <= limit` is known.
    pub relation: Relation,
    pub k_used: usize,
    /// `-sum_{m<=K} Tr(M^m)/m`, unscaled.
    pub truncated: f64,
    /// Exact `truncated - log p_{N,0}`.
    pub remainder: f64,
    pub remainder_bound: f64,
    /// `truncated >= log p >= truncated - remainder_bound`.
    pub sandwich_holds: bool,
}

impl LdpEstimate {
    pub fn scaled_error(&self) -> f64 {
        self.scaled_log_p - self.limit
    }
}

fn check_regime_tau(s: &Spectrum, regime: Regime) -> Result<()> {
    regime.validate()?;
    let want = regime.tau_at(s.n);
    if (s.tau - want).abs() > 1e-12 {
        return Err(Error::Argument(format!(
            "spectrum has tau = {}, but the {} regime at n = {} needs tau = {want}",
            s.tau,
            regime.name(),
            s.n
        )));
    }
    Ok(())
}

/// Scaled `log p_{N,0}` with its truncated log-series, exact remainder and
/// remainder bound at order `k`.
pub fn ldp_estimate(s: &Spectrum, regime: Regime, k: usize) -> Result<LdpEstimate> {
    check_regime_tau(s, regime)?;
    let big_n = 2 * s.n;
    let log_p = log_generating(s, 0.0)?;
    let tr = log_p_zero_truncated(s, k)?;
    let bound = remainder_bound(s, k)?;
    let pred = predict(regime, Quantity::LdpRate)?.expect("rate is defined in both regimes");
    let slack = 1e-12 * log_p.abs().max(1.0);
    let sandwich_holds =
        tr.truncated + slack >= log_p && log_p + slack >= tr.truncated - bound && tr.remainder <= bound + slack;
    Ok(LdpEstimate {
        big_n,
        regime,
        tau: s.tau,
        scaled_log_p: log_p / regime.scale(big_n),
        limit: pred.value,
        relation: pred.relation,
        k_used: k,
        truncated: tr.truncated,
        remainder: tr.remainder,
        remainder_bound: bound,
        sandwich_holds,
    })
}

/// Builds the spectra for `n_grid` and estimates with the default
/// truncation order.
pub fn ldp_table(regime: Regime, n_grid: &[usize]) -> Result<Vec<LdpEstimate>> {
    regime.validate()?;
    n_grid
        .par_iter()
        .map(|&n| {
            let s = eigendecompose(&build(n, regime.tau_at(n))?)?;
            ldp_estimate(&s, regime, default_truncation(2 * n))
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct GenfunRow {
    #[serde(rename = "N")]
    pub big_n: usize,
    pub x: f64,
    /// `log sum_k p_{N,2k} x^k / sqrt(N)`.
    pub finite: f64,
    pub limit: f64,
    pub abs_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenfunTable {
    pub tau: f64,
    pub rows: Vec<GenfunRow>,
    /// For each `x`, whether the error strictly decreases along the grid
    /// (vacuous when it is zero throughout).
    pub shrinking: Vec<(f64, bool)>,
}

/// Generating-function table over pre-computed spectra (ascending `n`, one
/// `tau`).
pub fn genfun_limit_check_from(spectra: &[&Spectrum], x_grid: &[f64]) -> Result<GenfunTable> {
    let Some(first) = spectra.first() else {
        return Err(Error::Argument("empty n grid".into()));
    };
    let tau = first.tau;
    if spectra.iter().any(|s| s.tau != tau) {
        return Err(Error::Argument("all spectra must share one tau".into()));
    }
    if spectra.windows(2).any(|w| w[0].n >= w[1].n) {
        return Err(Error::Argument("n grid must be strictly ascending".into()));
    }
    let (lo, hi) = GENFUN_X_RANGE;
    if let Some(x) = x_grid.iter().find(|x| !(lo..=hi).contains(*x)) {
        return Err(Error::Argument(format!(
            "x = {x} lies outside [{lo}, {hi}]"
        )));
    }
    let regime = Regime::Strong(tau);
    let mut rows = Vec::new();
    let mut shrinking = Vec::new();
    for &x in x_grid {
        let limit = predict(regime, Quantity::GenfunLimit { x })?
            .expect("strong regime has a generating-function limit")
            .value;
        let mut errs = Vec::new();
        for s in spectra {
            let big_n = 2 * s.n;
            let finite = log_generating(s, x)? / (big_n as f64).sqrt();
            let abs_error = (finite - limit).abs();
            errs.push(abs_error);
            rows.push(GenfunRow { big_n, x, finite, limit, abs_error });
        }
        let ok = errs.iter().all(|&e| e == 0.0) || errs.windows(2).all(|w| w[1] < w[0]);
        shrinking.push((x, ok));
    }
    Ok(GenfunTable { tau, rows, shrinking })
}

/// Builds the spectra at `tau` for `n_grid` and tabulates.
pub fn genfun_limit_check(n_grid: &[usize], tau: f64, x_grid: &[f64]) -> Result<GenfunTable> {
    Regime::Strong(tau).validate()?;
    let spectra = n_grid
        .par_iter()
        .map(|&n| eigendecompose(&build(n, tau)?))
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&Spectrum> = spectra.iter().collect();
    genfun_limit_check_from(&refs, x_grid)
}
