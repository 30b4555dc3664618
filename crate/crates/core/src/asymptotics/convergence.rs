//! Finite-`N` values compared with their predicted limits.

use rayon::prelude::*;
use serde::Serialize;

use super::predictions::{predict, AsymptoticPrediction, Quantity, Regime, Relation};
use crate::error::{Error, Result};
use crate::genmatrix::build;
use crate::probabilities::log_generating;
use crate::spectrum::{eigendecompose, trace_power, Spectrum};

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub tau: f64,
    pub finite: f64,
    pub limit: f64,
    pub abs_error: f64,
    pub rel_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub quantity: Quantity,
    pub regime: Regime,
    pub relation: Relation,
    pub rows: Vec<ConvergenceRow>,
    /// Whether `abs_error` strictly decreases along the grid.
    pub error_decreasing: bool,
}

/// The finite-`N` counterpart of `quantity` for a spectrum at half-dimension
/// `s.n`, scaled as in the prediction.
pub fn finite_value(s: &Spectrum, regime: Regime, quantity: Quantity) -> Result<f64> {
    let scale = regime.scale(2 * s.n);
    let t1 = trace_power(s, 1);
    let var = 4.0 * (t1 - trace_power(s, 2));
    Ok(match quantity {
        Quantity::TraceLimit { m } => trace_power(s, m) / scale,
        Quantity::MeanCount => 2.0 * t1 / scale,
        Quantity::VarCount => var / scale,
        Quantity::CltSigma2 => var / (2.0 * t1),
        Quantity::LdpRate => log_generating(s, 0.0)? / scale,
        Quantity::GenfunLimit { x } => log_generating(s, x)? / (2.0 * s.n as f64).sqrt(),
    })
}

/// Report over pre-computed spectra, one per grid point, in ascending `n`.
pub fn convergence_report_from(
    quantity: Quantity,
    regime: Regime,
    spectra: &[&Spectrum],
) -> Result<ConvergenceReport> {
    let pred: AsymptoticPrediction = predict(regime, quantity)?.ok_or_else(|| {
        Error::Unsupported(format!(
            "no {} prediction in the {} regime",
            quantity.label(),
            regime.name()
        ))
    })?;
    if spectra.windows(2).any(|w| w[0].n >= w[1].n) {
        return Err(Error::Argument("n grid must be strictly ascending".into()));
    }
    let mut rows = Vec::with_capacity(spectra.len());
    for s in spectra {
        let finite = finite_value(s, regime, quantity)?;
        let abs_error = (finite - pred.value).abs();
        rows.push(ConvergenceRow {
            n: s.n,
            tau: s.tau,
            finite,
            limit: pred.value,
            abs_error,
            rel_error: if pred.value != 0.0 {
                abs_error / pred.value.abs()
            } else {
                abs_error
            },
        });
    }
    let error_decreasing = rows.windows(2).all(|w| w[1].abs_error < w[0].abs_error);
    Ok(ConvergenceReport {
        quantity,
        regime,
        relation: pred.relation,
        rows,
        error_decreasing,
    })
}

/// Builds the spectra for `n_grid` (in parallel) and reports.
pub fn convergence_report(
    quantity: Quantity,
    regime: Regime,
    n_grid: &[usize],
) -> Result<ConvergenceReport> {
    regime.validate()?;
    let spectra = n_grid
        .par_iter()
        .map(|&n| eigendecompose(&build(n, regime.tau_at(n))?))
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&Spectrum> = spectra.iter().collect();
    convergence_report_from(quantity, regime, &refs)
}
