//! Limit constants, asymptotic predictions and finite-`N` convergence.

mod combinatorics;
mod constants;
mod convergence;
mod cumulants;
mod predictions;

pub use combinatorics::{combinatorial_identity_check, CombinatorialCheck};
pub use constants::{c_alpha, d_alpha, CMethod, DMethod, C_SERIES_MAX_ALPHA};
pub use convergence::{
    convergence_report, convergence_report_from, finite_value, ConvergenceReport, ConvergenceRow,
};
pub use cumulants::{cumulant, cumulants, MAX_CUMULANT_ORDER};
pub use predictions::{
    clt_sigma2, predict, predictions, AsymptoticPrediction, Quantity, Regime, Relation,
};
