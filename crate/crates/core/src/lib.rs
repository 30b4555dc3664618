//! Real-eigenvalue statistics of the real elliptic Ginibre ensemble.

pub mod asymgap;
pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod genmatrix;
pub mod identities;
pub mod linalg;
pub mod montecarlo;
pub mod probabilities;
pub mod spectrum;
pub mod specfun;

pub use error::{Error, Result};
