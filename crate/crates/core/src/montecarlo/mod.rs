//! Monte Carlo sampling of the real elliptic Ginibre ensemble.

mod sampler;
mod schur;
mod stats;

pub use sampler::{
    run, sample_matrix, substream, EmpiricalCounts, SamplerConfig, SamplerKind, FAILURE_BUDGET,
    HISTOGRAM_SCHEMA_VERSION,
};
pub use schur::{
    count_real_eigenvalues, count_real_eigenvalues_in_place, hessenberg, matrix_hash,
    DISCRIMINANT_TOLERANCE, SWEEPS_PER_DIM,
};
pub use stats::{clt_check, ks_normal_lattice, moment_summary, CltReport, MomentSummary};
