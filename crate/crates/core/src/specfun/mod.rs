//! Special functions, quadrature and overflow-safe arithmetic.

mod functions;
mod hermite;
mod quadrature;
mod scaled;
mod sum;
mod zeta;

pub use functions::{bessel_i_scaled, erf, erfc, log_gamma};
pub use hermite::{
    mehler_even_closed, mehler_even_partial, normalized_hermite_weighted, scaled_hermite, weight,
    NormalizedHermite, MAX_DEGREE,
};
pub use quadrature::{
    graded_breakpoints, integrate_panels, quadrature, QuadratureKind, QuadratureRule, MAX_ORDER,
};
pub use scaled::ScaledValue;
pub(crate) use scaled::ldexp;
pub use sum::{compensated_sum, two_prod, two_sum, CompensatedSum, DoubleDouble};
pub use zeta::{polylog, zeta_three_halves, PolylogOrder, DIRECT_CUTOFF};
