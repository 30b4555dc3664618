//! Error function, log-gamma and exponentially scaled modified Bessel
//! functions.

use crate::error::{Error, Result};

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Error function.
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Argument(format!("log_gamma needs x > 0, got {x}")));
    }
    Ok(libm::lgamma(x))
}

/// Switch point between the power series and the large-argument expansion.
const BESSEL_SERIES_LIMIT: f64 = 25.0;

/// `e^{-x} I_nu(x)` for `nu` in `{0, 1}` and `x >= 0`.
pub fn bessel_i_scaled(nu: u32, x: f64) -> Result<f64> {
    if nu > 1 {
        return Err(Error::Argument(format!(
            "bessel_i_scaled supports orders 0 and 1, got {nu}"
        )));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Argument(format!(
            "bessel_i_scaled needs finite x >= 0, got {x}"
        )));
    }
    if x <= BESSEL_SERIES_LIMIT {
        Ok(series(nu, x) * (-x).exp())
    } else {
        Ok(asymptotic(nu, x))
    }
}

/// `I_nu(x) = sum_k (x/2)^{2k+nu} / (k! (k+nu)!)`.
fn series(nu: u32, x: f64) -> f64 {
    let h = 0.5 * x;
    let q = h * h;
    let mut term = if nu == 0 { 1.0 } else { h };
    let mut sum = term;
    let nu = nu as f64;
    for k in 1..500 {
        let k = k as f64;
        term *= q / (k * (k + nu));
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum
}

/// `e^{-x} I_nu(x) ~ (2 pi x)^{-1/2} sum_k (-1)^k a_k(nu) / x^k`.
fn asymptotic(nu: u32, x: f64) -> f64 {
    let mu = 4.0 * (nu * nu) as f64;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let r = (2 * k - 1) as f64;
        term *= -(mu - r * r) / (k as f64 * 8.0 * x);
        if term.abs() >= last {
            break;
        }
        sum += term;
        last = term.abs();
        if last < 1e-17 * sum.abs() {
            break;
        }
    }
    sum / (2.0 * std::f64::consts::PI * x).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_values() {
        assert_eq!(erfc(0.0), 1.0);
        assert_eq!(bessel_i_scaled(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i_scaled(1, 0.0).unwrap(), 0.0);
        assert!((log_gamma(5.0).unwrap() - 24f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn domain_errors() {
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
        assert!(bessel_i_scaled(2, 1.0).is_err());
        assert!(bessel_i_scaled(0, -1.0).is_err());
    }

    #[test]
    fn bessel_reference_values() {
        // I_0(1) = 1.2660658777520082, I_1(1) = 0.5651591039924851
        let i0 = bessel_i_scaled(0, 1.0).unwrap() * 1f64.exp();
        let i1 = bessel_i_scaled(1, 1.0).unwrap() * 1f64.exp();
        assert!((i0 - 1.2660658777520082).abs() < 1e-15);
        assert!((i1 - 0.5651591039924851).abs() < 1e-15);
    }

    #[test]
    fn bessel_branches_meet() {
        for nu in 0..2 {
            let a = series(nu, 25.0) * (-25.0f64).exp();
            let b = asymptotic(nu, 25.0);
            assert!(((a - b) / a).abs() < 1e-13, "nu={nu}: {a} vs {b}");
            let a = series(nu, 40.0) * (-40.0f64).exp();
            let b = asymptotic(nu, 40.0);
            assert!(((a - b) / a).abs() < 1e-13, "nu={nu}: {a} vs {b}");
        }
    }

    #[test]
    fn bessel_wronskian_like_recurrence() {
        // I_0'(x) = I_1(x): compare against a central difference of the scaled series
        let x = 3.0;
        let h = 1e-5;
        let d = (series(0, x + h) - series(0, x - h)) / (2.0 * h);
        assert!((d - series(1, x)).abs() < 1e-8);
    }

    #[test]
    fn erfc_underflows_gracefully() {
        assert!(erfc(30.0) < 1e-300);
        assert!(erfc(30.0) >= 0.0);
        assert_eq!(erfc(-30.0), 2.0);
    }
}
