//! The interpolating constants `c(alpha)` and `d(alpha)`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{
    bessel_i_scaled, erf, graded_breakpoints, integrate_panels, quadrature, CompensatedSum,
    QuadratureKind, QuadratureRule,
};

/// Largest `alpha` accepted by the power series for `c`.
pub const C_SERIES_MAX_ALPHA: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CMethod {
    /// `e^{-a^2/2} (I_0 + I_1)(a^2/2)` with exponentially scaled Bessel functions.
    #[default]
    Bessel,
    /// `2/(a sqrt(pi)) int_0^1 erf(a sqrt(1 - s^2)) ds`.
    ErfIntegral,
    /// Alternating power series in `a^2`.
    Series,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DMethod {
    /// `sum_m c(sqrt(m) a) / (2m)` with an asymptotic tail.
    #[default]
    Series,
    /// `-(2/pi) int_0^1 log(1 - e^{-a^2 s^2}) sqrt(1 - s^2) ds`.
    Integral,
}

fn legendre_rule() -> &'static QuadratureRule {
    static RULE: OnceLock<QuadratureRule> = OnceLock::new();
    RULE.get_or_init(|| quadrature(QuadratureKind::GaussLegendre, 30).expect("fixed order"))
}

/// Mean real-eigenvalue density constant of the weak regime.
pub fn c_alpha(alpha: f64, method: CMethod) -> Result<f64> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::Argument(format!("c(alpha) needs alpha >= 0, got {alpha}")));
    }
    if alpha == 0.0 {
        return Ok(1.0);
    }
    match method {
        CMethod::Bessel => {
            let z = 0.5 * alpha * alpha;
            Ok(bessel_i_scaled(0, z)? + bessel_i_scaled(1, z)?)
        }
        CMethod::ErfIntegral => Ok(c_erf_integral(alpha)),
        CMethod::Series => {
            if alpha > C_SERIES_MAX_ALPHA {
                return Err(Error::Argument(format!(
                    "series method for c(alpha) is limited to alpha <= {C_SERIES_MAX_ALPHA}, got {alpha}"
                )));
            }
            Ok(c_series(alpha))
        }
    }
}

fn c_erf_integral(alpha: f64) -> f64 {
    // s = cos(phi): int_0^{pi/2} erf(alpha sin phi) sin phi dphi, smooth at both ends
    let pts = graded_breakpoints(1.0 / alpha, FRAC_PI_2, 2, 1.6);
    let v = integrate_panels(legendre_rule(), &pts, |phi| {
        erf(alpha * phi.sin()) * phi.sin()
    });
    2.0 * v / (alpha * PI.sqrt())
}

fn c_series(alpha: f64) -> f64 {
    let x = -alpha * alpha;
    let mut term = 1.0;
    let mut acc = CompensatedSum::new();
    acc.add(term);
    for k in 0..400usize {
        let kf = k as f64;
        term *= (2.0 * kf + 1.0) / (2.0 * (kf + 1.0)) * x / (kf + 2.0);
        acc.add(term);
        if term.abs() < 1e-18 * acc.value().abs() {
            break;
        }
    }
    acc.value()
}

/// Weak-regime large-deviation constant.
pub fn d_alpha(alpha: f64, method: DMethod) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Argument(format!("d(alpha) needs alpha > 0, got {alpha}")));
    }
    match method {
        DMethod::Series => d_series(alpha),
        DMethod::Integral => Ok(d_integral(alpha)),
    }
}

/// Terms of the large-argument expansion of `c`, as coefficients of
/// `(2/x^2)^i` in `c(x) x sqrt(pi)`.
const C_ASYMPTOTIC_TERMS: usize = 10;

fn c_asymptotic_coefficients() -> [f64; C_ASYMPTOTIC_TERMS] {
    // e^{-z} I_nu(z) ~ (2 pi z)^{-1/2} sum_i (-1)^i a_i(nu) z^{-i}, z = x^2/2
    let mut out = [0.0; C_ASYMPTOTIC_TERMS];
    let (mut a0, mut a1) = (1.0, 1.0);
    for (i, o) in out.iter_mut().enumerate() {
        if i > 0 {
            let r = (2 * i - 1) as f64;
            let k = i as f64;
            a0 *= (0.0 - r * r) / (k * 8.0);
            a1 *= (4.0 - r * r) / (k * 8.0);
        }
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        *o = sign * (a0 + a1);
    }
    out
}

/// `sum_{m > big_m} m^{-s}` by Euler-Maclaurin.
fn power_tail(s: f64, big_m: f64) -> f64 {
    let f = big_m.powf(-s);
    let integral = big_m.powf(1.0 - s) / (s - 1.0);
    let d1 = -s * f / big_m;
    let d3 = -s * (s + 1.0) * (s + 2.0) * f / big_m.powi(3);
    integral - 0.5 * f - d1 / 12.0 + d3 / 720.0
}

fn d_series(alpha: f64) -> Result<f64> {
    // beyond sqrt(M) alpha >= 40 the asymptotic expansion of c is used
    let big_m = ((40.0 / alpha).powi(2)).ceil().max(50.0);
    if big_m > 5e7 {
        return Err(Error::Argument(format!(
            "series method for d(alpha) needs too many terms at alpha = {alpha}"
        )));
    }
    let big_m = big_m as usize;
    let mut acc = CompensatedSum::new();
    for m in (1..=big_m).rev() {
        let mf = m as f64;
        acc.add(c_alpha(mf.sqrt() * alpha, CMethod::Bessel)? / (2.0 * mf));
    }
    // c(sqrt(m) a)/(2m) ~ sum_i b_i 2^i / (2 a sqrt(pi) a^{2i}) m^{-3/2-i}
    let coef = c_asymptotic_coefficients();
    let mut scale = 1.0 / (2.0 * alpha * PI.sqrt());
    for (i, b) in coef.iter().enumerate() {
        acc.add(b * scale * power_tail(1.5 + i as f64, big_m as f64));
        scale *= 2.0 / (alpha * alpha);
    }
    Ok(acc.value())
}

fn d_integral(alpha: f64) -> f64 {
    // s = sin(theta); the log singularity at theta = 0 is handled by the
    // geometric refinement of the panels
    let a2 = alpha * alpha;
    let pts = graded_breakpoints((1.0 / alpha).min(0.5), FRAC_PI_2, 40, 1.5);
    let v = integrate_panels(legendre_rule(), &pts, |theta| {
        let (s, c) = theta.sin_cos();
        -(-(-a2 * s * s).exp_m1()).ln() * c * c
    });
    2.0 * v / PI
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::zeta_three_halves;

    #[test]
    fn reference_values() {
        let cases = [
            (1.0, 0.80145607363402177),
            (2f64.sqrt(), 0.67367002294334889),
        ];
        for (a, want) in cases {
            for m in [CMethod::Bessel, CMethod::ErfIntegral, CMethod::Series] {
                let got = c_alpha(a, m).unwrap();
                assert!((got - want).abs() < 1e-13, "{m:?} {a}: {got}");
            }
        }
    }

    #[test]
    fn zero_and_large_alpha() {
        for m in [CMethod::Bessel, CMethod::ErfIntegral, CMethod::Series] {
            assert_eq!(c_alpha(0.0, m).unwrap(), 1.0);
        }
        let a = 30.0;
        let v = a * c_alpha(a, CMethod::Bessel).unwrap() * PI.sqrt() / 2.0;
        assert!((v - 1.0).abs() < 2e-2);
        assert!(c_alpha(2.5, CMethod::Series).is_err());
        assert!(c_alpha(-1.0, CMethod::Bessel).is_err());
    }

    #[test]
    fn methods_agree_on_grid() {
        for i in 0..=40 {
            let a = 0.05 * i as f64;
            let b = c_alpha(a, CMethod::Bessel).unwrap();
            assert!((b - c_alpha(a, CMethod::Series).unwrap()).abs() < 1e-12);
            assert!((b - c_alpha(a, CMethod::ErfIntegral).unwrap()).abs() < 1e-12);
        }
        for i in 0..=60 {
            let a = 0.5 * i as f64;
            let b = c_alpha(a, CMethod::Bessel).unwrap();
            let e = c_alpha(a, CMethod::ErfIntegral).unwrap();
            assert!((b - e).abs() < 1e-12, "{a}: {b} {e}");
        }
    }

    #[test]
    fn d_reference_values() {
        let cases = [
            (0.5, 1.9017566377688941),
            (1.0, 1.2530524205541411),
            (2.0, 0.71046007735938271),
            (4.0, 0.36544910732509906),
        ];
        for (a, want) in cases {
            let s = d_alpha(a, DMethod::Series).unwrap();
            let i = d_alpha(a, DMethod::Integral).unwrap();
            assert!((s - want).abs() < 1e-11, "series {a}: {s}");
            assert!((i - want).abs() < 1e-11, "integral {a}: {i}");
        }
    }

    #[test]
    fn d_limits() {
        let a = 50.0;
        let v = a * d_alpha(a, DMethod::Integral).unwrap() * PI.sqrt();
        assert!((v / zeta_three_halves() - 1.0).abs() < 1e-2);
        let d = |a| d_alpha(a, DMethod::Series).unwrap();
        assert!(d(0.1) > d(1.0) && d(1.0) > d(10.0));
        assert!(d_alpha(0.0, DMethod::Series).is_err());
    }
}
