//! `zeta(3/2)` and the polylogarithms `Li_{1/2}`, `Li_{3/2}` on `[-1, 1]`.
//!
//! Near `z = 1` the series is summed directly up to a cutoff `M` and the
//! remainder `sum_{k >= M} f(k)` is replaced by its Euler-Maclaurin form
//! `int_M^inf f + f(M)/2 - f'(M)/12 + f'''(M)/720` with the integral in
//! closed form. With `M = 10^6` the neglected term is of order `M^{-6}`.

use std::sync::OnceLock;

use super::functions::erfc;
use super::sum::CompensatedSum;
use crate::error::{Error, Result};

/// Cutoff used for the direct part of slowly convergent sums.
pub const DIRECT_CUTOFF: u64 = 1_000_000;

/// Orders supported by [`polylog`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolylogOrder {
    Half,
    ThreeHalves,
}

impl PolylogOrder {
    pub fn value(self) -> f64 {
        match self {
            PolylogOrder::Half => 0.5,
            PolylogOrder::ThreeHalves => 1.5,
        }
    }

    pub fn from_f64(s: f64) -> Result<Self> {
        if s == 0.5 {
            Ok(PolylogOrder::Half)
        } else if s == 1.5 {
            Ok(PolylogOrder::ThreeHalves)
        } else {
            Err(Error::Argument(format!(
                "polylog order must be 1/2 or 3/2, got {s}"
            )))
        }
    }
}

/// `zeta(3/2)`, computed once and cached.
pub fn zeta_three_halves() -> f64 {
    static VALUE: OnceLock<f64> = OnceLock::new();
    *VALUE.get_or_init(|| tail_summed(PolylogOrder::ThreeHalves, 0.0, DIRECT_CUTOFF))
}

/// `Li_s(z) = sum_{k >= 1} z^k / k^s` for `s` in `{1/2, 3/2}`, `z` in `[-1, 1]`.
pub fn polylog(s: PolylogOrder, z: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&z) {
        return Err(Error::Argument(format!("polylog needs z in [-1, 1], got {z}")));
    }
    if s == PolylogOrder::Half && z.abs() == 1.0 {
        return Err(Error::Argument(
            "Li_{1/2} diverges at |z| = 1; need |z| < 1".into(),
        ));
    }
    Ok(polylog_unchecked(s, z))
}

fn polylog_unchecked(s: PolylogOrder, z: f64) -> f64 {
    if z == 0.0 {
        return 0.0;
    }
    if z < 0.0 {
        // duplication: Li_s(z) + Li_s(-z) = 2^{1-s} Li_s(z^2)
        let a = -z;
        return 2f64.powf(1.0 - s.value()) * polylog_unchecked(s, a * a)
            - polylog_unchecked(s, a);
    }
    if z == 1.0 {
        return zeta_three_halves();
    }
    if z <= 0.5 {
        return direct(s, z);
    }
    tail_summed(s, -z.ln(), DIRECT_CUTOFF)
}

/// Plain series for `0 < z <= 1/2`.
fn direct(s: PolylogOrder, z: f64) -> f64 {
    let s = s.value();
    let mut acc = CompensatedSum::new();
    let mut zk = 1.0;
    for k in 1..10_000u32 {
        zk *= z;
        let term = zk / (k as f64).powf(s);
        acc.add(term);
        if term < 1e-20 {
            break;
        }
    }
    acc.value()
}

/// `sum_k e^{-mu k} k^{-s}` via direct summation below `cutoff` and an
/// Euler-Maclaurin tail from `cutoff` on.
fn tail_summed(s: PolylogOrder, mu: f64, cutoff: u64) -> f64 {
    let sv = s.value();
    let mut acc = CompensatedSum::new();
    let mut terms = Vec::with_capacity(cutoff as usize);
    for k in 1..cutoff {
        let x = k as f64;
        terms.push((-mu * x).exp() / x.powf(sv));
    }
    // smallest first
    for &t in terms.iter().rev() {
        acc.add(t);
    }
    let m = cutoff as f64;
    let f = (-mu * m).exp() / m.powf(sv);
    let g1 = -mu - sv / m;
    let g1p = sv / (m * m);
    let g1pp = -2.0 * sv / (m * m * m);
    let d1 = f * g1;
    let d3 = f * (g1 * g1 * g1 + 3.0 * g1 * g1p + g1pp);
    let integral = tail_integral(s, mu, m);
    acc.add(d3 / 720.0);
    acc.add(-d1 / 12.0);
    acc.add(f / 2.0);
    acc.add(integral);
    acc.value()
}

/// `int_m^inf e^{-mu x} x^{-s} dx`.
fn tail_integral(s: PolylogOrder, mu: f64, m: f64) -> f64 {
    match s {
        PolylogOrder::ThreeHalves => {
            if mu == 0.0 {
                return 2.0 / m.sqrt();
            }
            // mu^{1/2} Gamma(-1/2, mu m)
            let y = mu * m;
            let gamma = 2.0 * (-y).exp() / y.sqrt()
                - 2.0 * std::f64::consts::PI.sqrt() * erfc(y.sqrt());
            mu.sqrt() * gamma
        }
        PolylogOrder::Half => {
            debug_assert!(mu > 0.0);
            (std::f64::consts::PI / mu).sqrt() * erfc((mu * m).sqrt())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Alternating eta series with Cohen-Villegas-Zagier acceleration,
    /// converted to zeta: independent of the Euler-Maclaurin route.
    fn zeta_via_eta(s: f64) -> f64 {
        let n = 40usize;
        let d0 = (3.0 + 8f64.sqrt()).powi(n as i32);
        let d = (d0 + 1.0 / d0) / 2.0;
        let mut b = -1.0;
        let mut c = -d;
        let mut sum = 0.0;
        for k in 0..n {
            c = b - c;
            sum += c / ((k + 1) as f64).powf(s);
            b = (k as f64 + n as f64) * (k as f64 - n as f64) * b
                / ((k as f64 + 0.5) * (k as f64 + 1.0));
        }
        let eta = sum / d;
        eta / (1.0 - 2f64.powf(1.0 - s))
    }

    #[test]
    fn zeta_matches_accelerated_eta() {
        let oracle = zeta_via_eta(1.5);
        assert!((oracle - 2.612375348685488).abs() < 1e-13);
        assert!((zeta_three_halves() - oracle).abs() < 1e-12);
    }

    #[test]
    fn zeta_over_sqrt_two_pi() {
        let r = zeta_three_halves() / (2.0 * std::f64::consts::PI).sqrt();
        assert!((r - 1.042186).abs() < 1e-6);
    }

    #[test]
    fn polylog_special_points() {
        let t = PolylogOrder::ThreeHalves;
        assert_eq!(polylog(t, 0.0).unwrap(), 0.0);
        assert_eq!(polylog(t, 1.0).unwrap(), zeta_three_halves());
        let want = -(1.0 - 2f64.powf(-0.5)) * zeta_three_halves();
        assert!((polylog(t, -1.0).unwrap() - want).abs() < 1e-12);
        assert!((want + 0.765147).abs() < 1e-6);
    }

    #[test]
    fn polylog_minus_one_by_direct_alternating_sum() {
        // pairwise-averaged partial sums of an alternating series
        let mut s = 0.0;
        let mut prev = 0.0;
        let n = 2_000_000u64;
        for k in 1..=n {
            prev = s;
            let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
            s += sign / (k as f64).powf(1.5);
        }
        let avg = 0.5 * (s + prev);
        let got = polylog(PolylogOrder::ThreeHalves, -1.0).unwrap();
        assert!((got - avg).abs() < 1e-10, "{got} vs {avg}");
    }

    #[test]
    fn branches_agree_across_switch() {
        // direct series vs Euler-Maclaurin at the same argument
        for s in [PolylogOrder::Half, PolylogOrder::ThreeHalves] {
            for z in [0.3, 0.5] {
                let a = direct(s, z);
                let b = tail_summed(s, -f64::ln(z), 2000);
                assert!((a - b).abs() < 1e-13, "{s:?} {z}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn half_order_near_one_matches_long_sum() {
        let z: f64 = 0.999;
        let mut s = CompensatedSum::new();
        let mut zk = 1.0;
        for k in 1..200_000u32 {
            zk *= z;
            s.add(zk / (k as f64).sqrt());
        }
        let got = polylog(PolylogOrder::Half, z).unwrap();
        assert!((got - s.value()).abs() < 1e-10);
    }

    #[test]
    fn domain() {
        assert!(polylog(PolylogOrder::Half, 1.0).is_err());
        assert!(polylog(PolylogOrder::Half, -1.0).is_err());
        assert!(polylog(PolylogOrder::ThreeHalves, 1.5).is_err());
        assert!(PolylogOrder::from_f64(2.0).is_err());
    }

    #[test]
    fn known_value_half() {
        // Li_{3/2}(1/2)
        let v = polylog(PolylogOrder::ThreeHalves, 0.5).unwrap();
        assert!((v - 0.62483702081991385).abs() < 1e-14);
    }
}
