//! Exact cumulants of the real-eigenvalue count from trace powers.

use crate::error::{Error, Result};
use crate::spectrum::{trace_power, Spectrum};

/// Highest cumulant order served.
pub const MAX_CUMULANT_ORDER: u32 = 3;

/// `kappa_l = 2^l sum_m ((-1)^{m+1}/m) sum_{nu_1+..+nu_m=l} l!/(nu_1!..nu_m!) Tr(M^m)`.
pub fn cumulant(s: &Spectrum, l: u32) -> Result<f64> {
    if l == 0 || l > MAX_CUMULANT_ORDER {
        return Err(Error::Unsupported(format!(
            "cumulants are available for orders 1..={MAX_CUMULANT_ORDER}, got {l}"
        )));
    }
    let mut acc = 0.0;
    for m in 1..=l {
        let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
        acc += sign / m as f64 * composition_weight(l, m) * trace_power(s, m);
    }
    Ok(2f64.powi(l as i32) * acc)
}

/// `kappa_1..=kappa_l`.
pub fn cumulants(s: &Spectrum, l: u32) -> Result<Vec<f64>> {
    (1..=l).map(|k| cumulant(s, k)).collect()
}

/// `sum over compositions of l into m positive parts of l!/prod nu_i!`.
fn composition_weight(l: u32, m: u32) -> f64 {
    fn rec(rest: u32, parts: u32, denom: f64, fact: &[f64]) -> f64 {
        if parts == 0 {
            return if rest == 0 { 1.0 / denom } else { 0.0 };
        }
        (1..=rest.saturating_sub(parts - 1))
            .map(|nu| rec(rest - nu, parts - 1, denom * fact[nu as usize], fact))
            .sum()
    }
    let fact: Vec<f64> = (0..=l)
        .scan(1.0, |f, i| {
            if i > 0 {
                *f *= i as f64;
            }
            Some(*f)
        })
        .collect();
    fact[l as usize] * rec(l, m, 1.0, &fact)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_specialized_forms() {
        let s = Spectrum::from_lambdas(3, 0.3, vec![0.9, 0.4, 0.05]).unwrap();
        let t: Vec<f64> = (1..=3).map(|m| trace_power(&s, m)).collect();
        let k = cumulants(&s, 3).unwrap();
        assert!((k[0] - 2.0 * t[0]).abs() < 1e-14);
        assert!((k[1] - 4.0 * (t[0] - t[1])).abs() < 1e-14);
        assert!((k[2] - 8.0 * (t[0] - 3.0 * t[1] + 2.0 * t[2])).abs() < 1e-13);
    }

    #[test]
    fn composition_counts() {
        // m! S(l, m)
        assert_eq!(composition_weight(3, 1), 1.0);
        assert_eq!(composition_weight(3, 2), 6.0);
        assert_eq!(composition_weight(3, 3), 6.0);
    }

    #[test]
    fn order_cap() {
        let s = Spectrum::from_lambdas(1, 0.0, vec![0.5]).unwrap();
        assert!(matches!(cumulant(&s, 4), Err(Error::Unsupported(_))));
        assert!(cumulant(&s, 0).is_err());
    }
}
