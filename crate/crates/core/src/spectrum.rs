//! Eigenvalues of the generating matrix and trace powers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genmatrix::{GeneratingMatrix, Route};
use crate::linalg::{gram_eigenvalues, tridiagonal_eigenvalues, tridiagonalize, Lu};
use crate::specfun::{log_gamma, CompensatedSum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenMethod {
    /// Gram factor when available, tridiagonal QL otherwise.
    Auto,
    /// One-sided Jacobi on the quadrature factor `B` (`M = B^T B`).
    GramJacobi,
    /// Householder tridiagonalisation followed by implicit QL.
    Tridiagonal,
}

#[derive(Clone, Copy, Debug)]
pub struct EigenOptions {
    pub method: EigenMethod,
    /// Run inverse iteration on the extreme eigenpairs and check residuals.
    pub verify_residuals: bool,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions {
            method: EigenMethod::Auto,
            verify_residuals: true,
        }
    }
}

/// Residual bound for the spot check, relative to `||M||_F`.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub n: usize,
    pub tau: f64,
    /// Eigenvalues, descending.
    pub lambdas: Vec<f64>,
}

impl Spectrum {
    /// Wraps precomputed eigenvalues (for example from the cache), sorting
    /// them in descending order.
    pub fn from_lambdas(n: usize, tau: f64, mut lambdas: Vec<f64>) -> Result<Spectrum> {
        if lambdas.len() != n {
            return Err(Error::Argument(format!(
                "expected {n} eigenvalues, got {}",
                lambdas.len()
            )));
        }
        if lambdas.iter().any(|l| !l.is_finite()) {
            return Err(Error::Invariant("non-finite eigenvalue".into()));
        }
        lambdas.sort_by(|a, b| b.total_cmp(a));
        Ok(Spectrum { n, tau, lambdas })
    }

    /// Smallest eigenvalue.
    pub fn min(&self) -> f64 {
        *self.lambdas.last().expect("n >= 1")
    }

    /// Largest eigenvalue.
    pub fn max(&self) -> f64 {
        self.lambdas[0]
    }
}

pub fn eigendecompose(m: &GeneratingMatrix) -> Result<Spectrum> {
    eigendecompose_with(m, &EigenOptions::default())
}

pub fn eigendecompose_with(m: &GeneratingMatrix, opts: &EigenOptions) -> Result<Spectrum> {
    let n = m.n();
    let mut lambdas = if m.route() == Route::Identity {
        vec![1.0; n]
    } else {
        match (opts.method, m.gram_factor()) {
            (EigenMethod::Auto | EigenMethod::GramJacobi, Some(f)) => {
                let (rows, cols, mut data) = f.clone().into_columns();
                gram_eigenvalues(&mut data, rows, cols)?
            }
            (EigenMethod::GramJacobi, None) => {
                return Err(Error::Unsupported(
                    "no quadrature factor stored for this matrix".into(),
                ))
            }
            _ => {
                let mut dense = m.to_dense();
                let (d, e) = tridiagonalize(&mut dense, n);
                tridiagonal_eigenvalues(&d, &e)?
            }
        }
    };
    lambdas.sort_by(|a, b| b.total_cmp(a));
    let spectrum = Spectrum {
        n,
        tau: m.tau(),
        lambdas,
    };
    let trace = m.trace();
    let sum = trace_power(&spectrum, 1);
    if (sum - trace).abs() > 1e-10 * n as f64 * trace.abs().max(1.0) {
        return Err(Error::Invariant(format!(
            "eigenvalue sum {sum} does not match the trace {trace}"
        )));
    }
    if opts.verify_residuals && m.route() != Route::Identity {
        for lambda in [spectrum.max(), spectrum.min()] {
            let r = relative_residual(m, lambda)?;
            if r > RESIDUAL_TOLERANCE {
                return Err(Error::Numerical(format!(
                    "eigenpair residual {r:e} for lambda = {lambda:e} exceeds {RESIDUAL_TOLERANCE:e}"
                )));
            }
        }
    }
    Ok(spectrum)
}

/// `||M v - lambda v|| / ||M||_F` for the vector found by three steps of
/// inverse iteration at `lambda`.
pub fn relative_residual(m: &GeneratingMatrix, lambda: f64) -> Result<f64> {
    let n = m.n();
    let dense = m.to_dense();
    let norm = m.frobenius_norm();
    let shift = lambda + 64.0 * f64::EPSILON * norm;
    let mut shifted = dense.clone();
    for i in 0..n {
        shifted[i * n + i] -= shift;
    }
    let lu = Lu::factor(shifted, n)?;
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * (i % 7) as f64).collect();
    for _ in 0..3 {
        lu.solve(&mut v);
        let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(len.is_finite() && len > 0.0) {
            return Err(Error::Numerical("inverse iteration broke down".into()));
        }
        v.iter_mut().for_each(|x| *x /= len);
    }
    let mut r2 = 0.0;
    for i in 0..n {
        let row = &dense[i * n..(i + 1) * n];
        let mv: f64 = row.iter().zip(&v).map(|(a, b)| a * b).sum();
        let d = mv - lambda * v[i];
        r2 += d * d;
    }
    Ok(r2.sqrt() / norm)
}

/// `sum_i lambda_i^m`, accumulated from the smallest eigenvalue up.
pub fn trace_power(s: &Spectrum, m: u32) -> f64 {
    let mut acc = CompensatedSum::new();
    for &l in s.lambdas.iter().rev() {
        acc.add(l.powi(m as i32));
    }
    acc.value()
}

/// Upper limits on the combinatorial trace formula.
pub const ORACLE_MAX_N: usize = 12;
pub const ORACLE_MAX_M: u32 = 3;

/// `Tr M^m` from the finite multi-sum over `j_1, ..., j_m` in `0..n`
/// (cyclic, `j_0 = j_m`).
pub fn trace_power_oracle(n: usize, tau: f64, m: u32) -> Result<f64> {
    if n == 0 || m == 0 {
        return Err(Error::Argument("trace oracle needs n, m >= 1".into()));
    }
    if n > ORACLE_MAX_N || m > ORACLE_MAX_M {
        return Err(Error::Budget(format!(
            "trace oracle limited to n <= {ORACLE_MAX_N}, m <= {ORACLE_MAX_M}; got n = {n}, m = {m}"
        )));
    }
    if !(tau > -1.0 && tau <= 1.0) {
        return Err(Error::Argument(format!("tau must lie in (-1, 1], got {tau}")));
    }
    let ln_fact = |k: usize| log_gamma(k as f64 + 1.0);
    let lf: Vec<f64> = (0..=2 * n).map(ln_fact).collect::<Result<_>>()?;
    let ln_half_plus = ((1.0 + tau) / 2.0).ln();
    // ln of ((1-tau)/(1+tau))^{2l} / 2^{2l}; l = 0 contributes 0 even at tau = 1
    let ratio_ln = |l: usize| -> f64 {
        if l == 0 {
            0.0
        } else {
            2.0 * l as f64 * (((1.0 - tau) / (1.0 + tau)).ln() - std::f64::consts::LN_2)
        }
    };

    // link(prev, cur) = sum_l ratio^l (2 cur)! / (l! (l + cur - prev)! (2 prev - 2l)!)
    let link = |prev: usize, cur: usize| -> f64 {
        let mut acc = CompensatedSum::new();
        for l in 0..=prev {
            if l + cur < prev {
                continue;
            }
            if tau == 1.0 && l > 0 {
                break;
            }
            let ln_term = ratio_ln(l) + lf[2 * cur] - lf[l] - lf[l + cur - prev] - lf[2 * prev - 2 * l];
            acc.add(ln_term.exp());
        }
        acc.value()
    };
    let mut links = vec![0.0; n * n];
    for p in 0..n {
        for c in 0..n {
            links[p * n + c] = link(p, c);
        }
    }

    let m = m as usize;
    let mut acc = CompensatedSum::new();
    let mut idx = vec![0usize; m];
    loop {
        let sum_j: usize = idx.iter().sum();
        let mut prod = 1.0;
        for k in 0..m {
            let prev = idx[(k + m - 1) % m];
            prod *= links[prev * n + idx[k]];
            if prod == 0.0 {
                break;
            }
        }
        if prod != 0.0 {
            let ln_pref = ln_half_plus * (m as f64 / 2.0 + 2.0 * sum_j as f64);
            acc.add(prod * ln_pref.exp());
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == m {
                return Ok(acc.value());
            }
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genmatrix::build;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    #[test]
    fn one_by_one() {
        for tau in [0.0, 0.5] {
            let s = eigendecompose(&build(1, tau).unwrap()).unwrap();
            assert!((s.lambdas[0] - (2.0 * (1.0 + tau)).sqrt() / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn identity_spectrum() {
        let s = eigendecompose(&build(4, 1.0).unwrap()).unwrap();
        assert_eq!(s.lambdas, vec![1.0; 4]);
        assert_eq!(trace_power(&s, 3), 4.0);
    }

    #[test]
    fn two_by_two_characteristic_polynomial() {
        let s = eigendecompose(&build(2, 0.0).unwrap()).unwrap();
        let tr = 11.0 * SQRT2 / 16.0;
        let det = SQRT2 / 2.0 * 3.0 * SQRT2 / 16.0 - 1.0 / 16.0;
        let disc = (tr * tr - 4.0 * det).sqrt();
        assert!((s.lambdas[0] - (tr + disc) / 2.0).abs() < 1e-15);
        assert!((s.lambdas[1] - (tr - disc) / 2.0).abs() < 1e-15);
        assert!((trace_power(&s, 1) - tr).abs() < 1e-15);
    }

    #[test]
    fn methods_agree() {
        let m = build(40, 0.3).unwrap();
        let a = eigendecompose_with(
            &m,
            &EigenOptions { method: EigenMethod::GramJacobi, verify_residuals: true },
        )
        .unwrap();
        let b = eigendecompose_with(
            &m,
            &EigenOptions { method: EigenMethod::Tridiagonal, verify_residuals: true },
        )
        .unwrap();
        for (x, y) in a.lambdas.iter().zip(&b.lambdas) {
            assert!((x - y).abs() < 1e-13);
        }
        assert!(a.min() > 0.0);
    }

    #[test]
    fn oracle_small_cases() {
        let v = trace_power_oracle(3, 1.0, 2).unwrap();
        assert!((v - 3.0).abs() < 1e-14);
        let v = trace_power_oracle(2, 0.0, 1).unwrap();
        assert!((v - 11.0 * SQRT2 / 16.0).abs() < 1e-14);
        assert!(matches!(trace_power_oracle(13, 0.5, 1), Err(Error::Budget(_))));
        assert!(matches!(trace_power_oracle(4, 0.5, 4), Err(Error::Budget(_))));
    }

    #[test]
    fn oracle_matches_eigenvalues() {
        let s = eigendecompose(&build(8, 0.5).unwrap()).unwrap();
        let a = trace_power(&s, 3);
        let b = trace_power_oracle(8, 0.5, 3).unwrap();
        assert!(((a - b) / b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn from_lambdas_sorts() {
        let s = Spectrum::from_lambdas(3, 0.5, vec![0.1, 0.7, 0.3]).unwrap();
        assert_eq!(s.lambdas, vec![0.7, 0.3, 0.1]);
        assert!(Spectrum::from_lambdas(2, 0.5, vec![0.1]).is_err());
    }
}
