//! Numerical checks of the closed-form identities the library relies on.

use std::f64::consts::PI;

use serde::Serialize;

use crate::asymptotics::{c_alpha, combinatorial_identity_check, d_alpha, CMethod, DMethod};
use crate::error::Result;
use crate::genmatrix::build;
use crate::probabilities::{distribution, prob_zero_forrester_nagao};
use crate::specfun::{mehler_even_closed, mehler_even_partial, quadrature, QuadratureKind};
use crate::spectrum::{eigendecompose, trace_power, Spectrum};

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub max_error: f64,
    pub tolerance: f64,
}

impl IdentityCheck {
    fn from_errors(name: &str, tolerance: f64, errors: &[f64]) -> IdentityCheck {
        let max_error = errors.iter().copied().fold(0.0, f64::max);
        IdentityCheck {
            name: name.to_string(),
            passed: errors.iter().all(|e| *e <= tolerance),
            cases: errors.len(),
            max_error,
            tolerance,
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

/// Cramer's constant in `|H_n(x)| <= K 2^{n/2} sqrt(n!) e^{x^2/2}`.
const CRAMER: f64 = 1.086435;

/// Smallest number of terms whose Mehler tail is provably below
/// `target`: the `j`-th term is at most `K^2 t^{2j} e^{(x^2+y^2)/2}`.
pub fn mehler_terms(t: f64, x: f64, y: f64, target: f64) -> usize {
    let lead = CRAMER * CRAMER * (0.5 * (x * x + y * y)).exp() / (1.0 - t * t);
    let j = ((target / lead).ln() / (2.0 * t.ln())).ceil();
    (j.max(1.0) as usize).max(1)
}

pub fn mehler_check() -> IdentityCheck {
    let mut errs = Vec::new();
    for &t in &[0.1, 0.3, 0.5, 0.7, 0.9] {
        for &(x, y) in &[(0.0, 0.0), (0.5, -0.3), (1.0, 1.2), (-2.0, 0.7), (2.5, 2.5)] {
            let closed = mehler_even_closed(t, x, y);
            let j = mehler_terms(t, x, y, 1e-13 * closed);
            errs.push(rel(mehler_even_partial(t, x, y, j), closed));
        }
    }
    IdentityCheck::from_errors("mehler_even_sum", 1e-9, &errs)
}

/// `k^{-1/2} (pi/2)^{(k-1)/2} e^{(k-1)(x0^2+xk^2)/(2k)} cosh(x0 xk / k)`.
pub fn gaussian_cosh_closed(k: usize, x0: f64, xk: f64) -> f64 {
    let kf = k as f64;
    kf.powf(-0.5)
        * (0.5 * PI).powf(0.5 * (kf - 1.0))
        * ((kf - 1.0) * (x0 * x0 + xk * xk) / (2.0 * kf)).exp()
        * (x0 * xk / kf).cosh()
}

/// Gauss-Hermite product rule for
/// `int_{R_+^{k-1}} e^{-sum x_j^2} prod_{j=1}^{k} cosh(x_{j-1} x_j) dx`,
/// `k` in `{2, 3}`. The integrand is even in each variable, so the
/// positive orthant carries `2^{1-k}` of the full integral.
pub fn gaussian_cosh_quadrature(k: usize, x0: f64, xk: f64, order: usize) -> Result<f64> {
    let r = quadrature(QuadratureKind::GaussHermite, order)?;
    let v = match k {
        2 => r.integrate(|a| (x0 * a).cosh() * (a * xk).cosh()) / 2.0,
        3 => {
            let mut acc = 0.0;
            for (&a, &wa) in r.nodes.iter().zip(&r.weights) {
                let inner = r.integrate(|b| (a * b).cosh() * (b * xk).cosh());
                acc += wa * (x0 * a).cosh() * inner;
            }
            acc / 4.0
        }
        _ => {
            return Err(crate::Error::Unsupported(format!(
                "Gaussian-cosh quadrature implemented for k in {{2, 3}}, got {k}"
            )))
        }
    };
    Ok(v)
}

pub fn gaussian_cosh_check() -> Result<IdentityCheck> {
    let mut errs = Vec::new();
    for k in [2, 3] {
        for &(x0, xk) in &[(0.0, 0.0), (0.5, 1.0), (1.0, -0.7), (1.5, 1.5), (-2.0, 0.3)] {
            let q = gaussian_cosh_quadrature(k, x0, xk, 120)?;
            errs.push(rel(q, gaussian_cosh_closed(k, x0, xk)));
        }
    }
    Ok(IdentityCheck::from_errors("gaussian_cosh_product", 1e-8, &errs))
}

pub fn combinatorial_check() -> Result<IdentityCheck> {
    let mut errs = Vec::new();
    for m in 1..=4 {
        for k in 0..=6 {
            let c = combinatorial_identity_check(m, k)?;
            errs.push(if c.holds() { 0.0 } else { 1.0 });
        }
    }
    Ok(IdentityCheck::from_errors("combinatorial_binomial", 0.0, &errs))
}

pub fn c_representations_check() -> Result<IdentityCheck> {
    let mut errs = Vec::new();
    for i in 0..=40 {
        let a = 0.05 * i as f64;
        let b = c_alpha(a, CMethod::Bessel)?;
        errs.push((b - c_alpha(a, CMethod::Series)?).abs());
        errs.push((b - c_alpha(a, CMethod::ErfIntegral)?).abs());
    }
    for i in 0..=60 {
        let a = 0.5 * i as f64;
        errs.push((c_alpha(a, CMethod::Bessel)? - c_alpha(a, CMethod::ErfIntegral)?).abs());
    }
    Ok(IdentityCheck::from_errors("c_alpha_representations", 1e-10, &errs))
}

pub fn d_representations_check() -> Result<IdentityCheck> {
    let mut errs = Vec::new();
    for a in [0.5, 1.0, 2.0, 4.0] {
        errs.push((d_alpha(a, DMethod::Series)? - d_alpha(a, DMethod::Integral)?).abs());
    }
    Ok(IdentityCheck::from_errors("d_alpha_representations", 1e-8, &errs))
}

/// `p_{2,0}` and `p_{4,0}`: closed forms against the eigenvalue route and
/// the alternative determinant.
pub fn fn_oracle_check() -> Result<IdentityCheck> {
    let mut errs = Vec::new();
    for tau in [-0.5f64, 0.0, 0.25, 0.5, 0.9] {
        let s2 = (2.0 * (1.0 + tau)).sqrt();
        let p2 = 1.0 - s2 / 2.0;
        let p4 = (9.0 + 3.0 * tau + 3.0 * tau * tau + tau.powi(3)) / 8.0
            - s2 * (11.0 + 2.0 * tau + 3.0 * tau * tau) / 16.0;
        for (n, want) in [(1, p2), (2, p4)] {
            let d = distribution(&eigendecompose(&build(n, tau)?)?)?;
            errs.push(rel(d.prob(0), want));
            errs.push(rel(prob_zero_forrester_nagao(n, tau)?, want));
        }
    }
    Ok(IdentityCheck::from_errors("small_n_probability_oracles", 1e-10, &errs))
}

/// Right-hand side of the trace-power inequality, valid for
/// `m >= (1+tau)/(1-tau)`.
pub fn trace_inequality_bound(n: usize, tau: f64, m: u32) -> f64 {
    let r = (1.0 + tau) / (1.0 - tau);
    let (nf, mf) = (n as f64, m as f64);
    0.25 + r.sqrt() * (nf / (PI * mf)).sqrt() * (1.0 + 2.0 / nf)
        + 0.125 / r * (mf / (PI * nf)).sqrt() * (1.0 + 1.0 / nf)
}

/// Checks `Tr(M^m) <= bound` for every `m` from `ceil((1+tau)/(1-tau))` to
/// `50 n`; the reported error is the largest excess (0 when it holds).
pub fn trace_inequality_check(s: &Spectrum) -> IdentityCheck {
    let m0 = ((1.0 + s.tau) / (1.0 - s.tau)).ceil().max(1.0) as u32;
    let mut errs = Vec::new();
    for m in m0..=(50 * s.n) as u32 {
        let excess = trace_power(s, m) - trace_inequality_bound(s.n, s.tau, m);
        errs.push(excess.max(0.0));
    }
    IdentityCheck::from_errors(
        &format!("trace_power_inequality(n={}, tau={})", s.n, s.tau),
        0.0,
        &errs,
    )
}

/// Every check above, trace inequality on a small grid included.
pub fn run_all() -> Result<Vec<IdentityCheck>> {
    let mut out = vec![
        mehler_check(),
        gaussian_cosh_check()?,
        combinatorial_check()?,
        c_representations_check()?,
        d_representations_check()?,
        fn_oracle_check()?,
    ];
    for n in [4, 16, 64] {
        for tau in [0.0, 0.5, 0.9] {
            out.push(trace_inequality_check(&eigendecompose(&build(n, tau)?)?));
        }
    }
    Ok(out)
}
