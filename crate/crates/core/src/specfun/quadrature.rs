//! Gauss-Hermite and Gauss-Legendre rules.
//!
//! Nodes are the eigenvalues of the Jacobi matrix of the orthonormal
//! recurrence, polished by Newton steps on `p_Q`. Weights come from the
//! Christoffel function `w = 1 / sum_{k<Q} p_k(t)^2`, accumulated with a
//! tracked exponent so the tiny outer Hermite weights keep full relative
//! precision in `log_weights` even where `weights` underflows.

use serde::{Deserialize, Serialize};

use super::scaled::ldexp;
use crate::error::{Error, Result};
use crate::linalg::tridiagonal_eigenvalues;

/// Largest supported number of nodes.
pub const MAX_ORDER: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureKind {
    /// Weight `e^{-t^2}` on the real line.
    GaussHermite,
    /// Unit weight on `[-1, 1]`.
    GaussLegendre,
}

impl QuadratureKind {
    /// Off-diagonal `beta_k` of the Jacobi matrix, `k >= 1`.
    fn beta(self, k: usize) -> f64 {
        let k = k as f64;
        match self {
            QuadratureKind::GaussHermite => (0.5 * k).sqrt(),
            QuadratureKind::GaussLegendre => k / (4.0 * k * k - 1.0).sqrt(),
        }
    }

    /// Total mass of the weight function.
    pub fn mass(self) -> f64 {
        match self {
            QuadratureKind::GaussHermite => std::f64::consts::PI.sqrt(),
            QuadratureKind::GaussLegendre => 2.0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub kind: QuadratureKind,
    /// Strictly increasing abscissae.
    pub nodes: Vec<f64>,
    /// Weights as doubles; the outermost Hermite weights underflow to zero
    /// for large orders.
    pub weights: Vec<f64>,
    /// Natural logarithms of the weights, always finite.
    pub log_weights: Vec<f64>,
    pub order: usize,
}

impl QuadratureRule {
    /// `sum_q w_q f(t_q)`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        let mut acc = super::sum::CompensatedSum::new();
        for (&t, &w) in self.nodes.iter().zip(&self.weights) {
            if w != 0.0 {
                acc.add(w * f(t));
            }
        }
        acc.value()
    }
}

/// Composite Gauss-Legendre: `rule` (a Legendre rule) applied on every
/// interval between consecutive `breakpoints`.
pub fn integrate_panels<F: FnMut(f64) -> f64>(
    rule: &QuadratureRule,
    breakpoints: &[f64],
    mut f: F,
) -> f64 {
    debug_assert_eq!(rule.kind, QuadratureKind::GaussLegendre);
    let mut acc = super::sum::CompensatedSum::new();
    for w in breakpoints.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        for (&t, &wt) in rule.nodes.iter().zip(&rule.weights) {
            acc.add(half * wt * f(mid + half * t));
        }
    }
    acc.value()
}

/// Breakpoints on `[0, end]` refined geometrically towards `0` below
/// `pivot` and growing geometrically from `pivot` up to `end`.
pub fn graded_breakpoints(pivot: f64, end: f64, inward: usize, outward_ratio: f64) -> Vec<f64> {
    let pivot = pivot.min(end);
    let mut pts = vec![0.0];
    for k in (1..=inward).rev() {
        pts.push(pivot * 0.25f64.powi(k as i32));
    }
    let mut x = pivot;
    while x < end {
        pts.push(x);
        x *= outward_ratio;
    }
    pts.push(end);
    pts
}

/// Builds the `q`-point rule of the given kind.
pub fn quadrature(kind: QuadratureKind, q: usize) -> Result<QuadratureRule> {
    if q == 0 || q > MAX_ORDER {
        return Err(Error::Argument(format!(
            "quadrature order must lie in 1..={MAX_ORDER}, got {q}"
        )));
    }
    let diag = vec![0.0; q];
    let off: Vec<f64> = (1..q).map(|k| kind.beta(k)).collect();
    let mut nodes = tridiagonal_eigenvalues(&diag, &off)?;

    for t in nodes.iter_mut() {
        for _ in 0..3 {
            let e = evaluate(kind, q, *t);
            if e.derivative == 0.0 {
                break;
            }
            let step = e.value / e.derivative;
            *t -= step;
            if step.abs() <= 1e-16 * t.abs().max(1e-300) {
                break;
            }
        }
    }

    // symmetric weight: mirror the half-rule
    for i in 0..q / 2 {
        let a = 0.5 * (nodes[q - 1 - i] - nodes[i]);
        nodes[i] = -a;
        nodes[q - 1 - i] = a;
    }
    if q % 2 == 1 {
        nodes[q / 2] = 0.0;
    }

    let mut log_weights: Vec<f64> = nodes
        .iter()
        .map(|&t| -evaluate(kind, q, t).log_christoffel_sum)
        .collect();
    for i in 0..q / 2 {
        let w = 0.5 * (log_weights[i] + log_weights[q - 1 - i]);
        log_weights[i] = w;
        log_weights[q - 1 - i] = w;
    }
    let weights = log_weights.iter().map(|l| l.exp()).collect();

    Ok(QuadratureRule {
        kind,
        nodes,
        weights,
        log_weights,
        order: q,
    })
}

struct Evaluation {
    /// `p_Q(t)` rescaled by a common power of two with `derivative`.
    value: f64,
    derivative: f64,
    /// `ln sum_{k<Q} p_k(t)^2`.
    log_christoffel_sum: f64,
}

const RESCALE_BITS: i64 = 300;

/// Orthonormal recurrence at `t` up to degree `q`.
fn evaluate(kind: QuadratureKind, q: usize, t: f64) -> Evaluation {
    let mut p_prev = 0.0;
    let mut p = 1.0 / kind.mass().sqrt();
    let mut d_prev = 0.0;
    let mut d = 0.0;
    let mut exponent: i64 = 0;
    // sum of squares, held at scale 2^{2 exponent}
    let mut sum = 0.0;
    let mut beta_k = 0.0;
    for k in 0..q {
        sum += p * p;
        let beta_next = kind.beta(k + 1);
        let p_next = (t * p - beta_k * p_prev) / beta_next;
        let d_next = (p + t * d - beta_k * d_prev) / beta_next;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
        beta_k = beta_next;
        let mag = p.abs().max(p_prev.abs()).max(d.abs());
        if mag > ldexp(1.0, RESCALE_BITS) {
            let f = ldexp(1.0, -RESCALE_BITS);
            p *= f;
            p_prev *= f;
            d *= f;
            d_prev *= f;
            sum *= f * f;
            exponent += RESCALE_BITS;
        }
    }
    Evaluation {
        value: p,
        derivative: d,
        log_christoffel_sum: sum.ln() + 2.0 * exponent as f64 * std::f64::consts::LN_2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::log_gamma;

    #[test]
    fn one_point_hermite() {
        let r = quadrature(QuadratureKind::GaussHermite, 1).unwrap();
        assert_eq!(r.nodes, vec![0.0]);
        assert!((r.weights[0] - std::f64::consts::PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn two_point_legendre() {
        let r = quadrature(QuadratureKind::GaussLegendre, 2).unwrap();
        let a = 1.0 / 3f64.sqrt();
        assert!((r.nodes[0] + a).abs() < 1e-15 && (r.nodes[1] - a).abs() < 1e-15);
        assert!((r.weights[0] - 1.0).abs() < 1e-14 && (r.weights[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn hermite_even_moments() {
        let q = 20;
        let r = quadrature(QuadratureKind::GaussHermite, q).unwrap();
        for p in 0..q {
            // int t^{2p} e^{-t^2} dt = Gamma(p + 1/2)
            let got = r.integrate(|t| t.powi(2 * p as i32));
            let want = log_gamma(p as f64 + 0.5).unwrap().exp();
            assert!(((got - want) / want).abs() < 1e-12, "p={p}: {got} vs {want}");
        }
    }

    #[test]
    fn masses_and_ordering() {
        for &q in &[1usize, 2, 3, 7, 64, 257, 1000] {
            for kind in [QuadratureKind::GaussHermite, QuadratureKind::GaussLegendre] {
                let r = quadrature(kind, q).unwrap();
                assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
                assert!(r.log_weights.iter().all(|l| l.is_finite()));
                let mass: f64 = r.weights.iter().sum();
                assert!((mass - kind.mass()).abs() < 1e-13, "{kind:?} {q}: {mass}");
            }
        }
    }

    #[test]
    fn legendre_polynomial_exactness() {
        let r = quadrature(QuadratureKind::GaussLegendre, 12).unwrap();
        for p in 0..12 {
            let got = r.integrate(|t| t.powi(2 * p));
            let want = 2.0 / (2 * p + 1) as f64;
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn large_hermite_rule_log_weights() {
        let r = quadrature(QuadratureKind::GaussHermite, 4008).unwrap();
        let last = *r.log_weights.last().unwrap();
        assert!(last < -700.0, "outer weight should be far below double range");
        // largest node of an order-Q rule sits just inside sqrt(2Q)
        let t = *r.nodes.last().unwrap();
        assert!(t < (2.0 * 4008.0f64).sqrt() && t > 0.9 * (2.0 * 4008.0f64).sqrt());
    }

    #[test]
    fn panels_handle_log_endpoint() {
        let rule = quadrature(QuadratureKind::GaussLegendre, 20).unwrap();
        let pts = graded_breakpoints(0.5, 1.0, 30, 1.5);
        let v = integrate_panels(&rule, &pts, |x| x.ln());
        assert!((v + 1.0).abs() < 1e-13, "{v}");
    }

    #[test]
    fn order_range() {
        assert!(quadrature(QuadratureKind::GaussHermite, 0).is_err());
        assert!(quadrature(QuadratureKind::GaussHermite, MAX_ORDER + 1).is_err());
    }
}
