//! The generating matrix `M_n(tau)` and its kernel.
//!
//! `M(j,k) = (2 pi)^{-1/2} int e^{-x^2/(1+tau)} P_{2j-2}(x) P_{2k-2}(x) dx`
//! with `P_k = C_k / sqrt(k!)` built from the variance-`tau` Hermite family.
//! The primary route evaluates the integral with a Gauss-Hermite rule after
//! substituting `x = sqrt(1+tau) t`; that yields a factor `B` with
//! `M = B^T B`, which the spectrum solver can use directly. The second
//! route is a terminating hypergeometric sum and serves as a cross-check.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{
    ldexp, log_gamma, quadrature, CompensatedSum, DoubleDouble, NormalizedHermite, QuadratureKind, ScaledValue,
};

/// Default upper limit on `n`.
pub const DEFAULT_MAX_N: usize = 5000;

/// Largest `n` for which the quadrature factor is kept alongside the matrix.
pub const FACTOR_KEEP_LIMIT: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Quadrature,
    Hypergeometric,
    Identity,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::Quadrature => "quadrature",
            Route::Hypergeometric => "hypergeometric",
            Route::Identity => "identity",
        }
    }
}

/// Which entries of a quadrature build are compared with the
/// hypergeometric sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossCheck {
    /// Every entry.
    Full,
    /// Entries with `j, k <= size`.
    LeadingBlock(usize),
    Off,
}

/// Agreement required between the two routes: `|a - b| <= relative * |b|`,
/// or `|a - b| <= absolute` when `|b| < small_entry`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub relative: f64,
    pub absolute: f64,
    pub small_entry: f64,
}

impl Tolerance {
    pub const DEFAULT: Tolerance = Tolerance {
        relative: 1e-9,
        absolute: 1e-12,
        small_entry: 1e-3,
    };
    pub const STRICT: Tolerance = Tolerance {
        relative: 1e-11,
        absolute: 1e-14,
        small_entry: 1e-3,
    };

    pub fn accepts(&self, value: f64, reference: f64) -> bool {
        let diff = (value - reference).abs();
        if reference.abs() < self.small_entry {
            diff <= self.absolute
        } else {
            diff <= self.relative * reference.abs()
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    pub cross_check: CrossCheck,
    pub tolerance: Tolerance,
    pub max_n: usize,
}

/// Full comparison up to this `n`, leading block beyond.
pub const FULL_CHECK_LIMIT: usize = 64;

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            cross_check: CrossCheck::LeadingBlock(FULL_CHECK_LIMIT),
            tolerance: Tolerance::DEFAULT,
            max_n: DEFAULT_MAX_N,
        }
    }
}

/// Quadrature factor: `M = B^T B` with `B` stored column by column.
#[derive(Clone, Debug)]
pub struct GramFactor {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl GramFactor {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Column `j` (0-based).
    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn into_columns(self) -> (usize, usize, Vec<f64>) {
        (self.rows, self.cols, self.data)
    }
}

/// Symmetric `n x n` generating matrix, lower triangle packed by rows.
#[derive(Clone, Debug)]
pub struct GeneratingMatrix {
    n: usize,
    tau: f64,
    packed: Vec<f64>,
    route: Route,
    factor: Option<GramFactor>,
}

#[inline]
fn packed_index(j: usize, k: usize) -> usize {
    let (a, b) = if j >= k { (j, k) } else { (k, j) };
    a * (a + 1) / 2 + b
}

impl GeneratingMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn route(&self) -> Route {
        self.route
    }

    /// Entry `(j, k)`, 1-based. Panics when out of range.
    pub fn entry(&self, j: usize, k: usize) -> f64 {
        assert!(j >= 1 && k >= 1 && j <= self.n && k <= self.n, "entry ({j},{k}) out of range");
        self.packed[packed_index(j - 1, k - 1)]
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for j in 0..n {
            for k in 0..=j {
                let v = self.packed[packed_index(j, k)];
                out[j * n + k] = v;
                out[k * n + j] = v;
            }
        }
        out
    }

    /// Rows as nested vectors.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        let n = self.n;
        let dense = self.to_dense();
        dense.chunks(n.max(1)).map(|r| r.to_vec()).take(n).collect()
    }

    pub fn trace(&self) -> f64 {
        let mut acc = CompensatedSum::new();
        for j in 0..self.n {
            acc.add(self.packed[packed_index(j, j)]);
        }
        acc.value()
    }

    /// Quadrature factor, kept for `n <= FACTOR_KEEP_LIMIT`.
    pub fn gram_factor(&self) -> Option<&GramFactor> {
        self.factor.as_ref()
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        let mut acc = CompensatedSum::new();
        for j in 0..self.n {
            for k in 0..=j {
                let v = self.packed[packed_index(j, k)];
                acc.add(if j == k { v * v } else { 2.0 * v * v });
            }
        }
        acc.value().sqrt()
    }
}

fn check_params(n: usize, tau: f64, max_n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Argument("n must be at least 1".into()));
    }
    if n > max_n {
        return Err(Error::Config(format!("n = {n} exceeds the configured maximum {max_n}")));
    }
    if !(tau > -1.0 && tau <= 1.0) {
        return Err(Error::Argument(format!("tau must lie in (-1, 1], got {tau}")));
    }
    Ok(())
}

/// `M(j,k)` from the terminating hypergeometric sum, `j, k >= 1`,
/// `tau` in `(-1, 1)`.
pub fn entry_hypergeometric(j: usize, k: usize, tau: f64) -> Result<f64> {
    if j < 1 || k < 1 {
        return Err(Error::Argument(format!("entry indices must be >= 1, got ({j}, {k})")));
    }
    if !(tau > -1.0 && tau < 1.0) {
        return Err(Error::Argument(format!(
            "hypergeometric entries need tau in (-1, 1), got {tau}"
        )));
    }
    let (j, k) = if j <= k { (j, k) } else { (k, j) };
    let (jf, kf) = (j as f64, k as f64);

    // 2F1(a, 2-2j; c; tau) after the Pfaff transformation: 2j-1 terms
    let a = kf - jf + 0.5;
    let b = 2.0 - 2.0 * jf;
    let c = 2.5 - jf - kf;
    // the terms alternate for tau < 0 (and partly for tau > 0), so both the
    // term recurrence and the sum run in double-double arithmetic
    let mut acc = DoubleDouble::ONE;
    let mut term = DoubleDouble::ONE;
    for s in 0..(2 * j - 2) {
        let s = s as f64;
        term = term
            .mul_f64(a + s)
            .mul_f64(b + s)
            .mul_f64(tau)
            .div_f64(c + s)
            .div_f64(s + 1.0);
        acc = acc.add(term);
    }
    let series = acc.to_f64();

    let log_prefactor = log_gamma(jf + kf - 1.5)?
        - 0.5 * (log_gamma(2.0 * jf - 1.0)? + log_gamma(2.0 * kf - 1.0)?)
        + 0.5 * (1.0 + tau).ln()
        + (kf - jf) * (1.0 - tau).ln()
        - 0.5 * (2.0 * std::f64::consts::PI).ln();
    Ok(ScaledValue::from_ln(log_prefactor).to_f64() * series)
}

/// Builds `M_n(tau)` with default options.
pub fn build(n: usize, tau: f64) -> Result<GeneratingMatrix> {
    build_with(n, tau, &BuildOptions::default())
}

/// Builds `M_n(tau)`: identity at `tau = 1`, quadrature otherwise,
/// cross-checked against the hypergeometric sum per `opts`.
pub fn build_with(n: usize, tau: f64, opts: &BuildOptions) -> Result<GeneratingMatrix> {
    check_params(n, tau, opts.max_n)?;
    if tau == 1.0 {
        return Ok(identity(n));
    }
    let factor = gram_factor(n, tau)?;
    let packed = gram_product(&factor);
    let matrix = GeneratingMatrix {
        n,
        tau,
        packed,
        route: Route::Quadrature,
        factor: (n <= FACTOR_KEEP_LIMIT).then_some(factor),
    };
    let block = match opts.cross_check {
        CrossCheck::Full => n,
        CrossCheck::LeadingBlock(b) => b.min(n),
        CrossCheck::Off => 0,
    };
    if block > 0 {
        let report = compare_routes(&matrix, block)?;
        if let Some(w) = report.first_violation(&opts.tolerance) {
            return Err(Error::RouteDisagreement {
                j: w.j,
                k: w.k,
                quadrature: w.quadrature,
                hypergeometric: w.hypergeometric,
            });
        }
    }
    Ok(matrix)
}

/// Builds `M_n(tau)` entirely from the hypergeometric sum.
pub fn build_hypergeometric(n: usize, tau: f64) -> Result<GeneratingMatrix> {
    check_params(n, tau, DEFAULT_MAX_N)?;
    if tau == 1.0 {
        return Ok(identity(n));
    }
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|j| (0..=j).map(|k| entry_hypergeometric(j + 1, k + 1, tau)).collect())
        .collect::<Result<_>>()?;
    Ok(GeneratingMatrix {
        n,
        tau,
        packed: rows.into_iter().flatten().collect(),
        route: Route::Hypergeometric,
        factor: None,
    })
}

fn identity(n: usize) -> GeneratingMatrix {
    let mut packed = vec![0.0; n * (n + 1) / 2];
    for j in 0..n {
        packed[packed_index(j, j)] = 1.0;
    }
    GeneratingMatrix {
        n,
        tau: 1.0,
        packed,
        route: Route::Identity,
        factor: None,
    }
}

/// Quadrature order used for a matrix of size `n`.
pub fn quadrature_order(n: usize) -> usize {
    2 * n + 8
}

/// `B[q, j] = sqrt(c w_q) P_{2j}(x_q)`, `x_q = sqrt(1+tau) t_q`,
/// `c = sqrt(1+tau) / sqrt(2 pi)`.
fn gram_factor(n: usize, tau: f64) -> Result<GramFactor> {
    let q = quadrature_order(n);
    let rule = quadrature(QuadratureKind::GaussHermite, q)?;
    let s = (1.0 + tau).sqrt();
    let log_c = s.ln() - 0.5 * (2.0 * std::f64::consts::PI).ln();

    // node-major evaluation, then transpose into columns
    let by_node: Vec<Vec<f64>> = rule
        .nodes
        .par_iter()
        .zip(rule.log_weights.par_iter())
        .map(|(&t, &lw)| {
            let scale = ScaledValue::from_ln(0.5 * (log_c + lw));
            let mut h = NormalizedHermite::new(tau, s * t);
            let mut row = Vec::with_capacity(n);
            for _ in 0..n {
                debug_assert!(h.degree().is_multiple_of(2));
                let (m, e) = h.parts();
                row.push(ldexp(m * scale.mantissa(), e + scale.exponent()));
                h.step();
                h.step();
            }
            row
        })
        .collect();

    let mut data = vec![0.0; q * n];
    for (qi, row) in by_node.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            data[j * q + qi] = v;
        }
    }
    Ok(GramFactor { rows: q, cols: n, data })
}

/// Dot product with a fixed eight-lane accumulation order.
#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut lanes = [0.0f64; 8];
    let ca = a.chunks_exact(8);
    let cb = b.chunks_exact(8);
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for l in 0..8 {
            lanes[l] += x[l] * y[l];
        }
    }
    let mut tail = 0.0;
    for (x, y) in ra.iter().zip(rb) {
        tail += x * y;
    }
    ((lanes[0] + lanes[4]) + (lanes[1] + lanes[5]))
        + ((lanes[2] + lanes[6]) + (lanes[3] + lanes[7]))
        + tail
}

const TILE: usize = 4;

/// `B^T B`, lower triangle packed by rows. Entries are accumulated in
/// `4 x 4` register tiles, each entry as a single sequential sum over the
/// quadrature nodes, so the result does not depend on the thread count.
fn gram_product(f: &GramFactor) -> Vec<f64> {
    let n = f.cols;
    let blocks = n.div_ceil(TILE);
    let tiles: Vec<Vec<[[f64; TILE]; TILE]>> = (0..blocks)
        .into_par_iter()
        .map(|jb| (0..=jb).map(|kb| gram_tile(f, jb * TILE, kb * TILE)).collect())
        .collect();
    let mut packed = vec![0.0; n * (n + 1) / 2];
    for (jb, row) in tiles.iter().enumerate() {
        for (kb, tile) in row.iter().enumerate() {
            for a in 0..TILE {
                for b in 0..TILE {
                    let (j, k) = (jb * TILE + a, kb * TILE + b);
                    if j < n && k <= j {
                        packed[packed_index(j, k)] = tile[a][b];
                    }
                }
            }
        }
    }
    packed
}

fn gram_tile(f: &GramFactor, j0: usize, k0: usize) -> [[f64; TILE]; TILE] {
    let (q, n) = (f.rows, f.cols);
    let zero = vec![0.0; q];
    let col = |c: usize| if c < n { f.column(c) } else { &zero[..] };
    let a = [col(j0), col(j0 + 1), col(j0 + 2), col(j0 + 3)];
    let b = [col(k0), col(k0 + 1), col(k0 + 2), col(k0 + 3)];
    let mut acc = [[0.0f64; TILE]; TILE];
    for i in 0..q {
        let av = [a[0][i], a[1][i], a[2][i], a[3][i]];
        let bv = [b[0][i], b[1][i], b[2][i], b[3][i]];
        for x in 0..TILE {
            for y in 0..TILE {
                acc[x][y] += av[x] * bv[y];
            }
        }
    }
    acc
}

/// One entry where the two routes were compared.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EntryComparison {
    pub j: usize,
    pub k: usize,
    pub quadrature: f64,
    pub hypergeometric: f64,
}

impl EntryComparison {
    pub fn relative_error(&self) -> f64 {
        (self.quadrature - self.hypergeometric).abs() / self.hypergeometric.abs()
    }

    pub fn absolute_error(&self) -> f64 {
        (self.quadrature - self.hypergeometric).abs()
    }
}

/// Outcome of comparing the quadrature entries with the hypergeometric sum.
#[derive(Clone, Debug)]
pub struct RouteComparison {
    pub block: usize,
    pub entries: Vec<EntryComparison>,
}

impl RouteComparison {
    /// Largest relative discrepancy among entries with `|M| >= small_entry`.
    pub fn max_relative(&self, small_entry: f64) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.hypergeometric.abs() >= small_entry)
            .map(|e| e.relative_error())
            .fold(0.0, f64::max)
    }

    /// Largest absolute discrepancy among entries with `|M| < small_entry`.
    pub fn max_absolute_small(&self, small_entry: f64) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.hypergeometric.abs() < small_entry)
            .map(|e| e.absolute_error())
            .fold(0.0, f64::max)
    }

    /// Entry with the largest tolerance-normalised discrepancy, if any
    /// exceeds the tolerance.
    pub fn first_violation(&self, tol: &Tolerance) -> Option<EntryComparison> {
        let score = |e: &EntryComparison| {
            if e.hypergeometric.abs() < tol.small_entry {
                e.absolute_error() / tol.absolute
            } else {
                e.relative_error() / tol.relative
            }
        };
        self.entries
            .iter()
            .copied()
            .filter(|e| !tol.accepts(e.quadrature, e.hypergeometric))
            .max_by(|a, b| score(a).total_cmp(&score(b)))
    }
}

/// Compares the leading `block x block` entries of `m` with the
/// hypergeometric route.
pub fn compare_routes(m: &GeneratingMatrix, block: usize) -> Result<RouteComparison> {
    let block = block.min(m.n);
    let tau = m.tau;
    let entries: Vec<EntryComparison> = (1..=block)
        .into_par_iter()
        .map(|j| {
            (1..=j)
                .map(|k| {
                    Ok(EntryComparison {
                        j,
                        k,
                        quadrature: m.entry(j, k),
                        hypergeometric: entry_hypergeometric(j, k, tau)?,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(RouteComparison { block, entries })
}

/// `K_n(x, y) = (2 pi)^{-1/2} sum_{j<n} W_{2j}(x) W_{2j}(y)` with
/// `W_k = e^{-x^2/(2(1+tau))} C_k / sqrt(k!)`.
pub fn kernel(n: usize, tau: f64, x: f64, y: f64) -> f64 {
    let mut hx = NormalizedHermite::weighted(tau, x);
    let mut hy = NormalizedHermite::weighted(tau, y);
    let mut acc = ScaledValue::ZERO;
    for _ in 0..n {
        let a = hx.next().expect("unbounded");
        let b = hy.next().expect("unbounded");
        acc = acc + a * b;
        hx.step();
        hy.step();
    }
    acc.to_f64() / (2.0 * std::f64::consts::PI).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    #[test]
    fn small_closed_forms() {
        let m = build(2, 0.0).unwrap();
        assert!((m.entry(1, 1) - SQRT2 / 2.0).abs() < 1e-15);
        assert!((m.entry(1, 2) - 0.25).abs() < 1e-15);
        assert!((m.entry(2, 2) - 3.0 * SQRT2 / 16.0).abs() < 1e-15);
        let m = build(2, 0.5).unwrap();
        assert!((m.entry(1, 1) - 0.75f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn hypergeometric_closed_forms() {
        assert!((entry_hypergeometric(1, 1, 0.0).unwrap() - SQRT2 / 2.0).abs() < 1e-15);
        for tau in [-0.5, 0.0, 0.3, 0.9] {
            let want = (1.0 - tau) * (1.0f64 + tau).sqrt() / 4.0;
            let got = entry_hypergeometric(1, 2, tau).unwrap();
            assert!((got - want).abs() < 1e-15, "{tau}");
            let want = (2.0 * (1.0 + tau)).sqrt() * (3.0 + 2.0 * tau + 3.0 * tau * tau) / 16.0;
            let got = entry_hypergeometric(2, 2, tau).unwrap();
            assert!((got - want).abs() < 1e-15, "{tau}");
        }
        assert!((entry_hypergeometric(2, 2, 0.5).unwrap() - 0.5142025835).abs() < 1e-9);
        assert!(entry_hypergeometric(0, 1, 0.5).is_err());
    }

    #[test]
    fn identity_at_tau_one() {
        let m = build(3, 1.0).unwrap();
        assert_eq!(m.route(), Route::Identity);
        for j in 1..=3 {
            for k in 1..=3 {
                assert_eq!(m.entry(j, k), if j == k { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn tau_zero_gamma_ratio() {
        let m = build(30, 0.0).unwrap();
        for j in 1..=30 {
            for k in 1..=j {
                let (jf, kf) = (j as f64, k as f64);
                let want = (log_gamma(jf + kf - 1.5).unwrap()
                    - 0.5 * (log_gamma(2.0 * jf - 1.0).unwrap() + log_gamma(2.0 * kf - 1.0).unwrap()))
                .exp()
                    / (2.0 * std::f64::consts::PI).sqrt();
                assert!(((m.entry(j, k) - want) / want).abs() < 1e-12, "({j},{k})");
            }
        }
    }

    #[test]
    fn symmetric_storage() {
        let m = build(5, 0.3).unwrap();
        for j in 1..=5 {
            for k in 1..=5 {
                assert_eq!(m.entry(j, k).to_bits(), m.entry(k, j).to_bits());
            }
        }
    }

    #[test]
    fn parameter_checks() {
        assert!(matches!(build(0, 0.5), Err(Error::Argument(_))));
        assert!(matches!(build(2, 1.5), Err(Error::Argument(_))));
        assert!(matches!(build(2, -1.0), Err(Error::Argument(_))));
        let opts = BuildOptions { max_n: 4, ..Default::default() };
        assert!(matches!(build_with(5, 0.5, &opts), Err(Error::Config(_))));
    }

    #[test]
    fn kernel_values() {
        let v = kernel(1, 0.4, 0.0, 0.0);
        assert!((v - 1.0 / (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-15);
        for &(x, y) in &[(0.3, -1.2), (2.0, 0.5)] {
            let a = kernel(5, 0.6, x, y);
            assert_eq!(a, kernel(5, 0.6, y, x));
            assert!((a - kernel(5, 0.6, -x, -y)).abs() < 1e-15);
        }
    }

    #[test]
    fn gram_factor_reproduces_matrix() {
        let m = build(6, 0.25).unwrap();
        let f = m.gram_factor().unwrap();
        for j in 0..6 {
            for k in 0..6 {
                let d = dot(f.column(j), f.column(k));
                assert!((d - m.entry(j + 1, k + 1)).abs() < 1e-15);
            }
        }
    }
}
