//! One-sided Jacobi orthogonalisation of the columns of a tall matrix.
//!
//! Applied to a factor `B` with `A = B^T B`, the squared column norms at
//! convergence are the eigenvalues of `A`. Working on `B` keeps the small
//! eigenvalues accurate to roughly `eps * ||B||^2` instead of
//! `eps * ||A||`.

use crate::error::{Error, Result};
use crate::genmatrix::dot;

const MAX_SWEEPS: usize = 80;

/// Squared singular values of the `rows x cols` column-major `b`, in
/// ascending order. `b` is overwritten.
pub fn gram_eigenvalues(b: &mut [f64], rows: usize, cols: usize) -> Result<Vec<f64>> {
    assert_eq!(b.len(), rows * cols);
    let tol = f64::EPSILON * (rows as f64).sqrt();
    let mut norms: Vec<f64> = (0..cols)
        .map(|j| dot(&b[j * rows..(j + 1) * rows], &b[j * rows..(j + 1) * rows]))
        .collect();
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..cols {
            for j in i + 1..cols {
                let (left, right) = b.split_at_mut(j * rows);
                let bi = &mut left[i * rows..(i + 1) * rows];
                let bj = &mut right[..rows];
                let (alpha, beta) = (norms[i], norms[j]);
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = dot(bi, bj);
                if gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for (x, y) in bi.iter_mut().zip(bj.iter_mut()) {
                    let (u, w) = (*x, *y);
                    *x = c * u - s * w;
                    *y = s * u + c * w;
                }
                norms[i] = dot(bi, bi);
                norms[j] = dot(bj, bj);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical(format!(
            "one-sided Jacobi did not converge in {MAX_SWEEPS} sweeps"
        )));
    }
    norms.sort_by(f64::total_cmp);
    Ok(norms)
}
