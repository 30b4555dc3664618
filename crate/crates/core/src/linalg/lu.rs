//! Dense LU factorisation with partial pivoting.

use crate::error::{Error, Result};

pub struct Lu {
    n: usize,
    a: Vec<f64>,
    pivots: Vec<usize>,
}

impl Lu {
    /// Factors the row-major `n x n` matrix `a`. Exactly singular pivots are
    /// replaced by a tiny value, which is what inverse iteration wants.
    pub fn factor(mut a: Vec<f64>, n: usize) -> Result<Lu> {
        if a.len() != n * n {
            return Err(Error::Argument("LU needs a square matrix".into()));
        }
        let floor = f64::EPSILON * a.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
        let mut pivots = vec![0; n];
        for k in 0..n {
            let mut p = k;
            for i in k + 1..n {
                if a[i * n + k].abs() > a[p * n + k].abs() {
                    p = i;
                }
            }
            pivots[k] = p;
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
            }
            if a[k * n + k].abs() < floor {
                a[k * n + k] = floor;
            }
            let pivot = a[k * n + k];
            let (top, bottom) = a.split_at_mut((k + 1) * n);
            let row_k = &top[k * n..];
            for i in 0..n - k - 1 {
                let row = &mut bottom[i * n..(i + 1) * n];
                let f = row[k] / pivot;
                row[k] = f;
                if f != 0.0 {
                    for j in k + 1..n {
                        row[j] -= f * row_k[j];
                    }
                }
            }
        }
        Ok(Lu { n, a, pivots })
    }

    pub fn solve(&self, b: &mut [f64]) {
        let n = self.n;
        for k in 0..n {
            b.swap(k, self.pivots[k]);
        }
        for i in 0..n {
            let mut s = b[i];
            for j in 0..i {
                s -= self.a[i * n + j] * b[j];
            }
            b[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in i + 1..n {
                s -= self.a[i * n + j] * b[j];
            }
            b[i] = s / self.a[i * n + i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let lu = Lu::factor(vec![0.0, 2.0, 1.0, 1.0, 1.0, 0.0, 3.0, 0.0, 1.0], 3).unwrap();
        let mut b = vec![3.0, 2.0, 4.0];
        lu.solve(&mut b);
        for (x, y) in b.iter().zip([1.0, 1.0, 1.0]) {
            assert!((x - y).abs() < 1e-14);
        }
    }
}
