//! Householder reduction of a dense symmetric matrix to tridiagonal form.

/// Reduces the symmetric matrix whose lower triangle is stored row-major in
/// `a` (`n x n`, upper part ignored and overwritten) to tridiagonal form.
/// Returns `(diagonal, sub_diagonal)`.
pub fn tridiagonalize(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(a.len(), n * n);
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n.saturating_sub(1)];
    if n == 0 {
        return (d, e);
    }
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(1) {
        d[k] = a[k * n + k];
        let m = n - k - 1;
        let off = k + 1;
        // column k below the diagonal, read from the lower triangle
        let mut scale = 0.0f64;
        for i in 0..m {
            v[i] = a[(off + i) * n + k];
            scale = scale.max(v[i].abs());
        }
        if scale == 0.0 {
            e[k] = 0.0;
            continue;
        }
        let mut norm2 = 0.0;
        for x in v[..m].iter_mut() {
            *x /= scale;
            norm2 += *x * *x;
        }
        let norm = norm2.sqrt();
        let alpha = if v[0] > 0.0 { -norm } else { norm };
        e[k] = alpha * scale;
        v[0] -= alpha;
        let vtv = norm2 - 2.0 * alpha * (v[0] + alpha) + alpha * alpha;
        if vtv == 0.0 {
            continue;
        }
        let beta = 2.0 / vtv;

        // p = beta * S v on the trailing lower triangle
        for x in p[..m].iter_mut() {
            *x = 0.0;
        }
        for i in 0..m {
            let row = &a[(off + i) * n + off..(off + i) * n + off + i];
            let vi = v[i];
            let mut acc = 0.0;
            for (j, &s) in row.iter().enumerate() {
                acc += s * v[j];
                p[j] += s * vi;
            }
            p[i] += acc + a[(off + i) * n + off + i] * vi;
        }
        let mut vtp = 0.0;
        for i in 0..m {
            p[i] *= beta;
            vtp += v[i] * p[i];
        }
        let kk = 0.5 * beta * vtp;
        for i in 0..m {
            p[i] -= kk * v[i];
        }
        // S -= v w^T + w v^T, lower triangle only
        for i in 0..m {
            let (vi, wi) = (v[i], p[i]);
            let row = &mut a[(off + i) * n + off..(off + i) * n + off + i + 1];
            for (j, s) in row.iter_mut().enumerate() {
                *s -= vi * p[j] + wi * v[j];
            }
        }
    }
    d[n - 1] = a[(n - 1) * n + n - 1];
    (d, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::tridiagonal_eigenvalues;

    #[test]
    fn preserves_eigenvalues() {
        // A = Q diag(1..n) Q^T with Q a product of two reflections
        let n = 6;
        let lam: Vec<f64> = (1..=n).map(|i| i as f64).collect();
        let u: Vec<f64> = (0..n).map(|i| ((i * 7 + 3) % 5) as f64 - 1.7).collect();
        let uu: f64 = u.iter().map(|x| x * x).sum();
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for (l, lv) in lam.iter().enumerate() {
                    let qi = (if i == l { 1.0 } else { 0.0 }) - 2.0 * u[i] * u[l] / uu;
                    let qj = (if j == l { 1.0 } else { 0.0 }) - 2.0 * u[j] * u[l] / uu;
                    s += qi * lv * qj;
                }
                a[i * n + j] = s;
            }
        }
        let (d, e) = tridiagonalize(&mut a, n);
        let ev = tridiagonal_eigenvalues(&d, &e).unwrap();
        for (x, y) in ev.iter().zip(&lam) {
            assert!((x - y).abs() < 1e-13, "{ev:?}");
        }
    }

    #[test]
    fn trivial_sizes() {
        let mut a = vec![4.0];
        assert_eq!(tridiagonalize(&mut a, 1), (vec![4.0], vec![]));
        let mut a = vec![1.0, 9.0, 2.0, 3.0];
        let (d, e) = tridiagonalize(&mut a, 2);
        assert_eq!(d, vec![1.0, 3.0]);
        assert_eq!(e[0].abs(), 2.0);
    }
}
