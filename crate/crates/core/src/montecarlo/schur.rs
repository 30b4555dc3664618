//! Real-eigenvalue counting through the real Schur form.
//!
//! Householder reduction to upper Hessenberg form followed by Francis
//! double-shift QR. Only the active window is updated since the Schur
//! vectors and the off-window part of the quasi-triangular factor are not
//! needed.

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Relative tolerance on the discriminant of a converged 2x2 block.
pub const DISCRIMINANT_TOLERANCE: f64 = 1e-11;

/// Sweeps allowed per matrix dimension.
pub const SWEEPS_PER_DIM: usize = 30;

const EXCEPTIONAL_PERIOD: usize = 10;

/// Number of real eigenvalues of the row-major `n x n` matrix `a`.
pub fn count_real_eigenvalues(a: &[f64], n: usize) -> Result<usize> {
    if a.len() != n * n {
        return Err(Error::Argument(format!(
            "expected {} entries for a {n}x{n} matrix, got {}",
            n * n,
            a.len()
        )));
    }
    let mut work = a.to_vec();
    count_real_eigenvalues_in_place(&mut work, n).map_err(|e| match e {
        Error::Numerical(msg) => Error::Numerical(format!("{msg} (matrix {})", matrix_hash(a))),
        other => other,
    })
}

/// As [`count_real_eigenvalues`], overwriting `a`.
pub fn count_real_eigenvalues_in_place(a: &mut [f64], n: usize) -> Result<usize> {
    if n == 0 {
        return Ok(0);
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::Argument("matrix has non-finite entries".into()));
    }
    hessenberg(a, n);
    francis_count(a, n)
}

/// First 16 hex digits of the SHA-256 of the little-endian entries.
pub fn matrix_hash(a: &[f64]) -> String {
    let mut h = Sha256::new();
    for v in a {
        h.update(v.to_le_bytes());
    }
    h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// In-place Householder reduction to upper Hessenberg form. Entries below
/// the subdiagonal are left as garbage-free zeros.
pub fn hessenberg(a: &mut [f64], n: usize) {
    let mut v = vec![0.0; n];
    let mut w = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        let v = &mut v[..len];
        let mut norm2 = 0.0;
        for (i, vi) in v.iter_mut().enumerate() {
            *vi = a[(k + 1 + i) * n + k];
            norm2 += *vi * *vi;
        }
        let tail2 = norm2 - v[0] * v[0];
        if tail2 == 0.0 {
            continue;
        }
        let alpha = -norm2.sqrt().copysign(v[0]);
        v[0] -= alpha;
        let beta = 2.0 / (tail2 + v[0] * v[0]);

        // left: rows k+1.., columns k+1..
        let w = &mut w[k + 1..n];
        w.fill(0.0);
        for (i, &vi) in v.iter().enumerate() {
            let row = &a[(k + 1 + i) * n + k + 1..(k + 2 + i) * n];
            for (wj, &r) in w.iter_mut().zip(row) {
                *wj += vi * r;
            }
        }
        for (i, &vi) in v.iter().enumerate() {
            let f = beta * vi;
            let row = &mut a[(k + 1 + i) * n + k + 1..(k + 2 + i) * n];
            for (r, &wj) in row.iter_mut().zip(w.iter()) {
                *r -= f * wj;
            }
        }
        a[(k + 1) * n + k] = alpha;
        for i in k + 2..n {
            a[i * n + k] = 0.0;
        }

        // right: all rows, columns k+1..
        for i in 0..n {
            let row = &mut a[i * n + k + 1..(i + 1) * n];
            let s: f64 = row.iter().zip(v.iter()).map(|(r, vi)| r * vi).sum();
            let f = beta * s;
            for (r, &vi) in row.iter_mut().zip(v.iter()) {
                *r -= f * vi;
            }
        }
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix, counting the
/// real eigenvalues as blocks deflate.
fn francis_count(a: &mut [f64], n: usize) -> Result<usize> {
    let ix = |i: usize, j: usize| i * n + j;
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[ix(i, j)].abs();
        }
    }
    let max_sweeps = SWEEPS_PER_DIM * n;
    let mut sweeps = 0usize;
    let mut real = 0usize;
    let mut nn = n as isize - 1;
    while nn >= 0 {
        let e = nn as usize;
        let mut its = 0;
        loop {
            let mut l = e;
            while l >= 1 {
                let mut s = a[ix(l - 1, l - 1)].abs() + a[ix(l, l)].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[ix(l, l - 1)].abs() + s == s {
                    a[ix(l, l - 1)] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[ix(e, e)];
            if l == e {
                real += 1;
                nn -= 1;
                break;
            }
            let mut y = a[ix(e - 1, e - 1)];
            let mut w = a[ix(e, e - 1)] * a[ix(e - 1, e)];
            if l + 1 == e {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                if q >= -DISCRIMINANT_TOLERANCE * (p * p + w.abs()) {
                    real += 2;
                }
                nn -= 2;
                break;
            }
            if sweeps >= max_sweeps {
                return Err(Error::Numerical(format!(
                    "Francis QR did not converge within {max_sweeps} sweeps"
                )));
            }
            // exceptional shifts every 10 iterations without deflation,
            // alternating between the top and the bottom of the window
            if its > 0 && its % EXCEPTIONAL_PERIOD == 0 {
                let (corner, s) = if its % (2 * EXCEPTIONAL_PERIOD) == 0 {
                    (a[ix(e, e)], a[ix(e, e - 1)].abs() + a[ix(e - 1, e - 2)].abs())
                } else {
                    (a[ix(l, l)], a[ix(l + 1, l)].abs() + a[ix(l + 2, l + 1)].abs())
                };
                x = corner + 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            } else {
                // real shift pair: apply the one nearer a[e][e] twice
                let p = 0.5 * (y - x);
                let disc = p * p + w;
                if disc >= 0.0 {
                    let mid = 0.5 * (x + y);
                    let r = disc.sqrt();
                    let mu = if ((mid + r) - x).abs() <= ((mid - r) - x).abs() { mid + r } else { mid - r };
                    x = mu;
                    y = mu;
                    w = 0.0;
                }
            }
            its += 1;
            sweeps += 1;

            let (mut p, mut q, mut r);
            let mut m = e - 2;
            loop {
                let z = a[ix(m, m)];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[ix(m + 1, m)] + a[ix(m, m + 1)];
                q = a[ix(m + 1, m + 1)] - z - rr - ss;
                r = a[ix(m + 2, m + 1)];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[ix(m, m - 1)].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[ix(m - 1, m - 1)].abs() + z.abs() + a[ix(m + 1, m + 1)].abs());
                if u + v == v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=e {
                a[ix(i, i - 2)] = 0.0;
                if i != m + 2 {
                    a[ix(i, i - 3)] = 0.0;
                }
            }
            for k in m..e {
                let last = k + 1 == e;
                if k != m {
                    p = a[ix(k, k - 1)];
                    q = a[ix(k + 1, k - 1)];
                    r = if last { 0.0 } else { a[ix(k + 2, k - 1)] };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = (p * p + q * q + r * r).sqrt().copysign(p);
                if s == 0.0 {
                    continue;
                }
                if k == m {
                    if l != m {
                        a[ix(k, k - 1)] = -a[ix(k, k - 1)];
                    }
                } else {
                    a[ix(k, k - 1)] = -s * x;
                }
                p += s;
                x = p / s;
                y = q / s;
                let z = r / s;
                q /= p;
                r /= p;
                if last {
                    let (r0, r1) = a[k * n..].split_at_mut(n);
                    for (a0, a1) in r0[k..=e].iter_mut().zip(&mut r1[k..=e]) {
                        let t = *a0 + q * *a1;
                        *a1 -= t * y;
                        *a0 -= t * x;
                    }
                } else {
                    let (r0, rest) = a[k * n..].split_at_mut(n);
                    let (r1, r2) = rest.split_at_mut(n);
                    for ((a0, a1), a2) in r0[k..=e]
                        .iter_mut()
                        .zip(&mut r1[k..=e])
                        .zip(&mut r2[k..=e])
                    {
                        let t = *a0 + q * *a1 + r * *a2;
                        *a2 -= t * z;
                        *a1 -= t * y;
                        *a0 -= t * x;
                    }
                }
                let mmin = e.min(k + 3);
                for i in l..=mmin {
                    let row = &mut a[i * n + k..i * n + k + 3.min(n - k)];
                    let mut t = x * row[0] + y * row[1];
                    if !last {
                        t += z * row[2];
                        row[2] -= t * r;
                    }
                    row[1] -= t * q;
                    row[0] -= t;
                }
            }
        }
    }
    Ok(real)
}
