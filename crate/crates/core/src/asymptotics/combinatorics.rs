//! Exhaustive check of the binomial identity behind the Mehler-type
//! expansion of the kernel.

use serde::Serialize;

use crate::error::{Error, Result};

pub const MAX_M: usize = 4;
pub const MAX_K: usize = 6;

#[derive(Clone, Debug, Serialize)]
pub struct CombinatorialCheck {
    pub m: usize,
    pub k: usize,
    /// `m^k` times the left-hand side, an integer.
    pub scaled_sum: u128,
    /// `m^k C(2k, k)`.
    pub scaled_target: u128,
    pub terms: usize,
}

impl CombinatorialCheck {
    pub fn holds(&self) -> bool {
        self.scaled_sum == self.scaled_target
    }

    /// The left-hand side as a float.
    pub fn sum(&self) -> f64 {
        self.scaled_sum as f64 / (self.m as f64).powi(self.k as i32)
    }
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

fn binomial(n: usize, k: usize) -> u128 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

fn multinomial(total: usize, parts: &[usize]) -> u128 {
    parts.iter().fold(factorial(total), |acc, &p| acc / factorial(p))
}

/// Visits every vector of `len` non-negative integers summing to `total`.
fn for_each_composition(total: usize, len: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(buf: &mut Vec<usize>, rest: usize, len: usize, f: &mut dyn FnMut(&[usize])) {
        if buf.len() + 1 == len {
            buf.push(rest);
            f(buf);
            buf.pop();
            return;
        }
        for v in 0..=rest {
            buf.push(v);
            rec(buf, rest - v, len, f);
            buf.pop();
        }
    }
    if len == 0 {
        if total == 0 {
            f(&[]);
        }
        return;
    }
    rec(&mut Vec::with_capacity(len), total, len, f);
}

/// Sums
/// `2^s m^{s-k} k! / (prod l_i! prod (l_i+M_i)! s!)` over `sum M_i = 0`,
/// `s + 2l = k`, `sum l_i = l`, and compares with `C(2k, k)`.
///
/// With `r_i = l_i + M_i` the conditions become `sum r_i = l`, so every
/// term times `m^k` is the integer
/// `2^s m^s [k!/(s! l! l!)] [l!/prod l_i!] [l!/prod r_i!]`.
pub fn combinatorial_identity_check(m: usize, k: usize) -> Result<CombinatorialCheck> {
    if m == 0 || m > MAX_M || k > MAX_K {
        return Err(Error::Budget(format!(
            "exhaustive enumeration is limited to 1 <= m <= {MAX_M}, k <= {MAX_K}; got m={m}, k={k}"
        )));
    }
    let mut sum: u128 = 0;
    let mut terms = 0usize;
    for l in 0..=k / 2 {
        let s = k - 2 * l;
        let outer = (1u128 << s)
            * (m as u128).pow(s as u32)
            * (factorial(k) / (factorial(s) * factorial(l) * factorial(l)));
        let mut inner_l = Vec::new();
        for_each_composition(l, m, &mut |ls| inner_l.push(multinomial(l, ls)));
        let mut inner_r: u128 = 0;
        for_each_composition(l, m, &mut |rs| inner_r += multinomial(l, rs));
        terms += inner_l.len() * inner_l.len();
        sum += outer * inner_l.iter().sum::<u128>() * inner_r;
    }
    Ok(CombinatorialCheck {
        m,
        k,
        scaled_sum: sum,
        scaled_target: (m as u128).pow(k as u32) * binomial(2 * k, k),
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct enumeration over `(l_i, M_i)` with exact rationals held as
    /// `(numerator, denominator)` pairs over a common denominator.
    fn brute(m: usize, k: usize) -> f64 {
        let mut total = 0.0;
        for l in 0..=k / 2 {
            let s = k - 2 * l;
            let mut ls_all = Vec::new();
            for_each_composition(l, m, &mut |ls| ls_all.push(ls.to_vec()));
            for ls in &ls_all {
                let span = l as i64;
                let mut ms = vec![-span; m];
                loop {
                    if ms.iter().sum::<i64>() == 0
                        && ls.iter().zip(&ms).all(|(&li, &mi)| li as i64 + mi >= 0)
                    {
                        let mut denom = factorial(s) as f64;
                        for (&li, &mi) in ls.iter().zip(&ms) {
                            denom *= factorial(li) as f64 * factorial((li as i64 + mi) as usize) as f64;
                        }
                        total += 2f64.powi(s as i32) * (m as f64).powi(s as i32 - k as i32)
                            * factorial(k) as f64
                            / denom;
                    }
                    let mut i = 0;
                    while i < m {
                        ms[i] += 1;
                        if ms[i] <= span {
                            break;
                        }
                        ms[i] = -span;
                        i += 1;
                    }
                    if i == m {
                        break;
                    }
                }
            }
        }
        total
    }

    #[test]
    fn small_cases() {
        let c = combinatorial_identity_check(1, 2).unwrap();
        assert!(c.holds());
        assert_eq!(c.sum(), 6.0);
        assert!(combinatorial_identity_check(1, 0).unwrap().holds());
        assert_eq!(combinatorial_identity_check(2, 3).unwrap().sum(), 20.0);
    }

    #[test]
    fn full_grid_and_brute_force() {
        for m in 1..=MAX_M {
            for k in 0..=MAX_K {
                let c = combinatorial_identity_check(m, k).unwrap();
                assert!(c.holds(), "m={m} k={k}");
                let b = brute(m, k);
                assert!((b - c.sum()).abs() < 1e-9 * c.sum(), "m={m} k={k}: {b}");
            }
        }
        assert!(combinatorial_identity_check(5, 1).is_err());
        assert!(combinatorial_identity_check(2, 7).is_err());
    }
}
