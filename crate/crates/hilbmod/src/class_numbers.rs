//! Weighted class numbers of imaginary quadratic orders, Hurwitz class
//! numbers, the twisted sum `H_D^o(n)` and the Kronecker symbol.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_integer::Integer;
use num_traits::Zero;

use crate::error::{HilbError, Result};
use crate::field_arith::quadnum::{q, Q};

fn memo() -> &'static Mutex<HashMap<i64, Q>> {
    static MEMO: OnceLock<Mutex<HashMap<i64, Q>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `h'(-n)`: number of classes of primitive positive definite forms of
/// discriminant `-n`, weighted `1/3` at `n = 3` and `1/2` at `n = 4`.
/// Zero when `-n` is not a discriminant.
pub fn weighted_h(n: i64) -> Result<Q> {
    if n <= 0 {
        return Err(HilbError::NonPositive(n));
    }
    if matches!(n % 4, 1 | 2) {
        return Ok(Q::zero());
    }
    if let Some(v) = memo().lock().expect("memo poisoned").get(&n) {
        return Ok(*v);
    }
    let v = match n {
        3 => Q::new(1, 3),
        4 => Q::new(1, 2),
        _ => q(count_reduced_forms(n, true) as i128),
    };
    memo().lock().expect("memo poisoned").insert(n, v);
    Ok(v)
}

/// Reduced positive definite forms `(a, b, c)` with `b^2 - 4ac = -n`:
/// `|b| <= a <= c` and `b >= 0` whenever `|b| = a` or `a = c`.
pub fn reduced_forms(n: i64, primitive_only: bool) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    let mut a = 1;
    while 3 * a * a <= n {
        for b in -a..=a {
            let t = b * b + n;
            if t % (4 * a) != 0 {
                continue;
            }
            let c = t / (4 * a);
            if c < a {
                continue;
            }
            if b < 0 && (-b == a || a == c) {
                continue;
            }
            if primitive_only && a.gcd(&b).gcd(&c) != 1 {
                continue;
            }
            out.push((a, b, c));
        }
        a += 1;
    }
    out
}

fn count_reduced_forms(n: i64, primitive_only: bool) -> usize {
    reduced_forms(n, primitive_only).len()
}

/// Hurwitz class number `H(n) = sum_{d^2 | n} h'(-n/d^2)`.
pub fn hurwitz_h(n: i64) -> Result<Q> {
    if n <= 0 {
        return Err(HilbError::NonPositive(n));
    }
    let mut total = Q::zero();
    let mut d = 1;
    while d * d <= n {
        if n % (d * d) == 0 {
            total += weighted_h(n / (d * d))?;
        }
        d += 1;
    }
    Ok(total)
}

/// `H_D^o(n) = sum over s with s^2 < 4n, s^2 = 4n (mod D) of H((4n - s^2)/D)`.
pub fn hdo(d: i64, n: i64) -> Result<Q> {
    if n <= 0 {
        return Err(HilbError::NonPositive(n));
    }
    let mut total = Q::zero();
    let mut s: i64 = 0;
    while s * s < 4 * n {
        if (4 * n - s * s) % d == 0 {
            let k = (4 * n - s * s) / d;
            let term = hurwitz_h(k)?;
            total += if s == 0 { term } else { term * q(2) };
        }
        s += 1;
    }
    Ok(total)
}

/// Kronecker symbol `(a/n)` for all integers, `(0/0)` excluded.
pub fn kronecker(a: i64, n: i64) -> Result<i32> {
    if a == 0 && n == 0 {
        return Err(HilbError::KroneckerZeroZero);
    }
    let mut a = a as i128;
    let mut n = n as i128;
    if n == 0 {
        return Ok(if a.abs() == 1 { 1 } else { 0 });
    }
    let mut k: i32 = 1;
    if n < 0 {
        n = -n;
        if a < 0 {
            k = -1;
        }
    }
    let mut v = 0;
    while n % 2 == 0 {
        n /= 2;
        v += 1;
    }
    if v > 0 {
        if a % 2 == 0 {
            return Ok(0);
        }
        if v % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            k = -k;
        }
    }
    // Jacobi symbol (a/n) for odd n > 0
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                k = -k;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            k = -k;
        }
        a %= n;
    }
    Ok(if n == 1 { k } else { 0 })
}

/// Factorization of a fundamental discriminant into prime discriminants.
pub fn prime_discriminants(d: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut rest = d;
    let mut odd = d.abs();
    while odd % 2 == 0 {
        odd /= 2;
    }
    let mut p = 3;
    let mut r = odd;
    while r > 1 {
        if r % p == 0 {
            let pstar = if p % 4 == 1 { p } else { -p };
            out.push(pstar);
            rest /= pstar;
            r /= p;
        }
        p += 2;
    }
    if rest != 1 {
        out.insert(0, rest);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn special_weights() {
        assert_eq!(weighted_h(3).unwrap(), Q::new(1, 3));
        assert_eq!(weighted_h(4).unwrap(), Q::new(1, 2));
        assert_eq!(weighted_h(23).unwrap(), q(3));
        assert_eq!(weighted_h(5).unwrap(), q(0));
    }

    #[test]
    fn hurwitz_values() {
        assert_eq!(hurwitz_h(3).unwrap(), Q::new(1, 3));
        assert_eq!(hurwitz_h(4).unwrap(), Q::new(1, 2));
        assert_eq!(hurwitz_h(12).unwrap(), Q::new(4, 3));
    }

    #[test]
    fn hdo_empty_sum() {
        assert_eq!(hdo(29, 1).unwrap(), q(0));
    }

    #[test]
    fn kronecker_values() {
        assert_eq!(kronecker(5, 19).unwrap(), 1);
        assert_eq!(kronecker(5, 2).unwrap(), -1);
        assert_eq!(kronecker(5, 3).unwrap(), -1);
        assert_eq!(kronecker(-7, 29).unwrap(), 1);
        assert!(kronecker(0, 0).is_err());
    }

    #[test]
    fn prime_discriminant_factorizations() {
        assert_eq!(prime_discriminants(105), vec![-3, 5, -7]);
        assert_eq!(prime_discriminants(40), vec![8, 5]);
        assert_eq!(prime_discriminants(24), vec![-8, -3]);
        assert_eq!(prime_discriminants(28), vec![-4, -7]);
        assert_eq!(prime_discriminants(29), vec![29]);
    }
}
