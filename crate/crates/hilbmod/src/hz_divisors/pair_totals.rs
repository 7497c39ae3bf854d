use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::class_numbers::{hdo, kronecker, prime_discriminants};
use crate::elliptic_points::{EllipticPoint, PhiForm};
use crate::error::{HilbError, Result};
use crate::field_arith::{q, Field, Q};

fn valuation(mut n: i64, p: i64) -> u32 {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

fn prime_of(dp: i64) -> i64 {
    let a = dp.abs();
    if a % 2 == 0 {
        2
    } else {
        a
    }
}

/// Transversal intersection number `(T'_M, T'_N)` of the surface, where
/// `T_N` is the union of `F_{N/d^2}` over `d^2 | N`.
pub fn transversal_total(field: &Field, m: i64, n: i64) -> Result<Q> {
    if m <= 0 || n <= 0 {
        return Err(HilbError::NonPositive(m.min(n)));
    }
    let d_disc = field.d() as i64;
    let a = field.a() as i64;
    let primes = prime_discriminants(d_disc);
    let g = m.gcd(&n);
    let mut total = Q::zero();
    for d in (1..=g).filter(|d| g % d == 0) {
        let h = hdo(d_disc, m * n / (d * d))?;
        if h.is_zero() {
            continue;
        }
        let mut prod = 1i64;
        for &dp in &primes {
            let p = prime_of(dp);
            let pp = if valuation(m, p) <= valuation(n, p) { m } else { n };
            if (pp * a) % d != 0 {
                return Err(HilbError::FormulaMisuse(format!("d={d} does not divide P_p A={}", pp * a)));
            }
            prod *= i64::from(kronecker(dp, d)?) + i64::from(kronecker(dp, pp * a / d)?);
        }
        total += h * q(i128::from(d * prod));
    }
    let total = total / q(2);
    // weights 1/2 and 1/3 of h' make sixths the finest possible denominator
    if total < Q::zero() || !(total * q(6)).is_integer() {
        return Err(HilbError::FormulaMisuse(format!("(T'_{m}, T'_{n}) = {total}")));
    }
    Ok(total)
}

/// Number of `(x, y)` with `phi(x, y) = n`, optionally primitive only.
fn reps(phi: &PhiForm, n: i128, primitive: bool) -> i128 {
    phi.representations(n)
        .into_iter()
        .filter(|&(x, y)| !primitive || x.gcd(&y) == 1)
        .count() as i128
}

/// Ordered pairs of distinct curves through a lift of `point` lying in
/// `T_M` and `T_N`, divided by the order of the isotropy group in `PSL`.
pub fn point_contribution(point: &EllipticPoint, phi: &PhiForm, m: i128, n: i128) -> Q {
    let cm = reps(phi, m, false) / 2;
    let cn = reps(phi, n, false) / 2;
    // a primitive curve of level k lies in both when k d^2 = M and k e^2 = N
    let mut common = 0i128;
    for k in (1..=m.min(n)).filter(|k| m % k == 0 && n % k == 0) {
        if is_square(m / k) && is_square(n / k) {
            common += reps(phi, k, true) / 2;
        }
    }
    Q::new(cm * cn - common, point.kind.order() as i128)
}

fn is_square(x: i128) -> bool {
    let r = (x as f64).sqrt().round() as i128;
    r * r == x
}

#[derive(Clone, Debug, Serialize)]
pub struct Accounting {
    pub m: u32,
    pub n: u32,
    pub formula: String,
    pub elliptic: String,
    pub remainder: String,
}

/// Compares the closed formula against the elliptic-point pair counts.
pub fn accounting(field: &Field, points: &[(EllipticPoint, PhiForm)], m: u32, n: u32) -> Result<Accounting> {
    let total = transversal_total(field, i64::from(m), i64::from(n))?;
    let ell: Q = points
        .iter()
        .map(|(p, phi)| point_contribution(p, phi, i128::from(m), i128::from(n)))
        .fold(Q::zero(), |a, b| a + b);
    let rem = total - ell;
    if rem < Q::zero() {
        return Err(HilbError::AccountingResidue { m, n, detail: format!("formula {total} < elliptic {ell}") });
    }
    Ok(Accounting { m, n, formula: total.to_string(), elliptic: ell.to_string(), remainder: rem.to_string() })
}

fn square_divisors(n: u32) -> Vec<u32> {
    (1..=n).take_while(|d| d * d <= n).filter(|d| n.is_multiple_of(d * d)).collect()
}

/// Transversal count `(F_M, F_N)` for primitive curves, obtained from the
/// totals over `T_M, T_N` by inclusion-exclusion over square divisors.
pub fn f_level_total(field: &Field, m: u32, n: u32) -> Result<Q> {
    let mut total = transversal_total(field, i64::from(m), i64::from(n))?;
    for d in square_divisors(m) {
        for e in square_divisors(n) {
            if (d, e) != (1, 1) {
                total -= f_level_total(field, m / (d * d), n / (e * e))?;
            }
        }
    }
    Ok(total)
}

/// Elliptic part of [`f_level_total`]: ordered pairs of distinct primitive
/// curves through each elliptic point, divided by its isotropy order.
pub fn f_level_elliptic(points: &[(EllipticPoint, PhiForm)], m: u32, n: u32) -> Q {
    let mut total = Q::zero();
    for (p, phi) in points {
        let rm = reps(phi, i128::from(m), true) / 2;
        let rn = reps(phi, i128::from(n), true) / 2;
        let same = if m == n { rn } else { 0 };
        total += Q::new(rm * rn - same, p.kind.order() as i128);
    }
    total
}
