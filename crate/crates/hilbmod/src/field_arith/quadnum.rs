use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{HilbError, Result};

/// Exact rational numbers used throughout the crate.
pub type Q = Ratio<i128>;

pub fn q(n: i128) -> Q {
    Q::from_integer(n)
}

pub fn qf(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

/// Floor of a rational.
pub fn qfloor(x: &Q) -> i128 {
    x.numer().div_floor(x.denom())
}

/// Exact element `u + v*beta` of `Q(beta)`, `beta^2 = m` with `m` squarefree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadNum {
    pub u: Q,
    pub v: Q,
    pub m: i128,
}

impl QuadNum {
    pub fn new(u: Q, v: Q, m: i128) -> Self {
        QuadNum { u, v, m }
    }

    pub fn from_ints(u: i128, v: i128, m: i128) -> Self {
        QuadNum { u: q(u), v: q(v), m }
    }

    /// `(u + v*beta) / d`.
    pub fn frac(u: i128, v: i128, d: i128, m: i128) -> Self {
        QuadNum { u: qf(u, d), v: qf(v, d), m }
    }

    pub fn rational(x: Q, m: i128) -> Self {
        QuadNum { u: x, v: Q::zero(), m }
    }

    pub fn int(n: i128, m: i128) -> Self {
        QuadNum::rational(q(n), m)
    }

    pub fn zero(m: i128) -> Self {
        QuadNum::int(0, m)
    }

    pub fn one(m: i128) -> Self {
        QuadNum::int(1, m)
    }

    pub fn beta(m: i128) -> Self {
        QuadNum { u: Q::zero(), v: Q::one(), m }
    }

    /// `sqrt(D)` for the discriminant `d` of this field.
    pub fn sqrt_d(d: i128, m: i128) -> Self {
        // sqrt(D) = beta when D = m, else 2*beta (D = 4m)
        if d == m {
            QuadNum::beta(m)
        } else {
            QuadNum::from_ints(0, 2, m)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.v.is_zero()
    }

    pub fn conj(&self) -> Self {
        QuadNum { u: self.u, v: -self.v, m: self.m }
    }

    pub fn norm(&self) -> Q {
        self.u * self.u - q(self.m) * self.v * self.v
    }

    pub fn trace(&self) -> Q {
        self.u * q(2)
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(HilbError::DivisionByZero);
        }
        Ok(QuadNum { u: self.u / n, v: -self.v / n, m: self.m })
    }

    pub fn scale(&self, s: Q) -> Self {
        QuadNum { u: self.u * s, v: self.v * s, m: self.m }
    }

    pub fn div(&self, other: &QuadNum) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// Exact sign of the image under the real embedding `j` (0: beta > 0, 1: beta < 0).
    pub fn sign(&self, j: usize) -> Ordering {
        let v = if j == 0 { self.v } else { -self.v };
        sign_of(&self.u, &v, self.m)
    }

    pub fn is_totally_positive(&self) -> bool {
        self.sign(0) == Ordering::Greater && self.sign(1) == Ordering::Greater
    }

    /// Floating point image under embedding `j`.
    pub fn embed(&self, j: usize) -> f64 {
        let s = (self.m as f64).sqrt();
        let u = q_to_f64(&self.u);
        let v = q_to_f64(&self.v);
        if j == 0 {
            u + v * s
        } else {
            u - v * s
        }
    }

    /// Exact floor of the image under embedding `j`.
    pub fn floor_embed(&self, j: usize) -> i128 {
        let mut n = self.embed(j).floor() as i128;
        // correct rounding: want n <= x < n+1
        loop {
            let diff = self - &QuadNum::int(n, self.m);
            if diff.sign(j) == Ordering::Less {
                n -= 1;
                continue;
            }
            let diff1 = self - &QuadNum::int(n + 1, self.m);
            if diff1.sign(j) != Ordering::Less {
                n += 1;
                continue;
            }
            return n;
        }
    }

    /// Coordinates `(x, y)` with `self = x + y*omega`, where `omega` is `beta`
    /// or `(1 + beta)/2` according to `m mod 4`.
    pub fn omega_coords(&self) -> (Q, Q) {
        if self.m.rem_euclid(4) == 1 {
            (self.u - self.v, self.v * q(2))
        } else {
            (self.u, self.v)
        }
    }

    pub fn from_omega_coords(x: Q, y: Q, m: i128) -> Self {
        if m.rem_euclid(4) == 1 {
            QuadNum { u: x + y / q(2), v: y / q(2), m }
        } else {
            QuadNum { u: x, v: y, m }
        }
    }

    pub fn omega(m: i128) -> Self {
        QuadNum::from_omega_coords(Q::zero(), Q::one(), m)
    }

    /// Membership in the maximal order.
    pub fn is_integral(&self) -> bool {
        let (x, y) = self.omega_coords();
        x.is_integer() && y.is_integer()
    }

    /// Largest denominator appearing in the omega coordinates.
    pub fn omega_denominator(&self) -> i128 {
        let (x, y) = self.omega_coords();
        x.denom().lcm(y.denom())
    }

    /// Sum of absolute values of omega coordinates, a crude height.
    pub fn height(&self) -> Q {
        let (x, y) = self.omega_coords();
        x.abs() + y.abs()
    }

    /// Serialize as `(u_num/u_den)+(v_num/v_den)b`.
    pub fn to_canonical_string(&self) -> String {
        format!(
            "({}/{})+({}/{})b",
            self.u.numer(),
            self.u.denom(),
            self.v.numer(),
            self.v.denom()
        )
    }

    /// Parse the canonical serialization.
    pub fn parse_canonical(s: &str, m: i128) -> Option<Self> {
        let s = s.trim();
        let s = s.strip_suffix('b')?;
        let close = s.find(")+(")?;
        let first = s.get(1..close)?;
        let second = s.get(close + 3..s.len() - 1)?;
        let parse_q = |t: &str| -> Option<Q> {
            let (n, d) = t.split_once('/')?;
            let d: i128 = d.trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            Some(Q::new(n.trim().parse().ok()?, d))
        };
        Some(QuadNum { u: parse_q(first)?, v: parse_q(second)?, m })
    }
}

/// Exact sign of `u + v*sqrt(m)`.
pub fn sign_of(u: &Q, v: &Q, m: i128) -> Ordering {
    let su = u.cmp(&Q::zero());
    let sv = v.cmp(&Q::zero());
    match (su, sv) {
        (Ordering::Equal, s) | (s, Ordering::Equal) => s,
        (a, b) if a == b => a,
        (Ordering::Greater, _) => (u * u).cmp(&(q(m) * v * v)),
        _ => (q(m) * v * v).cmp(&(u * u)),
    }
}

pub fn q_to_f64(x: &Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

impl fmt::Debug for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.v.is_zero() {
            return write!(f, "{}", self.u);
        }
        if self.u.is_zero() {
            return write!(f, "{}b", self.v);
        }
        write!(f, "{}{}{}b", self.u, if self.v.is_negative() { "" } else { "+" }, self.v)
    }
}

macro_rules! binop {
    ($tr:ident, $fn:ident, $body:expr) => {
        impl $tr<&QuadNum> for &QuadNum {
            type Output = QuadNum;
            fn $fn(self, rhs: &QuadNum) -> QuadNum {
                debug_assert_eq!(self.m, rhs.m, "mixed fields");
                let f: fn(&QuadNum, &QuadNum) -> QuadNum = $body;
                f(self, rhs)
            }
        }
        impl $tr<QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $fn(self, rhs: QuadNum) -> QuadNum {
                (&self).$fn(&rhs)
            }
        }
        impl $tr<&QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $fn(self, rhs: &QuadNum) -> QuadNum {
                (&self).$fn(rhs)
            }
        }
        impl $tr<QuadNum> for &QuadNum {
            type Output = QuadNum;
            fn $fn(self, rhs: QuadNum) -> QuadNum {
                self.$fn(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| QuadNum { u: a.u + b.u, v: a.v + b.v, m: a.m });
binop!(Sub, sub, |a, b| QuadNum { u: a.u - b.u, v: a.v - b.v, m: a.m });
binop!(Mul, mul, |a, b| QuadNum {
    u: a.u * b.u + q(a.m) * a.v * b.v,
    v: a.u * b.v + a.v * b.u,
    m: a.m
});

impl Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum { u: -self.u, v: -self.v, m: self.m }
    }
}

impl Neg for QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_and_trace_of_beta() {
        let b = QuadNum::beta(21);
        assert_eq!(b.norm(), q(-21));
        assert_eq!(b.trace(), q(0));
    }

    #[test]
    fn norm_of_one_plus_beta_d24() {
        assert_eq!(QuadNum::from_ints(1, 1, 6).norm(), q(-5));
    }

    #[test]
    fn scaled_element_norm() {
        let x = QuadNum::frac(1, -1, 10, 21).scale(q(10));
        assert_eq!(x.norm(), q(-20));
    }

    #[test]
    fn exact_floor_near_integer() {
        // (1+sqrt5)/2 has floor 1 in the first embedding and -1 in the second
        let w = QuadNum::frac(1, 1, 2, 5);
        assert_eq!(w.floor_embed(0), 1);
        assert_eq!(w.floor_embed(1), -1);
    }

    #[test]
    fn zero_has_no_inverse() {
        assert_eq!(QuadNum::zero(5).inv(), Err(HilbError::DivisionByZero));
    }

    #[test]
    fn canonical_string_round_trip() {
        let x = QuadNum::frac(-3, 7, 10, 21);
        let s = x.to_canonical_string();
        assert_eq!(s, "(-3/10)+(7/10)b");
        assert_eq!(QuadNum::parse_canonical(&s, 21), Some(x));
    }
}
