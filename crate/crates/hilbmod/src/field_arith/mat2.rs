use std::fmt;

use super::ideal::QuadIdeal;
use super::quadnum::QuadNum;
use crate::error::Result;

/// 2x2 matrix over the quadratic field, `[[a, b], [c, d]]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat2K {
    pub a: QuadNum,
    pub b: QuadNum,
    pub c: QuadNum,
    pub d: QuadNum,
}

impl Mat2K {
    pub fn new(a: QuadNum, b: QuadNum, c: QuadNum, d: QuadNum) -> Self {
        Mat2K { a, b, c, d }
    }

    pub fn from_ints(a: i128, b: i128, c: i128, d: i128, m: i128) -> Self {
        Mat2K::new(QuadNum::int(a, m), QuadNum::int(b, m), QuadNum::int(c, m), QuadNum::int(d, m))
    }

    pub fn identity(m: i128) -> Self {
        Mat2K::from_ints(1, 0, 0, 1, m)
    }

    pub fn m(&self) -> i128 {
        self.a.m
    }

    pub fn det(&self) -> QuadNum {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn trace(&self) -> QuadNum {
        &self.a + &self.d
    }

    pub fn mul(&self, o: &Mat2K) -> Mat2K {
        Mat2K {
            a: &(&self.a * &o.a) + &(&self.b * &o.c),
            b: &(&self.a * &o.b) + &(&self.b * &o.d),
            c: &(&self.c * &o.a) + &(&self.d * &o.c),
            d: &(&self.c * &o.b) + &(&self.d * &o.d),
        }
    }

    /// Entrywise conjugate.
    pub fn conj(&self) -> Mat2K {
        Mat2K { a: self.a.conj(), b: self.b.conj(), c: self.c.conj(), d: self.d.conj() }
    }

    pub fn transpose(&self) -> Mat2K {
        Mat2K { a: self.a.clone(), b: self.c.clone(), c: self.b.clone(), d: self.d.clone() }
    }

    pub fn neg(&self) -> Mat2K {
        Mat2K { a: -&self.a, b: -&self.b, c: -&self.c, d: -&self.d }
    }

    pub fn scale(&self, s: &QuadNum) -> Mat2K {
        Mat2K { a: &self.a * s, b: &self.b * s, c: &self.c * s, d: &self.d * s }
    }

    /// Adjugate; equals the inverse when `det = 1`.
    pub fn adj(&self) -> Mat2K {
        Mat2K { a: self.d.clone(), b: -&self.b, c: -&self.c, d: self.a.clone() }
    }

    pub fn inverse(&self) -> Result<Mat2K> {
        let di = self.det().inv()?;
        Ok(self.adj().scale(&di))
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat2K::identity(self.m())
    }

    /// Equal up to sign (same element of PSL).
    pub fn eq_projective(&self, o: &Mat2K) -> bool {
        self == o || *self == o.neg()
    }

    /// Membership in `SL(O + a)`: `det = 1`, `a, d` integral, `b` in `a^{-1}`, `c` in `a`.
    pub fn in_sl_lambda(&self, genus_ideal: &QuadIdeal, genus_ideal_inv: &QuadIdeal) -> bool {
        self.det() == QuadNum::one(self.m())
            && self.a.is_integral()
            && self.d.is_integral()
            && genus_ideal_inv.contains(&self.b)
            && genus_ideal.contains(&self.c)
    }
}

impl fmt::Debug for Mat2K {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}
