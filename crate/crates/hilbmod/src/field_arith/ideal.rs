use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use super::quadnum::{q, QuadNum, Q};
use crate::lattice::hnf;

/// Fractional ideal of the maximal order, stored canonically as
/// `(1/den) * [a, b + c*omega]` with the integral part in Hermite normal form
/// (`a, c > 0`, `0 <= b < a`) and `den` minimal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadIdeal {
    pub den: i128,
    pub a: i128,
    pub b: i128,
    pub c: i128,
    pub m: i128,
}

impl QuadIdeal {
    /// The Z-module spanned by `elems`. The caller guarantees it is an ideal.
    pub fn from_zspan(elems: &[QuadNum], m: i128) -> QuadIdeal {
        let mut den: i128 = 1;
        for e in elems {
            den = den.lcm(&e.omega_denominator());
        }
        let rows: Vec<Vec<i128>> = elems
            .iter()
            .map(|e| {
                let (x, y) = e.omega_coords();
                let xs = x * q(den);
                let ys = y * q(den);
                vec![ys.to_integer(), xs.to_integer()]
            })
            .collect();
        let h = hnf(&rows);
        assert_eq!(h.len(), 2, "Z-span is not a full lattice");
        // rows (c, b) and (0, a) in (omega, 1) coordinates
        let (c, b, a) = (h[0][0], h[0][1], h[1][1]);
        let b = b.rem_euclid(a);
        let g = a.gcd(&b).gcd(&c);
        let t = den.gcd(&g);
        QuadIdeal { den: den / t, a: a / t, b: b / t, c: c / t, m }
    }

    /// The ideal generated over the maximal order by `gens`.
    pub fn from_gens(gens: &[QuadNum], m: i128) -> QuadIdeal {
        let w = QuadNum::omega(m);
        let mut span = Vec::with_capacity(gens.len() * 2);
        for g in gens {
            span.push(g.clone());
            span.push(g * &w);
        }
        QuadIdeal::from_zspan(&span, m)
    }

    pub fn principal(x: &QuadNum) -> QuadIdeal {
        QuadIdeal::from_gens(std::slice::from_ref(x), x.m)
    }

    pub fn unit(m: i128) -> QuadIdeal {
        QuadIdeal { den: 1, a: 1, b: 0, c: 1, m }
    }

    /// Z-basis `[a/den, (b + c*omega)/den]`.
    pub fn basis(&self) -> [QuadNum; 2] {
        let d = Q::new(1, self.den);
        [
            QuadNum::rational(q(self.a) * d, self.m),
            QuadNum::from_omega_coords(q(self.b) * d, q(self.c) * d, self.m),
        ]
    }

    /// Basis `(w1, w2)` with `(w1*w2' - w1'*w2)/sqrt(D) > 0`.
    pub fn oriented_basis(&self) -> [QuadNum; 2] {
        let [x, y] = self.basis();
        [y, x]
    }

    pub fn norm(&self) -> Q {
        Q::new(self.a * self.c, self.den * self.den)
    }

    pub fn is_integral(&self) -> bool {
        self.den == 1
    }

    pub fn contains(&self, x: &QuadNum) -> bool {
        let (u, v) = x.omega_coords();
        let us = u * q(self.den);
        let vs = v * q(self.den);
        if !us.is_integer() || !vs.is_integer() {
            return false;
        }
        let (us, vs) = (us.to_integer(), vs.to_integer());
        if vs % self.c != 0 {
            return false;
        }
        let k = vs / self.c;
        (us - k * self.b) % self.a == 0
    }

    pub fn mul(&self, other: &QuadIdeal) -> QuadIdeal {
        let [x1, x2] = self.basis();
        let [y1, y2] = other.basis();
        QuadIdeal::from_zspan(&[&x1 * &y1, &x1 * &y2, &x2 * &y1, &x2 * &y2], self.m)
    }

    pub fn scale(&self, x: &QuadNum) -> QuadIdeal {
        let [b1, b2] = self.basis();
        QuadIdeal::from_gens(&[&b1 * x, &b2 * x], self.m)
    }

    pub fn conj(&self) -> QuadIdeal {
        let [x1, x2] = self.basis();
        QuadIdeal::from_zspan(&[x1.conj(), x2.conj()], self.m)
    }

    pub fn inv(&self) -> QuadIdeal {
        let n = self.norm();
        let s = QuadNum::rational(Q::one() / n, self.m);
        let [x1, x2] = self.conj().basis();
        QuadIdeal::from_zspan(&[&x1 * &s, &x2 * &s], self.m)
    }

    pub fn pow(&self, e: i32) -> QuadIdeal {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut r = QuadIdeal::unit(self.m);
        for _ in 0..e.unsigned_abs() {
            r = r.mul(&base);
        }
        r
    }

    /// All integral ideals of norm `n`.
    pub fn integral_of_norm(n: i128, m: i128) -> Vec<QuadIdeal> {
        let mut out = Vec::new();
        let w = QuadNum::omega(m);
        for c in 1..=n {
            if n % c != 0 {
                continue;
            }
            let a = n / c;
            if a % c != 0 {
                continue;
            }
            for b in 0..a {
                if b % c != 0 {
                    continue;
                }
                let cand = QuadIdeal { den: 1, a, b, c, m };
                let [x1, x2] = cand.basis();
                if cand.contains(&(&x1 * &w)) && cand.contains(&(&x2 * &w)) {
                    out.push(QuadIdeal::from_zspan(&[x1, x2], m));
                }
            }
        }
        out.sort_by_key(|i| (i.a, i.c, i.b));
        out.dedup();
        out
    }

    /// Scale by the positive rational making this ideal integral and primitive
    /// (not contained in k*O for any k > 1).
    pub fn primitive_part(&self) -> QuadIdeal {
        let g = self.a.gcd(&self.b).gcd(&self.c);
        QuadIdeal { den: 1, a: self.a / g, b: self.b / g, c: self.c / g, m: self.m }
    }

    pub fn is_zero_free(&self) -> bool {
        !self.norm().is_zero()
    }
}

impl fmt::Debug for QuadIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y] = self.basis();
        write!(f, "[{}, {}]", x, y)
    }
}
