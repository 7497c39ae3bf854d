use std::fmt;

use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::cusp_resolution::rational_coords_in;
use crate::error::{HilbError, Result};
use crate::field_arith::{q, Field, Mat2K, QuadNum};

/// `B = [[a1 sqrt(D), lambda], [-lambda', a2 sqrt(D) / A]]` with `lambda` in `a^{-1}`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SkewHermitian {
    pub a1: i128,
    pub a2: i128,
    #[serde(serialize_with = "ser_quad")]
    pub lambda: QuadNum,
}

fn ser_quad<S: serde::Serializer>(x: &QuadNum, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_canonical_string())
}

/// Integer coordinates `(a1, a2, x, y)` with `lambda = x w1 + y w2` in the
/// fixed basis of `a^{-1}`.
pub type Coords = [i128; 4];

impl SkewHermitian {
    pub fn new(a1: i128, a2: i128, lambda: QuadNum) -> Self {
        SkewHermitian { a1, a2, lambda }
    }

    pub fn matrix(&self, field: &Field) -> Mat2K {
        let s = field.sqrt_d();
        Mat2K::new(
            s.scale(q(self.a1)),
            self.lambda.clone(),
            -&self.lambda.conj(),
            s.scale(q(self.a2) / q(field.a())),
        )
    }

    /// Reads a skew-hermitian matrix back; fails when `m` is not of this shape
    /// or its diagonal coefficients are not integral.
    pub fn from_matrix(m: &Mat2K, field: &Field) -> Result<SkewHermitian> {
        let s = field.sqrt_d();
        let bad = || HilbError::Verification(format!("not an integral skew-hermitian matrix: {m:?}"));
        let x = m.a.div(&s)?;
        let y = m.d.div(&s)?.scale(q(field.a()));
        if !x.is_rational() || !y.is_rational() || !x.u.is_integer() || !y.u.is_integer() {
            return Err(bad());
        }
        if m.c != -&m.b.conj() {
            return Err(bad());
        }
        Ok(SkewHermitian::new(x.u.to_integer(), y.u.to_integer(), m.b.clone()))
    }

    /// `N = det(B) A = a1 a2 D + A Nm(lambda)`.
    pub fn level(&self, field: &Field) -> i128 {
        let n = q(self.a1 * self.a2 * field.d()) + self.lambda.norm() * q(field.a());
        debug_assert!(n.is_integer(), "lambda outside a^-1");
        n.to_integer()
    }

    /// `g'^t B g`, the matrix describing `g^{-1} H_B`.
    pub fn act(&self, g: &Mat2K, field: &Field) -> SkewHermitian {
        let b = self.matrix(field);
        let r = g.conj().transpose().mul(&b).mul(g);
        SkewHermitian::from_matrix(&r, field).expect("SL(Lambda) preserves integral skew-hermitian matrices")
    }

    pub fn neg(&self) -> SkewHermitian {
        SkewHermitian::new(-self.a1, -self.a2, -&self.lambda)
    }

    pub fn coords(&self, field: &Field) -> Coords {
        let [w1, w2] = field.a_inv.basis();
        let (x, y) = rational_coords_in(&w1, &w2, &self.lambda);
        debug_assert!(x.is_integer() && y.is_integer());
        [self.a1, self.a2, x.to_integer(), y.to_integer()]
    }

    pub fn from_coords(c: &Coords, field: &Field) -> SkewHermitian {
        let [w1, w2] = field.a_inv.basis();
        SkewHermitian::new(c[0], c[1], &w1.scale(q(c[2])) + &w2.scale(q(c[3])))
    }

    pub fn content(&self, field: &Field) -> i128 {
        self.coords(field).iter().fold(0i128, |g, &x| g.gcd(&x))
    }

    pub fn is_primitive(&self, field: &Field) -> bool {
        self.content(field) == 1
    }

    /// Squared Frobenius norm of the matrix in the first embedding.
    pub fn height(&self, field: &Field) -> f64 {
        let d = field.d() as f64;
        let a = field.a() as f64;
        let l1 = self.lambda.embed(0);
        let l2 = self.lambda.embed(1);
        (self.a1 * self.a1) as f64 * d + (self.a2 * self.a2) as f64 * d / (a * a) + l1 * l1 + l2 * l2
    }

    pub fn is_zero(&self) -> bool {
        self.a1 == 0 && self.a2 == 0 && self.lambda.is_zero()
    }

    /// Value of `(z2, 1) B (z1, 1)^t` at a point given numerically.
    pub fn eval(&self, field: &Field, z1: (f64, f64), z2: (f64, f64)) -> (f64, f64) {
        let sd = field.sqrt_d().embed(0);
        let l = self.lambda.embed(0);
        let lc = self.lambda.conj().embed(0);
        let a1 = self.a1 as f64 * sd;
        let a2 = self.a2 as f64 * sd / field.a() as f64;
        let p = (z1.0 * z2.0 - z1.1 * z2.1, z1.0 * z2.1 + z1.1 * z2.0);
        (a1 * p.0 + l * z2.0 - lc * z1.0 + a2, a1 * p.1 + l * z2.1 - lc * z1.1)
    }

    pub fn lambda_is_zero(&self) -> bool {
        self.lambda.u.is_zero() && self.lambda.v.is_zero()
    }
}

impl fmt::Debug for SkewHermitian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.a1, self.a2, self.lambda)
    }
}
