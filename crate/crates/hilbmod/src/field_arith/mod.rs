//! Exact arithmetic in a real quadratic field: elements, fractional ideals,
//! the class group, genus ideals and 2x2 matrices acting on `O + a`.

pub mod classgroup;
pub mod genus;
pub mod ideal;
pub mod mat2;
pub mod quadnum;

pub use classgroup::{ClassGroup, Form};
pub use genus::{Discriminant, GenusChoice, GenusKind};
pub use ideal::QuadIdeal;
pub use mat2::Mat2K;
pub use quadnum::{q, qf, QuadNum, Q};

use crate::error::Result;

/// All field data a surface computation needs: discriminant, genus ideal and
/// its inverse, and the class group.
#[derive(Clone, Debug)]
pub struct Field {
    pub disc: Discriminant,
    pub genus: GenusChoice,
    pub a_inv: QuadIdeal,
    pub class_group: ClassGroup,
    /// Fundamental unit, greater than 1 in the first embedding.
    pub unit: QuadNum,
}

impl Field {
    pub fn new(d: i64, kind: GenusKind) -> Result<Field> {
        let disc = Discriminant::new(d)?;
        let genus = GenusChoice::new(&disc, kind)?;
        let a_inv = genus.representative.inv();
        let class_group = ClassGroup::compute(d as i128, disc.m as i128);
        let unit = fundamental_unit(d as i128, disc.m as i128);
        Ok(Field { disc, genus, a_inv, class_group, unit })
    }

    pub fn m(&self) -> i128 {
        self.disc.m as i128
    }

    pub fn d(&self) -> i128 {
        self.disc.d as i128
    }

    pub fn a(&self) -> i128 {
        self.genus.a_norm as i128
    }

    pub fn ideal(&self) -> &QuadIdeal {
        &self.genus.representative
    }

    pub fn sqrt_d(&self) -> QuadNum {
        self.disc.sqrt_d()
    }

    pub fn int(&self, n: i128) -> QuadNum {
        QuadNum::int(n, self.m())
    }

    pub fn elem(&self, u: Q, v: Q) -> QuadNum {
        QuadNum::new(u, v, self.m())
    }
}

/// Smallest unit greater than 1 of the maximal order of discriminant `d`.
pub fn fundamental_unit(d: i128, m: i128) -> QuadNum {
    // units are (u + v sqrt(d)) / 2 with u^2 - d v^2 = +-4
    let mut v: i128 = 1;
    loop {
        for s in [-4, 4] {
            let u2 = d * v * v + s;
            if u2 > 0 {
                let u = isqrt(u2);
                if u * u == u2 {
                    let e = &QuadNum::rational(qf(u, 2), m) + &QuadNum::sqrt_d(d, m).scale(qf(v, 2));
                    return e;
                }
            }
        }
        v += 1;
    }
}

fn isqrt(n: i128) -> i128 {
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Membership of `m` in `SL(O + a)` for the given genus.
pub fn sl_lambda_member(m: &Mat2K, genus: &GenusChoice) -> bool {
    m.in_sl_lambda(&genus.representative, &genus.representative.inv())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fundamental_units() {
        let e = fundamental_unit(21, 21);
        assert_eq!(e, QuadNum::frac(5, 1, 2, 21));
        let e = fundamental_unit(40, 10);
        assert_eq!(e, QuadNum::from_ints(3, 1, 10));
        assert_eq!(e.norm(), q(-1));
        let e = fundamental_unit(57, 57);
        assert_eq!(e, QuadNum::from_ints(151, 20, 57));
    }
}
