use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::ideal::QuadIdeal;
use super::quadnum::QuadNum;
use crate::class_numbers::{kronecker, prime_discriminants};
use crate::error::{HilbError, Result};

/// A positive fundamental discriminant together with its squarefree part and
/// its factorization into prime discriminants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discriminant {
    pub d: i64,
    pub m: i64,
    pub fundamental_disc_factors: Vec<i64>,
}

fn is_squarefree(n: i64) -> bool {
    let n = n.abs();
    let mut p = 2;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

impl Discriminant {
    pub fn new(d: i64) -> Result<Discriminant> {
        if d <= 1 {
            return Err(HilbError::NotFundamental(d));
        }
        let m = if d % 4 == 1 && is_squarefree(d) {
            d
        } else if d % 4 == 0 && matches!((d / 4) % 4, 2 | 3) && is_squarefree(d / 4) {
            d / 4
        } else {
            return Err(HilbError::NotFundamental(d));
        };
        Ok(Discriminant { d, m, fundamental_disc_factors: prime_discriminants(d) })
    }

    pub fn sqrt_d(&self) -> QuadNum {
        QuadNum::sqrt_d(self.d as i128, self.m as i128)
    }

    /// Values of the genus characters on a nonzero integer coprime to `D`.
    pub fn characters(&self, n: i64) -> Vec<i32> {
        self.fundamental_disc_factors
            .iter()
            .map(|&dp| kronecker(dp, n).expect("n is nonzero"))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum GenusKind {
    Principal,
    Nonprincipal,
}

impl fmt::Display for GenusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GenusKind::Principal => "principal",
            GenusKind::Nonprincipal => "nonprincipal",
        })
    }
}

impl FromStr for GenusKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "principal" | "p" => Ok(GenusKind::Principal),
            "nonprincipal" | "non-principal" | "n" => Ok(GenusKind::Nonprincipal),
            other => Err(format!("unknown genus '{other}'")),
        }
    }
}

/// The ideal `a` defining `Lambda = O + a`, with `A = N(a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusChoice {
    pub genus_kind: GenusKind,
    pub representative: QuadIdeal,
    pub a_norm: i64,
}

/// Genus character values of an ideal, computed on a represented value
/// `N(x)/N(ideal)` coprime to `D`.
pub fn genus_of(disc: &Discriminant, id: &QuadIdeal) -> Vec<i32> {
    let [w1, w2] = id.basis();
    let n = id.norm();
    for r in 1..50i128 {
        for x in -r..=r {
            for y in [-r, r] {
                for (s, t) in [(x, y), (y, x)] {
                    let e = &w1.scale(super::quadnum::q(s)) + &w2.scale(super::quadnum::q(t));
                    let v = e.norm() / n;
                    if v.is_integer() {
                        let v = v.to_integer() as i64;
                        if v != 0 && v.gcd(&disc.d) == 1 {
                            return disc.characters(v);
                        }
                    }
                }
            }
        }
    }
    unreachable!("every ideal represents a value coprime to D")
}

impl GenusChoice {
    /// The genus ideal: the unit ideal for the principal genus, otherwise the
    /// smallest-HNF integral ideal of least norm coprime to `D` in a
    /// nonprincipal genus.
    pub fn new(disc: &Discriminant, kind: GenusKind) -> Result<GenusChoice> {
        let m = disc.m as i128;
        match kind {
            GenusKind::Principal => Ok(GenusChoice {
                genus_kind: kind,
                representative: QuadIdeal::unit(m),
                a_norm: 1,
            }),
            GenusKind::Nonprincipal => {
                for n in 2..(4 * disc.d) {
                    if n.gcd(&disc.d) != 1 {
                        continue;
                    }
                    for id in QuadIdeal::integral_of_norm(n as i128, m) {
                        if genus_of(disc, &id).iter().any(|&c| c != 1) {
                            return Ok(GenusChoice { genus_kind: kind, representative: id, a_norm: n });
                        }
                    }
                }
                Err(HilbError::NoSuchGenus { d: disc.d, genus: kind.to_string() })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_fundamental() {
        assert!(Discriminant::new(20).is_err());
        assert!(Discriminant::new(45).is_err());
        assert!(Discriminant::new(40).is_ok());
    }

    #[test]
    fn nonprincipal_norms() {
        for (d, a) in [(21, 5), (24, 5), (28, 3), (33, 2), (40, 3)] {
            let disc = Discriminant::new(d).unwrap();
            let g = GenusChoice::new(&disc, GenusKind::Nonprincipal).unwrap();
            assert_eq!(g.a_norm, a, "D={d}");
        }
    }

    #[test]
    fn prime_discriminant_has_one_genus() {
        let disc = Discriminant::new(29).unwrap();
        assert!(GenusChoice::new(&disc, GenusKind::Nonprincipal).is_err());
    }
}
