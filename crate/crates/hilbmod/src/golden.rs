//! Reference data for the fourteen K3-type surfaces: cusp cycles, stabilizer
//! matrices, Hirzebruch-Zagier representatives, intersection diagrams and
//! genus one fibration rows.
//!
//! The corpus is compiled in; setting `HILB_GOLDEN_DIR` loads
//! `d{D}_{genus}.json` from that directory instead.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{HilbError, Result};
use crate::field_arith::{GenusKind, Mat2K, QuadNum};

/// The fourteen K3-type surfaces, nonprincipal genus first.
pub const SURFACES: [(i64, GenusKind); 14] = [
    (21, GenusKind::Nonprincipal),
    (24, GenusKind::Nonprincipal),
    (28, GenusKind::Nonprincipal),
    (33, GenusKind::Nonprincipal),
    (40, GenusKind::Nonprincipal),
    (29, GenusKind::Principal),
    (37, GenusKind::Principal),
    (40, GenusKind::Principal),
    (41, GenusKind::Principal),
    (44, GenusKind::Principal),
    (56, GenusKind::Principal),
    (57, GenusKind::Principal),
    (69, GenusKind::Principal),
    (105, GenusKind::Principal),
];

macro_rules! embedded {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../golden/", $name, ".json")))),*]
    };
}

const EMBEDDED: &[(&str, &str)] = embedded!(
    "d21_nonprincipal",
    "d24_nonprincipal",
    "d28_nonprincipal",
    "d33_nonprincipal",
    "d40_nonprincipal",
    "d29_principal",
    "d37_principal",
    "d40_principal",
    "d41_principal",
    "d44_principal",
    "d56_principal",
    "d57_principal",
    "d69_principal",
    "d105_principal",
);

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GoldenCusps {
    #[serde(rename = "_provenance")]
    pub provenance: String,
    /// One period of the `b_k`, positive.
    pub cycle: Vec<i128>,
    pub doubled: bool,
    pub two_cusps: bool,
    pub forms: Vec<[i128; 3]>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GoldenElliptic {
    #[serde(rename = "_provenance")]
    pub provenance: String,
    #[serde(default)]
    pub order2: Vec<[String; 4]>,
    #[serde(default)]
    pub three_plus: Vec<[String; 4]>,
    #[serde(default)]
    pub three_minus: Vec<[String; 4]>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GoldenHz {
    #[serde(rename = "_provenance")]
    pub provenance: String,
    /// `N -> [[a1, a2, lambda]]`.
    pub components: BTreeMap<String, Vec<(i128, i128, String)>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GoldenVertex {
    pub label: String,
    pub boxed: bool,
    pub bold: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GoldenEdge {
    pub a: String,
    pub b: String,
    pub mult: u32,
    /// Drawn with a double-line or a shifted parallel pair, whose multiplicity
    /// is not fixed by the drawing convention.
    pub encoded_as_double: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GoldenGraph {
    #[serde(rename = "_provenance")]
    pub provenance: String,
    pub vertices: Vec<GoldenVertex>,
    pub edges: Vec<GoldenEdge>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GoldenFibrations {
    #[serde(rename = "_provenance")]
    pub provenance: String,
    pub g: Vec<String>,
    pub g_prime: Vec<String>,
    pub sigma: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GoldenRecord {
    pub d: i64,
    pub genus: GenusKind,
    pub a_norm: i64,
    pub cusps: GoldenCusps,
    pub elliptic: GoldenElliptic,
    pub hz: GoldenHz,
    pub graph: GoldenGraph,
    pub fibrations: GoldenFibrations,
}

fn file_stem(d: i64, genus: GenusKind) -> String {
    format!("d{d}_{genus}")
}

impl GoldenRecord {
    pub fn load(d: i64, genus: GenusKind) -> Result<GoldenRecord> {
        let stem = file_stem(d, genus);
        let text = match std::env::var_os("HILB_GOLDEN_DIR") {
            Some(dir) => {
                let path = PathBuf::from(dir).join(format!("{stem}.json"));
                std::fs::read_to_string(&path).map_err(|e| HilbError::Golden(format!("{}: {e}", path.display())))?
            }
            None => EMBEDDED
                .iter()
                .find(|(n, _)| *n == stem)
                .map(|(_, t)| t.to_string())
                .ok_or_else(|| HilbError::NotK3 { d, genus: genus.to_string() })?,
        };
        let rec: GoldenRecord = serde_json::from_str(&text).map_err(|e| HilbError::Golden(format!("{stem}: {e}")))?;
        if rec.d != d || rec.genus != genus {
            return Err(HilbError::Golden(format!("{stem}: record is for D={} {}", rec.d, rec.genus)));
        }
        Ok(rec)
    }

    pub fn all() -> Result<Vec<GoldenRecord>> {
        SURFACES.iter().map(|&(d, g)| GoldenRecord::load(d, g)).collect()
    }

    pub fn m(&self) -> i128 {
        crate::field_arith::Discriminant::new(self.d).map(|x| x.m as i128).unwrap_or(self.d as i128)
    }

    fn matrices(&self, raw: &[[String; 4]]) -> Result<Vec<Mat2K>> {
        let m = self.m();
        raw.iter()
            .map(|e| {
                let p = |s: &String| {
                    QuadNum::parse_canonical(s, m).ok_or_else(|| HilbError::Golden(format!("bad field element '{s}'")))
                };
                Ok(Mat2K::new(p(&e[0])?, p(&e[1])?, p(&e[2])?, p(&e[3])?))
            })
            .collect()
    }

    pub fn order2(&self) -> Result<Vec<Mat2K>> {
        self.matrices(&self.elliptic.order2)
    }

    pub fn three_plus(&self) -> Result<Vec<Mat2K>> {
        self.matrices(&self.elliptic.three_plus)
    }

    pub fn three_minus(&self) -> Result<Vec<Mat2K>> {
        self.matrices(&self.elliptic.three_minus)
    }

    /// Representatives `(a1, a2, lambda)` of the components of `F_n`.
    pub fn hz_reps(&self, n: u32) -> Result<Vec<(i128, i128, QuadNum)>> {
        let m = self.m();
        self.hz
            .components
            .get(&n.to_string())
            .map(|v| v.as_slice())
            .unwrap_or(&[])
            .iter()
            .map(|(a1, a2, l)| {
                let l = QuadNum::parse_canonical(l, m).ok_or_else(|| HilbError::Golden(format!("bad lambda '{l}'")))?;
                Ok((*a1, *a2, l))
            })
            .collect()
    }

    /// Levels `N` listed for this surface.
    pub fn hz_levels(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.hz.components.keys().filter_map(|k| k.parse().ok()).collect();
        v.sort_unstable();
        v
    }
}

/// Whether `(d, genus)` is one of the fourteen K3-type surfaces.
pub fn is_k3(d: i64, genus: GenusKind) -> bool {
    SURFACES.contains(&(d, genus))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_loads_and_round_trips() {
        for rec in GoldenRecord::all().unwrap() {
            for raw in [&rec.elliptic.order2, &rec.elliptic.three_plus, &rec.elliptic.three_minus] {
                for e in raw.iter().flatten() {
                    let x = QuadNum::parse_canonical(e, rec.m()).unwrap();
                    assert_eq!(&x.to_canonical_string(), e);
                }
            }
            for n in rec.hz_levels() {
                assert!(!rec.hz_reps(n).unwrap().is_empty());
            }
        }
    }
}
