//! Oracles and generators shared by the property suites and the acceptance run.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::OnceLock;

use hilbmod::class_numbers::weighted_h;
use hilbmod::fibration_analysis::{classify, fiber_class, find_configurations, ConfigType};
use hilbmod::field_arith::{Field, QuadIdeal, QuadNum, Q};
use hilbmod::golden::SURFACES;
use hilbmod::surface_graph::{contract, ContractionPlan, DivisorVertex, IntersectionGraph, VertexKind};
use num_integer::Integer;
use num_traits::Signed;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

/// Gauss reduction of a positive definite form.
pub fn gauss_reduce(mut a: i64, mut b: i64, mut c: i64) -> (i64, i64, i64) {
    loop {
        if b > a || b <= -a {
            // b into (-a, a], keeping the discriminant
            let k = (a - b).div_euclid(2 * a);
            let b2 = b + 2 * a * k;
            c = (b2 * b2 - (b * b - 4 * a * c)) / (4 * a);
            b = b2;
        }
        if c < a {
            (a, b, c) = (c, -b, a);
            continue;
        }
        if c == a && b < 0 {
            b = -b;
        }
        return (a, b, c);
    }
}

/// Classes of primitive forms of discriminant `-n`, found by reducing every
/// form in a box much larger than the reduced region.
pub fn brute_force_h(n: i64) -> Q {
    if n % 4 == 1 || n % 4 == 2 {
        return Q::from_integer(0);
    }
    let bound = 2 * (n as f64).sqrt() as i64 + 2;
    let mut classes = BTreeSet::new();
    for a in 1..=bound {
        for b in -2 * a..=2 * a {
            let t = b * b + n;
            if t % (4 * a) != 0 {
                continue;
            }
            let c = t / (4 * a);
            if a.gcd(&b).gcd(&c) == 1 {
                classes.insert(gauss_reduce(a, b, c));
            }
        }
    }
    let h = Q::from_integer(classes.len() as i128);
    match n {
        3 => h / Q::from_integer(3),
        4 => h / Q::from_integer(2),
        _ => h,
    }
}

pub fn graph(n: usize, edges: &[(usize, usize, i128)]) -> IntersectionGraph {
    let vertices = (0..n)
        .map(|i| DivisorVertex {
            kind: VertexKind::Cusp { cusp: 0, index: i },
            label: format!("C{}", i + 1),
            self_int: Some(Q::from_integer(-2)),
            nodes: 0,
            boxed: false,
        })
        .collect();
    let mut g = IntersectionGraph::new(vertices);
    for &(a, b, m) in edges {
        g.add_intersection(a, b, m);
    }
    g
}

fn chain(from: usize, to: usize) -> Vec<(usize, usize, i128)> {
    (from..to).map(|i| (i, i + 1, 1)).collect()
}

/// Extended diagrams with their fiber multiplicities.
pub fn affine(t: ConfigType) -> (usize, Vec<(usize, usize, i128)>, Vec<i128>) {
    match t {
        ConfigType::A(1) => (2, vec![(0, 1, 2)], vec![1, 1]),
        ConfigType::A(n) => {
            let mut e = chain(0, n);
            e.push((n, 0, 1));
            (n + 1, e, vec![1; n + 1])
        }
        // ends 0, 1 at the first chain vertex 2, ends n-1, n at the last n-2
        ConfigType::D(n) => {
            let mut e = chain(2, n - 2);
            e.extend([(0, 2, 1), (1, 2, 1), (n - 1, n - 2, 1), (n, n - 2, 1)]);
            let mut m = vec![1, 1];
            m.extend(vec![2; n - 3]);
            m.extend([1, 1]);
            (n + 1, e, m)
        }
        ConfigType::E6 => {
            let mut e = chain(0, 4);
            e.extend([(2, 5, 1), (5, 6, 1)]);
            (7, e, vec![1, 2, 3, 2, 1, 2, 1])
        }
        ConfigType::E7 => {
            let mut e = chain(0, 6);
            e.push((3, 7, 1));
            (8, e, vec![1, 2, 3, 4, 3, 2, 1, 2])
        }
        ConfigType::E8 => {
            let mut e = chain(0, 7);
            e.push((2, 8, 1));
            (9, e, vec![2, 4, 6, 5, 4, 3, 2, 1, 3])
        }
        ConfigType::IrreducibleGenusOne => unreachable!(),
    }
}

pub fn all_types() -> Vec<ConfigType> {
    let mut v: Vec<ConfigType> = (1..=9).map(ConfigType::A).collect();
    v.extend((4..=9).map(ConfigType::D));
    v.extend([ConfigType::E6, ConfigType::E7, ConfigType::E8]);
    v
}

fn vertex(i: usize, s: i128, exceptional: bool) -> DivisorVertex {
    DivisorVertex {
        kind: if exceptional { VertexKind::Hz { level: 1, component: i } } else { VertexKind::Cusp { cusp: 0, index: i } },
        label: format!("{}{i}", if exceptional { "F" } else { "C" }),
        self_int: Some(Q::from_integer(s)),
        nodes: 0,
        boxed: false,
    }
}

/// Blows up a point on the curves `on`, which pairwise meet there.
pub fn blow_up(g: &IntersectionGraph, on: &[usize]) -> IntersectionGraph {
    let n = g.len();
    let mut vertices = g.vertices.clone();
    vertices.push(vertex(n, -1, true));
    let mut h = IntersectionGraph::new(vertices);
    for i in 0..n {
        for j in 0..n {
            h.matrix[i][j] = g.matrix[i][j];
        }
    }
    for &a in on {
        h.add_intersection(a, n, 1);
        for &b in on {
            h.matrix[a][b] -= Q::from_integer(1);
        }
        let s = h.matrix[a][a];
        h.set_self_int(a, s);
    }
    h
}

pub fn base() -> impl Strategy<Value = IntersectionGraph> {
    (1usize..=5).prop_flat_map(|n| {
        (prop::collection::vec(-4i128..=0, n), prop::collection::vec(0i128..=2, n * n)).prop_map(move |(diag, off)| {
            let mut g = IntersectionGraph::new((0..n).map(|i| vertex(i, diag[i], false)).collect());
            for i in 0..n {
                for j in (i + 1)..n {
                    g.add_intersection(i, j, off[i * n + j]);
                }
            }
            g
        })
    })
}

pub const CASES: u32 = 10_000;

pub fn fields() -> &'static [Field] {
    static FIELDS: OnceLock<Vec<Field>> = OnceLock::new();
    FIELDS.get_or_init(|| SURFACES.iter().map(|&(d, g)| Field::new(d, g).unwrap()).collect())
}

pub fn rational() -> impl Strategy<Value = Q> {
    (-60i128..=60, 1i128..=12).prop_map(|(n, d)| Q::new(n, d))
}

pub fn integral(m: i128, (x, y): (i128, i128)) -> QuadNum {
    QuadNum::from_omega_coords(Q::from_integer(x), Q::from_integer(y), m)
}

pub fn canonical(i: &QuadIdeal) -> bool {
    i.a > 0 && i.c > 0 && (0..i.a).contains(&i.b) && i.den > 0 && i.den.gcd(&i.a.gcd(&i.b).gcd(&i.c)) == 1
}


pub fn pair() -> impl Strategy<Value = (i128, i128)> {
    (-40i128..=40, -40i128..=40)
}

/// `h'(-n)` against [`brute_force_h`] for every `n <= max`.
pub fn check_class_numbers(max: i64) -> Result<(), String> {
    for n in 1..=max {
        let (ours, oracle) = (weighted_h(n).map_err(|e| e.to_string())?, brute_force_h(n));
        if ours != oracle {
            return Err(format!("h'(-{n}) = {ours}, brute force {oracle}"));
        }
    }
    Ok(())
}

/// Every extended diagram classifies with its Kodaira multiplicities, and
/// every proper subdiagram is definite.
pub fn check_extended_diagrams() -> Result<(), String> {
    for t in all_types() {
        let (n, e, mult) = affine(t);
        let g = graph(n, &e);
        let all: Vec<usize> = (0..n).collect();
        let c = classify(&g, &all).map_err(|e| format!("{t}: {e}"))?;
        if c.config_type != t || c.multiplicities != mult {
            return Err(format!("{t} classified as {} with {:?}", c.config_type, c.multiplicities));
        }
        if fiber_class(&g, &all).map_err(|e| e.to_string())? != mult {
            return Err(format!("{t}: fiber class differs"));
        }
        let found = find_configurations(&g).map_err(|e| e.to_string())?;
        if found.len() != 1 || found[0].vertices != all {
            return Err(format!("{t}: search found {} configurations", found.len()));
        }
        for drop in 0..n {
            let rest: Vec<usize> = (0..n).filter(|&i| i != drop).collect();
            if classify(&g, &rest).is_ok() || fiber_class(&g, &rest).is_ok() {
                return Err(format!("{t} without curve {drop} is still a configuration"));
            }
        }
    }
    Ok(())
}

pub fn norm_case(k: usize, u1: Q, v1: Q, u2: Q, v2: Q) -> Result<(), TestCaseError> {
    let m = fields()[k].m();
    let x = QuadNum::new(u1, v1, m);
    let y = QuadNum::new(u2, v2, m);
    prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
    prop_assert_eq!(x.conj().conj(), x.clone());
    prop_assert_eq!((&x + &y).trace(), x.trace() + y.trace());
    Ok(())
}

/// The ideal generated by `a, b` is stored canonically, and other generating
/// sets of it give the same record.
pub fn hnf_case(k: usize, s: usize, a: (i128, i128), b: (i128, i128)) -> Result<(), TestCaseError> {
    let f = &fields()[k];
    let m = f.m();
    let (x, y) = (integral(m, a), integral(m, b));
    if x.is_zero() {
        return Ok(());
    }
    let i = QuadIdeal::from_gens(&[x.clone(), y.clone()], m);
    prop_assert!(canonical(&i), "{:?}", i);
    let w = QuadNum::omega(m);
    let alt = match s {
        0 => vec![y.clone(), x.clone()],
        1 => vec![&x * &f.unit, &y * &f.unit],
        _ => vec![x.clone(), &y + &(&x * &w), &x + &y],
    };
    let alt: Vec<QuadNum> = alt.into_iter().filter(|g| !g.is_zero()).collect();
    prop_assert_eq!(&QuadIdeal::from_gens(&alt, m), &i);
    prop_assert_eq!(&QuadIdeal::from_zspan(&i.basis(), m), &i);
    Ok(())
}

pub fn ideal_norm_case(k: usize, a: (i128, i128), b: (i128, i128)) -> Result<(), TestCaseError> {
    let m = fields()[k].m();
    let (x, y) = (integral(m, a), integral(m, b));
    if x.is_zero() || y.is_zero() {
        return Ok(());
    }
    let i = QuadIdeal::principal(&x);
    let j = QuadIdeal::from_gens(&[y.clone(), QuadNum::int(7, m)], m);
    prop_assert_eq!(i.norm(), x.norm().abs());
    prop_assert_eq!(i.mul(&j).norm(), i.norm() * j.norm());
    prop_assert_eq!(j.mul(&j.inv()), QuadIdeal::unit(m));
    Ok(())
}

pub fn blow_up_moves() -> impl Strategy<Value = Vec<(usize, usize, bool)>> {
    prop::collection::vec((0usize..64, 0usize..64, any::<bool>()), 1..7)
}

/// Contracting every exceptional curve of a sequence of blow-ups restores the
/// original intersection matrix, and no entry decreases along the way.
pub fn contraction_case(g0: &IntersectionGraph, moves: &[(usize, usize, bool)]) -> Result<(), TestCaseError> {
    let n0 = g0.len();
    let mut g = g0.clone();
    for &(a, b, two) in moves {
        let (a, b) = (a % g.len(), b % g.len());
        let on = if two && a != b && g.matrix[a][b] > Q::from_integer(0) { vec![a, b] } else { vec![a] };
        g = blow_up(&g, &on);
    }
    let exceptional: Vec<usize> = (n0..g.len()).collect();
    let plan = ContractionPlan::new(&g, &exceptional).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let (h, survivors) = contract(&g, &plan).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(survivors, (0..n0).collect::<Vec<_>>());
    for i in 0..n0 {
        for j in 0..n0 {
            prop_assert_eq!(h.matrix[i][j], g0.matrix[i][j]);
            prop_assert!(h.matrix[i][j] >= g.matrix[i][j]);
        }
    }
    Ok(())
}
