//! Cusps and their Hirzebruch-Jung resolution cycles.
//!
//! For a cusp with ideal class `[c]` the relevant module is
//! `M = c^{-2} a^{-1}`. The boundary of the convex hull of its totally positive
//! elements is a sequence `A_k` with `A_{k-1} + A_{k+1} = b_k A_k`, periodic
//! under the totally positive units. The resolution cycle is periodic under
//! the squared units, so the displayed cycle is doubled exactly when the
//! generator of the totally positive units is not a square.

use std::cmp::Ordering;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{HilbError, Result};
use crate::field_arith::classgroup::Form;
use crate::field_arith::quadnum::{q, QuadNum, Q};
use crate::field_arith::{Field, Mat2K, QuadIdeal};
use crate::lattice::{hnf_with_transform, short_vectors};

/// A cusp: an ideal class `[c]` with module `M = c^{-2} a^{-1}`.
#[derive(Clone, Debug)]
pub struct Cusp {
    pub ideal_class: usize,
    pub ideal: QuadIdeal,
    pub module_m: QuadIdeal,
    pub norm_c: Q,
    /// `t` in `SL_2(K)` with `t(O + a c^2) = c Lambda`, mapping infinity to this cusp.
    pub translation: Mat2K,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FormTriple(pub [i128; 3]);

/// One period of the resolution cycle.
#[derive(Clone, Debug)]
pub struct CuspCycle {
    pub cusp: Cusp,
    pub b_list: Vec<i128>,
    /// `A_0 .. A_{n+1}`; `A_{k+n} = epsilon * A_k`.
    pub boundary_points: Vec<QuadNum>,
    pub epsilon: QuadNum,
    pub doubled: bool,
    pub forms: Vec<Form>,
}

/// One cusp per ideal class.
pub fn enumerate_cusps(field: &Field) -> Result<Vec<Cusp>> {
    let cg = &field.class_group;
    let mut out = Vec::new();
    for (i, c) in cg.reps.iter().enumerate() {
        let module_m = c.pow(-2).mul(&field.a_inv);
        let translation = cusp_translation(field, c)?;
        out.push(Cusp { ideal_class: i, ideal: c.clone(), module_m, norm_c: c.norm(), translation });
    }
    Ok(out)
}

/// A matrix `[[x0, y0], [x1, y1]]` of determinant 1 with `x0 in c`,
/// `x1 in c a`, `y0 in c^{-1} a^{-1}`, `y1 in c^{-1}`.
pub fn cusp_translation(field: &Field, c: &QuadIdeal) -> Result<Mat2K> {
    let m = field.m();
    if *c == QuadIdeal::unit(m) {
        return Ok(Mat2K::identity(m));
    }
    let ca = c.mul(field.ideal());
    let c_inv = c.inv();
    let ca_inv = ca.inv();
    let [c1, c2] = c.basis();
    let [d1, d2] = ca.basis();
    let [e1, e2] = c_inv.basis();
    let [f1, f2] = ca_inv.basis();
    for r in 1..20i128 {
        for i in -r..=r {
            for j in -r..=r {
                for k in -r..=r {
                    for l in -r..=r {
                        if [i, j, k, l].iter().map(|x| x.abs()).max() != Some(r) {
                            continue;
                        }
                        let x0 = &c1.scale(q(i)) + &c2.scale(q(j));
                        let x1 = &d1.scale(q(k)) + &d2.scale(q(l));
                        if x0.is_zero() || x1.is_zero() {
                            continue;
                        }
                        let gens = [&x0 * &e1, &x0 * &e2, &x1 * &f1, &x1 * &f2];
                        if let Some(coef) = express_one(&gens, m) {
                            let y1 = &e1.scale(q(coef[0])) + &e2.scale(q(coef[1]));
                            let y0 = -(&f1.scale(q(coef[2])) + &f2.scale(q(coef[3])));
                            let t = Mat2K::new(x0, y0, x1, y1);
                            debug_assert!(t.det() == QuadNum::one(m));
                            return Ok(t);
                        }
                    }
                }
            }
        }
    }
    Err(HilbError::IncompleteEnumeration("no cusp translation found".into()))
}

/// Integer coefficients writing 1 as a combination of integral `gens`, if the
/// Z-span of `gens` is the maximal order.
fn express_one(gens: &[QuadNum], _m: i128) -> Option<Vec<i128>> {
    let rows: Vec<Vec<i128>> = gens
        .iter()
        .map(|g| {
            let (x, y) = g.omega_coords();
            vec![y.to_integer(), x.to_integer()]
        })
        .collect();
    if gens.iter().any(|g| !g.is_integral()) {
        return None;
    }
    let (h, u) = hnf_with_transform(&rows);
    if h.len() >= 2 && h[0] == vec![1, 0] && h[1] == vec![0, 1] {
        Some(u[1].clone())
    } else {
        None
    }
}

/// Exact `det(x, y) = x^(1) y^(2) - x^(2) y^(1)` divided by `sqrt(m)`:
/// a rational with the sign of the determinant.
pub fn det_over_sqrt(x: &QuadNum, y: &QuadNum) -> Q {
    // x y' - x' y = 2 (x y')_v * beta
    let p = x * &y.conj();
    p.v * q(2)
}

/// A totally positive element of `module` minimizing the trace.
pub fn min_trace_tp(module: &QuadIdeal) -> QuadNum {
    let [w1, w2] = module.basis();
    let e = |x: &QuadNum| [x.embed(0), x.embed(1)];
    let (a, b) = (e(&w1), e(&w2));
    let g = vec![
        vec![a[0] * a[0] + a[1] * a[1], a[0] * b[0] + a[1] * b[1]],
        vec![a[0] * b[0] + a[1] * b[1], b[0] * b[0] + b[1] * b[1]],
    ];
    let mut bound = 1.0;
    loop {
        let cands = short_vectors(&g, bound);
        let mut best: Option<QuadNum> = None;
        for v in cands {
            let x = &w1.scale(q(v[0] as i128)) + &w2.scale(q(v[1] as i128));
            if x.is_totally_positive() {
                let better = match &best {
                    None => true,
                    Some(bx) => (x.trace(), x.v) < (bx.trace(), bx.v),
                };
                if better {
                    best = Some(x);
                }
            }
        }
        if let Some(bx) = best {
            // every TP element with smaller trace t satisfies |x|^2 <= t^2
            let t = q_to_f(&bx.trace());
            if t * t <= bound {
                return bx;
            }
            bound = t * t;
            continue;
        }
        bound *= 4.0;
    }
}

fn q_to_f(x: &Q) -> f64 {
    crate::field_arith::quadnum::q_to_f64(x)
}

/// Smallest integer `k` with `c + k a` totally positive (`a` totally positive).
fn first_tp_shift(a: &QuadNum, c: &QuadNum) -> i128 {
    let r = (-c).div(a).expect("a is nonzero");
    r.floor_embed(0).max(r.floor_embed(1)) + 1
}

/// Compute the resolution cycle for a cusp.
pub fn resolve_cusp(field: &Field, cusp: &Cusp) -> Result<CuspCycle> {
    let module = &cusp.module_m;
    let a0 = min_trace_tp(module);
    // complete a0 to an oriented basis (a0, c) of the module
    let c = complete_basis(module, &a0);
    let a1 = &c + &a0.scale(q(first_tp_shift(&a0, &c)));
    let mut pts = vec![a0.clone(), a1.clone()];
    let mut bs: Vec<i128> = Vec::new();
    loop {
        let n = pts.len();
        let (x, y) = (&pts[n - 2], &pts[n - 1]);
        let b = first_tp_shift(y, &(-x));
        bs.push(b);
        let next = &y.scale(q(b)) - x;
        pts.push(next);
        let n = pts.len() - 2;
        // period closes when (A_n, A_{n+1}) = eps (A_0, A_1)
        if n >= 1 && &pts[n] * &pts[1] == &pts[n + 1] * &pts[0] {
            break;
        }
        if pts.len() > 10_000 {
            return Err(HilbError::IncompleteEnumeration("cusp cycle did not close".into()));
        }
    }
    let n = pts.len() - 2;
    let eps = pts[n].div(&pts[0])?;
    // b_k belongs to A_k: A_{k-1} + A_{k+1} = b_k A_k; bs[j] is attached to A_{j+1}
    let mut b_list = vec![0; n];
    for (j, &b) in bs.iter().enumerate() {
        b_list[(j + 1) % n] = b;
    }
    let doubled = !is_square(&eps);
    let forms = (0..n).map(|k| boundary_form(&pts[k], &pts[k + 1])).collect();
    let cycle = CuspCycle {
        cusp: cusp.clone(),
        b_list,
        boundary_points: pts,
        epsilon: eps,
        doubled,
        forms,
    };
    let _ = field;
    Ok(cycle)
}

/// `[N(x), Tr(x y'), N(y)]` scaled to a primitive integral form.
pub fn boundary_form(x: &QuadNum, y: &QuadNum) -> Form {
    let raw = [x.norm(), (x * &y.conj()).trace(), y.norm()];
    let den = raw.iter().fold(1i128, |acc, r| acc.lcm(r.denom()));
    let ints: Vec<i128> = raw.iter().map(|r| (r * q(den)).to_integer()).collect();
    let g = ints.iter().fold(0i128, |acc, v| acc.gcd(v));
    Form { a: ints[0] / g, b: ints[1] / g, c: ints[2] / g }
}

/// A second basis vector `c` with `(a, c)` an oriented Z-basis of `module`.
fn complete_basis(module: &QuadIdeal, a: &QuadNum) -> QuadNum {
    let [w1, w2] = module.basis();
    // coordinates of a in (w1, w2)
    let (s, t) = coords_in(&w1, &w2, a);
    let (g, x, y) = ext_gcd(s, t);
    assert_eq!(g.abs(), 1, "boundary point is not primitive in the module");
    // s*x + t*y = g; c = -y*w1 + x*w2 satisfies det(a, c) = g * det(w1, w2)
    let mut c = &w1.scale(q(-y * g)) + &w2.scale(q(x * g));
    if det_over_sqrt(a, &c) < Q::zero() {
        c = -c;
    }
    c
}

/// Rational coordinates of `x` in the basis `(w1, w2)`.
pub fn coords_in(w1: &QuadNum, w2: &QuadNum, x: &QuadNum) -> (i128, i128) {
    let d = det_over_sqrt(w1, w2);
    let s = det_over_sqrt(x, w2) / d;
    let t = det_over_sqrt(w1, x) / d;
    assert!(s.is_integer() && t.is_integer(), "element not in the lattice");
    (s.to_integer(), t.to_integer())
}

pub fn rational_coords_in(w1: &QuadNum, w2: &QuadNum, x: &QuadNum) -> (Q, Q) {
    let d = det_over_sqrt(w1, w2);
    (det_over_sqrt(x, w2) / d, det_over_sqrt(w1, x) / d)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Whether a totally positive unit is a square in the field.
pub fn is_square(eps: &QuadNum) -> bool {
    // eta^2 = eps with N(eta) = s forces Tr(eta)^2 = Tr(eps) + 2 s
    for s in [1i128, -1] {
        let t2 = eps.trace() + q(2 * s);
        if t2 < Q::zero() || !t2.is_integer() {
            continue;
        }
        let t2 = t2.to_integer();
        let t = isqrt(t2);
        if t * t != t2 || t == 0 {
            continue;
        }
        // eta = (eps + s) / t
        let eta = (eps + &QuadNum::int(s, eps.m)).scale(Q::new(1, t));
        if &eta * &eta == *eps {
            return true;
        }
    }
    false
}

fn isqrt(n: i128) -> i128 {
    if n < 0 {
        return -1;
    }
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

impl CuspCycle {
    pub fn period(&self) -> usize {
        self.b_list.len()
    }

    /// Boundary point `A_k` for any integer `k`, extended by the unit.
    pub fn point(&self, k: i64) -> QuadNum {
        let n = self.period() as i64;
        let r = k.rem_euclid(n) as usize;
        let e = k.div_euclid(n);
        let mut p = self.boundary_points[r].clone();
        let unit = if e >= 0 { self.epsilon.clone() } else { self.epsilon.inv().expect("unit") };
        for _ in 0..e.unsigned_abs() {
            p = &p * &unit;
        }
        p
    }

    /// Cycle data `(b_k, Q_k)` read from start `s` in the given orientation.
    pub fn view(&self, start: usize, reversed: bool) -> (Vec<i128>, Vec<Form>) {
        let n = self.period() as i64;
        let idx = |j: i64| -> i64 {
            if reversed {
                start as i64 - j
            } else {
                start as i64 + j
            }
        };
        let bs = (0..n).map(|j| self.b_list[idx(j).rem_euclid(n) as usize]).collect();
        let fs = (0..n).map(|j| boundary_form(&self.point(idx(j)), &self.point(idx(j + 1)))).collect();
        (bs, fs)
    }

    /// Rotation and orientation whose first form equals `first`.
    pub fn align_to(&self, first: &Form) -> Option<(usize, bool)> {
        for reversed in [false, true] {
            for s in 0..self.period() {
                let (_, fs) = self.view(s, reversed);
                if fs[0] == *first {
                    return Some((s, reversed));
                }
            }
        }
        None
    }

    /// The default presentation: start at the lexicographically smallest form.
    pub fn canonical_start(&self) -> usize {
        (0..self.period())
            .min_by(|&i, &j| self.forms[i].cmp(&self.forms[j]).then(Ordering::Equal))
            .unwrap_or(0)
    }

    pub fn epsilon_is_one(&self) -> bool {
        self.epsilon == QuadNum::one(self.epsilon.m) && self.epsilon.v.is_zero() && self.epsilon.u.is_one()
    }
}
