use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::skew::{Coords, SkewHermitian};
use crate::cusp_resolution::{rational_coords_in, resolve_cusp, Cusp, CuspCycle};
use crate::elliptic_points::linear_rows;
use crate::error::{HilbError, Result};
use crate::field_arith::{q, sl_lambda_member, Field, Mat2K, QuadNum, Q};
use crate::lattice::{hnf_with_transform, integer_kernel};

/// A branch of a Hirzebruch-Zagier curve at a cusp. In the cone spanned by
/// `A_k, A_{k+1}` the branch has `lambda = N(c) (p A_k + q A_{k+1})`; its local
/// equation in the toric chart is `u_1^{p/n} = zeta u_2^{q/n}`, `n = gcd(p, q)`.
#[derive(Clone, Debug, Serialize)]
pub struct BranchAtCusp {
    pub cusp: usize,
    pub cone: usize,
    pub p: i128,
    pub q: i128,
    pub n: i128,
    pub twist: i128,
    pub matrix: SkewHermitian,
}

impl BranchAtCusp {
    /// `(curve index, multiplicity)` for the two cusp curves bounding the cone,
    /// with indices modulo the full cycle length `len`.
    pub fn multiplicities(&self, len: usize) -> [(usize, i128); 2] {
        [(self.cone, self.p / self.n), ((self.cone + 1) % len, self.q / self.n)]
    }
}

/// The frame `B -> t'^t B t` moving a cusp to infinity, with the data needed
/// to list matrices whose upper-left entry vanishes there.
pub struct CuspFrame {
    pub cusp_index: usize,
    pub cycle: CuspCycle,
    /// Number of curves in the resolution cycle, counting a doubled period twice.
    pub full_length: usize,
    t: Mat2K,
    lifts: [Coords; 2],
    image: [QuadNum; 2],
    kernel: Coords,
    c0: QuadNum,
    translations: Vec<Mat2K>,
}

fn transformed(b: &SkewHermitian, t: &Mat2K, field: &Field) -> Mat2K {
    t.conj().transpose().mul(&b.matrix(field)).mul(t)
}

fn combo(vs: &[Coords], xs: &[i128]) -> Coords {
    let mut out = [0i128; 4];
    for (v, &x) in vs.iter().zip(xs) {
        for i in 0..4 {
            out[i] += x * v[i];
        }
    }
    out
}

impl CuspFrame {
    pub fn new(field: &Field, cusp_index: usize, cusp: &Cusp) -> Result<CuspFrame> {
        let cycle = resolve_cusp(field, cusp)?;
        let full_length = cycle.period() * if cycle.doubled { 2 } else { 1 };
        let t = cusp.translation.clone();
        let tb = |x: &[i128]| transformed(&SkewHermitian::from_coords(&[x[0], x[1], x[2], x[3]], field), &t, field);
        let rows = linear_rows(4, |x| vec![tb(x).a]);
        let k3 = integer_kernel(&rows, 4);
        if k3.len() != 3 {
            return Err(HilbError::KernelDimension(k3.len()));
        }
        let k3: Vec<Coords> = k3.iter().map(|v| [v[0], v[1], v[2], v[3]]).collect();
        let lam: Vec<QuadNum> = k3.iter().map(|v| tb(v).b).collect();
        let den = lam.iter().fold(1i128, |l, x| l.lcm(x.u.denom()).lcm(x.v.denom()));
        let rows: Vec<Vec<i128>> =
            lam.iter().map(|x| vec![(x.u * q(den)).to_integer(), (x.v * q(den)).to_integer()]).collect();
        let (h, u) = hnf_with_transform(&rows);
        if h[2].iter().any(|&x| x != 0) || h[1].iter().all(|&x| x == 0) {
            return Err(HilbError::Verification("cusp frame image is not of rank two".into()));
        }
        let basis: Vec<Coords> = (0..3).map(|j| combo(&k3, &u[j])).collect();
        let m = field.m();
        let image = [0, 1].map(|j| QuadNum::new(q(h[j][0]) / q(den), q(h[j][1]) / q(den), m));
        let kernel = basis[2];
        let c0 = tb(&kernel).d;
        // translations at infinity are by the cusp module
        let one = QuadNum::one(m);
        let zero = QuadNum::zero(m);
        let tinv = t.inverse()?;
        let mut translations = Vec::new();
        for mu in cusp.module_m.basis() {
            let u = Mat2K::new(one.clone(), mu, zero.clone(), one.clone());
            if !sl_lambda_member(&t.mul(&u).mul(&tinv), &field.genus) {
                return Err(HilbError::Verification(format!("translation {u:?} is not in the cusp stabilizer")));
            }
            translations.push(u);
        }
        // every lambda of an integral matrix lies in N(c) M
        let s = cusp.norm_c;
        let [w1, w2] = cusp.module_m.basis();
        for v in &image {
            let (x, y) = rational_coords_in(&w1, &w2, &v.scale(q(1) / s));
            if !x.is_integer() || !y.is_integer() {
                return Err(HilbError::Verification(format!("{v} is not in N(c) M")));
            }
        }
        Ok(CuspFrame {
            cusp_index,
            cycle,
            full_length,
            t,
            lifts: [basis[0], basis[1]],
            image,
            kernel,
            c0,
            translations,
        })
    }

    /// The translations at this cusp as elements of `SL(Lambda)`.
    pub fn stabilizer_translations(&self) -> Vec<Mat2K> {
        let tinv = self.t.inverse().expect("invertible frame");
        self.translations.iter().map(|u| self.t.mul(u).mul(&tinv)).collect()
    }

    /// Primitive branches of level `n` at this cusp, one per orbit of the cusp
    /// stabilizer.
    pub fn branches(&self, field: &Field, n: i128) -> Result<Vec<BranchAtCusp>> {
        let s = self.cycle.cusp.norm_c;
        let target = q(n) / q(field.a());
        let mut out = Vec::new();
        for k in 0..self.full_length {
            let a = self.cycle.point(k as i64).scale(s);
            let b = self.cycle.point(k as i64 + 1).scale(s);
            let (na, nb, tr) = (a.norm(), b.norm(), (&a * &b.conj()).trace());
            let pmax = isqrt_floor(target / na);
            let qmax = isqrt_floor(target / nb);
            for p in 1..=pmax {
                for qq in 0..=qmax {
                    if q(p * p) * na + q(p * qq) * tr + q(qq * qq) * nb != target {
                        continue;
                    }
                    let lam = &a.scale(q(p)) + &b.scale(q(qq));
                    let (y0, y1) = rational_coords_in(&self.image[0], &self.image[1], &lam);
                    if !y0.is_integer() || !y1.is_integer() {
                        continue;
                    }
                    let b0 = combo(&self.lifts, &[y0.to_integer(), y1.to_integer()]);
                    let bt = transformed(&SkewHermitian::from_coords(&b0, field), &self.t, field);
                    let mut g = 0i128;
                    for u in &self.translations {
                        let moved = u.conj().transpose().mul(&bt).mul(u);
                        let r = (&moved.d - &bt.d).div(&self.c0)?;
                        if !r.is_rational() || !r.u.is_integer() {
                            return Err(HilbError::Verification(format!("translation shift {r} is not integral")));
                        }
                        g = g.gcd(&r.u.to_integer());
                    }
                    let nn = p.gcd(&qq);
                    for j in 0..g {
                        let c = combo(&[b0, self.kernel], &[1, j]);
                        let mat = SkewHermitian::from_coords(&c, field);
                        if !mat.is_primitive(field) {
                            continue;
                        }
                        debug_assert_eq!(mat.level(field), n);
                        out.push(BranchAtCusp { cusp: self.cusp_index, cone: k, p, q: qq, n: nn, twist: j, matrix: mat });
                    }
                    if g != nn {
                        return Err(HilbError::Verification(format!(
                            "cusp {} cone {k}: {g} translation classes for gcd(p, q) = {nn}",
                            self.cusp_index
                        )));
                    }
                }
            }
        }
        Ok(out)
    }
}

fn isqrt_floor(x: Q) -> i128 {
    if x <= Q::zero() {
        return 0;
    }
    let mut r = (x.numer().abs() as f64 / *x.denom() as f64).sqrt().floor() as i128;
    while q(r * r) > x {
        r -= 1;
    }
    while q((r + 1) * (r + 1)) <= x {
        r += 1;
    }
    r
}
