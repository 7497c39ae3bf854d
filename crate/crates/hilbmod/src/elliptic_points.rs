//! Elliptic points of orders 2 and 3: stabilizer enumeration, rotation types,
//! exact conjugacy and the binary form counting Hirzebruch-Zagier branches
//! through a point.
//!
//! Stabilizers are normalized so that order 3 elements have trace `-1`.
//! A point is identified with the conjugacy class of its stabilizer subgroup.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{HilbError, Result};
use crate::field_arith::classgroup::principal_generator;
use crate::field_arith::quadnum::q_to_f64;
use crate::field_arith::{q, sl_lambda_member, Field, Form, Mat2K, QuadIdeal, QuadNum, Q};
use crate::golden::GoldenRecord;
use crate::hz_divisors::SkewHermitian;
use crate::lattice::{integer_kernel, is_positive_definite, short_vectors};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EllipticType {
    Two,
    ThreePlus,
    ThreeMinus,
}

impl EllipticType {
    pub const ALL: [EllipticType; 3] = [EllipticType::Two, EllipticType::ThreePlus, EllipticType::ThreeMinus];

    /// Order of the isotropy group in `PSL`.
    pub fn order(self) -> usize {
        match self {
            EllipticType::Two => 2,
            _ => 3,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for EllipticType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EllipticType::Two => "2",
            EllipticType::ThreePlus => "3+",
            EllipticType::ThreeMinus => "3-",
        })
    }
}

/// Rotation type of a stabilizer of order 4 or 6 in `SL_2`.
///
/// The eigenvalue of `M` on `(z, 1)` at the fixed point in the upper half plane
/// is `t/2 + i sgn(c) sqrt(4 - t^2)/2`, so the rotation factors in the two
/// embeddings agree exactly when `c` has the same sign in both, i.e. `Nm(c) > 0`.
pub fn rotation_type(m: &Mat2K) -> Result<EllipticType> {
    let t = m.trace();
    let one = QuadNum::one(m.m());
    if m.det() != one || !t.is_rational() || m.c.is_zero() {
        return Err(HilbError::NotTorsion(format!("{m:?}")));
    }
    let tr = t.u;
    if tr.is_zero() {
        Ok(EllipticType::Two)
    } else if tr.abs() == q(1) {
        if m.c.norm() > q(0) {
            Ok(EllipticType::ThreePlus)
        } else {
            Ok(EllipticType::ThreeMinus)
        }
    } else {
        Err(HilbError::NotTorsion(format!("{m:?}")))
    }
}

/// Floating point rotation factors `(c z + d)^{-2}` at the fixed point, as angles
/// in units of full turns. Used only as a cross-check of [`rotation_type`].
pub fn rotation_angles(m: &Mat2K) -> [f64; 2] {
    let mut out = [0.0; 2];
    for (j, o) in out.iter_mut().enumerate() {
        let t = m.trace().embed(j);
        let c = m.c.embed(j);
        let im = c.signum() * (4.0 - t * t).max(0.0).sqrt() / 2.0;
        let mu = (t / 2.0, im);
        let ang = -2.0 * mu.1.atan2(mu.0);
        *o = (ang / std::f64::consts::TAU).rem_euclid(1.0);
    }
    out
}

/// The fixed point of a stabilizer in each embedding, with the defining
/// quadratic `c z^2 + (d - a) z - b`.
#[derive(Clone, Debug, Serialize)]
pub struct FixedPoint {
    pub quadratic: [String; 3],
    /// `(re, im)` in the first and second embedding.
    pub z: [(f64, f64); 2],
}

impl FixedPoint {
    fn of(m: &Mat2K) -> FixedPoint {
        let quad = [m.c.clone(), &m.d - &m.a, -&m.b];
        let mut z = [(0.0, 0.0); 2];
        for (j, zj) in z.iter_mut().enumerate() {
            let (a, d, c) = (m.a.embed(j), m.d.embed(j), m.c.embed(j));
            let t = a + d;
            let r = (4.0 - t * t).max(0.0).sqrt();
            *zj = ((a - d) / (2.0 * c), c.signum() * r / (2.0 * c));
        }
        FixedPoint { quadratic: quad.map(|x| x.to_canonical_string()), z }
    }
}

/// Exceptional curves of the minimal resolution of an elliptic point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalResolution {
    pub components: Vec<i64>,
    pub internal_edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct EllipticPoint {
    pub stabilizer: Mat2K,
    pub kind: EllipticType,
    pub fixed_point: FixedPoint,
}

impl EllipticPoint {
    /// Wraps a stabilizer, normalizing order 3 elements to trace `-1`.
    pub fn new(m: &Mat2K) -> Result<EllipticPoint> {
        let kind = rotation_type(m)?;
        let stab = if kind != EllipticType::Two && m.trace().u == q(1) { m.neg() } else { m.clone() };
        Ok(EllipticPoint { fixed_point: FixedPoint::of(&stab), stabilizer: stab, kind })
    }

    pub fn local_resolution(&self) -> LocalResolution {
        match self.kind {
            EllipticType::Two => LocalResolution { components: vec![-2], internal_edges: vec![] },
            EllipticType::ThreePlus => LocalResolution { components: vec![-3], internal_edges: vec![] },
            EllipticType::ThreeMinus => LocalResolution { components: vec![-2, -2], internal_edges: vec![(0, 1)] },
        }
    }

    /// Whether `H_B` is mapped to itself by the stabilizer.
    pub fn preserves(&self, b: &SkewHermitian, field: &Field) -> bool {
        let img = b.act(&self.stabilizer, field);
        img == *b || img == b.neg()
    }
}

fn sign_pattern(c: &QuadNum) -> (Ordering, Ordering) {
    (c.sign(0), c.sign(1))
}

/// Z-basis of `M(Lambda) = [[O, a^{-1}], [a, O]]` as eight matrices.
fn order_basis(field: &Field) -> Vec<Mat2K> {
    let m = field.m();
    let z = QuadNum::zero(m);
    let o = [QuadNum::one(m), QuadNum::omega(m)];
    let ai = field.a_inv.basis();
    let a = field.ideal().basis();
    let mut out = Vec::with_capacity(8);
    for x in &o {
        out.push(Mat2K::new(x.clone(), z.clone(), z.clone(), z.clone()));
    }
    for x in &ai {
        out.push(Mat2K::new(z.clone(), x.clone(), z.clone(), z.clone()));
    }
    for x in &a {
        out.push(Mat2K::new(z.clone(), z.clone(), x.clone(), z.clone()));
    }
    for x in &o {
        out.push(Mat2K::new(z.clone(), z.clone(), z.clone(), x.clone()));
    }
    out
}

fn combine(basis: &[Mat2K], coeffs: &[i128], m: i128) -> Mat2K {
    let mut acc = Mat2K::from_ints(0, 0, 0, 0, m);
    for (b, &c) in basis.iter().zip(coeffs) {
        if c != 0 {
            let s = b.scale(&QuadNum::int(c, m));
            acc = Mat2K::new(&acc.a + &s.a, &acc.b + &s.b, &acc.c + &s.c, &acc.d + &s.d);
        }
    }
    acc
}

/// Rational linear equations (as integer rows) of the map `x -> f(x)` into `K^k`,
/// one row per rational coordinate of the output.
pub(crate) fn linear_rows<F: Fn(&[i128]) -> Vec<QuadNum>>(n: usize, f: F) -> Vec<Vec<i128>> {
    let cols: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            let e: Vec<i128> = (0..n).map(|j| i128::from(i == j)).collect();
            f(&e).iter().flat_map(|x| [x.u, x.v]).collect()
        })
        .collect();
    let rows = cols[0].len();
    (0..rows)
        .map(|r| {
            let den = cols.iter().fold(1i128, |l, c| l.lcm(c[r].denom()));
            cols.iter().map(|c| (c[r] * q(den)).to_integer()).collect()
        })
        .filter(|row: &Vec<i128>| row.iter().any(|&x| x != 0))
        .collect()
}

fn det_bilinear(g: &Mat2K, h: &Mat2K) -> QuadNum {
    let s = &(&(&g.a * &h.d) + &(&h.a * &g.d)) - &(&(&g.b * &h.c) + &(&h.b * &g.c));
    s.scale(Q::new(1, 2))
}

/// All `g` in `SL(Lambda)` with `g g1 = g2 g`, for `g1, g2` fixing points of
/// `H x H`. The solution module is a rank one module over a CM order on which
/// `det` is a fixed multiple of the relative norm; when `Tr(det g)` is not
/// positive definite no solution has determinant 1.
pub fn intertwiners(field: &Field, g1: &Mat2K, g2: &Mat2K) -> Result<Vec<Mat2K>> {
    let m = field.m();
    let basis = order_basis(field);
    let rows = linear_rows(8, |x| {
        let g = combine(&basis, x, m);
        let r = &g.mul(g1);
        let l = &g2.mul(&g);
        vec![&r.a - &l.a, &r.b - &l.b, &r.c - &l.c, &r.d - &l.d]
    });
    let ker = integer_kernel(&rows, 8);
    if ker.is_empty() {
        return Ok(Vec::new());
    }
    if ker.len() != 4 {
        return Err(HilbError::KernelDimension(ker.len()));
    }
    let mats: Vec<Mat2K> = ker.iter().map(|v| combine(&basis, v, m)).collect();
    let mut gram = vec![vec![0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            gram[i][j] = q_to_f64(&det_bilinear(&mats[i], &mats[j]).trace());
        }
    }
    let one = QuadNum::one(m);
    let mut out = Vec::new();
    if !is_positive_definite(&gram) {
        return Ok(out);
    }
    for v in short_vectors(&gram, 2.0) {
        let coeffs: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        if coeffs.iter().all(|&x| x == 0) {
            continue;
        }
        let g = combine(&mats, &coeffs, m);
        if g.det() == one {
            out.push(g);
        }
    }
    Ok(out)
}

/// An element conjugating the stabilizer group of `p1` onto that of `p2`, if any.
pub fn conjugating_element(field: &Field, p1: &EllipticPoint, p2: &EllipticPoint) -> Result<Option<Mat2K>> {
    if p1.kind != p2.kind {
        return Ok(None);
    }
    let g1 = &p1.stabilizer;
    let s = &p2.stabilizer;
    let targets = match p1.kind {
        EllipticType::Two => [s.clone(), s.neg()],
        _ => [s.clone(), s.adj()],
    };
    for t in targets {
        if sign_pattern(&t.c) != sign_pattern(&g1.c) {
            continue;
        }
        if let Some(g) = intertwiners(field, g1, &t)?.into_iter().next() {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

/// Size of the stabilizer of the fixed point in `SL(Lambda)`.
pub fn stabilizer_size(field: &Field, p: &EllipticPoint) -> Result<usize> {
    Ok(intertwiners(field, &p.stabilizer, &p.stabilizer)?.len())
}

/// Expected number of points per type, `[two, three_plus, three_minus]`.
pub type Counts = [usize; 3];

pub fn reference_counts(rec: &GoldenRecord) -> Counts {
    [rec.elliptic.order2.len(), rec.elliptic.three_plus.len(), rec.elliptic.three_minus.len()]
}

/// Largest `Nm(c) / A` searched before giving up.
pub const SEARCH_NORM_CAP: i128 = 4000;

/// Enumerates elliptic points until `expected` counts are reached.
///
/// Every class has a stabilizer `[[a, b], [c, t - a]]` with `c` in `a`, so the
/// search runs over principal ideals `(c) = a b` by increasing `Nm(b)`, over
/// `c` modulo squares of units and sign, and over `a` modulo `b`.
pub fn enumerate_elliptic(field: &Field, expected: Counts) -> Result<Vec<EllipticPoint>> {
    let m = field.m();
    let mut found: Vec<EllipticPoint> = Vec::new();
    let mut counts: Counts = [0; 3];
    let unit = field.unit.clone();
    let omega = QuadNum::omega(m);
    let mut k = 1;
    while counts != expected {
        if k > SEARCH_NORM_CAP {
            return Err(HilbError::IncompleteEnumeration(format!(
                "D={} {}: found {:?}, expected {:?} after Nm(c)/A <= {}",
                field.d(),
                field.genus.genus_kind,
                counts,
                expected,
                SEARCH_NORM_CAP
            )));
        }
        for b_ideal in QuadIdeal::integral_of_norm(k, m) {
            let Some(c0) = principal_generator(&b_ideal.mul(field.ideal())) else { continue };
            for c in [c0.clone(), &c0 * &unit] {
                for x in 0..b_ideal.a {
                    for y in 0..b_ideal.c {
                        let a = &QuadNum::int(x, m) + &omega.scale(q(y));
                        for t in [0, -1] {
                            let d = &QuadNum::int(t, m) - &a;
                            let bb = (&(&a * &d) - &QuadNum::one(m)).div(&c)?;
                            if !field.a_inv.contains(&bb) {
                                continue;
                            }
                            let g = Mat2K::new(a.clone(), bb, c.clone(), d);
                            let p = EllipticPoint::new(&g)?;
                            let i = p.kind.index();
                            if counts[i] >= expected[i] {
                                continue;
                            }
                            let mut new = true;
                            for f in found.iter().filter(|f| f.kind == p.kind) {
                                if conjugating_element(field, f, &p)?.is_some() {
                                    new = false;
                                    break;
                                }
                            }
                            if new {
                                counts[i] += 1;
                                found.push(p);
                            }
                        }
                    }
                }
            }
        }
        k += 1;
    }
    Ok(found)
}

/// Checks a reference stabilizer list against an enumeration: each reference
/// matrix must lie in `SL(Lambda)`, have the stated type, and be conjugate to
/// exactly one enumerated point. Returns the matched index per reference entry.
pub fn match_reference(
    field: &Field,
    points: &[EllipticPoint],
    reference: &[Mat2K],
    kind: EllipticType,
) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(reference.len());
    for (i, r) in reference.iter().enumerate() {
        if !sl_lambda_member(r, &field.genus) {
            return Err(HilbError::Verification(format!("{kind} entry {} not in SL(Lambda): {r:?}", i + 1)));
        }
        let rp = EllipticPoint::new(r)?;
        if rp.kind != kind {
            return Err(HilbError::Verification(format!(
                "{kind} entry {} has rotation type {}: {r:?}",
                i + 1,
                rp.kind
            )));
        }
        let mut hits = Vec::new();
        for (j, p) in points.iter().enumerate() {
            if conjugating_element(field, &rp, p)?.is_some() {
                hits.push(j);
            }
        }
        if hits.len() != 1 {
            return Err(HilbError::Verification(format!(
                "{kind} entry {} is conjugate to {} enumerated points",
                i + 1,
                hits.len()
            )));
        }
        out.push(hits[0]);
    }
    let mut sorted = out.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != out.len() {
        return Err(HilbError::Verification(format!("two {kind} entries are conjugate")));
    }
    Ok(out)
}

/// Enumerates the points of a reference surface and returns them in reference
/// table order (order 2, then 3+, then 3-), each with the reference stabilizer.
pub fn points_in_reference_order(field: &Field, rec: &GoldenRecord) -> Result<Vec<EllipticPoint>> {
    let found = enumerate_elliptic(field, reference_counts(rec))?;
    let mut out = Vec::new();
    for (kind, refs) in [
        (EllipticType::Two, rec.order2()?),
        (EllipticType::ThreePlus, rec.three_plus()?),
        (EllipticType::ThreeMinus, rec.three_minus()?),
    ] {
        let pts: Vec<EllipticPoint> = found.iter().filter(|p| p.kind == kind).cloned().collect();
        match_reference(field, &pts, &refs, kind)?;
        for r in &refs {
            out.push(EllipticPoint::new(r)?);
        }
    }
    Ok(out)
}

/// `phi_tau(x, y) = A det(x B1 + y B2)` on the rank two module `L_tau` of
/// integral skew-hermitian matrices whose curve passes through the fixed point.
#[derive(Clone, Debug)]
pub struct PhiForm {
    pub basis: [SkewHermitian; 2],
    pub form: Form,
}

impl PhiForm {
    pub fn element(&self, x: i128, y: i128, field: &Field) -> SkewHermitian {
        let c0 = self.basis[0].coords(field);
        let c1 = self.basis[1].coords(field);
        let c = [0, 1, 2, 3].map(|i| x * c0[i] + y * c1[i]);
        SkewHermitian::from_coords(&c, field)
    }

    /// All `(x, y)` with `phi(x, y) = n`.
    pub fn representations(&self, n: i128) -> Vec<(i128, i128)> {
        let f = &self.form;
        let g = vec![
            vec![f.a as f64, f.b as f64 / 2.0],
            vec![f.b as f64 / 2.0, f.c as f64],
        ];
        short_vectors(&g, n as f64)
            .into_iter()
            .map(|v| (v[0] as i128, v[1] as i128))
            .filter(|&(x, y)| f.eval(x, y) == n)
            .collect()
    }
}

/// Computes `L_tau` exactly. With `z_j = (alpha_j + i s_j r) / c_j` the fixed
/// point in embedding `j`, the incidence `(z2, 1) B (z1, 1)^t = 0` multiplied by
/// `c c'` splits into a real and an imaginary part, each an element of `K`.
pub fn phi_form(point: &EllipticPoint, field: &Field) -> Result<PhiForm> {
    let m = field.m();
    let g = &point.stabilizer;
    let t = g.trace().u;
    let r2 = (q(4) - t * t) / q(4);
    let alpha = (&g.a - &g.d).scale(Q::new(1, 2));
    let c = &g.c;
    let s1 = if c.sign(0) == Ordering::Greater { 1 } else { -1 };
    let s2 = if c.sign(1) == Ordering::Greater { 1 } else { -1 };
    let sd = field.sqrt_d();
    let a = q(field.a());
    let alpha_c = alpha.conj();
    let c_c = c.conj();
    let nc = QuadNum::rational(c.norm(), m);
    let rows = linear_rows(4, |x| {
        let b = SkewHermitian::from_coords(&[x[0], x[1], x[2], x[3]], field);
        let l = &b.lambda;
        let lc = l.conj();
        let re = &(&(&sd.scale(q(b.a1)) * &(&(&alpha * &alpha_c) - &QuadNum::rational(r2 * q(s1 * s2), m)))
            + &(&(l * c) * &alpha_c))
            + &(&(&(-&(&lc * &c_c)) * &alpha) + &(&sd.scale(q(b.a2) / a) * &nc));
        let im = &(&sd.scale(q(b.a1)) * &(&alpha.scale(q(s2)) + &alpha_c.scale(q(s1))))
            + &(&(l * c).scale(q(s2)) - &(&lc * &c_c).scale(q(s1)));
        vec![re, im]
    });
    let ker = integer_kernel(&rows, 4);
    if ker.len() != 2 {
        return Err(HilbError::KernelDimension(ker.len()));
    }
    let b1 = SkewHermitian::from_coords(&[ker[0][0], ker[0][1], ker[0][2], ker[0][3]], field);
    let b2 = SkewHermitian::from_coords(&[ker[1][0], ker[1][1], ker[1][2], ker[1][3]], field);
    let n = |b: &SkewHermitian| b.level(field);
    let sum = SkewHermitian::from_coords(
        &[0, 1, 2, 3].map(|i| ker[0][i] + ker[1][i]),
        field,
    );
    let fa = n(&b1);
    let fc = n(&b2);
    let fb = n(&sum) - fa - fc;
    let form = Form { a: fa, b: fb, c: fc };
    if fa <= 0 || fb * fb - 4 * fa * fc >= 0 {
        return Err(HilbError::Verification(format!("phi form {form:?} is not positive definite")));
    }
    Ok(PhiForm { basis: [b1, b2], form })
}
