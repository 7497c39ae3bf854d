use std::collections::{HashMap, HashSet, VecDeque};

use num_integer::Integer;

use super::skew::{Coords, SkewHermitian};
use crate::error::{HilbError, Result};
use crate::field_arith::quadnum::q_to_f64;
use crate::field_arith::{q, Field, Mat2K, QuadNum};
use crate::lattice::short_vectors;

/// Linear action `B -> g'^t B g` on coordinates, as an integer matrix acting on
/// column vectors.
pub type Action = [[i128; 4]; 4];

pub fn action_matrix(g: &Mat2K, field: &Field) -> Action {
    let mut out = [[0i128; 4]; 4];
    for i in 0..4 {
        let mut e = [0i128; 4];
        e[i] = 1;
        let img = SkewHermitian::from_coords(&e, field).act(g, field).coords(field);
        for r in 0..4 {
            out[r][i] = img[r];
        }
    }
    out
}

pub fn apply(a: &Action, c: &Coords) -> Coords {
    let mut out = [0i128; 4];
    for r in 0..4 {
        out[r] = (0..4).map(|i| a[r][i] * c[i]).sum();
    }
    out
}

/// `B` and `-B` define the same curve; the representative has its first
/// nonzero coordinate positive.
pub fn sign_normalize(c: Coords) -> Coords {
    match c.iter().find(|&&x| x != 0) {
        Some(&x) if x < 0 => c.map(|v| -v),
        _ => c,
    }
}

/// Elementary generators of `SL(Lambda)` together with their inverses: upper
/// and lower unipotents over bases of `a^{-1}` and `a`, the diagonal unit, and
/// any extra elements supplied by the caller (elliptic stabilizers).
pub fn group_generators(field: &Field, extra: &[Mat2K]) -> Vec<Mat2K> {
    let m = field.m();
    let one = QuadNum::one(m);
    let zero = QuadNum::zero(m);
    let mut gens = Vec::new();
    for x in field.a_inv.basis() {
        gens.push(Mat2K::new(one.clone(), x, zero.clone(), one.clone()));
    }
    for y in field.ideal().basis() {
        gens.push(Mat2K::new(one.clone(), zero.clone(), y, one.clone()));
    }
    let e = field.unit.clone();
    let ei = e.inv().expect("unit");
    gens.push(Mat2K::new(e, zero.clone(), zero.clone(), ei));
    gens.extend(extra.iter().cloned());
    let inverses: Vec<Mat2K> = gens.iter().map(|g| g.adj()).collect();
    gens.extend(inverses);
    gens
}

/// Moves for [`descend`]: the generators together with powers `g^(2^j)` of the
/// unipotent ones, so that large translations take few steps.
pub fn descent_moves(field: &Field, extra: &[Mat2K]) -> Vec<Action> {
    let mut moves: Vec<Action> = group_generators(field, extra).iter().map(|g| action_matrix(g, field)).collect();
    let two = QuadNum::int(2, field.m());
    for g in group_generators(field, extra).into_iter().filter(|g| g.trace() == two) {
        let mut p = g;
        for _ in 0..DESCENT_DOUBLINGS {
            p = p.mul(&p);
            moves.push(action_matrix(&p, field));
        }
    }
    moves
}

const DESCENT_DOUBLINGS: usize = 16;

/// Precomputed data for height evaluation and enumeration at one surface.
pub struct HeightData {
    d: f64,
    a: f64,
    w: [[f64; 2]; 2],
    gram: Vec<Vec<f64>>,
}

impl HeightData {
    pub fn new(field: &Field) -> HeightData {
        let [w1, w2] = field.a_inv.basis();
        let w = [[w1.embed(0), w1.embed(1)], [w2.embed(0), w2.embed(1)]];
        let t = |x: &QuadNum, y: &QuadNum| q_to_f64(&(x * y).trace());
        let gram = vec![vec![t(&w1, &w1), t(&w1, &w2)], vec![t(&w1, &w2), t(&w2, &w2)]];
        HeightData { d: field.d() as f64, a: field.a() as f64, w, gram }
    }

    pub fn height(&self, c: &Coords) -> f64 {
        let l1 = c[2] as f64 * self.w[0][0] + c[3] as f64 * self.w[1][0];
        let l2 = c[2] as f64 * self.w[0][1] + c[3] as f64 * self.w[1][1];
        (c[0] * c[0]) as f64 * self.d + (c[1] * c[1]) as f64 * self.d / (self.a * self.a) + l1 * l1 + l2 * l2
    }
}

/// All sign-normalized primitive coordinates of level `n` and height at most `h`.
pub fn points_of_level(field: &Field, hd: &HeightData, n: i128, h: f64) -> Vec<Coords> {
    let d = field.d();
    let a = field.a();
    let [w1, w2] = field.a_inv.basis();
    let mut out = Vec::new();
    for v in short_vectors(&hd.gram, h) {
        let (x, y) = (v[0] as i128, v[1] as i128);
        if x < 0 || (x == 0 && y < 0) {
            // the sign of lambda is fixed up to the global sign below
            if !(x == 0 && y == 0) {
                continue;
            }
        }
        let lam = &w1.scale(q(x)) + &w2.scale(q(y));
        let r = q(n) - lam.norm() * q(a);
        debug_assert!(r.is_integer());
        let r = r.to_integer();
        if r % d != 0 {
            continue;
        }
        let s = r / d;
        let lh = hd.height(&[0, 0, x, y]);
        let rest = h - lh;
        if rest < 0.0 {
            continue;
        }
        let b1 = (rest / hd.d).sqrt().floor() as i128 + 1;
        let b2 = (rest * (a * a) as f64 / hd.d).sqrt().floor() as i128 + 1;
        let mut pairs = Vec::new();
        if s == 0 {
            for t in -b2..=b2 {
                pairs.push((0, t));
            }
            for t in -b1..=b1 {
                if t != 0 {
                    pairs.push((t, 0));
                }
            }
        } else {
            for a1 in 1..=b1.min(s.abs()) {
                if s % a1 == 0 {
                    pairs.push((a1, s / a1));
                    pairs.push((-a1, -s / a1));
                }
            }
        }
        for (a1, a2) in pairs {
            let c = [a1, a2, x, y];
            let g = c.iter().fold(0i128, |g, v| g.gcd(v));
            if g != 1 || hd.height(&c) > h {
                continue;
            }
            let c = sign_normalize(c);
            out.push(c);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Orbit classes of level-`n` matrices within a height window.
pub struct OrbitWindow {
    pub level: i128,
    pub height_bound: f64,
    pub points: Vec<Coords>,
    index: HashMap<Coords, usize>,
    class_of: Vec<usize>,
    /// Class ids (indices into `points`) meeting the core `height <= bound / 4`.
    pub core_classes: Vec<usize>,
}

impl OrbitWindow {
    pub fn build(field: &Field, hd: &HeightData, actions: &[Action], n: i128, h: f64) -> OrbitWindow {
        let points = points_of_level(field, hd, n, h);
        let index: HashMap<Coords, usize> = points.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let mut uf = UnionFind::new(points.len());
        for (i, c) in points.iter().enumerate() {
            for a in actions {
                let img = sign_normalize(apply(a, c));
                if let Some(&j) = index.get(&img) {
                    uf.union(i, j);
                }
            }
        }
        let class_of: Vec<usize> = (0..points.len()).map(|i| uf.find(i)).collect();
        let mut core: Vec<usize> = points
            .iter()
            .enumerate()
            .filter(|(_, c)| hd.height(c) <= h / 4.0)
            .map(|(i, _)| class_of[i])
            .collect();
        core.sort_unstable();
        core.dedup();
        OrbitWindow { level: n, height_bound: h, points, index, class_of, core_classes: core }
    }

    pub fn class(&self, c: &Coords) -> Option<usize> {
        self.index.get(&sign_normalize(*c)).map(|&i| self.class_of[i])
    }

    /// Smallest-height member of a class, ties broken by coordinates.
    pub fn representative(&self, class: usize, hd: &HeightData) -> Coords {
        let mut best: Option<(f64, Coords)> = None;
        for (i, c) in self.points.iter().enumerate() {
            if self.class_of[i] != class {
                continue;
            }
            let h = hd.height(c);
            let better = match &best {
                None => true,
                Some((bh, bc)) => h < bh - 1e-9 || ((h - bh).abs() <= 1e-9 && key(c) < key(bc)),
            };
            if better {
                best = Some((h, *c));
            }
        }
        best.expect("nonempty class").1
    }
}

fn key(c: &Coords) -> (i128, i128, i128, i128) {
    (c[0].abs(), c[1].abs(), c[2].abs() + c[3].abs(), -c[0])
}

/// Repeatedly applies the generator that lowers the height most.
pub fn descend(c: &Coords, actions: &[Action], hd: &HeightData) -> Coords {
    let mut cur = sign_normalize(*c);
    let mut h = hd.height(&cur);
    loop {
        let mut best: Option<(f64, Coords)> = None;
        for a in actions {
            let img = sign_normalize(apply(a, &cur));
            let hi = hd.height(&img);
            if hi < h - 1e-9 && best.as_ref().is_none_or(|(bh, _)| hi < *bh) {
                best = Some((hi, img));
            }
        }
        match best {
            Some((hi, img)) => {
                cur = img;
                h = hi;
            }
            None => return cur,
        }
    }
}

/// Breadth-first search from `start` through points of height at most `cap`,
/// returning the first visited point satisfying `stop`. Gives up after
/// `limit` points.
pub fn explore<F: Fn(&Coords) -> bool>(
    start: &Coords,
    actions: &[Action],
    hd: &HeightData,
    cap: f64,
    limit: usize,
    stop: F,
) -> Option<Coords> {
    let start = sign_normalize(*start);
    let mut seen: HashSet<Coords> = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(c) = queue.pop_front() {
        if stop(&c) {
            return Some(c);
        }
        for a in actions {
            let img = sign_normalize(apply(a, &c));
            if hd.height(&img) <= cap && seen.insert(img) {
                if seen.len() > limit {
                    return None;
                }
                queue.push_back(img);
            }
        }
    }
    None
}

/// Upper limit on window size before orbit merging is declared stuck.
pub const MAX_WINDOW_POINTS: usize = 3_000_000;

/// Grows the window until `accept` holds for it, or fails.
pub fn grow_until<F: Fn(&OrbitWindow) -> bool>(
    field: &Field,
    hd: &HeightData,
    actions: &[Action],
    n: i128,
    h0: f64,
    accept: F,
) -> Result<OrbitWindow> {
    let mut h = h0;
    loop {
        let w = OrbitWindow::build(field, hd, actions, n, h);
        if accept(&w) {
            return Ok(w);
        }
        if w.points.len() > MAX_WINDOW_POINTS {
            return Err(HilbError::OrbitMerge(format!(
                "D={} N={n}: {} classes meet the core at height {h:.0}",
                field.d(),
                w.core_classes.len()
            )));
        }
        h *= 1.6;
    }
}
