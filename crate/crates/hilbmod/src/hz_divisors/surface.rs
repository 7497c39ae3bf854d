use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use serde::Serialize;

use super::cusp_branches::{BranchAtCusp, CuspFrame};
use super::pair_totals::{f_level_elliptic, f_level_total};
use super::orbits::{
    action_matrix, descend, descent_moves, explore, group_generators, points_of_level, sign_normalize, Action, HeightData, OrbitWindow,
    MAX_WINDOW_POINTS,
};
use super::skew::{Coords, SkewHermitian};
use crate::elliptic_points::{intertwiners, phi_form, EllipticPoint, EllipticType, PhiForm};
use crate::error::{HilbError, Result};
use crate::field_arith::{Field, Mat2K, Q};
use crate::golden::GoldenRecord;

/// Identifies a component: level `N` and index among the components of `F_N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ComponentId {
    pub level: u32,
    pub index: usize,
}

/// Incidence of a component with the exceptional curve(s) over an elliptic point.
#[derive(Clone, Debug, Serialize)]
pub struct EllipticIncidence {
    pub point: usize,
    /// `0` for the single curve over types 2 and 3+; `0` and `1` for the two
    /// curves over a 3- point.
    pub curve: usize,
    pub multiplicity: i128,
}

#[derive(Clone, Debug, Serialize)]
pub struct HzComponent {
    pub id: ComponentId,
    pub label: String,
    pub representative: SkewHermitian,
    pub cusp_branches: Vec<BranchAtCusp>,
    pub elliptic: Vec<EllipticIncidence>,
}

/// Where two branches of Hirzebruch-Zagier curves meet after resolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ContactSite {
    /// Two branches through a 3- point, separated only by the contracted middle curve.
    ThreeMinus(usize),
    /// A CM point with trivial isotropy in `PSL`.
    Transversal,
}

/// `count` intersection points of `a` and `b`; for `a == b` these are nodes.
#[derive(Clone, Debug, Serialize)]
pub struct Contact {
    pub a: ComponentId,
    pub b: ComponentId,
    pub site: ContactSite,
    pub count: i128,
}

struct Level {
    reference: Vec<Coords>,
    window: OrbitWindow,
    classes: Vec<usize>,
}

impl Level {
    fn component(&self, c: &Coords) -> Option<usize> {
        let cl = self.window.class(c)?;
        self.classes.iter().position(|&x| x == cl)
    }
}

const EXPLORE_ROUNDS: usize = 6;
const EXPLORE_LIMIT: usize = 400_000;

/// Hirzebruch-Zagier data of one surface for the levels of its reference record.
pub struct HzSurface {
    pub components: BTreeMap<ComponentId, HzComponent>,
    pub contacts: Vec<Contact>,
    levels: BTreeMap<u32, Level>,
    actions: Vec<Action>,
    moves: Vec<Action>,
    hd: HeightData,
}

pub fn component_label(level: u32, index: usize, count: usize) -> String {
    if count == 1 {
        format!("F{level}")
    } else {
        format!("F{level}{}", index + 1)
    }
}

fn acceptable(w: &OrbitWindow, reference: &[Coords]) -> Option<Vec<usize>> {
    let core: BTreeSet<usize> = w.core_classes.iter().copied().collect();
    let mut classes = Vec::new();
    for r in reference {
        let c = w.class(r)?;
        if !core.contains(&c) || classes.contains(&c) {
            return None;
        }
        classes.push(c);
    }
    (core.len() == classes.len()).then_some(classes)
}

/// `J B` with `J = [[0, 1], [-1, 0]]`: the curve `H_B` is the graph of `z2 = (J B) z1`.
fn graph_map(b: &SkewHermitian, field: &Field) -> Mat2K {
    let m = b.matrix(field);
    Mat2K::new(m.c.clone(), m.d.clone(), -&m.a, -&m.b)
}

/// The element `(J B')^{-1} J B` fixing the intersection point of `H_B` and `H_B'`.
fn meeting_element(b: &SkewHermitian, b2: &SkewHermitian, field: &Field) -> Mat2K {
    graph_map(b2, field).adj().mul(&graph_map(b, field))
}

fn polar(b: &SkewHermitian, b2: &SkewHermitian, field: &Field) -> i128 {
    let s = SkewHermitian::new(b.a1 + b2.a1, b.a2 + b2.a2, &b.lambda + &b2.lambda);
    s.level(field) - b.level(field) - b2.level(field)
}

impl HzSurface {
    pub fn compute(
        field: &Field,
        rec: &GoldenRecord,
        points: &[EllipticPoint],
        frames: &[CuspFrame],
    ) -> Result<HzSurface> {
        let mut extra: Vec<Mat2K> = points.iter().map(|p| p.stabilizer.clone()).collect();
        extra.extend(frames.iter().flat_map(|f| f.stabilizer_translations()));
        let actions: Vec<Action> = group_generators(field, &extra).iter().map(|g| action_matrix(g, field)).collect();
        let hd = HeightData::new(field);
        let moves = descent_moves(field, &extra);
        let phis: Vec<PhiForm> = points.iter().map(|p| phi_form(p, field)).collect::<Result<_>>()?;
        let level_list = rec.hz_levels();
        let mut surf = HzSurface {
            components: BTreeMap::new(),
            contacts: Vec::new(),
            levels: BTreeMap::new(),
            actions,
            moves,
            hd,
        };

        // branches at cusps and elliptic points, grouped by level
        let mut cusp_br: BTreeMap<u32, Vec<BranchAtCusp>> = BTreeMap::new();
        for f in frames {
            for &n in &level_list {
                cusp_br.entry(n).or_default().extend(f.branches(field, i128::from(n))?);
            }
        }
        // (point, level, downstairs branch matrices)
        let mut ell_br: Vec<(usize, u32, Vec<SkewHermitian>)> = Vec::new();
        for (i, (p, phi)) in points.iter().zip(&phis).enumerate() {
            for &n in &level_list {
                let br = elliptic_branches(field, p, phi, i128::from(n))?;
                ell_br.push((i, n, br));
            }
        }

        for &n in &level_list {
            let reference: Vec<Coords> = rec
                .hz_reps(n)?
                .into_iter()
                .map(|(a1, a2, l)| SkewHermitian::new(a1, a2, l).coords(field))
                .collect();
            let level = surf.fit_level(field, n, reference)?;
            surf.levels.insert(n, level);
        }

        // components with their cusp and elliptic incidences
        for (&n, lv) in &surf.levels {
            let count = lv.classes.len();
            for (idx, &cl) in lv.classes.iter().enumerate() {
                let rep = match lv.reference.get(idx) {
                    Some(c) => *c,
                    None => lv.window.representative(cl, &surf.hd),
                };
                let id = ComponentId { level: n, index: idx };
                surf.components.insert(
                    id,
                    HzComponent {
                        id,
                        label: component_label(n, idx, count),
                        representative: SkewHermitian::from_coords(&rep, field),
                        cusp_branches: Vec::new(),
                        elliptic: Vec::new(),
                    },
                );
            }
        }
        for (n, brs) in cusp_br {
            for b in brs {
                let id = surf.component_id(field, n, &b.matrix)?;
                surf.components.get_mut(&id).expect("component").cusp_branches.push(b);
            }
        }
        let mut three_minus: BTreeMap<usize, Vec<ComponentId>> = BTreeMap::new();
        for (i, n, brs) in &ell_br {
            for b in brs {
                let id = surf.component_id(field, *n, b)?;
                let comp = surf.components.get_mut(&id).expect("component");
                let curves: &[usize] = if points[*i].kind == EllipticType::ThreeMinus { &[0, 1] } else { &[0] };
                for &curve in curves {
                    comp.elliptic.push(EllipticIncidence { point: *i, curve, multiplicity: 1 });
                }
                if points[*i].kind == EllipticType::ThreeMinus {
                    three_minus.entry(*i).or_default().push(id);
                }
            }
        }
        // distinct branches through a 3- point meet once after resolution
        for (i, ids) in three_minus {
            let mut acc: BTreeMap<(ComponentId, ComponentId), i128> = BTreeMap::new();
            for x in 0..ids.len() {
                for y in (x + 1)..ids.len() {
                    let key = (ids[x].min(ids[y]), ids[x].max(ids[y]));
                    *acc.entry(key).or_default() += 1;
                }
            }
            for ((a, b), count) in acc {
                surf.contacts.push(Contact { a, b, site: ContactSite::ThreeMinus(i), count });
            }
        }
        surf.transversal_contacts(field, points, &phis)?;
        Ok(surf)
    }

    fn fit_level(&self, field: &Field, n: u32, reference: Vec<Coords>) -> Result<Level> {
        if reference.is_empty() {
            return Err(HilbError::Golden(format!("no reference components at level {n}")));
        }
        let hmax = reference.iter().map(|c| self.hd.height(c)).fold(0.0, f64::max);
        let mut h = (4.0 * hmax).max(8.0 * field.d() as f64);
        loop {
            let w = OrbitWindow::build(field, &self.hd, &self.actions, i128::from(n), h);
            if let Some(classes) = acceptable(&w, &reference) {
                return Ok(Level { reference, window: w, classes });
            }
            if w.points.len() > MAX_WINDOW_POINTS {
                return Err(HilbError::OrbitMerge(format!(
                    "D={} N={n}: {} core classes for {} reference components at height {h:.0}",
                    field.d(),
                    w.core_classes.len(),
                    reference.len()
                )));
            }
            h *= 1.6;
        }
    }

    /// Component of a primitive matrix of level `n`: a search from it through
    /// the group action until it reaches the core of the level's window.
    pub fn component_id(&self, field: &Field, n: u32, b: &SkewHermitian) -> Result<ComponentId> {
        let lv = &self.levels[&n];
        let core = lv.window.height_bound / 4.0;
        let start = descend(&b.coords(field), &self.moves, &self.hd);
        let in_core = |c: &Coords| self.hd.height(c) <= core && lv.component(c).is_some();
        let mut cap = (2.0 * self.hd.height(&start)).max(lv.window.height_bound);
        for _ in 0..EXPLORE_ROUNDS {
            if let Some(c) = explore(&start, &self.actions, &self.hd, cap, EXPLORE_LIMIT, in_core) {
                let index = lv.component(&c).expect("core point");
                return Ok(ComponentId { level: n, index });
            }
            cap *= 2.0;
        }
        Err(HilbError::IncompleteEnumeration(format!(
            "D={} N={n}: no path from {:?} to the window core below height {cap:.0}",
            field.d(),
            b
        )))
    }

    pub fn component_count(&self, n: u32) -> usize {
        self.levels.get(&n).map_or(0, |l| l.classes.len())
    }

    pub fn window_height(&self, n: u32) -> f64 {
        self.levels.get(&n).map_or(0.0, |l| l.window.height_bound)
    }

    /// Component of a reference representative, if it is one.
    pub fn component_of_reference(&self, n: u32, idx: usize) -> Option<ComponentId> {
        let lv = self.levels.get(&n)?;
        let c = lv.reference.get(idx)?;
        lv.component(c).map(|index| ComponentId { level: n, index })
    }

    pub fn labels(&self) -> BTreeMap<ComponentId, String> {
        self.components.iter().map(|(k, v)| (*k, v.label.clone())).collect()
    }

    /// Enumerates orbits of ordered pairs of branches meeting at CM points with
    /// trivial isotropy, certified against the closed formula per pair of levels.
    fn transversal_contacts(&mut self, field: &Field, points: &[EllipticPoint], phis: &[PhiForm]) -> Result<()> {
        let pts: Vec<(EllipticPoint, PhiForm)> = points.iter().cloned().zip(phis.iter().cloned()).collect();
        let levels: Vec<u32> = self.levels.keys().copied().collect();
        for (i, &m) in levels.iter().enumerate() {
            for &n in &levels[i..] {
                let target = f_level_total(field, m, n)? - f_level_elliptic(&pts, m, n);
                if target < Q::from_integer(0) || !target.is_integer() {
                    return Err(HilbError::AccountingResidue {
                        m,
                        n,
                        detail: format!("non-elliptic remainder {target} is not a nonnegative integer"),
                    });
                }
                let target = target.to_integer();
                if target == 0 {
                    continue;
                }
                let found = self.pair_orbits(field, m, n, target)?;
                let mut acc: BTreeMap<(ComponentId, ComponentId), i128> = BTreeMap::new();
                for (a, b) in found {
                    *acc.entry((a, b)).or_default() += 1;
                }
                let mut merged: BTreeMap<(ComponentId, ComponentId), i128> = BTreeMap::new();
                for ((a, b), k) in acc {
                    let key = (a.min(b), a.max(b));
                    *merged.entry(key).or_default() += k;
                }
                for ((a, b), k) in merged {
                    // ordered pairs within one level count each point twice
                    let count = if m == n { k / 2 } else { k };
                    if m == n && k % 2 != 0 {
                        return Err(HilbError::Verification(format!("odd ordered pair count at level {n}")));
                    }
                    self.contacts.push(Contact { a, b, site: ContactSite::Transversal, count });
                }
            }
        }
        Ok(())
    }

    fn pair_orbits(&mut self, field: &Field, m: u32, n: u32, target: i128) -> Result<Vec<(ComponentId, ComponentId)>> {
        let firsts: Vec<(ComponentId, SkewHermitian)> = self
            .components
            .values()
            .filter(|c| c.id.level == m)
            .map(|c| (c.id, c.representative.clone()))
            .collect();
        let mut h = 16.0 * field.d() as f64;
        loop {
            let cands = points_of_level(field, &self.hd, i128::from(n), h);
            let mut reps: Vec<(ComponentId, SkewHermitian, SkewHermitian, i128)> = Vec::new();
            for (id, b) in &firsts {
                let mut by_t: BTreeMap<i128, Vec<SkewHermitian>> = BTreeMap::new();
                for c in &cands {
                    let mut b2 = SkewHermitian::from_coords(c, field);
                    if b2 == *b || b2 == b.neg() {
                        continue;
                    }
                    let mut t = polar(b, &b2, field);
                    if t < 0 {
                        b2 = b2.neg();
                        t = -t;
                    }
                    if t * t >= 4 * i128::from(m) * i128::from(n) {
                        continue;
                    }
                    let list = by_t.entry(t).or_default();
                    let mut seen = false;
                    for r in list.iter() {
                        if pairs_equivalent(field, b, r, &b2, t)? {
                            seen = true;
                            break;
                        }
                    }
                    if !seen {
                        list.push(b2);
                    }
                }
                for (t, list) in by_t {
                    for b2 in list {
                        let hm = meeting_element(b, &b2, field);
                        if intertwiners(field, &hm, &hm)?.len() > 2 {
                            continue;
                        }
                        reps.push((*id, b.clone(), b2, t));
                    }
                }
            }
            let count = reps.len() as i128;
            if count == target {
                let mut out = Vec::new();
                for (id, _, b2, _) in reps {
                    let id2 = self.component_id(field, n, &b2)?;
                    out.push((id, id2));
                }
                return Ok(out);
            }
            if count > target {
                return Err(HilbError::AccountingResidue {
                    m,
                    n,
                    detail: format!("{count} transversal pair orbits exceed the formula's {target}"),
                });
            }
            if cands.len() > MAX_WINDOW_POINTS / 10 {
                return Err(HilbError::IncompleteEnumeration(format!(
                    "D={} ({m},{n}): {count} of {target} transversal pair orbits",
                    field.d()
                )));
            }
            h *= 1.6;
        }
    }
}

/// Whether `(b, x)` and `(b, y)` are equivalent under `SL(Lambda)` up to signs.
fn pairs_equivalent(field: &Field, b: &SkewHermitian, x: &SkewHermitian, y: &SkewHermitian, t: i128) -> Result<bool> {
    let h1 = meeting_element(b, x, field);
    let h2 = meeting_element(b, y, field);
    let sources = if t == 0 { vec![h2.clone(), h2.neg()] } else { vec![h2] };
    let nb = b.neg();
    let ny = y.neg();
    for s in sources {
        for g in intertwiners(field, &s, &h1)? {
            let gb = b.act(&g, field);
            let gx = x.act(&g, field);
            if (gb == *b || gb == nb) && (gx == *y || gx == ny) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Downstairs branches of level `n` through an elliptic point: primitive
/// solutions of `phi = n` modulo sign and the isotropy group. Branches through
/// 2 and 3+ points are invariant; through 3- points they come in triples.
pub fn elliptic_branches(field: &Field, p: &EllipticPoint, phi: &PhiForm, n: i128) -> Result<Vec<SkewHermitian>> {
    let mut seen: BTreeSet<Coords> = BTreeSet::new();
    let mut out = Vec::new();
    let mut sols = phi.representations(n);
    sols.sort_unstable();
    for (x, y) in sols {
        if x.gcd(&y) != 1 {
            continue;
        }
        let b = phi.element(x, y, field);
        let key = sign_normalize(b.coords(field));
        if seen.contains(&key) {
            continue;
        }
        let mut orbit = vec![key];
        let mut cur = b.clone();
        loop {
            cur = cur.act(&p.stabilizer, field);
            let k = sign_normalize(cur.coords(field));
            if k == key {
                break;
            }
            orbit.push(k);
            if orbit.len() > 6 {
                return Err(HilbError::Verification("stabilizer orbit longer than 3".into()));
            }
        }
        let invariant = orbit.len() == 1;
        match (p.kind, invariant) {
            (EllipticType::ThreeMinus, true) => {
                return Err(HilbError::Verification(format!(
                    "curve {b:?} is invariant at a 3- point, which cannot happen for distinct multipliers"
                )))
            }
            (EllipticType::ThreeMinus, false) if orbit.len() != 3 => {
                return Err(HilbError::Verification(format!("3- orbit of size {}", orbit.len())))
            }
            (EllipticType::Two | EllipticType::ThreePlus, false) => {
                return Err(HilbError::Verification(format!("curve {b:?} is not invariant at a {} point", p.kind)))
            }
            _ => {}
        }
        seen.extend(orbit);
        out.push(b);
    }
    Ok(out)
}
