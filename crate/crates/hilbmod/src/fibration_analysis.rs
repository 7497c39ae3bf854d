//! Genus one configurations on the minimal model, the pencils they span, and the
//! combinatorial hypotheses of the multiple fibration method.
//!
//! A configuration is either a connected set of (-2)-curves whose intersection
//! matrix is an extended simply laced Dynkin diagram, or a boxed curve of
//! self-intersection 0. Its fiber class is the primitive positive kernel vector.
//! Two configurations span the same pencil iff their fiber classes are orthogonal.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{HilbError, Result};
use crate::field_arith::{GenusKind, Q};
use crate::golden::GoldenFibrations;
use crate::surface_graph::linalg::{determinant, kernel, submatrix};
use crate::surface_graph::IntersectionGraph;

/// Connected negative definite sets visited before the search gives up.
pub const SEARCH_LIMIT: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ConfigType {
    /// Extended `A_n`, a cycle of `n + 1` curves (two curves meeting twice for `n = 1`).
    A(usize),
    D(usize),
    E6,
    E7,
    E8,
    IrreducibleGenusOne,
}

impl ConfigType {
    /// Fibers of extended `A_n` type are not simply connected.
    pub fn simply_connected(self) -> bool {
        !matches!(self, ConfigType::A(_))
    }
}

impl fmt::Display for ConfigType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigType::A(n) => write!(f, "A~{n}"),
            ConfigType::D(n) => write!(f, "D~{n}"),
            ConfigType::E6 => f.write_str("E~6"),
            ConfigType::E7 => f.write_str("E~7"),
            ConfigType::E8 => f.write_str("E~8"),
            ConfigType::IrreducibleGenusOne => f.write_str("irreducible genus 1"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EllipticConfiguration {
    /// Sorted graph indices.
    pub vertices: Vec<usize>,
    pub labels: Vec<String>,
    pub config_type: ConfigType,
    /// Parallel to `vertices`.
    pub multiplicities: Vec<i128>,
}

impl EllipticConfiguration {
    /// Coefficients of the fiber class on every vertex of `g`.
    pub fn class(&self, g: &IntersectionGraph) -> Vec<i128> {
        let mut c = vec![0; g.len()];
        for (&v, &m) in self.vertices.iter().zip(&self.multiplicities) {
            c[v] = m;
        }
        c
    }
}

fn int_entry(g: &IntersectionGraph, i: usize, j: usize) -> Result<i128> {
    let x = g.matrix[i][j];
    if !x.is_integer() {
        return Err(HilbError::Verification(format!(
            "non-integral intersection {x} between {} and {}",
            g.vertices[i].label, g.vertices[j].label
        )));
    }
    Ok(x.to_integer())
}

/// `D . v` for every vertex `v`, where `D` has coefficients `c`.
pub fn intersect_all(g: &IntersectionGraph, c: &[i128]) -> Result<Vec<i128>> {
    (0..g.len())
        .map(|v| {
            let mut s = 0;
            for (u, &cu) in c.iter().enumerate() {
                if cu != 0 {
                    s += cu * int_entry(g, u, v)?;
                }
            }
            Ok(s)
        })
        .collect()
}

pub fn pairing(g: &IntersectionGraph, a: &[i128], b: &[i128]) -> Result<i128> {
    Ok(intersect_all(g, a)?.iter().zip(b).map(|(x, y)| x * y).sum())
}

/// Primitive positive kernel vector of the intersection matrix on `vertices`.
pub fn fiber_class(g: &IntersectionGraph, vertices: &[usize]) -> Result<Vec<i128>> {
    let m = submatrix(&g.matrix, vertices, vertices);
    let k = kernel(&m);
    if k.len() != 1 {
        return Err(HilbError::KernelDimension(k.len()));
    }
    let v = &k[0];
    let den = v.iter().fold(1i128, |acc, x| acc.lcm(x.denom()));
    let mut ints: Vec<i128> = v.iter().map(|x| (x * Q::from_integer(den)).to_integer()).collect();
    let g = ints.iter().fold(0i128, |acc, x| acc.gcd(x));
    for x in &mut ints {
        *x /= g;
    }
    if ints.iter().all(|x| *x < 0) {
        for x in &mut ints {
            *x = -*x;
        }
    }
    if ints.iter().any(|x| *x <= 0) {
        return Err(HilbError::Verification(format!("kernel vector {ints:?} is not positive")));
    }
    Ok(ints)
}

fn is_connected(g: &IntersectionGraph, set: &[usize]) -> bool {
    let Some(&first) = set.first() else {
        return false;
    };
    let members: BTreeSet<usize> = set.iter().copied().collect();
    let mut seen = BTreeSet::from([first]);
    let mut stack = vec![first];
    while let Some(v) = stack.pop() {
        for u in g.neighbours(v) {
            if members.contains(&u) && seen.insert(u) {
                stack.push(u);
            }
        }
    }
    seen.len() == members.len()
}

fn type_of(multiplicities: &[i128]) -> Option<ConfigType> {
    let n = multiplicities.len() - 1;
    match multiplicities.iter().max()? {
        1 => Some(ConfigType::A(n)),
        2 => Some(ConfigType::D(n)),
        3 if n == 6 => Some(ConfigType::E6),
        4 if n == 7 => Some(ConfigType::E7),
        6 if n == 8 => Some(ConfigType::E8),
        _ => None,
    }
}

/// Recognizes `vertices` as a genus one configuration, explaining why not otherwise.
pub fn classify(g: &IntersectionGraph, vertices: &[usize]) -> std::result::Result<EllipticConfiguration, String> {
    let mut vs = vertices.to_vec();
    vs.sort_unstable();
    vs.dedup();
    let labels: Vec<String> = vs.iter().map(|&v| g.vertices[v].label.clone()).collect();
    let self_int = |v: usize| g.vertices[v].self_int;
    if let [v] = vs[..] {
        if g.vertices[v].boxed && self_int(v) == Some(Q::zero()) {
            return Ok(EllipticConfiguration {
                vertices: vs,
                labels,
                config_type: ConfigType::IrreducibleGenusOne,
                multiplicities: vec![1],
            });
        }
    }
    if vs.is_empty() {
        return Err("empty vertex set".into());
    }
    if let Some(&v) = vs.iter().find(|&&v| self_int(v) != Some(Q::from_integer(-2))) {
        return Err(format!("{} is not a (-2)-curve", g.vertices[v].label));
    }
    if !is_connected(g, &vs) {
        return Err(format!("{labels:?} is not connected"));
    }
    // semidefinite with a one-dimensional kernel: every proper subset is definite
    for skip in 0..vs.len() {
        let rest: Vec<usize> = vs.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
        if !rest.is_empty() && !crate::surface_graph::linalg::is_negative_definite(&submatrix(&g.matrix, &rest, &rest)) {
            return Err(format!("{labels:?} properly contains a non-definite set"));
        }
    }
    let multiplicities = fiber_class(g, &vs).map_err(|e| format!("{labels:?}: {e}"))?;
    let config_type = type_of(&multiplicities).ok_or_else(|| format!("{labels:?}: multiplicities {multiplicities:?}"))?;
    Ok(EllipticConfiguration { vertices: vs, labels, config_type, multiplicities })
}

/// Every genus one configuration among the vertices of `g`.
///
/// Grows connected negative definite sets of (-2)-curves one neighbour at a
/// time. Adding a curve to a definite set keeps it definite, makes it
/// semidefinite of corank one (a configuration), or makes it indefinite, in
/// which case no superset is a configuration.
pub fn find_configurations(g: &IntersectionGraph) -> Result<Vec<EllipticConfiguration>> {
    let minus_two: Vec<bool> = g.vertices.iter().map(|v| v.self_int == Some(Q::from_integer(-2))).collect();
    let mut found: BTreeMap<Vec<usize>, EllipticConfiguration> = BTreeMap::new();
    for (v, vert) in g.vertices.iter().enumerate() {
        if vert.boxed && vert.self_int == Some(Q::zero()) {
            if let Ok(c) = classify(g, &[v]) {
                found.insert(c.vertices.clone(), c);
            }
        }
    }
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut frontier: Vec<Vec<usize>> = (0..g.len()).filter(|&v| minus_two[v]).map(|v| vec![v]).collect();
    seen.extend(frontier.iter().cloned());
    while let Some(set) = frontier.pop() {
        let nbrs: BTreeSet<usize> =
            set.iter().flat_map(|&v| g.neighbours(v)).filter(|u| minus_two[*u] && !set.contains(u)).collect();
        for u in nbrs {
            let mut next = set.clone();
            next.push(u);
            next.sort_unstable();
            if !seen.insert(next.clone()) {
                continue;
            }
            if seen.len() > SEARCH_LIMIT {
                return Err(HilbError::IncompleteEnumeration(format!(
                    "more than {SEARCH_LIMIT} definite sets of (-2)-curves"
                )));
            }
            let det = determinant(&submatrix(&g.matrix, &next, &next));
            // sign of det(-M) on the enlarged set decides definiteness given the smaller set is definite
            let signed = if next.len() % 2 == 0 { det } else { -det };
            if signed.is_positive() {
                frontier.push(next);
            } else if signed.is_zero() {
                let c = classify(g, &next).map_err(HilbError::Verification)?;
                found.insert(next, c);
            }
        }
    }
    Ok(found.into_values().collect())
}

/// The pencil spanned by a configuration, seen on the displayed curves.
#[derive(Clone, Debug, Serialize)]
pub struct FibrationReport {
    pub fiber: EllipticConfiguration,
    /// Coefficients of the fiber class on every vertex.
    pub class: Vec<i128>,
    pub vertical: Vec<usize>,
    pub sections: Vec<usize>,
    /// Vertical curves grouped into connected pieces; each lies in a single fiber.
    pub fibers: Vec<Vec<usize>>,
}

impl FibrationReport {
    pub fn new(g: &IntersectionGraph, fiber: &EllipticConfiguration) -> Result<FibrationReport> {
        let class = fiber.class(g);
        let dots = intersect_all(g, &class)?;
        let square: i128 = dots.iter().zip(&class).map(|(x, y)| x * y).sum();
        if square != 0 {
            return Err(HilbError::Verification(format!("fiber {:?} has square {square}", fiber.labels)));
        }
        if let Some(v) = dots.iter().position(|&x| x < 0) {
            return Err(HilbError::Verification(format!(
                "fiber {:?} meets {} negatively",
                fiber.labels, g.vertices[v].label
            )));
        }
        let vertical: Vec<usize> = (0..g.len()).filter(|&v| dots[v] == 0).collect();
        let sections = (0..g.len()).filter(|&v| dots[v] == 1).collect();
        let fibers = components(g, &vertical);
        Ok(FibrationReport { fiber: fiber.clone(), class, vertical, sections, fibers })
    }

    pub fn is_vertical(&self, v: usize) -> bool {
        self.vertical.binary_search(&v).is_ok()
    }

    pub fn is_section(&self, v: usize) -> bool {
        self.sections.contains(&v)
    }
}

fn components(g: &IntersectionGraph, set: &[usize]) -> Vec<Vec<usize>> {
    let members: BTreeSet<usize> = set.iter().copied().collect();
    let mut done = BTreeSet::new();
    let mut out = Vec::new();
    for &s in set {
        if done.contains(&s) {
            continue;
        }
        let mut comp = vec![s];
        done.insert(s);
        let mut i = 0;
        while i < comp.len() {
            for u in g.neighbours(comp[i]) {
                if members.contains(&u) && done.insert(u) {
                    comp.push(u);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Curves vertical for every pencil spanned by the configurations: the
/// over-exceptional divisor, as far as the displayed curves can see it.
pub fn over_exceptional(g: &IntersectionGraph, pencils: &[FibrationReport]) -> Vec<usize> {
    (0..g.len()).filter(|&v| pencils.iter().all(|p| p.is_vertical(v))).collect()
}

/// One row of genus one fibration data with its row-specific reading.
#[derive(Clone, Debug, Serialize)]
pub struct FibrationRow {
    pub g: Vec<String>,
    pub g_prime: Vec<String>,
    pub sigma: [String; 2],
    /// The two sections belong to the pencil of `g_prime` rather than `g`.
    pub sections_of_second: bool,
    /// `(member, witness)`: the fiber of `|G|` through `member` is certified by `witness`.
    pub required_witnesses: Vec<(String, String)>,
}

impl FibrationRow {
    pub fn from_golden(d: i64, genus: GenusKind, f: &GoldenFibrations) -> Result<FibrationRow> {
        let sigma: [String; 2] = f
            .sigma
            .clone()
            .try_into()
            .map_err(|s: Vec<String>| HilbError::Golden(format!("expected two sections, got {s:?}")))?;
        let mut row = FibrationRow {
            g: f.g.clone(),
            g_prime: f.g_prime.clone(),
            sigma,
            sections_of_second: false,
            required_witnesses: Vec::new(),
        };
        match (d, genus) {
            (21, GenusKind::Nonprincipal) => row.sections_of_second = true,
            // the row names a level with two components without its index; the
            // D~4 star singles out the first
            (24, GenusKind::Nonprincipal) => rename(&mut row.g, "F5", "F51"),
            // the fiber F51, E3, F9, E5 is a cycle only through the first component of F9
            (44, GenusKind::Principal) => row.required_witnesses.push(("F51".into(), "F91".into())),
            _ => {}
        }
        Ok(row)
    }
}

fn rename(labels: &mut [String], from: &str, to: &str) {
    for l in labels.iter_mut().filter(|l| *l == from) {
        *l = to.to_string();
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Clause {
    /// `G` and `G'` are genus one configurations spanning distinct pencils.
    GenusOne,
    /// The first curve of `G'` is a section of `|G|`; for rows whose sections
    /// belong to `|G'|`, both sections are.
    SectionInSecond,
    /// Both sections belong to the pencil and differ by a non-torsion element.
    NonTorsion,
    /// The over-exceptional curves are among the bold ones.
    OverExceptional,
    /// `|G|` has a simply connected fiber avoiding `Z`, and every fiber has a
    /// multiplicity one component outside `Z`.
    SimplyConnectedComplement,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Clause::GenusOne => "(a) genus one configurations",
            Clause::SectionInSecond => "(b) section inside G'",
            Clause::NonTorsion => "(c) non-torsion sections",
            Clause::OverExceptional => "(d) over-exceptional divisor",
            Clause::SimplyConnectedComplement => "(e) simply connected complement",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClauseResult {
    pub clause: Clause,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum NonTorsionReason {
    /// An irreducible boxed fiber stands in for a cuspidal fiber.
    TypeIIFiber(String),
    SectionsIntersect(i128),
}

/// Multiplicity one component of a fiber of `|G|` lying outside `Z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Witness {
    Curve(String),
    /// No displayed curve of this fiber meets the section, so the component
    /// that does is not displayed and hence not in `Z`.
    Undisplayed,
}

#[derive(Clone, Debug, Serialize)]
pub struct HilbertCheckReport {
    pub over_exceptional_z: Vec<String>,
    pub pencils_found: usize,
    pub special_fiber: Option<EllipticConfiguration>,
    /// Labels of each displayed fiber piece of `|G|` and its witness.
    pub special_fiber_witnesses: Vec<(Vec<String>, Witness)>,
    pub mw_rank_positive: Option<NonTorsionReason>,
    pub clauses: Vec<ClauseResult>,
}

impl HilbertCheckReport {
    pub fn passed(&self) -> bool {
        self.clauses.len() == 5 && self.clauses.iter().all(|c| c.passed)
    }

    pub fn clause(&self, c: Clause) -> Option<&ClauseResult> {
        self.clauses.iter().find(|r| r.clause == c)
    }
}

impl fmt::Display for HilbertCheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            writeln!(f, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.clause, c.detail)?;
        }
        writeln!(f, "Z = {:?} over {} pencils", self.over_exceptional_z, self.pencils_found)
    }
}

struct Checker<'a> {
    g: &'a IntersectionGraph,
    clauses: Vec<ClauseResult>,
}

impl Checker<'_> {
    fn record(&mut self, clause: Clause, outcome: std::result::Result<String, String>) -> bool {
        let passed = outcome.is_ok();
        let detail = outcome.unwrap_or_else(|e| e);
        self.clauses.push(ClauseResult { clause, passed, detail });
        passed
    }

    fn index(&self, label: &str) -> std::result::Result<usize, String> {
        self.g.index_of(label).ok_or_else(|| format!("{label} is not a displayed curve"))
    }

    fn indices(&self, labels: &[String]) -> std::result::Result<Vec<usize>, String> {
        labels.iter().map(|l| self.index(l)).collect()
    }

    fn label(&self, v: usize) -> String {
        self.g.vertices[v].label.clone()
    }
}

/// Runs the five clauses for one row on `g`. `bold` names the curves that may
/// lie in the over-exceptional divisor.
pub fn classify_and_check(g: &IntersectionGraph, row: &FibrationRow, bold: &BTreeSet<String>) -> Result<HilbertCheckReport> {
    let configs = find_configurations(g)?;
    let pencils: Vec<FibrationReport> = configs.iter().map(|c| FibrationReport::new(g, c)).collect::<Result<_>>()?;
    let z = over_exceptional(g, &pencils);
    let z_labels: Vec<String> = z.iter().map(|&v| g.vertices[v].label.clone()).collect();
    let mut ck = Checker { g, clauses: Vec::new() };
    let mut report = HilbertCheckReport {
        over_exceptional_z: z_labels.clone(),
        pencils_found: distinct_pencils(g, &pencils)?,
        special_fiber: None,
        special_fiber_witnesses: Vec::new(),
        mw_rank_positive: None,
        clauses: Vec::new(),
    };

    // (a)
    let configured = |labels: &[String]| -> std::result::Result<EllipticConfiguration, String> {
        let idx = ck.indices(labels)?;
        classify(g, &idx)
    };
    let pair = configured(&row.g).and_then(|a| configured(&row.g_prime).map(|b| (a, b)));
    let pair = pair.and_then(|(a, b)| {
        let pa = FibrationReport::new(g, &a).map_err(|e| e.to_string())?;
        let pb = FibrationReport::new(g, &b).map_err(|e| e.to_string())?;
        let dot = pairing(g, &pa.class, &pb.class).map_err(|e| e.to_string())?;
        if dot == 0 {
            return Err(format!("G {:?} and G' {:?} span the same pencil", a.labels, b.labels));
        }
        Ok((pa, pb, dot))
    });
    let (pg, pgp) = match pair {
        Ok((pa, pb, dot)) => {
            let msg = format!("G is {}, G' is {}, G.G' = {dot}", pa.fiber.config_type, pb.fiber.config_type);
            ck.record(Clause::GenusOne, Ok(msg));
            (pa, pb)
        }
        Err(e) => {
            ck.record(Clause::GenusOne, Err(e));
            report.clauses = ck.clauses;
            return Ok(report);
        }
    };

    // (b)
    let dots_g = intersect_all(g, &pg.class)?;
    let section_of_g = |v: usize| dots_g[v] == 1;
    let b = if row.sections_of_second {
        let dots = intersect_all(g, &pgp.class)?;
        ck.indices(&row.sigma).and_then(|s| match s.iter().find(|&&v| dots[v] != 1) {
            Some(&v) => Err(format!("{} meets the fiber of |G'| {} times", ck.label(v), dots[v])),
            None => Ok(format!("{:?} are sections of |G'|", row.sigma)),
        })
    } else {
        ck.index(&row.g_prime[0]).and_then(|s| match dots_g[s] {
            1 => Ok(format!("{} is a section of |G|", ck.label(s))),
            k => Err(format!("{} meets the fiber of |G| {k} times", ck.label(s))),
        })
    };
    ck.record(Clause::SectionInSecond, b);
    // reduced fiber components of |G| are located through a section
    let section = ck
        .index(&row.g_prime[0])
        .ok()
        .filter(|&s| section_of_g(s))
        .or_else(|| (0..g.len()).find(|&v| section_of_g(v)));

    // (c)
    let pencil = if row.sections_of_second { &pgp } else { &pg };
    let name = if row.sections_of_second { "|G'|" } else { "|G|" };
    let c = ck.indices(&row.sigma).and_then(|s| {
        let dots = intersect_all(g, &pencil.class).map_err(|e| e.to_string())?;
        for &v in &s {
            if dots[v] != 1 {
                return Err(format!("{} meets the fiber of {name} {} times", ck.label(v), dots[v]));
            }
        }
        let meet = int_entry(g, s[0], s[1]).map_err(|e| e.to_string())?;
        let type_two = pencil.vertical.iter().find(|&&v| g.vertices[v].boxed && g.vertices[v].self_int == Some(Q::zero()));
        let reason = match type_two {
            Some(&v) => NonTorsionReason::TypeIIFiber(ck.label(v)),
            None if meet > 0 => NonTorsionReason::SectionsIntersect(meet),
            None => return Err(format!("{name} has no irreducible boxed fiber and the sections are disjoint")),
        };
        Ok(reason)
    });
    match c {
        Ok(reason) => {
            ck.record(Clause::NonTorsion, Ok(format!("sections of {name}, witness {reason:?}")));
            report.mw_rank_positive = Some(reason);
        }
        Err(e) => {
            ck.record(Clause::NonTorsion, Err(e));
        }
    }

    // (d)
    let outside: Vec<&String> = z_labels.iter().filter(|l| !bold.contains(*l)).collect();
    if outside.is_empty() {
        ck.record(Clause::OverExceptional, Ok(format!("Z = {z_labels:?}")));
    } else {
        ck.record(Clause::OverExceptional, Err(format!("{outside:?} lie in Z but are not bold")));
    }

    // (e)
    let e = special_fiber_check(&mut ck, &configs, &pg, &z, section, row, &mut report);
    ck.record(Clause::SimplyConnectedComplement, e);
    report.clauses = ck.clauses;
    Ok(report)
}

fn special_fiber_check(
    ck: &mut Checker<'_>,
    configs: &[EllipticConfiguration],
    pg: &FibrationReport,
    z: &[usize],
    section: Option<usize>,
    row: &FibrationRow,
    report: &mut HilbertCheckReport,
) -> std::result::Result<String, String> {
    let g = ck.g;
    let in_z = |v: usize| z.contains(&v);
    let mut simply = None;
    for c in configs {
        if c.config_type.simply_connected()
            && c.vertices.iter().all(|&v| pg.is_vertical(v) && !in_z(v))
            && pairing(g, &c.class(g), &pg.class).map_err(|e| e.to_string())? == 0
        {
            simply = Some(c.clone());
            break;
        }
    }
    let Some(fiber) = simply else {
        return Err("no simply connected fiber of |G| avoids Z".into());
    };
    report.special_fiber = Some(fiber.clone());
    let section = section.ok_or("no section of |G| to locate multiplicity one components")?;
    for piece in &pg.fibers {
        let labels: Vec<String> = piece.iter().map(|&v| ck.label(v)).collect();
        let mult: BTreeMap<usize, i128> = match fiber_class(g, piece) {
            Ok(m) if classify(g, piece).is_ok() => piece.iter().copied().zip(m).collect(),
            // an incomplete fiber: only curves meeting the section are known to be reduced
            _ => piece.iter().filter(|&&v| int_entry(g, v, section).unwrap_or(0) > 0).map(|&v| (v, 1)).collect(),
        };
        let meets_section = |v: usize| int_entry(g, v, section).unwrap_or(0) > 0;
        let mut cands: Vec<usize> = mult.iter().filter(|&(&v, &m)| m == 1 && !in_z(v)).map(|(&v, _)| v).collect();
        cands.sort_by_key(|&v| !meets_section(v));
        let required = row.required_witnesses.iter().find(|(member, _)| labels.contains(member));
        let witness = match (required, cands.first()) {
            (Some((member, w)), _) => {
                let wi = ck.index(w)?;
                if !cands.contains(&wi) {
                    return Err(format!("{w} is not a multiplicity one component outside Z in the fiber through {member}"));
                }
                Witness::Curve(w.clone())
            }
            (None, Some(&v)) => Witness::Curve(ck.label(v)),
            (None, None) if !piece.iter().any(|&v| meets_section(v)) && classify(g, piece).is_err() => Witness::Undisplayed,
            (None, None) => return Err(format!("fiber piece {labels:?} has no multiplicity one component outside Z")),
        };
        report.special_fiber_witnesses.push((labels, witness));
    }
    for (member, _) in &row.required_witnesses {
        if !report.special_fiber_witnesses.iter().any(|(l, _)| l.contains(member)) {
            return Err(format!("{member} is not vertical for |G|"));
        }
    }
    Ok(format!(
        "fiber {:?} ({}) avoids Z; {} fiber pieces certified",
        fiber.labels,
        fiber.config_type,
        report.special_fiber_witnesses.len()
    ))
}

/// Number of distinct pencils among `reports`.
pub fn distinct_pencils(g: &IntersectionGraph, reports: &[FibrationReport]) -> Result<usize> {
    let mut reps: Vec<&FibrationReport> = Vec::new();
    for r in reports {
        let mut new = true;
        for p in &reps {
            if pairing(g, &p.class, &r.class)? == 0 {
                new = false;
                break;
            }
        }
        if new {
            reps.push(r);
        }
    }
    Ok(reps.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface_graph::{DivisorVertex, VertexKind};

    fn graph(self_ints: &[i128], edges: &[(usize, usize, i128)]) -> IntersectionGraph {
        let vertices = self_ints
            .iter()
            .enumerate()
            .map(|(i, &s)| DivisorVertex {
                kind: VertexKind::Cusp { cusp: 0, index: i },
                label: format!("C{}", i + 1),
                self_int: Some(Q::from_integer(s)),
                nodes: 0,
                boxed: s == 0,
            })
            .collect();
        let mut g = IntersectionGraph::new(vertices);
        for &(a, b, m) in edges {
            g.add_intersection(a, b, m);
        }
        g
    }

    #[test]
    fn d4_tilde() {
        let g = graph(&[-2; 5], &[(0, 4, 1), (1, 4, 1), (2, 4, 1), (3, 4, 1)]);
        let c = classify(&g, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(c.config_type, ConfigType::D(4));
        assert_eq!(c.multiplicities, vec![1, 1, 1, 1, 2]);
    }

    #[test]
    fn double_edge_is_a1_tilde() {
        let g = graph(&[-2, -2], &[(0, 1, 2)]);
        let found = find_configurations(&g).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].config_type, ConfigType::A(1));
    }

    #[test]
    fn single_curve_is_not_a_configuration() {
        let g = graph(&[-2], &[]);
        assert!(find_configurations(&g).unwrap().is_empty());
        assert!(classify(&g, &[0]).is_err());
    }

    #[test]
    fn boxed_curve_is_irreducible() {
        let g = graph(&[0, -2], &[(0, 1, 1)]);
        let found = find_configurations(&g).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].config_type, ConfigType::IrreducibleGenusOne);
        let f = FibrationReport::new(&g, &found[0]).unwrap();
        assert_eq!(f.sections, vec![1]);
    }

    #[test]
    fn hexagon_with_section() {
        // a cycle of six curves and one curve meeting C1 once
        let mut edges: Vec<(usize, usize, i128)> = (0..6).map(|i| (i, (i + 1) % 6, 1)).collect();
        edges.push((0, 6, 1));
        let g = graph(&[-2; 7], &edges);
        let found = find_configurations(&g).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].config_type, ConfigType::A(5));
        let f = FibrationReport::new(&g, &found[0]).unwrap();
        assert!(f.is_section(6));
        assert_eq!(f.fibers, vec![vec![0, 1, 2, 3, 4, 5]]);
    }

    #[test]
    fn cycle_fibers_are_not_simply_connected() {
        // only cycle fibers available: the simply connected fiber hypothesis fails
        let mut edges: Vec<(usize, usize, i128)> = (0..4).map(|i| (i, (i + 1) % 4, 1)).collect();
        edges.extend([(4, 5, 2), (0, 4, 1), (2, 5, 1), (4, 6, 1), (5, 7, 1)]);
        let g = graph(&[-2; 8], &edges);
        let row = FibrationRow {
            g: vec!["C1".into(), "C2".into(), "C3".into(), "C4".into()],
            g_prime: vec!["C5".into(), "C6".into()],
            sigma: ["C5".into(), "C6".into()],
            sections_of_second: false,
            required_witnesses: vec![],
        };
        let r = classify_and_check(&g, &row, &BTreeSet::new()).unwrap();
        let e = r.clause(Clause::SimplyConnectedComplement).unwrap();
        assert!(!e.passed, "{e:?}");
    }
}
