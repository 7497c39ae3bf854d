use std::fmt::Write;

use hilbmod::class_numbers::{hdo, hurwitz_h, kronecker, weighted_h};
use hilbmod::cusp_resolution::{enumerate_cusps, resolve_cusp};
use hilbmod::elliptic_points::{phi_form, points_in_reference_order, EllipticPoint, PhiForm};
use hilbmod::field_arith::{Field, Form, GenusKind, Mat2K};
use hilbmod::golden::{is_k3, GoldenRecord, SURFACES};
use hilbmod::hz_divisors::{accounting, ContactSite};
use hilbmod::igp_arithmetic::{first_uncovered_prime, DiscriminantSet};
use hilbmod::pipeline::SurfaceModel;
use hilbmod::surface_graph::{elliptic_label, to_dot, IntersectionGraph};
use hilbmod::{HilbError, Result};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::IgpSet;

/// One command's output in every format it supports.
pub struct Rendered {
    pub stem: String,
    pub json: Value,
    pub text: String,
    pub dot: Option<String>,
    /// Additional `(file name, contents)` written only with `--out`.
    pub files: Vec<(String, String)>,
    /// Differences from the reference data; any makes the exit code 1.
    pub mismatches: Vec<String>,
}

impl Rendered {
    fn new(stem: String, json: Value, text: String) -> Rendered {
        Rendered { stem, json, text, dot: None, files: Vec::new(), mismatches: Vec::new() }
    }
}

fn gate(d: i64, genus: GenusKind) -> Result<()> {
    if is_k3(d, genus) {
        Ok(())
    } else {
        Err(HilbError::NotK3 { d, genus: genus.to_string() })
    }
}

fn stem(kind: &str, d: i64, genus: GenusKind) -> String {
    format!("{kind}_d{d}_{genus}")
}

fn form(f: &Form) -> [i128; 3] {
    [f.a, f.b, f.c]
}

fn matrix(m: &Mat2K) -> [String; 4] {
    [&m.a, &m.b, &m.c, &m.d].map(|x| x.to_canonical_string())
}

pub fn cusps(d: i64, genus: GenusKind) -> Result<Rendered> {
    gate(d, genus)?;
    let rec = GoldenRecord::load(d, genus)?;
    let field = Field::new(d, genus)?;
    let [a, b, c] = rec.cusps.forms[0];
    let first = Form { a, b, c };
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut mismatches = Vec::new();
    let cusps = enumerate_cusps(&field)?;
    writeln!(text, "D={d} {genus}: {} cusps", cusps.len()).unwrap();
    if (cusps.len() == 2) != rec.cusps.two_cusps {
        mismatches.push(format!("{} cusps against the reference", cusps.len()));
    }
    for (i, cusp) in cusps.iter().enumerate() {
        let cyc = resolve_cusp(&field, cusp)?;
        let (start, reversed) = match cyc.align_to(&first) {
            Some(o) => o,
            None => {
                mismatches.push(format!("cusp {i}: no rotation starts at {first:?}"));
                (cyc.canonical_start(), false)
            }
        };
        let (bs, fs) = cyc.view(start, reversed);
        let fs: Vec<[i128; 3]> = fs.iter().map(form).collect();
        if bs != rec.cusps.cycle || fs != rec.cusps.forms || cyc.doubled != rec.cusps.doubled {
            mismatches.push(format!("cusp {i}: cycle {bs:?} doubled {} differs from the reference", cyc.doubled));
        }
        writeln!(text, "cusp {i}: b = {bs:?}, doubled = {}", cyc.doubled).unwrap();
        for f in &fs {
            writeln!(text, "  Q = {f:?}").unwrap();
        }
        rows.push(json!({
            "cusp": i,
            "ideal_norm": cusp.norm_c.to_string(),
            "cycle": bs,
            "doubled": cyc.doubled,
            "forms": fs,
        }));
    }
    let mut r = Rendered::new(stem("cusps", d, genus), json!({"d": d, "genus": genus, "cusps": rows}), text);
    r.mismatches = mismatches;
    Ok(r)
}

pub fn elliptic(d: i64, genus: GenusKind) -> Result<Rendered> {
    gate(d, genus)?;
    let rec = GoldenRecord::load(d, genus)?;
    let field = Field::new(d, genus)?;
    // enumeration and matching against the reference tables fail together
    let points = points_in_reference_order(&field, &rec)?;
    let mut text = format!("D={d} {genus}: {} elliptic points\n", points.len());
    let mut rows = Vec::new();
    let mut seen = [0usize; 3];
    for p in &points {
        let t = seen[p.kind.index()];
        seen[p.kind.index()] += 1;
        let label = elliptic_label(p.kind, t, 0);
        let res = p.local_resolution();
        writeln!(text, "{label} ({}): {:?}, resolution {:?}", p.kind, matrix(&p.stabilizer), res.components).unwrap();
        rows.push(json!({
            "label": label,
            "type": p.kind,
            "stabilizer": matrix(&p.stabilizer),
            "fixed_point_quadratic": p.fixed_point.quadratic,
            "resolution": res,
        }));
    }
    let json = json!({"d": d, "genus": genus, "counts": {"two": seen[0], "three_plus": seen[1], "three_minus": seen[2]}, "points": rows});
    Ok(Rendered::new(stem("elliptic", d, genus), json, text))
}

fn with_phis(m: &SurfaceModel) -> Result<Vec<(EllipticPoint, PhiForm)>> {
    m.points.iter().map(|p| Ok((p.clone(), phi_form(p, &m.field)?))).collect()
}

fn hz_json(m: &SurfaceModel, nmax: u32) -> Result<(Value, String, Vec<String>)> {
    let mut text = String::new();
    let mut mismatches = Vec::new();
    let ell_labels: Vec<Vec<String>> = (0..m.points.len())
        .map(|i| {
            let halves = m.points[i].local_resolution().components.len();
            (0..halves).map(|h| elliptic_label(m.points[i].kind, m.index_within_type(i), h)).collect()
        })
        .collect();
    let mut comps = Vec::new();
    for n in m.record.hz_levels() {
        let expected = m.record.hz_reps(n)?.len();
        if m.hz.component_count(n) != expected {
            mismatches.push(format!("F{n}: {} components for {expected} in the reference", m.hz.component_count(n)));
        }
    }
    for c in m.hz.components.values() {
        let cusp_inc: Vec<Value> = c
            .cusp_branches
            .iter()
            .flat_map(|b| {
                let len = m.frames[b.cusp].full_length;
                b.multiplicities(len).into_iter().filter(|&(_, k)| k > 0).map(move |(curve, k)| (b.cusp, curve, k))
            })
            .map(|(cusp, curve, k)| {
                let prime = if cusp == 0 { "" } else { "'" };
                json!({"curve": format!("C{}{prime}", m.cusp_position(cusp, curve) + 1), "multiplicity": k})
            })
            .collect();
        let ell: Vec<&str> = c.elliptic.iter().map(|e| ell_labels[e.point][e.curve].as_str()).collect();
        let r = &c.representative;
        writeln!(text, "{} (N={}): B = ({}, {}, {}), meets {:?} at elliptic points", c.label, c.id.level, r.a1, r.a2, r.lambda.to_canonical_string(), ell).unwrap();
        comps.push(json!({
            "label": c.label,
            "level": c.id.level,
            "representative": [r.a1, r.a2, r.lambda.to_canonical_string()],
            "cusp_incidences": cusp_inc,
            "elliptic_incidences": ell,
        }));
    }
    let labels = m.hz.labels();
    let contacts: Vec<Value> = m
        .hz
        .contacts
        .iter()
        .map(|c| {
            let site = match c.site {
                ContactSite::ThreeMinus(i) => ell_labels[i][0].trim_end_matches('-').to_string() + "-",
                ContactSite::Transversal => "transversal".into(),
            };
            json!({"a": labels[&c.a], "b": labels[&c.b], "site": site, "count": c.count})
        })
        .collect();
    let pts = with_phis(m)?;
    let mut table = Vec::new();
    writeln!(text, "transversal accounting, 1 <= M <= N <= {nmax}:").unwrap();
    for a in 1..=nmax {
        for b in a..=nmax {
            match accounting(&m.field, &pts, a, b) {
                Ok(acc) => {
                    if acc.remainder != "0" {
                        mismatches.push(format!("(T'_{a}, T'_{b}) = {} leaves {} beyond elliptic pairs", acc.formula, acc.remainder));
                        writeln!(text, "  ({a},{b}): total {} elliptic {} remainder {}", acc.formula, acc.elliptic, acc.remainder).unwrap();
                    }
                    table.push(serde_json::to_value(acc).expect("accounting serializes"));
                }
                Err(e) => {
                    mismatches.push(e.to_string());
                    table.push(json!({"m": a, "n": b, "error": e.to_string()}));
                }
            }
        }
    }
    let json = json!({"components": comps, "contacts": contacts, "accounting": table});
    Ok((json, text, mismatches))
}

pub fn hz(d: i64, genus: GenusKind, nmax: u32) -> Result<Rendered> {
    gate(d, genus)?;
    let m = SurfaceModel::build(d, genus)?;
    let (body, text, mismatches) = hz_json(&m, nmax)?;
    let mut r = Rendered::new(stem("hz", d, genus), json!({"d": d, "genus": genus, "hz": body}), format!("D={d} {genus}\n{text}"));
    r.mismatches = mismatches;
    Ok(r)
}

fn graph_json(g: &IntersectionGraph) -> Value {
    let vertices: Vec<Value> = g
        .vertices
        .iter()
        .map(|v| json!({"label": v.label, "kind": v.kind, "self_int": v.self_int.map(|s| s.to_string()), "boxed": v.boxed}))
        .collect();
    let mut edges = Vec::new();
    for i in 0..g.len() {
        for j in (i + 1)..g.len() {
            let k = g.edge(i, j);
            if k != 0 {
                edges.push(json!({"a": g.vertices[i].label, "b": g.vertices[j].label, "mult": k}));
            }
        }
    }
    json!({"vertices": vertices, "edges": edges})
}

pub fn graph(d: i64, genus: GenusKind) -> Result<Rendered> {
    gate(d, genus)?;
    let m = SurfaceModel::build(d, genus)?;
    let out = m.graph()?;
    let name = format!("D{d}_{genus}");
    let json = json!({
        "d": d,
        "genus": genus,
        "graph": graph_json(&out.named),
        "isomorphic": out.comparison.isomorphic,
        "mapping": out.comparison.mapping,
        "obstruction": out.comparison.obstruction,
    });
    let status = if out.comparison.isomorphic { "isomorphic to the reference diagram" } else { "differs from the reference diagram" };
    let text = format!("D={d} {genus}: {status}\n{}", out.named);
    let mut r = Rendered::new(stem("graph", d, genus), json, text);
    r.dot = Some(to_dot(&out.named, &name));
    if let Some(why) = &out.comparison.obstruction {
        r.mismatches.push(why.clone());
    }
    Ok(r)
}

pub fn verify(d: i64, genus: GenusKind) -> Result<Rendered> {
    gate(d, genus)?;
    let m = SurfaceModel::build(d, genus)?;
    let out = m.graph()?;
    let report = m.verify_fibrations(&out)?;
    let json = json!({"d": d, "genus": genus, "row": m.fibration_row()?, "report": report, "passed": report.passed()});
    let text = format!("D={d} {genus}\n{report}");
    let mut r = Rendered::new(stem("verify", d, genus), json, text);
    r.mismatches = report.clauses.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.clause, c.detail)).collect();
    if report.clauses.len() < 5 {
        r.mismatches.push(format!("stopped after {} clauses", report.clauses.len()));
    }
    r.files.push((format!("{}.json", r.stem), serde_json::to_string_pretty(&r.json).expect("serializes") + "\n"));
    Ok(r)
}

pub fn classnum(n: i64, disc: Option<i64>) -> Result<Rendered> {
    let h = weighted_h(n)?;
    let big_h = hurwitz_h(n)?;
    let mut text = format!("h'(-{n}) = {h}\nH({n}) = {big_h}\n");
    let mut json = json!({"n": n, "weighted_h": h.to_string(), "hurwitz_h": big_h.to_string()});
    if let Some(dd) = disc {
        let t = hdo(dd, n)?;
        writeln!(text, "H_{dd}^o({n}) = {t}").unwrap();
        json["hdo"] = json!({"disc": dd, "value": t.to_string()});
    }
    Ok(Rendered::new(format!("classnum_{n}"), json, text))
}

pub fn igp(set: IgpSet, values: Vec<i64>, bound: u64) -> Result<Rendered> {
    let s = match set {
        IgpSet::Surfaces => DiscriminantSet::surfaces(),
        IgpSet::SmallPrimes => DiscriminantSet::small_primes(),
        IgpSet::Legacy => DiscriminantSet::legacy(),
        IgpSet::Custom => DiscriminantSet::new(values),
    };
    let p = first_uncovered_prime(&s, bound);
    let mut text = format!("S = {:?}\n", s.values);
    let mut json = json!({"set": s.values, "bound": bound, "first_uncovered": p});
    match p {
        Some(p) => {
            let symbols: Vec<(i64, i32)> = s.values.iter().map(|&x| Ok((x, kronecker(x, p as i64)?))).collect::<Result<_>>()?;
            writeln!(text, "first uncovered prime: {p}\nsymbols: {symbols:?}").unwrap();
            json["symbols"] = json!(symbols);
        }
        None => writeln!(text, "every prime up to {bound} is covered").unwrap(),
    }
    Ok(Rendered::new("igp".into(), json, text))
}

struct SurfaceOutcome {
    name: String,
    json: Value,
    dot: Option<String>,
    lines: Vec<(String, bool, String)>,
}

fn check_surface(d: i64, genus: GenusKind) -> SurfaceOutcome {
    let name = format!("d{d}_{genus}");
    let mut lines = Vec::new();
    let mut json = json!({"d": d, "genus": genus});
    let mut dot = None;
    let mut line = |what: &str, ok: bool, detail: String| lines.push((what.to_string(), ok, detail));
    match cusps(d, genus) {
        Ok(r) => line("cusps", r.mismatches.is_empty(), r.mismatches.join("; ")),
        Err(e) => line("cusps", false, e.to_string()),
    }
    let m = match SurfaceModel::build(d, genus) {
        Ok(m) => m,
        Err(e) => {
            line("pipeline", false, e.to_string());
            return SurfaceOutcome { name, json, dot, lines };
        }
    };
    line("elliptic", true, format!("{} points", m.points.len()));
    match hz_json(&m, 10) {
        Ok((body, _, mm)) => {
            let (counts, acc): (Vec<&String>, Vec<&String>) = mm.iter().partition(|s| s.starts_with('F'));
            let counts: Vec<&str> = counts.into_iter().map(String::as_str).collect();
            line("hz components", counts.is_empty(), counts.join("; "));
            let detail = if acc.is_empty() { String::new() } else { format!("{} nonzero remainders", acc.len()) };
            line("accounting", acc.is_empty(), detail);
            json["hz"] = body;
        }
        Err(e) => line("hz components", false, e.to_string()),
    }
    match m.graph() {
        Ok(out) => {
            line("graph", out.comparison.isomorphic, out.comparison.obstruction.clone().unwrap_or_default());
            json["graph"] = graph_json(&out.named);
            json["graph_isomorphic"] = json!(out.comparison.isomorphic);
            dot = Some(to_dot(&out.named, &format!("D{d}_{genus}")));
            match m.verify_fibrations(&out) {
                Ok(rep) => {
                    let failed: Vec<String> = rep.clauses.iter().filter(|c| !c.passed).map(|c| c.clause.to_string()).collect();
                    line("fibrations", rep.passed(), failed.join(", "));
                    json["fibrations"] = json!(rep);
                }
                Err(e) => line("fibrations", false, e.to_string()),
            }
        }
        Err(e) => line("graph", false, e.to_string()),
    }
    SurfaceOutcome { name, json, dot, lines }
}

pub fn all() -> Result<Rendered> {
    let outcomes: Vec<SurfaceOutcome> = SURFACES.par_iter().map(|&(d, g)| check_surface(d, g)).collect();
    let mut text = String::new();
    let mut mismatches = Vec::new();
    let mut files = Vec::new();
    let mut summary = Vec::new();
    for o in &outcomes {
        writeln!(text, "{}", o.name).unwrap();
        for (what, ok, detail) in &o.lines {
            let tag = if *ok { "ok  " } else { "FAIL" };
            writeln!(text, "  {tag} {what}{}", if detail.is_empty() { String::new() } else { format!(": {detail}") }).unwrap();
            if !ok {
                mismatches.push(format!("{} {what}", o.name));
            }
        }
        summary.push(json!({
            "surface": o.name,
            "checks": o.lines.iter().map(|(w, ok, detail)| json!({"check": w, "ok": ok, "detail": detail})).collect::<Vec<_>>(),
        }));
        files.push((format!("{}.json", o.name), serde_json::to_string_pretty(&o.json).expect("serializes") + "\n"));
        if let Some(dot) = &o.dot {
            files.push((format!("{}.dot", o.name), dot.clone()));
        }
    }
    writeln!(text, "{} failing checks", mismatches.len()).unwrap();
    let mut r = Rendered::new("report".into(), json!({"surfaces": summary}), text);
    r.files = files;
    r.mismatches = mismatches;
    Ok(r)
}
