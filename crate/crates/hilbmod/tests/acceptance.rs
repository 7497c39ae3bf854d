//! One PASS or FAIL line per acceptance criterion. Run with `--nocapture` to
//! see the lines of a passing run; a failing run prints them regardless.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use hilbmod::cusp_resolution::{enumerate_cusps, resolve_cusp};
use hilbmod::elliptic_points::{
    enumerate_elliptic, match_reference, phi_form, reference_counts, stabilizer_size, EllipticPoint, EllipticType,
};
use hilbmod::fibration_analysis::{classify_and_check, Clause};
use hilbmod::field_arith::{Field, Form};
use hilbmod::golden::GoldenRecord;
use hilbmod::hz_divisors::accounting;
use hilbmod::igp_arithmetic::{covered, first_uncovered_prime, primes_up_to, square_class_group_equal, DiscriminantSet};
use hilbmod::pipeline::SurfaceModel;
use hilbmod::surface_graph::adjunction_violations;

use common::{
    base, blow_up_moves, check_class_numbers, check_extended_diagrams, contraction_case, hnf_case, norm_case, pair,
    rational, CASES,
};

type Outcome = Result<(), Vec<String>>;

fn report(n: usize, what: &str, outcome: &Outcome, lines: &mut Vec<String>) {
    match outcome {
        Ok(()) => lines.push(format!("PASS {n} {what}")),
        Err(why) => {
            lines.push(format!("FAIL {n} {what} ({} problems)", why.len()));
            lines.extend(why.iter().map(|w| format!("     {w}")));
        }
    }
}

fn collect(problems: Vec<String>) -> Outcome {
    if problems.is_empty() {
        Ok(())
    } else {
        Err(problems)
    }
}

fn cusp_tables(records: &[GoldenRecord]) -> Outcome {
    let mut bad = Vec::new();
    for rec in records {
        let t = Instant::now();
        let name = format!("D={} {}", rec.d, rec.genus);
        let field = Field::new(rec.d, rec.genus).unwrap();
        let cusps = enumerate_cusps(&field).unwrap();
        if (cusps.len() == 2) != rec.cusps.two_cusps {
            bad.push(format!("{name}: {} cusps", cusps.len()));
        }
        let [a, b, c] = rec.cusps.forms[0];
        let first = Form { a, b, c };
        for cusp in &cusps {
            let cyc = resolve_cusp(&field, cusp).unwrap();
            let Some((s, r)) = cyc.align_to(&first) else {
                bad.push(format!("{name}: no rotation starts at {first:?}"));
                continue;
            };
            let (bs, fs) = cyc.view(s, r);
            let fs: Vec<[i128; 3]> = fs.iter().map(|q| [q.a, q.b, q.c]).collect();
            if bs != rec.cusps.cycle || fs != rec.cusps.forms || cyc.doubled != rec.cusps.doubled {
                bad.push(format!("{name}: cycle {bs:?} forms {fs:?} doubled {}", cyc.doubled));
            }
        }
        if t.elapsed() >= Duration::from_secs(1) {
            bad.push(format!("{name}: {:?}", t.elapsed()));
        }
    }
    collect(bad)
}

fn elliptic_tables(records: &[GoldenRecord]) -> Outcome {
    let mut bad = Vec::new();
    for rec in records {
        let t = Instant::now();
        let name = format!("D={} {}", rec.d, rec.genus);
        let field = Field::new(rec.d, rec.genus).unwrap();
        let found = enumerate_elliptic(&field, reference_counts(rec)).unwrap();
        for (kind, refs) in [
            (EllipticType::Two, rec.order2().unwrap()),
            (EllipticType::ThreePlus, rec.three_plus().unwrap()),
            (EllipticType::ThreeMinus, rec.three_minus().unwrap()),
        ] {
            let pts: Vec<EllipticPoint> = found.iter().filter(|p| p.kind == kind).cloned().collect();
            if let Err(e) = match_reference(&field, &pts, &refs, kind) {
                bad.push(format!("{name}: {e}"));
            }
            let expect = if kind == EllipticType::Two { 4 } else { 6 };
            for p in &pts {
                if stabilizer_size(&field, p).ok() != Some(expect) || phi_form(p, &field).is_err() {
                    bad.push(format!("{name}: stabilizer of {p:?}"));
                }
            }
        }
        if t.elapsed() >= Duration::from_secs(60) {
            bad.push(format!("{name}: {:?}", t.elapsed()));
        }
    }
    collect(bad)
}

fn hz_components(models: &[(SurfaceModel, Duration)]) -> Outcome {
    let mut bad = Vec::new();
    for (m, took) in models {
        let name = format!("D={} {}", m.record.d, m.record.genus);
        if *took >= Duration::from_secs(120) {
            bad.push(format!("{name}: {took:?}"));
        }
        for n in m.record.hz_levels() {
            let reps = m.record.hz_reps(n).unwrap();
            if m.hz.component_count(n) != reps.len() {
                bad.push(format!("{name} N={n}: {} components for {} listed", m.hz.component_count(n), reps.len()));
            }
            let ids: BTreeSet<_> = (0..reps.len()).filter_map(|i| m.hz.component_of_reference(n, i)).collect();
            if ids.len() != reps.len() {
                bad.push(format!("{name} N={n}: representatives fill {} components", ids.len()));
            }
        }
    }
    collect(bad)
}

fn transversal_accounting(models: &[(SurfaceModel, Duration)]) -> Outcome {
    let mut bad = Vec::new();
    for (m, _) in models {
        let pts: Vec<_> = m.points.iter().map(|p| (p.clone(), phi_form(p, &m.field).unwrap())).collect();
        for a in 1..=10 {
            for b in a..=10 {
                match accounting(&m.field, &pts, a, b) {
                    Ok(acc) if acc.remainder == "0" => {}
                    Ok(acc) => bad.push(format!("D={} {} ({a},{b}): remainder {}", m.record.d, m.record.genus, acc.remainder)),
                    Err(e) => bad.push(format!("D={} {}: {e}", m.record.d, m.record.genus)),
                }
            }
        }
    }
    collect(bad)
}

fn minimal_models(models: &[(SurfaceModel, Duration)]) -> Outcome {
    let mut bad = Vec::new();
    for (m, _) in models {
        let name = format!("D={} {}", m.record.d, m.record.genus);
        let out = match m.graph() {
            Ok(out) => out,
            Err(e) => {
                bad.push(format!("{name}: {e}"));
                continue;
            }
        };
        if !out.comparison.isomorphic {
            bad.push(format!("{name}: {}", out.comparison.obstruction.unwrap_or_default()));
        }
        let minimal = &out.solution.blowdown.minimal;
        if !adjunction_violations(minimal).is_empty() {
            bad.push(format!("{name}: surviving curves violate adjunction"));
        }
    }
    collect(bad)
}

fn fibration_rows(models: &[(SurfaceModel, Duration)]) -> Outcome {
    let mut bad = Vec::new();
    for (m, _) in models {
        let name = format!("D={} {}", m.record.d, m.record.genus);
        let (Ok(out), Ok(row)) = (m.graph(), m.fibration_row()) else {
            bad.push(format!("{name}: no graph or row"));
            continue;
        };
        let (g, bold) = (&out.named, m.bold_labels());
        let r = classify_and_check(g, &row, &bold).unwrap();
        for cl in r.clauses.iter().filter(|cl| !cl.passed) {
            bad.push(format!("{name} {}: {}", cl.clause, cl.detail));
        }
        if r.clauses.len() < 5 {
            bad.push(format!("{name}: stopped after {} clauses", r.clauses.len()));
        }
        // negative controls: each mutation must be rejected
        let mut sigma = row.clone();
        let fiber = if sigma.sections_of_second { &sigma.g_prime } else { &sigma.g };
        sigma.sigma[1] = fiber.iter().find(|l| **l != sigma.sigma[0]).unwrap().clone();
        if classify_and_check(g, &sigma, &bold).unwrap().passed() {
            bad.push(format!("{name}: vertical second section accepted"));
        }
        let lone = row.g_prime.iter().find(|l| g.index_of(l).is_some_and(|i| !g.vertices[i].boxed));
        if let Some(lone) = lone {
            let mut single = row.clone();
            single.g_prime = vec![lone.clone()];
            let r = classify_and_check(g, &single, &bold).unwrap();
            if r.clause(Clause::GenusOne).is_none_or(|c| c.passed) {
                bad.push(format!("{name}: single-curve G' accepted"));
            }
        }
        if !row.required_witnesses.is_empty() {
            let mut witness = row.clone();
            witness.required_witnesses[0].1 = "C1".into();
            let r = classify_and_check(g, &witness, &bold).unwrap();
            if r.clause(Clause::SimplyConnectedComplement).is_none_or(|c| c.passed) {
                bad.push(format!("{name}: replaced witness accepted"));
            }
        }
    }
    collect(bad)
}

fn igp_numerics() -> Outcome {
    let mut bad = Vec::new();
    let t = Instant::now();
    let (d, l) = (DiscriminantSet::surfaces(), DiscriminantSet::small_primes());
    let first = first_uncovered_prime(&l, 4_000_000);
    if first != Some(3_267_289) {
        bad.push(format!("first uncovered prime {first:?}, expected 3267289"));
    }
    if let Some(p) = primes_up_to(41).into_iter().find(|&p| !covered(p, &d)) {
        bad.push(format!("{p} not covered by the surface discriminants"));
    }
    if !square_class_group_equal(&d, &l) {
        bad.push("square classes differ".into());
    }
    if t.elapsed() >= Duration::from_secs(30) {
        bad.push(format!("{:?}", t.elapsed()));
    }
    collect(bad)
}

fn run<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    TestRunner::new(Config { cases: CASES, ..Config::default() }).run(&strategy, test).map_err(|e| e.to_string())
}

fn property_suites() -> Outcome {
    let results: BTreeMap<&str, Result<(), String>> = BTreeMap::from([
        ("class numbers", check_class_numbers(500)),
        ("extended diagrams", check_extended_diagrams()),
        (
            "norm",
            run((0usize..14, rational(), rational(), rational(), rational()), |(k, u1, v1, u2, v2)| {
                norm_case(k, u1, v1, u2, v2)
            }),
        ),
        ("hnf", run((0usize..14, 0usize..3, pair(), pair()), |(k, s, a, b)| hnf_case(k, s, a, b))),
        ("contraction", run((base(), blow_up_moves()), |(g, moves)| contraction_case(&g, &moves))),
    ]);
    collect(results.into_iter().filter_map(|(k, r)| r.err().map(|e| format!("{k}: {e}"))).collect())
}

#[test]
fn acceptance() {
    let records = GoldenRecord::all().unwrap();
    let mut lines = Vec::new();
    let mut outcomes = Vec::new();
    let mut check = |n: usize, what: &str, outcome: Outcome| {
        report(n, what, &outcome, &mut lines);
        outcomes.push(outcome.is_ok());
    };
    check(1, "cusp cycles, forms and doubling", cusp_tables(&records));
    check(2, "elliptic stabilizers and counts", elliptic_tables(&records));
    let models: Vec<(SurfaceModel, Duration)> = records
        .iter()
        .map(|r| {
            let t = Instant::now();
            (SurfaceModel::build(r.d, r.genus).unwrap(), t.elapsed())
        })
        .collect();
    check(3, "Hirzebruch-Zagier components", hz_components(&models));
    check(4, "transversal accounting", transversal_accounting(&models));
    check(5, "minimal-model diagrams", minimal_models(&models));
    check(6, "fibration rows and negative controls", fibration_rows(&models));
    check(7, "prime coverage numerics", igp_numerics());
    check(8, "property suites", property_suites());
    println!("{}", lines.join("\n"));
    let failed = outcomes.iter().filter(|&&ok| !ok).count();
    assert_eq!(failed, 0, "{failed} of {} criteria failed", outcomes.len());
}
