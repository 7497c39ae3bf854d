use std::collections::BTreeSet;
use std::sync::OnceLock;

use hilbmod::fibration_analysis::{
    classify, classify_and_check, find_configurations, intersect_all, over_exceptional, pairing, Clause, FibrationReport,
    FibrationRow, Witness,
};
use hilbmod::field_arith::GenusKind;
use hilbmod::golden::SURFACES;
use hilbmod::pipeline::SurfaceModel;
use hilbmod::surface_graph::IntersectionGraph;

struct Case {
    name: String,
    model: SurfaceModel,
    computed: IntersectionGraph,
    row: FibrationRow,
    bold: BTreeSet<String>,
}

fn cases() -> &'static [Case] {
    static CASES: OnceLock<Vec<Case>> = OnceLock::new();
    CASES.get_or_init(build_cases)
}

fn build_cases() -> Vec<Case> {
    SURFACES
        .iter()
        .map(|&(d, genus)| {
            let model = SurfaceModel::build(d, genus).unwrap();
            let computed = model.graph().unwrap().named;
            let row = model.fibration_row().unwrap();
            let bold = model.bold_labels();
            Case { name: format!("D={d} {genus}"), model, computed, row, bold }
        })
        .collect()
}

fn failures(graph: impl Fn(&Case) -> IntersectionGraph) -> Vec<String> {
    let mut out = Vec::new();
    for c in cases() {
        let r = classify_and_check(&graph(c), &c.row, &c.bold).unwrap();
        for cl in r.clauses.iter().filter(|cl| !cl.passed) {
            out.push(format!("{} {}: {}", c.name, cl.clause, cl.detail));
        }
        if r.clauses.len() < 5 {
            out.push(format!("{}: stopped after {} clauses", c.name, r.clauses.len()));
        }
    }
    out
}

#[test]
fn rows_pass_on_computed_graphs() {
    let f = failures(|c| c.computed.clone());
    assert!(f.is_empty(), "{}", f.join("\n"));
}

#[test]
fn rows_pass_on_reference_diagrams() {
    let f = failures(|c| IntersectionGraph::from_reference(&c.model.record.graph).unwrap());
    assert!(f.is_empty(), "{}", f.join("\n"));
}

#[test]
fn second_section_replaced_by_a_vertical_curve_fails_non_torsion() {
    for c in cases() {
        let mut row = c.row.clone();
        // a member of the pencil's own fiber is vertical for it
        let fiber = if row.sections_of_second { &row.g_prime } else { &row.g };
        row.sigma[1] = fiber.iter().find(|l| **l != row.sigma[0]).unwrap().clone();
        let r = classify_and_check(&c.computed, &row, &c.bold).unwrap();
        if let Some(cl) = r.clause(Clause::NonTorsion) {
            assert!(!cl.passed, "{}: {}", c.name, cl.detail);
        } else {
            assert!(!r.passed(), "{}", c.name);
        }
    }
}

#[test]
fn single_curve_second_configuration_fails_genus_one() {
    for c in cases() {
        let mut row = c.row.clone();
        let lone = row.g_prime.iter().find(|l| {
            let i = c.computed.index_of(l).unwrap();
            !c.computed.vertices[i].boxed
        });
        let Some(lone) = lone else { continue };
        row.g_prime = vec![lone.clone()];
        let r = classify_and_check(&c.computed, &row, &c.bold).unwrap();
        assert!(!r.clause(Clause::GenusOne).unwrap().passed, "{}", c.name);
    }
}

#[test]
fn empty_bold_set_fails_over_exceptional_when_z_is_nonempty() {
    for c in cases() {
        let r = classify_and_check(&c.computed, &c.row, &BTreeSet::new()).unwrap();
        if let Some(cl) = r.clause(Clause::OverExceptional) {
            assert_eq!(cl.passed, r.over_exceptional_z.is_empty(), "{}", c.name);
        }
    }
}

#[test]
fn required_witness_replaced_fails_the_simply_connected_check() {
    let c = cases().iter().find(|c| c.model.record.d == 44).unwrap();
    let mut row = c.row.clone();
    assert_eq!(row.required_witnesses, vec![("F51".to_string(), "F91".to_string())]);
    // a curve from another fiber
    row.required_witnesses[0].1 = "C1".into();
    let r = classify_and_check(&c.computed, &row, &c.bold).unwrap();
    let e = r.clause(Clause::SimplyConnectedComplement).unwrap();
    assert!(!e.passed, "{}", e.detail);
}

/// Fiber classes square to zero, meet every displayed curve nonnegatively, and
/// the over-exceptional curves are vertical for all of them.
#[test]
fn found_pencils_are_nef_and_isotropic() {
    for c in cases() {
        let g = &c.computed;
        let configs = find_configurations(g).unwrap();
        assert!(!configs.is_empty(), "{}", c.name);
        let pencils: Vec<FibrationReport> = configs.iter().map(|f| FibrationReport::new(g, f).unwrap()).collect();
        let z = over_exceptional(g, &pencils);
        for p in &pencils {
            assert_eq!(pairing(g, &p.class, &p.class).unwrap(), 0, "{}", c.name);
            let dots = intersect_all(g, &p.class).unwrap();
            assert!(dots.iter().all(|&x| x >= 0), "{}", c.name);
            assert!(p.sections.iter().all(|&s| dots[s] == 1));
            assert!(z.iter().all(|&v| dots[v] == 0));
        }
    }
}

/// `G` and `G'` span different pencils: their classes are not proportional.
#[test]
fn rows_give_two_distinct_pencils() {
    for c in cases() {
        let g = IntersectionGraph::from_reference(&c.model.record.graph).unwrap();
        let idx = |ls: &[String]| ls.iter().map(|l| g.index_of(l).unwrap()).collect::<Vec<_>>();
        let Ok(a) = classify(&g, &idx(&c.row.g)) else {
            panic!("{}: G is not a configuration", c.name)
        };
        let Ok(b) = classify(&g, &idx(&c.row.g_prime)) else {
            eprintln!("{}: G' is not a configuration", c.name);
            continue;
        };
        assert!(pairing(&g, &a.class(&g), &b.class(&g)).unwrap() > 0, "{}", c.name);
    }
}

fn case(d: i64, genus: GenusKind) -> &'static Case {
    cases().iter().find(|c| c.model.record.d == d && c.model.record.genus == genus).unwrap()
}

#[test]
fn sections_of_the_second_pencil_for_d21() {
    let c = case(21, GenusKind::Nonprincipal);
    assert!(c.row.sections_of_second);
    let r = classify_and_check(&c.computed, &c.row, &c.bold).unwrap();
    assert!(r.passed(), "{r}");
    assert!(r.clause(Clause::NonTorsion).unwrap().detail.contains("|G'|"));
}

#[test]
fn f9_certifies_the_special_fiber_for_d44() {
    let c = case(44, GenusKind::Principal);
    let r = classify_and_check(&c.computed, &c.row, &c.bold).unwrap();
    assert!(r.passed(), "{r}");
    let (piece, w) = r.special_fiber_witnesses.iter().find(|(l, _)| l.contains(&"F51".to_string())).unwrap();
    assert_eq!(*w, Witness::Curve("F91".into()), "{piece:?}");
}

#[test]
fn d57_and_d40_nonprincipal_rows_pass() {
    for (d, genus) in [(57, GenusKind::Principal), (40, GenusKind::Nonprincipal)] {
        let c = case(d, genus);
        let r = classify_and_check(&c.computed, &c.row, &c.bold).unwrap();
        assert!(r.passed(), "{}\n{r}", c.name);
    }
}
