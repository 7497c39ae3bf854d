use hilbmod::field_arith::Q;
use hilbmod::golden::SURFACES;
use hilbmod::pipeline::SurfaceModel;
use hilbmod::surface_graph::adjunction_violations;

#[test]
fn minimal_models_match_reference_diagrams() {
    let mut mismatches = Vec::new();
    for (d, genus) in SURFACES {
        let m = SurfaceModel::build(d, genus).unwrap();
        let out = m.graph().unwrap_or_else(|e| panic!("D={d} {genus}: {e}"));
        if !out.comparison.isomorphic {
            mismatches.push(format!("D={d} {genus}: {}", out.comparison.obstruction.unwrap_or_default()));
        }
    }
    assert!(mismatches.is_empty(), "{} of 14 diagrams differ:\n{}", mismatches.len(), mismatches.join("\n"));
}

#[test]
fn surviving_curves_are_minus_two_or_boxed_zero() {
    for (d, genus) in SURFACES {
        let m = SurfaceModel::build(d, genus).unwrap();
        let out = m.graph().unwrap();
        let minimal = &out.solution.blowdown.minimal;
        assert!(adjunction_violations(minimal).is_empty(), "D={d} {genus}");
        for v in &minimal.vertices {
            let expect = Q::from_integer(if v.boxed { 0 } else { -2 });
            assert_eq!(v.self_int, Some(expect), "D={d} {genus} {}", v.label);
        }
    }
}

#[test]
fn isomorphic_diagrams_keep_boxed_curves_boxed() {
    for (d, genus) in SURFACES {
        let m = SurfaceModel::build(d, genus).unwrap();
        let out = m.graph().unwrap();
        if !out.comparison.isomorphic {
            continue;
        }
        for v in &m.record.graph.vertices {
            let i = out.named.index_of(&v.label).unwrap_or_else(|| panic!("D={d} {genus}: {} unmapped", v.label));
            assert_eq!(out.named.vertices[i].boxed, v.boxed, "D={d} {genus} {}", v.label);
        }
    }
}
