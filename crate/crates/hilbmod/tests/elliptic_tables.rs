use hilbmod::elliptic_points::{
    enumerate_elliptic, match_reference, phi_form, reference_counts, stabilizer_size, EllipticPoint, EllipticType,
};
use hilbmod::field_arith::Field;
use hilbmod::golden::GoldenRecord;

#[test]
fn reference_stabilizers_match_enumeration() {
    for rec in GoldenRecord::all().unwrap() {
        let field = Field::new(rec.d, rec.genus).unwrap();
        let t = std::time::Instant::now();
        let found = enumerate_elliptic(&field, reference_counts(&rec)).unwrap();
        for (kind, refs) in [
            (EllipticType::Two, rec.order2().unwrap()),
            (EllipticType::ThreePlus, rec.three_plus().unwrap()),
            (EllipticType::ThreeMinus, rec.three_minus().unwrap()),
        ] {
            let pts: Vec<EllipticPoint> = found.iter().filter(|p| p.kind == kind).cloned().collect();
            match_reference(&field, &pts, &refs, kind)
                .unwrap_or_else(|e| panic!("D={} {}: {e}", rec.d, rec.genus));
            for p in &pts {
                let expect = if kind == EllipticType::Two { 4 } else { 6 };
                assert_eq!(stabilizer_size(&field, p).unwrap(), expect);
                phi_form(p, &field).unwrap();
            }
        }
        eprintln!("D={} {}: {:?}", rec.d, rec.genus, t.elapsed());
    }
}
