use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use hilbmod::elliptic_points::{phi_form, EllipticPoint, PhiForm};
use hilbmod::field_arith::Q;
use hilbmod::golden::SURFACES;
use hilbmod::hz_divisors::{accounting, f_level_elliptic, f_level_total, ContactSite};
use hilbmod::pipeline::SurfaceModel;

const LEVEL_MAX: u32 = 10;

fn with_phis(m: &SurfaceModel) -> Vec<(EllipticPoint, PhiForm)> {
    m.points.iter().map(|p| (p.clone(), phi_form(p, &m.field).unwrap())).collect()
}

#[test]
fn component_counts_and_representatives_match_reference() {
    for (d, genus) in SURFACES {
        let t = Instant::now();
        let m = SurfaceModel::build(d, genus).unwrap_or_else(|e| panic!("D={d} {genus}: {e}"));
        assert!(t.elapsed() < Duration::from_secs(120), "D={d} {genus} took {:?}", t.elapsed());
        for n in m.record.hz_levels() {
            let reps = m.record.hz_reps(n).unwrap();
            assert_eq!(m.hz.component_count(n), reps.len(), "D={d} {genus} N={n}");
            let ids: BTreeSet<_> = (0..reps.len())
                .map(|i| {
                    m.hz.component_of_reference(n, i)
                        .unwrap_or_else(|| panic!("D={d} {genus} N={n}: representative {i} is in no component"))
                })
                .collect();
            assert_eq!(ids.len(), reps.len(), "D={d} {genus} N={n}: two representatives share a component");
        }
    }
}

/// The closed total for `(T'_M, T'_N)` accounted for by elliptic points alone.
#[test]
fn transversal_totals_are_elliptic_pair_counts() {
    let mut residues = Vec::new();
    for (d, genus) in SURFACES {
        let m = SurfaceModel::build(d, genus).unwrap();
        let pts = with_phis(&m);
        for a in 1..=LEVEL_MAX {
            for b in a..=LEVEL_MAX {
                match accounting(&m.field, &pts, a, b) {
                    Ok(acc) if acc.remainder == "0" => {}
                    Ok(acc) => residues.push(format!("D={d} {genus} ({a},{b}): remainder {}", acc.remainder)),
                    Err(e) => residues.push(format!("D={d} {genus}: {e}")),
                }
            }
        }
    }
    assert!(residues.is_empty(), "{} nonzero remainders:\n{}", residues.len(), residues.join("\n"));
}

/// Every pair of listed levels splits into elliptic pairs plus the enumerated
/// transversal contacts.
#[test]
fn listed_levels_decompose_with_transversal_contacts() {
    for (d, genus) in SURFACES {
        let m = SurfaceModel::build(d, genus).unwrap();
        let pts = with_phis(&m);
        let mut found: BTreeMap<(u32, u32), i128> = BTreeMap::new();
        for c in m.hz.contacts.iter().filter(|c| c.site == ContactSite::Transversal) {
            let key = (c.a.level.min(c.b.level), c.a.level.max(c.b.level));
            // same-level contacts were stored as unordered points
            let k = if key.0 == key.1 { 2 * c.count } else { c.count };
            *found.entry(key).or_default() += k;
        }
        let levels = m.record.hz_levels();
        for (i, &a) in levels.iter().enumerate() {
            for &b in &levels[i..] {
                let total = f_level_total(&m.field, a, b).unwrap();
                let ell = f_level_elliptic(&pts, a, b);
                let trans = Q::from_integer(found.get(&(a, b)).copied().unwrap_or(0));
                assert_eq!(total, ell + trans, "D={d} {genus} ({a},{b})");
            }
        }
    }
}
