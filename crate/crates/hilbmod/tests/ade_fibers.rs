mod common;

use hilbmod::fibration_analysis::classify;
use proptest::prelude::*;

use common::{affine, all_types, check_extended_diagrams, graph};

#[test]
fn extended_diagrams_classify_with_kodaira_multiplicities() {
    check_extended_diagrams().unwrap();
}

proptest! {
    /// Classification does not depend on how the curves are numbered.
    #[test]
    fn relabeling_preserves_type_and_multiplicities(k in 0usize..18, perm in Just((0..10).collect::<Vec<usize>>()).prop_shuffle()) {
        let t = all_types()[k];
        let (n, e, mult) = affine(t);
        let p: Vec<usize> = perm.into_iter().filter(|&i| i < n).collect();
        let e2: Vec<(usize, usize, i128)> = e.iter().map(|&(a, b, m)| (p[a], p[b], m)).collect();
        let g = graph(n, &e2);
        let c = classify(&g, &(0..n).collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(c.config_type, t);
        for (i, &m) in mult.iter().enumerate() {
            prop_assert_eq!(c.multiplicities[p[i]], m);
        }
    }
}
