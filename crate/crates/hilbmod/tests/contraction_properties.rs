mod common;

use hilbmod::surface_graph::{contract, ContractionPlan};
use proptest::prelude::*;

use common::{base, blow_up, blow_up_moves, contraction_case};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn contraction_undoes_blow_ups(g0 in base(), moves in blow_up_moves()) {
        contraction_case(&g0, &moves)?;
    }

    /// Contracting one exceptional cluster at a time reaches the same surface.
    #[test]
    fn contraction_is_order_independent(g0 in base(), picks in prop::collection::vec(0usize..64, 2..6)) {
        let n0 = g0.len();
        let mut g = g0.clone();
        for p in picks {
            g = blow_up(&g, &[p % g.len()]);
        }
        // the last curve is a (-1)-curve; contract it first, then the rest
        let last = g.len() - 1;
        let (h1, surv1) = contract(&g, &ContractionPlan::new(&g, &[last]).unwrap()).unwrap();
        let rest: Vec<usize> = (0..h1.len()).filter(|&i| surv1[i] >= n0).collect();
        let (h2, _) = contract(&h1, &ContractionPlan::new(&h1, &rest).unwrap()).unwrap();
        let (h, _) = contract(&g, &ContractionPlan::new(&g, &(n0..g.len()).collect::<Vec<_>>()).unwrap()).unwrap();
        prop_assert_eq!(h2.matrix, h.matrix);
    }
}
