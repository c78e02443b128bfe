mod common;

use ldpc_forge::stopset::{brute_force_stopping_sets, induced_stats};
use ldpc_forge::suppress::{
    brute_force_survivals, first_order_target, set_weight, suppressing_weight,
    theorem1_expectation, theorem3_exponent,
};
use num::{BigRational, One};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn first_order_expectation_matches_oracle(g in common::graph(5, 4), k in 2usize..=3) {
        let sets = brute_force_stopping_sets(&g, 5).unwrap();
        for s in sets.iter().filter(|s| {
            let st = induced_stats(&g, s.members()).unwrap();
            st.num_edges <= 9
        }).take(3) {
            let census = brute_force_survivals(&g, s.members(), k).unwrap();
            prop_assert_eq!(census.expected_first_order, theorem1_expectation(&g, s.members(), k).unwrap());
        }
    }

    #[test]
    fn weight_relations(g in common::graph(10, 8)) {
        for s in brute_force_stopping_sets(&g, 6).unwrap() {
            let st = induced_stats(&g, s.members()).unwrap();
            let w = set_weight(&g, s.members()).unwrap();
            prop_assert_eq!(w, suppressing_weight(&st));
            if s.members().iter().all(|&v| g.var_degree(v) >= 2) {
                prop_assert!(w.halves() >= 0);
            }
            let t = first_order_target(&st);
            prop_assert_eq!(t.num_checks, (st.num_edges - st.num_odd_checks) / 2);
            prop_assert!(theorem3_exponent(&st, &t) >= -(st.num_edges as i64 - st.num_vars as i64 - st.num_checks as i64));
        }
    }
}

#[test]
fn cycles_always_survive() {
    for len in 2..=7usize {
        let rows: Vec<Vec<u8>> = (0..len)
            .map(|c| {
                (0..len)
                    .map(|v| u8::from(v == c || v == (c + 1) % len))
                    .collect()
            })
            .collect();
        let g = ldpc_forge::TannerGraph::from_dense(&rows).unwrap();
        let s: Vec<usize> = (0..len).collect();
        assert_eq!(set_weight(&g, &s).unwrap().halves(), 0);
        for k in [1, 2, 5, 17, 64] {
            assert!(
                theorem1_expectation(&g, &s, k).unwrap().is_one(),
                "cycle {len}, K={k}"
            );
        }
        assert_eq!(theorem1_expectation(&g, &s, 3).unwrap(), BigRational::one());
    }
}
