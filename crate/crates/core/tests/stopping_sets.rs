mod common;

use ldpc_forge::stopset::{
    brute_force_stopping_sets, enumerate_stopping_sets, error_floor_profile, is_stopping_set,
    DEFAULT_BUDGET,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn enumeration_matches_brute_force(g in common::graph(20, 12), d_max in 1usize..=6) {
        let fast = enumerate_stopping_sets(&g, d_max, DEFAULT_BUDGET).unwrap();
        let slow = brute_force_stopping_sets(&g, d_max).unwrap();
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn enumeration_matches_brute_force_with_parallel_edges(g in common::multigraph(14, 8), d_max in 1usize..=5) {
        let fast = enumerate_stopping_sets(&g, d_max, DEFAULT_BUDGET).unwrap();
        let slow = brute_force_stopping_sets(&g, d_max).unwrap();
        prop_assert_eq!(fast, slow);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn union_of_stopping_sets_is_stopping(g in common::graph(16, 10)) {
        let sets = brute_force_stopping_sets(&g, 5).unwrap();
        for a in sets.iter().take(12) {
            for b in sets.iter().take(12) {
                let mut u = a.members().to_vec();
                u.extend_from_slice(b.members());
                prop_assert!(is_stopping_set(&g, &u).unwrap());
            }
        }
    }

    #[test]
    fn profile_agrees_with_the_smallest_sets(g in common::graph(18, 10)) {
        let all = brute_force_stopping_sets(&g, 18).unwrap();
        let p = error_floor_profile(&g, 8, DEFAULT_BUDGET).unwrap();
        let d = all.iter().map(|s| s.len()).min().filter(|&d| d <= 8);
        prop_assert_eq!(p.d_stp, d);
        let minimum: Vec<_> = all.iter().filter(|s| Some(s.len()) == d).cloned().collect();
        prop_assert_eq!(p.m_s, minimum.len());
        prop_assert_eq!(p.min_sets, minimum);
    }
}
