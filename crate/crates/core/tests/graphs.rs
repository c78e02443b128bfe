mod common;

use ldpc_forge::alist::{read_alist, write_alist};
use ldpc_forge::generate::sample_regular;
use ldpc_forge::{EdgePair, Error};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn alist_round_trip(g in common::multigraph(20, 12)) {
        let text = write_alist(&g);
        let back = read_alist(&text).unwrap();
        prop_assert_eq!(back.edge_multiset(), g.edge_multiset());
        prop_assert_eq!(write_alist(&back), text);
    }

    #[test]
    fn swaps_preserve_degrees(seed in 0u64..1000, i in 0usize..96, j in 0usize..96) {
        let g = sample_regular(32, 3, 6, seed).unwrap();
        let a = g.edge(i);
        let b = g.edge(j);
        match g.swap_edges(EdgePair { a, b }) {
            Ok(h) => {
                prop_assert_eq!(h.var_degrees(), g.var_degrees());
                prop_assert_eq!(h.check_degrees(), g.check_degrees());
                prop_assert_eq!(h.n_edges(), g.n_edges());
                let back = h.swap_edges(EdgePair { a: (a.0, b.1), b: (b.0, a.1) }).unwrap();
                prop_assert_eq!(back.edge_multiset(), g.edge_multiset());
            }
            Err(e) => prop_assert!(a.0 == b.0 && matches!(e, Error::InvalidParameters(_))),
        }
    }
}

#[test]
fn malformed_alist_is_a_parse_error() {
    for text in ["", "2 2\n2 2\n", "2 2\n2 2\n2 x\n2 2\n1 2\n1 2\n1 2\n1 2\n"] {
        let err = read_alist(text).unwrap_err();
        assert_eq!(err.exit_code(), 3, "{text:?}: {err}");
    }
}
