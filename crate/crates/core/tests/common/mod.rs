#![allow(dead_code)]

use ldpc_forge::TannerGraph;
use proptest::prelude::*;

/// Random simple graphs with up to `max_vars` variables and `max_checks` checks.
pub fn graph(max_vars: usize, max_checks: usize) -> impl Strategy<Value = TannerGraph> {
    (1..=max_vars, 1..=max_checks, 0.15f64..0.6).prop_flat_map(|(n, m, p)| {
        proptest::collection::vec(proptest::bool::weighted(p), n * m).prop_map(move |bits| {
            let edges = bits
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| (i / m, i % m))
                .collect();
            TannerGraph::new(n, m, edges).unwrap()
        })
    })
}

/// Random graphs that may contain parallel edges.
pub fn multigraph(max_vars: usize, max_checks: usize) -> impl Strategy<Value = TannerGraph> {
    (1..=max_vars, 1..=max_checks).prop_flat_map(|(n, m)| {
        proptest::collection::vec((0..n, 0..m), 0..3 * n)
            .prop_map(move |edges| TannerGraph::new(n, m, edges).unwrap())
    })
}

/// Naive decoder: repeatedly resolves any erased variable that is the only
/// erased neighbour of some check.
pub fn naive_peel(g: &TannerGraph, erased: &[usize]) -> Vec<usize> {
    let mut left: Vec<bool> = vec![false; g.n_vars()];
    for &v in erased {
        left[v] = true;
    }
    loop {
        let mut progress = false;
        for c in 0..g.n_checks() {
            let erased_here: Vec<usize> = g.check_neighbors(c).filter(|&v| left[v]).collect();
            if erased_here.len() == 1 {
                left[erased_here[0]] = false;
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    (0..g.n_vars()).filter(|&v| left[v]).collect()
}
