//! Exhaustive subset scan, used to cross-check the search.

use super::StoppingSet;
use crate::error::{Error, Result};
use crate::graph::TannerGraph;

pub const BRUTE_FORCE_MAX_VARS: usize = 24;

/// Every stopping set of size `<= d_max`, found by walking all `2^n`
/// subsets in Gray-code order.
pub fn brute_force_stopping_sets(g: &TannerGraph, d_max: usize) -> Result<Vec<StoppingSet>> {
    let n = g.n_vars();
    if n > BRUTE_FORCE_MAX_VARS {
        return Err(Error::SizeGuard(format!(
            "subset scan limited to {BRUTE_FORCE_MAX_VARS} variables, got {n}"
        )));
    }
    let mut deg = vec![0usize; g.n_checks()];
    let mut lonely = 0usize;
    let mut mask: u32 = 0;
    let mut out = Vec::new();
    for i in 1u64..(1u64 << n) {
        let v = i.trailing_zeros() as usize;
        let adding = mask & (1 << v) == 0;
        mask ^= 1 << v;
        for c in g.var_neighbors(v) {
            let before = deg[c];
            if adding {
                deg[c] += 1;
            } else {
                deg[c] -= 1;
            }
            lonely = lonely + usize::from(deg[c] == 1) - usize::from(before == 1);
        }
        if lonely == 0 && (mask.count_ones() as usize) <= d_max {
            out.push(StoppingSet::from_sorted(
                (0..n).filter(|&x| mask & (1 << x) != 0).collect(),
            ));
        }
    }
    out.sort_unstable();
    Ok(out)
}
