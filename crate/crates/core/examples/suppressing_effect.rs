//! Exact first-order survival expectations versus K for a few stopping sets,
//! with the fitted decay exponent and the brute-force check at small K.

use ldpc_forge::suppress::{
    brute_force_survivals, expectation_curve, expectation_slope, rational_to_f64, set_weight,
    theorem1_expectation,
};
use ldpc_forge::TannerGraph;

fn main() -> ldpc_forge::Result<()> {
    let cycle = TannerGraph::from_dense(&[[1u8, 1, 0], [0, 1, 1], [1, 0, 1]])?;
    let k4 = TannerGraph::from_dense(&[
        [1u8, 1, 0, 0],
        [1, 0, 1, 0],
        [1, 0, 0, 1],
        [0, 1, 1, 0],
        [0, 1, 0, 1],
        [0, 0, 1, 1],
    ])?;
    for (name, g) in [("6-cycle", &cycle), ("K4 gadget", &k4)] {
        let s: Vec<usize> = (0..g.n_vars()).collect();
        let w = set_weight(g, &s)?;
        println!("{name}: W_sup = {w}");
        for (k, e) in expectation_curve(g, &s, &[2, 4, 8, 16, 32])? {
            println!("  K={k:>3}: {e} ~ {:.4e}", rational_to_f64(&e));
        }
        println!(
            "  slope over K=4..256: {:.3}",
            expectation_slope(g, &s, &[4, 8, 16, 32, 64, 128, 256])?
        );
        let census = brute_force_survivals(g, &s, 2)?;
        assert_eq!(census.expected_first_order, theorem1_expectation(g, &s, 2)?);
        println!(
            "  brute force at K=2 agrees over {} shift sequences",
            census.sequences
        );
    }
    Ok(())
}
