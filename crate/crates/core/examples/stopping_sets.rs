//! Stopping distance, minimum stopping sets and the error-floor asymptote of
//! a random (3,6) code, checked against brute force on a small one.

use ldpc_forge::generate::sample_regular;
use ldpc_forge::stopset::{
    brute_force_stopping_sets, enumerate_stopping_sets, error_floor_profile, floor_asymptote,
    induced_stats, DEFAULT_BUDGET,
};

fn main() -> ldpc_forge::Result<()> {
    let small = sample_regular(18, 3, 6, 5)?;
    let fast = enumerate_stopping_sets(&small, 6, DEFAULT_BUDGET)?;
    let slow = brute_force_stopping_sets(&small, 6)?;
    assert_eq!(fast, slow);
    println!(
        "n=18: {} stopping sets of size <= 6, brute force agrees",
        fast.len()
    );

    let g = sample_regular(256, 3, 6, 5)?;
    let p = error_floor_profile(&g, 16, DEFAULT_BUDGET)?;
    let d = p
        .d_stp
        .expect("a (3,6) code of this length has small stopping sets");
    println!("n=256: D_stp = {d}, M_s = {}", p.m_s);
    for s in p.min_sets.iter().take(5) {
        let st = induced_stats(&g, s.members())?;
        println!(
            "  {:?}  checks={} edges={} odd={}",
            s.one_based(),
            st.num_checks,
            st.num_edges,
            st.num_odd_checks
        );
    }
    for eps in [0.1, 0.2, 0.3] {
        println!(
            "  floor at eps={eps}: {:.3e}",
            floor_asymptote(d, p.m_s as f64, eps)
        );
    }
    Ok(())
}
