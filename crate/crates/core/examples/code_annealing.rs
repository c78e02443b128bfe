//! Anneals a random (3,6) n=64 code and prints its trajectory.

use ldpc_forge::anneal::{anneal, AnnealConfig};
use ldpc_forge::generate::sample_regular;

fn main() -> ldpc_forge::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    let g = sample_regular(64, 3, 6, seed)?;
    let cfg = AnnealConfig {
        seed,
        per_d_attempt_cap: 5_000,
        ..AnnealConfig::default()
    };
    let (out, r) = anneal(&g, &cfg)?;
    println!(
        "initial {:?} -> final {:?} ({:?})",
        r.initial_key(),
        r.final_key(),
        r.stop_reason
    );
    println!(
        "{} trials, {} accepted, {} invalid draws, {} edges rewired, girth {:?}",
        r.trials,
        r.swaps_accepted,
        r.invalid_draws,
        r.edges_touched,
        out.girth()
    );
    for t in &r.trajectory {
        println!("  trial {:>6}: ({}, {})", t.trial, t.d, t.m);
    }
    assert_eq!(out.var_degrees(), g.var_degrees());
    assert_eq!(out.check_degrees(), g.check_degrees());
    Ok(())
}
