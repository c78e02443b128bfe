//! Stopping distances of random (3,6) codes against cyclic lifts of one
//! annealed base code of a quarter of the length.

use ldpc_forge::anneal::{anneal, AnnealConfig};
use ldpc_forge::generate::sample_regular;
use ldpc_forge::lift::{lift, lifted_profile, sample_lifting_spec};
use ldpc_forge::rng::derive_seed;
use ldpc_forge::stopset::{error_floor_profile, DEFAULT_BUDGET};

fn main() -> ldpc_forge::Result<()> {
    let count = 5;
    let (base, r) = anneal(
        &sample_regular(64, 3, 6, 1)?,
        &AnnealConfig {
            seed: 1,
            per_d_attempt_cap: 3_000,
            ..AnnealConfig::default()
        },
    )?;
    println!("base n=64 annealed to {:?}", r.final_key());

    let mut classic = Vec::new();
    let mut lifted = Vec::new();
    for i in 0..count {
        let g = sample_regular(256, 3, 6, derive_seed(7, i))?;
        classic.push(error_floor_profile(&g, 16, DEFAULT_BUDGET)?.order_key());
        let spec = sample_lifting_spec(4, base.n_edges(), derive_seed(8, i))?;
        lifted.push(lifted_profile(&lift(&base, &spec)?, 4, 16, DEFAULT_BUDGET)?.order_key());
    }
    println!("classic n=256: {classic:?}");
    println!("lifted  n=256: {lifted:?}");
    Ok(())
}
