//! Annealing with pendant auxiliary pairs: compares the suppressing weights of
//! the minimum stopping sets for several multipliers.

use ldpc_forge::anneal::{anneal_augmented, degree_augment, remove_augment, AnnealConfig};
use ldpc_forge::generate::{sample_irregular, DegreeDistribution};
use ldpc_forge::pipeline::weight_census;
use ldpc_forge::stopset::{error_floor_profile, DEFAULT_BUDGET};

fn main() -> ldpc_forge::Result<()> {
    let dist = DegreeDistribution::new(&[(2, 0.4187), (3, 0.1626), (6, 0.4187)], &[(6, 1.0)])?;
    let g = sample_irregular(72, &dist, 3)?;
    for d_u in 1..=3 {
        let ag = degree_augment(&g, d_u)?;
        let cfg = AnnealConfig {
            seed: 3,
            per_d_attempt_cap: 2_000,
            ..AnnealConfig::default()
        };
        let (ag, r) = anneal_augmented(&ag, &cfg)?;
        let base = remove_augment(&ag)?;
        let p = error_floor_profile(&base, 32, DEFAULT_BUDGET)?;
        let census = weight_census(&base, &p)?;
        println!(
            "d_u={d_u}: {} auxiliary pairs, D'_stp {:?}, base {:?}, min W_sup {:?}, weights {:?}",
            ag.aux_pairs.len(),
            r.final_profile.d_stp,
            p.order_key(),
            census.min_w_sup.map(|w| w.to_string()),
            census.histogram
        );
    }
    Ok(())
}
