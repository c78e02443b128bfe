//! Lifts a small base code, then projects and classifies lifted stopping sets.

use ldpc_forge::generate::sample_regular;
use ldpc_forge::lift::{classify_survival, lift, lifted_profile, project, sample_lifting_spec};
use ldpc_forge::stopset::{error_floor_profile, is_stopping_set, DEFAULT_BUDGET};

fn main() -> ldpc_forge::Result<()> {
    let base = sample_regular(32, 3, 6, 2)?;
    let k = 4;
    let spec = sample_lifting_spec(k, base.n_edges(), 2)?;
    let lifted = lift(&base, &spec)?;
    let pb = error_floor_profile(&base, 16, DEFAULT_BUDGET)?;
    let pl = lifted_profile(&lifted, k, 16, DEFAULT_BUDGET)?;
    println!(
        "base n={} {:?}, lifted n={} {:?}",
        base.n_vars(),
        pb.order_key(),
        lifted.n_vars(),
        pl.order_key()
    );
    assert!(pl.d_stp >= pb.d_stp);

    for s in pl.min_sets.iter().take(4) {
        let proj = project(s.members(), k);
        assert!(is_stopping_set(&base, &proj.support)?);
        println!(
            "  lifted {:?} -> base {:?}: {:?}",
            s.one_based(),
            proj.support.iter().map(|v| v + 1).collect::<Vec<_>>(),
            classify_survival(&base, &spec, s.members())?
        );
    }
    Ok(())
}
