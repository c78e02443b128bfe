//! Monte Carlo frame error rates of a small code against the exact values.

use ldpc_forge::bec::{exact_fer, mc_simulate, StopRule};
use ldpc_forge::generate::sample_regular;

fn main() -> ldpc_forge::Result<()> {
    let g = sample_regular(16, 3, 6, 9)?;
    let eps = [0.1, 0.2, 0.3, 0.4];
    let stop = StopRule {
        min_frame_errors: 400,
        max_frames: 2_000_000,
    };
    let curve = mc_simulate(&g, &eps, stop, 9)?;
    for p in &curve.points {
        println!(
            "eps={:.2} fer={:.4e} [{:.4e}, {:.4e}] exact={:.4e} ({} frames)",
            p.eps,
            p.fer,
            p.fer_ci_lo,
            p.fer_ci_hi,
            exact_fer(&g, p.eps)?,
            p.frames
        );
    }
    print!("{}", curve.to_csv());
    Ok(())
}
