//! Runs augmentation, annealing, lifting and lifting-sequence annealing and
//! writes the run directory.

use ldpc_forge::pipeline::{run_pipeline_to_dir, BaseSpec, PipelineConfig};

fn main() -> ldpc_forge::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "pipeline-run".into());
    let cfg = PipelineConfig {
        base: BaseSpec::Regular {
            n: 64,
            dv: 3,
            dc: 6,
        },
        k: 4,
        budget: 400_000_000,
        per_d_attempt_cap: 1_000,
        eps: vec![0.3, 0.35, 0.4],
        min_frame_errors: 50,
        max_frames: 1_000_000,
        ..PipelineConfig::default()
    };
    let out = run_pipeline_to_dir(&cfg, dir.as_ref())?;
    for s in &out.manifest.stages {
        println!(
            "{:<6} skipped={} before={:?} after={:?}",
            s.name, s.skipped, s.before, s.after
        );
    }
    println!("D'_stp = {:?}", out.manifest.d_prime_stp);
    if let Some(c) = &out.manifest.census {
        println!(
            "min W_sup of the base minimum sets: {:?}",
            c.min_w_sup.map(|w| w.to_string())
        );
    }
    println!("wrote {dir}/");
    Ok(())
}
