//! End-to-end construction: degree augmentation and annealing of a base
//! code, cyclic lifting, then annealing of the lifting sequence. Also the
//! run manifest shared by the command-line tools.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::alist::write_alist;
use crate::anneal::{
    anneal_augmented, anneal_lifting_sequence, degree_augment, remove_augment, AnnealConfig,
    AnnealReport,
};
use crate::bec::{mc_simulate, SimCurve, StopRule, CSV_HEADER};
use crate::error::{Error, Result};
use crate::generate::{sample_irregular, sample_regular, DegreeDistribution};
use crate::graph::TannerGraph;
use crate::lift::{lift, lifted_profile, sample_lifting_spec, LiftingSpec};
use crate::rng::{derive_seed, RNG_ALGORITHM};
use crate::stopset::{error_floor_profile, ErrorFloorProfile};
use crate::suppress::{set_weight, SuppressingWeight};

pub const TOOL_NAME: &str = "ldpc-forge";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaseSpec {
    Regular {
        n: usize,
        dv: usize,
        dc: usize,
    },
    Irregular {
        n: usize,
        lambda: Vec<(usize, f64)>,
        rho: Vec<(usize, f64)>,
    },
}

impl BaseSpec {
    pub fn sample(&self, seed: u64) -> Result<TannerGraph> {
        match self {
            BaseSpec::Regular { n, dv, dc } => sample_regular(*n, *dv, *dc, seed),
            BaseSpec::Irregular { n, lambda, rho } => {
                sample_irregular(*n, &DegreeDistribution::new(lambda, rho)?, seed)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub base: BaseSpec,
    /// Start from this alist file instead of sampling `base`.
    pub base_alist: Option<PathBuf>,
    pub d_u: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub seed: u64,
    /// Total node expansions, split across the three stages.
    pub budget: u64,
    /// Fractions of `budget` for base annealing, lifting analysis and
    /// lifting-sequence annealing.
    pub split: [f64; 3],
    pub enumeration_budget: u64,
    pub per_d_attempt_cap: u64,
    pub d_cap: usize,
    pub trial_batch: usize,
    /// Lifting sequence to use instead of a sampled one.
    pub shifts: Option<Vec<usize>>,
    pub eps: Vec<f64>,
    pub min_frame_errors: u64,
    pub max_frames: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            base: BaseSpec::Regular {
                n: 128,
                dv: 3,
                dc: 6,
            },
            base_alist: None,
            d_u: 1,
            k: 4,
            seed: 0,
            budget: 2_000_000_000,
            split: [0.4, 0.2, 0.4],
            enumeration_budget: 50_000_000,
            per_d_attempt_cap: 5_000,
            d_cap: 64,
            trial_batch: 1,
            shifts: None,
            eps: Vec::new(),
            min_frame_errors: StopRule::default().min_frame_errors,
            max_frames: 1_000_000,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.d_u == 0 || self.d_cap == 0 {
            return Err(Error::params("K, d_u and d_cap must be at least 1"));
        }
        if self.split.iter().any(|&f| !(0.0..=1.0).contains(&f))
            || self.split.iter().sum::<f64>() > 1.0 + 1e-9
        {
            return Err(Error::params(
                "budget split must be fractions summing to at most 1",
            ));
        }
        Ok(())
    }

    fn stage_budget(&self, i: usize) -> u64 {
        (self.budget as f64 * self.split[i]).floor() as u64
    }

    fn anneal_config(&self, budget: u64, seed: u64) -> AnnealConfig {
        AnnealConfig {
            seed,
            expansion_budget: budget,
            enumeration_budget: self.enumeration_budget,
            per_d_attempt_cap: self.per_d_attempt_cap,
            d_cap: self.d_cap,
            trial_batch: self.trial_batch,
            ..AnnealConfig::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileKey {
    pub d_stp: Option<usize>,
    pub m_s: usize,
    pub exhaustion_cap: usize,
}

impl From<&ErrorFloorProfile> for ProfileKey {
    fn from(p: &ErrorFloorProfile) -> Self {
        ProfileKey {
            d_stp: p.d_stp,
            m_s: p.m_s,
            exhaustion_cap: p.exhaustion_cap,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageRecord {
    pub name: String,
    pub skipped: bool,
    pub before: Option<ProfileKey>,
    pub after: Option<ProfileKey>,
    pub report: Option<AnnealReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightEntry {
    pub set: crate::stopset::StoppingSet,
    pub size: usize,
    pub w_sup: SuppressingWeight,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightCensus {
    pub d_stp: Option<usize>,
    pub min_w_sup: Option<SuppressingWeight>,
    /// Number of minimum sets of each weight.
    pub histogram: BTreeMap<String, usize>,
    pub sets: Vec<WeightEntry>,
}

/// Suppressing weights of the minimum stopping sets in `profile`.
pub fn weight_census(g: &TannerGraph, profile: &ErrorFloorProfile) -> Result<WeightCensus> {
    let mut sets = Vec::with_capacity(profile.min_sets.len());
    let mut histogram = BTreeMap::new();
    for s in &profile.min_sets {
        let w = set_weight(g, s.members())?;
        *histogram.entry(w.to_string()).or_insert(0) += 1;
        sets.push(WeightEntry {
            set: s.clone(),
            size: s.len(),
            w_sup: w,
        });
    }
    Ok(WeightCensus {
        d_stp: profile.d_stp,
        min_w_sup: sets.iter().map(|e| e.w_sup).min(),
        histogram,
        sets,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Volatile {
    pub unix_time: u64,
    pub host: String,
}

impl Volatile {
    pub fn now() -> Self {
        let unix_time = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        let host = std::env::var("HOSTNAME")
            .ok()
            .or_else(|| fs::read_to_string("/etc/hostname").ok())
            .map(|h| h.trim().to_string())
            .unwrap_or_default();
        Volatile { unix_time, host }
    }
}

/// Everything needed to reproduce a run. Only `volatile` varies between
/// identical runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: serde_json::Value,
    pub rng: String,
    pub stages: Vec<StageRecord>,
    /// Stopping distance of the augmented graph after annealing.
    pub d_prime_stp: Option<usize>,
    pub census: Option<WeightCensus>,
    pub artifacts: Vec<String>,
    pub volatile: Volatile,
}

impl RunManifest {
    pub fn new(command: &str, config: serde_json::Value) -> Self {
        RunManifest {
            tool: TOOL_NAME.to_string(),
            version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            config,
            rng: RNG_ALGORITHM.to_string(),
            stages: Vec::new(),
            d_prime_stp: None,
            census: None,
            artifacts: Vec::new(),
            volatile: Volatile::now(),
        }
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        write_json(&dir.join("manifest.json"), self)
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    pub base: TannerGraph,
    pub spec: LiftingSpec,
    pub lifted: TannerGraph,
    pub base_profile: Option<ErrorFloorProfile>,
    pub lifted_profile: Option<ErrorFloorProfile>,
    pub curve: Option<SimCurve>,
    pub manifest: RunManifest,
}

fn stage<T>(name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| e.in_stage(name))
}

/// Runs every stage in memory.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<PipelineOutcome> {
    cfg.validate()?;
    let mut manifest = RunManifest::new("pipeline", serde_json::to_value(cfg)?);

    let original = match &cfg.base_alist {
        Some(path) => stage(
            "base",
            fs::read_to_string(path)
                .map_err(Error::from)
                .and_then(|t| crate::alist::read_alist(&t)),
        )?,
        None => stage("base", cfg.base.sample(derive_seed(cfg.seed, 1)))?,
    };

    // Stage 1: augmentation and annealing of the base code.
    let b1 = cfg.stage_budget(0);
    let base = if b1 == 0 {
        manifest.stages.push(StageRecord {
            name: "da+ca".into(),
            skipped: true,
            before: None,
            after: None,
            report: None,
        });
        original.clone()
    } else {
        let ag = stage("da+ca", degree_augment(&original, cfg.d_u))?;
        let (ag, report) = stage(
            "da+ca",
            anneal_augmented(&ag, &cfg.anneal_config(b1, derive_seed(cfg.seed, 2))),
        )?;
        manifest.d_prime_stp = report.final_profile.d_stp;
        manifest.stages.push(StageRecord {
            name: "da+ca".into(),
            skipped: false,
            before: Some((&report.initial_profile).into()),
            after: Some((&report.final_profile).into()),
            report: Some(report),
        });
        stage("da+ca", remove_augment(&ag))?
    };

    // Stage 2: lifting and profiles of the base and the lifted code.
    let spec = match &cfg.shifts {
        Some(shifts) => LiftingSpec::new(cfg.k, shifts.clone())?,
        None => sample_lifting_spec(cfg.k, base.n_edges(), derive_seed(cfg.seed, 3))?,
    };
    let lifted0 = stage("lift", lift(&base, &spec))?;
    let b2 = cfg.stage_budget(1);
    let (base_profile, lifted0_profile) = if b2 == 0 {
        (None, None)
    } else {
        let bp = stage("lift", error_floor_profile(&base, cfg.d_cap, b2 / 2))?;
        let lp = stage(
            "lift",
            lifted_profile(&lifted0, cfg.k, cfg.d_cap, b2 - b2 / 2),
        )?;
        if let (Some(db), Some(dl)) = (bp.d_stp, lp.d_stp) {
            if dl < db {
                return Err(Error::contract(format!(
                    "lifted distance {dl} below base distance {db}"
                ))
                .in_stage("lift"));
            }
        }
        manifest.census = Some(stage("lift", weight_census(&base, &bp))?);
        (Some(bp), Some(lp))
    };
    manifest.stages.push(StageRecord {
        name: "lift".into(),
        skipped: b2 == 0,
        before: base_profile.as_ref().map(Into::into),
        after: lifted0_profile.as_ref().map(Into::into),
        report: None,
    });

    // Stage 3: annealing of the lifting sequence.
    let b3 = cfg.stage_budget(2);
    let (spec, lifted, lifted_final) = if b3 == 0 || cfg.k == 1 {
        manifest.stages.push(StageRecord {
            name: "cl+ca".into(),
            skipped: true,
            before: lifted0_profile.as_ref().map(Into::into),
            after: lifted0_profile.as_ref().map(Into::into),
            report: None,
        });
        (spec, lifted0, lifted0_profile)
    } else {
        let (spec, report) = stage(
            "cl+ca",
            anneal_lifting_sequence(
                &base,
                &spec,
                &cfg.anneal_config(b3, derive_seed(cfg.seed, 4)),
            ),
        )?;
        let lifted = stage("cl+ca", lift(&base, &spec))?;
        let fin = report.final_profile.clone();
        manifest.stages.push(StageRecord {
            name: "cl+ca".into(),
            skipped: false,
            before: Some((&report.initial_profile).into()),
            after: Some((&report.final_profile).into()),
            report: Some(report),
        });
        (spec, lifted, Some(fin))
    };

    let curve = if cfg.eps.is_empty() {
        None
    } else {
        let stop = StopRule {
            min_frame_errors: cfg.min_frame_errors,
            max_frames: cfg.max_frames,
        };
        Some(stage(
            "simulate",
            mc_simulate(&lifted, &cfg.eps, stop, derive_seed(cfg.seed, 5)),
        )?)
    };

    Ok(PipelineOutcome {
        base,
        spec,
        lifted,
        base_profile,
        lifted_profile: lifted_final,
        curve,
        manifest,
    })
}

pub const RUN_FILES: [&str; 7] = [
    "manifest.json",
    "base.alist",
    "lifted.alist",
    "spec.json",
    "profile.json",
    "census.json",
    "curves.csv",
];

/// Runs the pipeline and writes the run directory.
pub fn run_pipeline_to_dir(cfg: &PipelineConfig, dir: &Path) -> Result<PipelineOutcome> {
    let mut out = run_pipeline(cfg)?;
    fs::create_dir_all(dir)?;
    fs::write(dir.join("base.alist"), write_alist(&out.base))?;
    fs::write(dir.join("lifted.alist"), write_alist(&out.lifted))?;
    write_json(&dir.join("spec.json"), &out.spec)?;
    write_json(
        &dir.join("profile.json"),
        &serde_json::json!({"base": out.base_profile, "lifted": out.lifted_profile}),
    )?;
    write_json(&dir.join("census.json"), &out.manifest.census)?;
    let csv = match &out.curve {
        Some(c) => c.to_csv(),
        None => format!("{CSV_HEADER}\n"),
    };
    fs::write(dir.join("curves.csv"), csv)?;
    out.manifest.artifacts = RUN_FILES.iter().map(|s| s.to_string()).collect();
    out.manifest.write(dir)?;
    Ok(out)
}
