use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use ldpc_forge::alist::{read_alist, write_alist};
use ldpc_forge::anneal::{
    anneal, anneal_augmented, anneal_lifting_sequence, degree_augment, remove_augment, AnnealConfig,
};
use ldpc_forge::bec::{exact_fer, mc_simulate, StopRule, EXACT_FER_MAX_VARS};
use ldpc_forge::generate::{sample_irregular, sample_regular, DegreeDistribution};
use ldpc_forge::lift::{lift, lifted_profile, sample_lifting_spec, LiftingSpec};
use ldpc_forge::pipeline::{
    run_pipeline_to_dir, write_json, BaseSpec, PipelineConfig, RunManifest,
};
use ldpc_forge::stopset::{
    error_floor_profile, induced_stats, is_stopping_set, StoppingSet, DEFAULT_BUDGET,
};
use ldpc_forge::suppress::{
    brute_force_survivals, prop1_exponent, rational_to_f64, set_weight, theorem1_expectation,
    theorem2_floor, FloorMode,
};
use ldpc_forge::{Error, Result, TannerGraph};

#[derive(Parser)]
#[command(
    name = "ldpc-forge",
    version,
    about = "Stopping-set analysis, code annealing and cyclic lifting of LDPC codes"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Serialize)]
struct Global {
    /// Master seed; every random choice is derived from it.
    #[arg(long, env = "LDPC_FORGE_SEED", global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a random code from a degree distribution.
    Gen(GenArgs),
    /// Anneal a code to raise its stopping distance.
    Anneal(AnnealArgs),
    /// Cyclically lift a base code.
    Lift(LiftArgs),
    /// Stopping distance and minimum stopping sets.
    Analyze(AnalyzeArgs),
    /// Suppressing weights and lifted-ensemble expectations.
    Suppress(SuppressArgs),
    /// Erasure-channel frame error rates.
    Simulate(SimulateArgs),
    /// Augment, anneal, lift and anneal the lifting sequence.
    Pipeline(PipelineArgs),
}

#[derive(Args, Serialize)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, requires = "dc", conflicts_with_all = ["lambda", "rho"])]
    dv: Option<usize>,
    #[arg(long)]
    dc: Option<usize>,
    /// Variable edge-degree terms, e.g. `2:0.4187,3:0.1626,6:0.4187`.
    #[arg(long, requires = "rho")]
    lambda: Option<String>,
    /// Check edge-degree terms.
    #[arg(long)]
    rho: Option<String>,
}

#[derive(Args, Serialize)]
struct AnnealFlags {
    /// JSON file of annealing settings; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    budget_expansions: Option<u64>,
    #[arg(long)]
    budget_enumeration: Option<u64>,
    #[arg(long)]
    per_d_attempt_cap: Option<u64>,
    #[arg(long)]
    d_cap: Option<usize>,
    #[arg(long)]
    stop_at_d: Option<usize>,
    #[arg(long)]
    max_trials: Option<u64>,
    #[arg(long)]
    trial_batch: Option<usize>,
    /// Wall-clock limit; runs that hit it are not reproducible.
    #[arg(long)]
    time_limit_secs: Option<u64>,
}

impl AnnealFlags {
    fn resolve(&self, seed: Option<u64>) -> Result<AnnealConfig> {
        let mut cfg: AnnealConfig = read_config(self.config.as_deref())?;
        if let Some(s) = seed {
            cfg.seed = s;
        }
        set(&mut cfg.expansion_budget, self.budget_expansions);
        set(&mut cfg.enumeration_budget, self.budget_enumeration);
        set(&mut cfg.per_d_attempt_cap, self.per_d_attempt_cap);
        set(&mut cfg.d_cap, self.d_cap);
        set(&mut cfg.trial_batch, self.trial_batch);
        if self.stop_at_d.is_some() {
            cfg.stop_at_d = self.stop_at_d;
        }
        if self.max_trials.is_some() {
            cfg.max_trials = self.max_trials;
        }
        if let Some(t) = self.time_limit_secs {
            cfg.time_limit = Some(Duration::from_secs(t));
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args, Serialize)]
struct AnnealArgs {
    input: PathBuf,
    /// Anneal the degree-augmented graph with this multiplier.
    #[arg(long)]
    d_u: Option<usize>,
    #[command(flatten)]
    flags: AnnealFlags,
}

#[derive(Args, Serialize)]
struct LiftArgs {
    input: PathBuf,
    #[arg(long = "K")]
    k: usize,
    /// Shift sequence file (`{"K": .., "shifts": [..]}`) instead of a random one.
    #[arg(long)]
    shifts: Option<PathBuf>,
    /// Anneal the shift sequence after lifting.
    #[arg(long)]
    anneal: bool,
    #[command(flatten)]
    flags: AnnealFlags,
}

#[derive(Args, Serialize)]
struct AnalyzeArgs {
    input: PathBuf,
    #[arg(long, default_value_t = 12)]
    d_cap: usize,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget_expansions: u64,
    /// Treat the input as a K-fold cyclic lift and use its rotation symmetry.
    #[arg(long = "K")]
    k: Option<usize>,
}

#[derive(Args, Serialize)]
struct SuppressArgs {
    input: PathBuf,
    #[arg(long = "K")]
    k: usize,
    /// 1-based stopping set, e.g. `1,2`; defaults to every minimum set.
    #[arg(long, value_delimiter = ',')]
    set: Option<Vec<usize>>,
    #[arg(long, default_value_t = 12)]
    d_cap: usize,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget_expansions: u64,
    /// Cross-check against enumeration of every shift sequence.
    #[arg(long)]
    oracle: bool,
}

#[derive(Args, Serialize)]
struct SimulateArgs {
    input: PathBuf,
    #[arg(long, required = true)]
    eps: Vec<f64>,
    #[arg(long)]
    min_frame_errors: Option<u64>,
    #[arg(long)]
    max_frames: Option<u64>,
    /// Also compute the exact frame error rate (small codes only).
    #[arg(long)]
    exact: bool,
}

#[derive(Args, Serialize)]
struct PipelineArgs {
    /// JSON pipeline configuration; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Base code instead of a sampled one.
    #[arg(long)]
    base: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, requires = "dc")]
    dv: Option<usize>,
    #[arg(long)]
    dc: Option<usize>,
    #[arg(long, requires = "rho", conflicts_with = "dv")]
    lambda: Option<String>,
    #[arg(long)]
    rho: Option<String>,
    #[arg(long)]
    d_u: Option<usize>,
    #[arg(long = "K")]
    k: Option<usize>,
    #[arg(long)]
    budget_total: Option<u64>,
    /// Fractions for the three stages, e.g. `0.4,0.2,0.4`.
    #[arg(long, value_delimiter = ',', num_args = 3)]
    budget_split: Option<Vec<f64>>,
    #[arg(long)]
    budget_enumeration: Option<u64>,
    #[arg(long)]
    per_d_attempt_cap: Option<u64>,
    #[arg(long)]
    d_cap: Option<usize>,
    #[arg(long)]
    trial_batch: Option<usize>,
    /// Shift sequence file used instead of a random one.
    #[arg(long)]
    shifts: Option<PathBuf>,
    #[arg(long)]
    eps: Vec<f64>,
    #[arg(long)]
    min_frame_errors: Option<u64>,
    #[arg(long)]
    max_frames: Option<u64>,
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn read_config<T: serde::de::DeserializeOwned + Default>(path: Option<&Path>) -> Result<T> {
    match path {
        Some(p) => Ok(serde_json::from_str(&read_text(p)?)?),
        None => Ok(T::default()),
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn read_code(path: &Path) -> Result<TannerGraph> {
    read_alist(&read_text(path)?)
}

fn read_spec(path: &Path) -> Result<LiftingSpec> {
    let spec: LiftingSpec = serde_json::from_str(&read_text(path)?)?;
    LiftingSpec::new(spec.k, spec.shifts)
}

fn summary(v: serde_json::Value) {
    println!("{v}");
}

struct Run<'a> {
    out: &'a Path,
    manifest: RunManifest,
}

impl<'a> Run<'a> {
    fn new(out: &'a Path, command: &str, config: serde_json::Value) -> Result<Self> {
        fs::create_dir_all(out)?;
        Ok(Run {
            out,
            manifest: RunManifest::new(command, config),
        })
    }

    fn text(&mut self, name: &str, body: &str) -> Result<()> {
        fs::write(self.out.join(name), body)?;
        self.manifest.artifacts.push(name.to_string());
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        write_json(&self.out.join(name), value)?;
        self.manifest.artifacts.push(name.to_string());
        Ok(())
    }

    fn finish(self) -> Result<()> {
        self.manifest.write(self.out)
    }
}

fn cmd_gen(g: &Global, a: &GenArgs) -> Result<()> {
    let seed = g.seed.unwrap_or(0);
    let code = match (a.dv, a.dc, &a.lambda, &a.rho) {
        (Some(dv), Some(dc), None, None) => sample_regular(a.n, dv, dc, seed)?,
        (None, None, Some(l), Some(r)) => {
            let dist = DegreeDistribution::new(
                &DegreeDistribution::parse_terms(l)?,
                &DegreeDistribution::parse_terms(r)?,
            )?;
            sample_irregular(a.n, &dist, seed)?
        }
        _ => {
            return Err(Error::InvalidParameters(
                "give either --dv/--dc or --lambda/--rho".into(),
            ))
        }
    };
    let mut run = Run::new(&g.out, "gen", json!({"seed": seed, "args": a}))?;
    run.text("code.alist", &write_alist(&code))?;
    run.finish()?;
    summary(json!({"n": code.n_vars(), "m": code.n_checks(), "edges": code.n_edges()}));
    Ok(())
}

fn cmd_anneal(g: &Global, a: &AnnealArgs) -> Result<()> {
    let cfg = a.flags.resolve(g.seed)?;
    let code = read_code(&a.input)?;
    let mut run = Run::new(
        &g.out,
        "anneal",
        json!({"input": a.input, "d_u": a.d_u, "anneal": cfg}),
    )?;
    let (out, report) = match a.d_u {
        Some(d_u) => {
            let ag = degree_augment(&code, d_u)?;
            let (ag, report) = anneal_augmented(&ag, &cfg)?;
            run.manifest.d_prime_stp = report.final_profile.d_stp;
            (remove_augment(&ag)?, report)
        }
        None => anneal(&code, &cfg)?,
    };
    run.text("annealed.alist", &write_alist(&out))?;
    run.json("report.json", &report)?;
    run.finish()?;
    let (d0, m0) = report.initial_key();
    let (d1, m1) = report.final_key();
    summary(
        json!({"initial": [d0, m0], "final": [d1, m1], "accepted": report.swaps_accepted, "stop_reason": report.stop_reason}),
    );
    Ok(())
}

fn cmd_lift(g: &Global, a: &LiftArgs) -> Result<()> {
    let base = read_code(&a.input)?;
    let seed = g.seed.unwrap_or(0);
    let spec = match &a.shifts {
        Some(p) => read_spec(p)?,
        None => sample_lifting_spec(a.k, base.n_edges(), seed)?,
    };
    if spec.k != a.k {
        return Err(Error::InvalidParameters(format!(
            "shift file has K = {}, expected {}",
            spec.k, a.k
        )));
    }
    let mut run = Run::new(&g.out, "lift", json!({"seed": seed, "args": a}))?;
    let spec = if a.anneal {
        let (spec, report) = anneal_lifting_sequence(&base, &spec, &a.flags.resolve(Some(seed))?)?;
        run.json("report.json", &report)?;
        spec
    } else {
        spec
    };
    let lifted = lift(&base, &spec)?;
    run.text("lifted.alist", &write_alist(&lifted))?;
    run.json("spec.json", &spec)?;
    run.finish()?;
    summary(json!({"n": lifted.n_vars(), "m": lifted.n_checks(), "K": spec.k}));
    Ok(())
}

fn cmd_analyze(g: &Global, a: &AnalyzeArgs) -> Result<()> {
    let code = read_code(&a.input)?;
    let profile = match a.k {
        Some(k) => lifted_profile(&code, k, a.d_cap, a.budget_expansions)?,
        None => error_floor_profile(&code, a.d_cap, a.budget_expansions)?,
    };
    let mut run = Run::new(&g.out, "analyze", json!({"args": a}))?;
    run.json(
        "profile.json",
        &json!({"profile": profile, "girth": code.girth()}),
    )?;
    run.finish()?;
    summary(json!({"d_stp": profile.d_stp, "m_s": profile.m_s}));
    Ok(())
}

fn cmd_suppress(g: &Global, a: &SuppressArgs) -> Result<()> {
    let code = read_code(&a.input)?;
    let profile = error_floor_profile(&code, a.d_cap, a.budget_expansions)?;
    let sets = match &a.set {
        Some(s) => {
            if s.contains(&0) {
                return Err(Error::InvalidParameters("set indices are 1-based".into()));
            }
            let set = StoppingSet::new(s.iter().map(|v| v - 1))?;
            if !is_stopping_set(&code, set.members())? {
                return Err(Error::Contract(format!(
                    "{:?} is not a stopping set",
                    set.one_based()
                )));
            }
            vec![set]
        }
        None => profile.min_sets.clone(),
    };
    let mut entries = Vec::with_capacity(sets.len());
    for s in &sets {
        let stats = induced_stats(&code, s.members())?;
        let e = theorem1_expectation(&code, s.members(), a.k)?;
        let oracle = if a.oracle {
            let census = brute_force_survivals(&code, s.members(), a.k)?;
            if census.expected_first_order != e {
                return Err(Error::Contract(format!(
                    "oracle disagrees on {:?}: {} vs {}",
                    s.one_based(),
                    census.expected_first_order,
                    e
                )));
            }
            Some(census)
        } else {
            None
        };
        entries.push(json!({
            "set": s,
            "stats": stats,
            "w_sup": set_weight(&code, s.members())?,
            "first_order_expectation": e.to_string(),
            "first_order_expectation_f64": rational_to_f64(&e),
            "prop1_exponent": prop1_exponent(&stats),
            "oracle": oracle,
        }));
    }
    let floor = theorem2_floor(&profile, &code, a.k, FloorMode::Exact)?;
    let mut run = Run::new(&g.out, "suppress", json!({"args": a}))?;
    run.json(
        "suppress.json",
        &json!({"K": a.k, "sets": entries, "floor": floor}),
    )?;
    run.finish()?;
    let first = entries
        .first()
        .map(|e| e["first_order_expectation"].clone());
    summary(
        json!({"sets": entries.len(), "first_order_expectation": first, "min_w_sup": floor.min_w_sup}),
    );
    Ok(())
}

fn cmd_simulate(g: &Global, a: &SimulateArgs) -> Result<()> {
    let code = read_code(&a.input)?;
    let defaults = StopRule::default();
    let stop = StopRule {
        min_frame_errors: a.min_frame_errors.unwrap_or(defaults.min_frame_errors),
        max_frames: a.max_frames.unwrap_or(defaults.max_frames),
    };
    let seed = g.seed.unwrap_or(0);
    let curve = mc_simulate(&code, &a.eps, stop, seed)?;
    let mut run = Run::new(&g.out, "simulate", json!({"seed": seed, "args": a}))?;
    run.text("curves.csv", &curve.to_csv())?;
    run.json("curve.json", &curve)?;
    if a.exact {
        if code.n_vars() > EXACT_FER_MAX_VARS {
            return Err(Error::SizeGuard(format!(
                "exact FER needs n <= {EXACT_FER_MAX_VARS}"
            )));
        }
        let exact = a
            .eps
            .iter()
            .map(|&e| Ok(json!({"eps": e, "fer": exact_fer(&code, e)?})))
            .collect::<Result<Vec<_>>>()?;
        run.json("exact.json", &exact)?;
    }
    run.finish()?;
    let fer: Vec<f64> = curve.points.iter().map(|p| p.fer).collect();
    summary(json!({"eps": a.eps, "fer": fer}));
    Ok(())
}

fn cmd_pipeline(g: &Global, a: &PipelineArgs) -> Result<()> {
    let mut cfg: PipelineConfig = read_config(a.config.as_deref())?;
    set(&mut cfg.seed, g.seed);
    if let Some(p) = &a.base {
        cfg.base_alist = Some(p.clone());
    }
    let n = a.n.unwrap_or(match &cfg.base {
        BaseSpec::Regular { n, .. } | BaseSpec::Irregular { n, .. } => *n,
    });
    if let (Some(dv), Some(dc)) = (a.dv, a.dc) {
        cfg.base = BaseSpec::Regular { n, dv, dc };
    } else if let (Some(l), Some(r)) = (&a.lambda, &a.rho) {
        cfg.base = BaseSpec::Irregular {
            n,
            lambda: DegreeDistribution::parse_terms(l)?,
            rho: DegreeDistribution::parse_terms(r)?,
        };
    } else {
        match &mut cfg.base {
            BaseSpec::Regular { n: slot, .. } | BaseSpec::Irregular { n: slot, .. } => *slot = n,
        }
    }
    set(&mut cfg.d_u, a.d_u);
    set(&mut cfg.k, a.k);
    set(&mut cfg.budget, a.budget_total);
    if let Some(s) = &a.budget_split {
        cfg.split = [s[0], s[1], s[2]];
    }
    set(&mut cfg.enumeration_budget, a.budget_enumeration);
    set(&mut cfg.per_d_attempt_cap, a.per_d_attempt_cap);
    set(&mut cfg.d_cap, a.d_cap);
    set(&mut cfg.trial_batch, a.trial_batch);
    if let Some(p) = &a.shifts {
        let spec = read_spec(p)?;
        cfg.k = spec.k;
        cfg.shifts = Some(spec.shifts);
    }
    if !a.eps.is_empty() {
        cfg.eps = a.eps.clone();
    }
    set(&mut cfg.min_frame_errors, a.min_frame_errors);
    set(&mut cfg.max_frames, a.max_frames);
    let out = run_pipeline_to_dir(&cfg, &g.out)?;
    let key =
        |p: &Option<ldpc_forge::stopset::ErrorFloorProfile>| p.as_ref().map(|p| p.order_key());
    summary(json!({
        "base": key(&out.base_profile),
        "lifted": key(&out.lifted_profile),
        "d_prime_stp": out.manifest.d_prime_stp,
        "min_w_sup": out.manifest.census.as_ref().and_then(|c| c.min_w_sup),
    }));
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    if let Some(w) = cli.global.workers {
        if w == 0 {
            return Err(Error::InvalidParameters(
                "--workers must be at least 1".into(),
            ));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| Error::InvalidParameters(e.to_string()))?;
    }
    let g = &cli.global;
    match &cli.command {
        Command::Gen(a) => cmd_gen(g, a),
        Command::Anneal(a) => cmd_anneal(g, a),
        Command::Lift(a) => cmd_lift(g, a),
        Command::Analyze(a) => cmd_analyze(g, a),
        Command::Suppress(a) => cmd_suppress(g, a),
        Command::Simulate(a) => cmd_simulate(g, a),
        Command::Pipeline(a) => cmd_pipeline(g, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ldpc-forge: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
