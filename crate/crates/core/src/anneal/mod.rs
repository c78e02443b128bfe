//! Code annealing: a strict hill climb on `(D_stp, M_s)` by local edge
//! swaps, degree augmentation, and the shift-redraw variant for lifted
//! codes.

mod augment;
mod engine;
mod lifting;

use std::time::Duration;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::TannerGraph;
use crate::rng::ForgeRng;
use crate::stopset::search::{self, SearchGraph, SearchMode};
use crate::stopset::{profile_from, ErrorFloorProfile, StoppingSet, DEFAULT_BUDGET};

pub use augment::{
    anneal_augmented, augmented_size, degree_augment, remove_augment, AugmentedGraph, AuxPair,
};
pub use lifting::anneal_lifting_sequence;

use engine::{Landscape, Trial};

/// `(d1, m1) ≻ (d2, m2)`: larger distance, or equal distance and fewer
/// minimum sets.
pub fn succ_compare(a: (usize, usize), b: (usize, usize)) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.1 < b.1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnnealConfig {
    pub seed: u64,
    /// Total node expansions across every evaluation.
    pub expansion_budget: u64,
    /// Node expansions allowed for a single trial evaluation.
    pub enumeration_budget: u64,
    /// Consecutive rejected trials after which the run stops.
    pub per_d_attempt_cap: u64,
    /// Size at which the initial enumeration starts.
    pub d_start: usize,
    /// Largest stopping distance pursued.
    pub d_cap: usize,
    pub stop_at_d: Option<usize>,
    pub max_trials: Option<u64>,
    pub time_limit: Option<Duration>,
    /// Trials drawn and evaluated together; the first improving one wins.
    pub trial_batch: usize,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        AnnealConfig {
            seed: 0,
            expansion_budget: DEFAULT_BUDGET,
            enumeration_budget: 50_000_000,
            per_d_attempt_cap: 20_000,
            d_start: 1,
            d_cap: 64,
            stop_at_d: None,
            max_trials: None,
            time_limit: None,
            trial_batch: 1,
        }
    }
}

impl AnnealConfig {
    pub fn validate(&self) -> Result<()> {
        if self.enumeration_budget == 0
            || self.d_start == 0
            || self.d_cap == 0
            || self.trial_batch == 0
        {
            return Err(Error::params("annealing caps must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// Every stopping set up to `d_cap` was removed.
    DCapReached,
    TargetReached,
    Stalled,
    Budget,
    TimeLimit,
    MaxTrials,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub trial: u64,
    pub d: usize,
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnealReport {
    pub initial_profile: ErrorFloorProfile,
    pub final_profile: ErrorFloorProfile,
    pub swaps_accepted: u64,
    pub swaps_rejected: u64,
    /// Draws that could not be evaluated (same check, would create a
    /// parallel edge, no eligible edge, unchanged shift).
    pub invalid_draws: u64,
    pub trials: u64,
    pub edges_touched: usize,
    pub trajectory: Vec<TrajectoryPoint>,
    pub stop_reason: StopReason,
    pub partial: bool,
    pub expansions: u64,
}

impl AnnealReport {
    pub fn initial_key(&self) -> (usize, usize) {
        self.initial_profile.order_key()
    }

    pub fn final_key(&self) -> (usize, usize) {
        self.final_profile.order_key()
    }
}

/// Number of edges of `before` (as a multiset) missing from `after`.
pub fn edges_changed(before: &TannerGraph, after: &TannerGraph) -> usize {
    let a = before.edge_multiset();
    let b = after.edge_multiset();
    let (mut i, mut j, mut common) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    a.len() - common
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Swap {
    ea: usize,
    eb: usize,
}

pub(crate) struct EdgeLandscape {
    pub g: TannerGraph,
    eligible_of: Vec<Vec<usize>>,
    eligible_vars: Vec<usize>,
}

impl EdgeLandscape {
    /// `frozen_checks_from`: edges into checks with this index or above are
    /// never swapped.
    pub(crate) fn new(g: TannerGraph, frozen_checks_from: usize) -> Self {
        let eligible_of: Vec<Vec<usize>> = (0..g.n_vars())
            .map(|v| {
                g.var_edge_ids(v)
                    .iter()
                    .copied()
                    .filter(|&e| g.edge(e).1 < frozen_checks_from)
                    .collect()
            })
            .collect();
        let eligible_vars = (0..g.n_vars())
            .filter(|&v| !eligible_of[v].is_empty())
            .collect();
        EdgeLandscape {
            g,
            eligible_of,
            eligible_vars,
        }
    }
}

fn pick<T: Copy>(rng: &mut ForgeRng, xs: &[T]) -> T {
    xs[rng.gen_range(0..xs.len())]
}

impl Landscape for EdgeLandscape {
    type Move = Swap;

    fn propose(&self, rng: &mut ForgeRng, s: &StoppingSet) -> Option<Swap> {
        let from: Vec<usize> = s
            .members()
            .iter()
            .copied()
            .filter(|&v| !self.eligible_of[v].is_empty())
            .collect();
        if from.is_empty() || self.eligible_vars.len() <= from.len() {
            return None;
        }
        let xa = pick(rng, &from);
        let ea = pick(rng, &self.eligible_of[xa]);
        let xb = loop {
            let v = pick(rng, &self.eligible_vars);
            if !s.contains(v) {
                break v;
            }
        };
        let eb = pick(rng, &self.eligible_of[xb]);
        let ya = self.g.edge(ea).1;
        let yb = self.g.edge(eb).1;
        if ya == yb || self.g.multiplicity(xa, yb) > 0 || self.g.multiplicity(xb, ya) > 0 {
            return None;
        }
        Some(Swap { ea, eb })
    }

    fn trial(&self, mv: Swap) -> Trial {
        let mut g = self.g.clone();
        g.rewire(mv.ea, mv.eb);
        let xa = g.edge(mv.ea).0;
        let xb = g.edge(mv.eb).0;
        Trial {
            sg: SearchGraph::new(&g),
            roots: vec![(xa, Vec::new()), (xb, vec![xa])],
            touched: vec![xa, xb],
            orbit_k: 1,
        }
    }

    fn commit(&mut self, mv: Swap) {
        self.g.rewire(mv.ea, mv.eb);
    }

    fn level_pass(
        &self,
        d: usize,
        limit: u64,
    ) -> std::result::Result<(Vec<StoppingSet>, u64), u64> {
        search::all_roots(&SearchGraph::new(&self.g), d, SearchMode::Minimal, limit)
    }
}

fn initial_profile(g: &TannerGraph, cfg: &AnnealConfig) -> Result<(ErrorFloorProfile, u64)> {
    cfg.validate()?;
    let p = profile_from(
        g,
        cfg.d_start.min(cfg.d_cap),
        cfg.d_cap,
        cfg.expansion_budget,
    )?;
    Ok((p, 0))
}

/// Runs code annealing on `g`. The output has the same degree sequence.
pub fn anneal(g: &TannerGraph, cfg: &AnnealConfig) -> Result<(TannerGraph, AnnealReport)> {
    anneal_with_frozen(g, g.n_checks(), cfg)
}

pub(crate) fn anneal_with_frozen(
    g: &TannerGraph,
    frozen_checks_from: usize,
    cfg: &AnnealConfig,
) -> Result<(TannerGraph, AnnealReport)> {
    let (initial, spent) = initial_profile(g, cfg)?;
    let mut land = EdgeLandscape::new(g.clone(), frozen_checks_from);
    let mut report = engine::drive(&mut land, cfg, initial, spent);
    report.edges_touched = edges_changed(g, &land.g);
    check_never_worse(&report)?;
    Ok((land.g, report))
}

fn check_never_worse(report: &AnnealReport) -> Result<()> {
    let (a, b) = (report.final_key(), report.initial_key());
    if a != b && !succ_compare(a, b) {
        return Err(Error::contract(format!(
            "annealing ended worse: {a:?} after {b:?}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::sample_regular;
    use crate::stopset::error_floor_profile;

    #[test]
    fn order_relation() {
        assert!(succ_compare((8, 89), (4, 1)));
        assert!(succ_compare((8, 50), (8, 89)));
        assert!(!succ_compare((8, 89), (8, 89)));
        assert!(!succ_compare((7, 1), (8, 1000)));
    }

    #[test]
    fn zero_attempt_cap_is_identity() {
        let g = sample_regular(24, 3, 6, 3).unwrap();
        let cfg = AnnealConfig {
            per_d_attempt_cap: 0,
            ..AnnealConfig::default()
        };
        let (h, r) = anneal(&g, &cfg).unwrap();
        assert_eq!(h, g);
        assert_eq!(r.swaps_accepted, 0);
        assert_eq!(r.stop_reason, StopReason::Stalled);
    }

    #[test]
    fn small_run_improves_and_preserves_degrees() {
        let g = sample_regular(32, 3, 6, 5).unwrap();
        let cfg = AnnealConfig {
            seed: 9,
            per_d_attempt_cap: 2000,
            d_cap: 8,
            ..AnnealConfig::default()
        };
        let (h, r) = anneal(&g, &cfg).unwrap();
        assert_eq!(h.var_degrees(), g.var_degrees());
        assert_eq!(h.check_degrees(), g.check_degrees());
        assert!(!h.has_parallel_edges());
        let truth = error_floor_profile(&h, 9, DEFAULT_BUDGET).unwrap();
        assert_eq!(truth.order_key(), r.final_key(), "{:?}", r.stop_reason);
        if r.final_profile.d_stp.is_some() {
            assert_eq!(truth, r.final_profile);
        }
        assert!(succ_compare(r.final_key(), r.initial_key()));
        assert!(r.edges_touched <= g.n_edges());
        for w in r.trajectory.windows(2) {
            assert!(succ_compare((w[1].d, w[1].m), (w[0].d, w[0].m)));
        }
    }

    #[test]
    fn deterministic_for_seed() {
        let g = sample_regular(24, 3, 6, 1).unwrap();
        let cfg = AnnealConfig {
            seed: 4,
            per_d_attempt_cap: 300,
            d_cap: 8,
            trial_batch: 3,
            ..AnnealConfig::default()
        };
        let (a, ra) = anneal(&g, &cfg).unwrap();
        let (b, rb) = anneal(&g, &cfg).unwrap();
        assert_eq!(a.edges(), b.edges());
        assert_eq!(ra, rb);
    }

    /// The incremental verdict agrees with recomputing the profile.
    #[test]
    fn incremental_evaluation_matches_recompute() {
        use rand::SeedableRng;
        let mut checked = 0;
        for seed in 0..30 {
            let g = sample_regular(20, 3, 6, seed).unwrap();
            let p = error_floor_profile(&g, 10, DEFAULT_BUDGET).unwrap();
            let Some(d) = p.d_stp else { continue };
            let land = EdgeLandscape::new(g.clone(), g.n_checks());
            let mut rng = ForgeRng::seed_from_u64(seed);
            for _ in 0..40 {
                let s = &p.min_sets[rng.gen_range(0..p.min_sets.len())];
                let Some(mv) = land.propose(&mut rng, s) else {
                    continue;
                };
                let (out, _) = engine::evaluate(&land.trial(mv), d, &p.min_sets, DEFAULT_BUDGET);
                let mut h = g.clone();
                h.rewire(mv.ea, mv.eb);
                let truth = error_floor_profile(&h, 10, DEFAULT_BUDGET).unwrap();
                let better = succ_compare(truth.order_key(), (d, p.m_s));
                match out {
                    engine::Outcome::Accept(next) => {
                        assert!(better);
                        if truth.d_stp == Some(d) {
                            assert_eq!(next, truth.min_sets);
                        } else {
                            assert!(next.is_empty());
                        }
                    }
                    engine::Outcome::Reject => assert!(!better),
                    engine::Outcome::Inconclusive => unreachable!(),
                }
                checked += 1;
            }
        }
        assert!(checked > 100);
    }
}
