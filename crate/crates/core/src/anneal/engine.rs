//! Accept/reject loop shared by edge-swap and shift-redraw annealing.

use std::collections::BTreeSet;
use std::ops::ControlFlow;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use super::{AnnealConfig, AnnealReport, StopReason, TrajectoryPoint};
use crate::lift::orbit_closure;
use crate::rng::{rng_from_seed, ForgeRng};
use crate::stopset::search::{self, SearchGraph};
use crate::stopset::{ErrorFloorProfile, StoppingSet};

/// A graph after one proposed move, with what the evaluation needs to know
/// about where the move acted.
pub(crate) struct Trial {
    pub sg: SearchGraph,
    /// Search roots, each with variables fixed out of the search.
    pub roots: Vec<(usize, Vec<usize>)>,
    /// Stopping sets avoiding all of these are unaffected by the move.
    pub touched: Vec<usize>,
    /// Lifting factor whose rotations complete the found sets (1 for none).
    pub orbit_k: usize,
}

pub(crate) trait Landscape: Sync {
    type Move: Copy + Send + Sync;

    /// One uniform draw; `None` when the draw is unusable.
    fn propose(&self, rng: &mut ForgeRng, s: &StoppingSet) -> Option<Self::Move>;
    fn trial(&self, mv: Self::Move) -> Trial;
    fn commit(&mut self, mv: Self::Move);
    /// All stopping sets of size `d` of the current graph, assuming none is
    /// smaller.
    fn level_pass(&self, d: usize, limit: u64) -> Result<(Vec<StoppingSet>, u64), u64>;
}

pub(crate) enum Outcome {
    Reject,
    Accept(Vec<StoppingSet>),
    Inconclusive,
}

/// Decides whether the moved graph beats `(d, |sets|)`, given that no
/// stopping set smaller than `d` existed before the move.
pub(crate) fn evaluate(
    trial: &Trial,
    d: usize,
    sets: &[StoppingSet],
    limit: u64,
) -> (Outcome, u64) {
    let untouched = |s: &StoppingSet| !trial.touched.iter().any(|&t| s.contains(t));
    let kept: Vec<StoppingSet> = sets.iter().filter(|s| untouched(s)).cloned().collect();
    if kept.len() >= sets.len() {
        return (Outcome::Reject, 0);
    }
    let mut found: BTreeSet<StoppingSet> = BTreeSet::new();
    let mut spent = 0u64;
    for (root, excluded) in &trial.roots {
        let mut visit = |m: &[u32]| {
            if m.len() < d {
                return ControlFlow::Break(());
            }
            let mut v: Vec<usize> = m.iter().map(|&x| x as usize).collect();
            v.sort_unstable();
            let set = StoppingSet::from_sorted(v);
            if trial.orbit_k > 1 {
                found.extend(orbit_closure(vec![set], trial.orbit_k));
            } else {
                found.insert(set);
            }
            if kept.len() + found.len() >= sets.len() {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        };
        match search::rooted(
            &trial.sg,
            *root,
            excluded,
            d,
            limit.saturating_sub(spent),
            &mut visit,
        ) {
            Ok((flow, used)) => {
                spent += used;
                if flow.is_break() {
                    return (Outcome::Reject, spent);
                }
            }
            Err(used) => return (Outcome::Inconclusive, spent + used),
        }
    }
    let mut next = kept;
    next.extend(found);
    next.sort_unstable();
    (Outcome::Accept(next), spent)
}

/// Profile at level `d`; an empty `sets` means no stopping set of size
/// `<= d` exists.
pub(crate) fn profile_of(d: usize, sets: &[StoppingSet]) -> ErrorFloorProfile {
    if sets.is_empty() {
        ErrorFloorProfile {
            d_stp: None,
            m_s: 0,
            exhaustion_cap: d,
            min_sets: Vec::new(),
        }
    } else {
        ErrorFloorProfile {
            d_stp: Some(d),
            m_s: sets.len(),
            exhaustion_cap: d,
            min_sets: sets.to_vec(),
        }
    }
}

/// Runs the hill climb from `initial` until a stop condition holds.
pub(crate) fn drive<L: Landscape>(
    land: &mut L,
    cfg: &AnnealConfig,
    initial: ErrorFloorProfile,
    initial_spent: u64,
) -> AnnealReport {
    let started = Instant::now();
    let mut rng = rng_from_seed(cfg.seed);
    let mut spent = initial_spent;
    let mut accepted = 0u64;
    let mut rejected = 0u64;
    let mut invalid = 0u64;
    let mut trials = 0u64;
    let mut since_accept = 0u64;
    let mut trajectory = Vec::new();

    let mut d = initial.d_stp.unwrap_or(initial.exhaustion_cap);
    let mut sets = initial.min_sets.clone();

    let stop = loop {
        if sets.is_empty() {
            if d >= cfg.d_cap {
                break StopReason::DCapReached;
            }
            d += 1;
            match land.level_pass(d, cfg.expansion_budget.saturating_sub(spent)) {
                Ok((found, used)) => {
                    spent += used;
                    sets = found;
                    if !sets.is_empty() {
                        trajectory.push(TrajectoryPoint {
                            trial: trials,
                            d,
                            m: sets.len(),
                        });
                    }
                    continue;
                }
                Err(used) => {
                    spent += used;
                    d -= 1;
                    break StopReason::Budget;
                }
            }
        }
        if cfg.stop_at_d.is_some_and(|t| d >= t) {
            break StopReason::TargetReached;
        }
        if spent >= cfg.expansion_budget {
            break StopReason::Budget;
        }
        if cfg.max_trials.is_some_and(|t| trials >= t) {
            break StopReason::MaxTrials;
        }
        if cfg.time_limit.is_some_and(|t| started.elapsed() >= t) {
            break StopReason::TimeLimit;
        }
        if since_accept >= cfg.per_d_attempt_cap {
            break StopReason::Stalled;
        }

        let batch = cfg.trial_batch.max(1);
        let mut moves = Vec::with_capacity(batch);
        while moves.len() < batch && since_accept + (moves.len() as u64) < cfg.per_d_attempt_cap {
            let s = &sets[rng.gen_range(0..sets.len())];
            match land.propose(&mut rng, s) {
                Some(mv) => moves.push(Some(mv)),
                None => moves.push(None),
            }
        }
        let left = cfg.expansion_budget.saturating_sub(spent);
        let per_trial = cfg.enumeration_budget.min(left);
        let land_ref: &L = land;
        let outcomes: Vec<Option<(Outcome, u64)>> = moves
            .par_iter()
            .map(|mv| mv.map(|mv| evaluate(&land_ref.trial(mv), d, &sets, per_trial)))
            .collect();

        let mut winner = None;
        for (i, out) in outcomes.into_iter().enumerate() {
            trials += 1;
            if let Some((_, used)) = &out {
                spent += used;
            }
            if winner.is_some() {
                continue;
            }
            match out {
                Some((Outcome::Accept(next), _)) => winner = Some((i, next)),
                Some(_) => {
                    rejected += 1;
                    since_accept += 1;
                }
                None => {
                    invalid += 1;
                    rejected += 1;
                    since_accept += 1;
                }
            }
        }
        if let Some((i, next)) = winner {
            let mv = moves[i].expect("accepted trial has a move");
            debug_assert!(next.is_empty() || next.len() < sets.len());
            land.commit(mv);
            accepted += 1;
            since_accept = 0;
            sets = next;
            if !sets.is_empty() {
                trajectory.push(TrajectoryPoint {
                    trial: trials,
                    d,
                    m: sets.len(),
                });
            }
        }
    };

    let final_profile = profile_of(d, &sets);
    AnnealReport {
        initial_profile: initial,
        final_profile,
        swaps_accepted: accepted,
        swaps_rejected: rejected,
        invalid_draws: invalid,
        trials,
        edges_touched: 0,
        trajectory,
        stop_reason: stop,
        partial: matches!(stop, StopReason::Budget | StopReason::TimeLimit),
        expansions: spent,
    }
}
