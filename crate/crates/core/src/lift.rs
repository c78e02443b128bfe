//! Cyclic lifting by circulant permutation blocks.
//!
//! Base variable `j` becomes lifted variables `j*K .. j*K + K` (layer `a` at
//! `j*K + a`), and likewise for checks. A base edge with shift `l` joins
//! check layer `a` to variable layer `(a + l) mod K`.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::TannerGraph;
use crate::rng::rng_from_seed;
use crate::stopset::search::{self, SearchGraph, SearchMode};
use crate::stopset::{is_stopping_set, profile_with, ErrorFloorProfile, StoppingSet};

/// Lifting factor and one shift per edge, in [`index_ones`] order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftingSpec {
    #[serde(rename = "K")]
    pub k: usize,
    pub shifts: Vec<usize>,
}

impl LiftingSpec {
    pub fn new(k: usize, shifts: Vec<usize>) -> Result<Self> {
        if k == 0 {
            return Err(Error::params("lifting factor K must be at least 1"));
        }
        if let Some(&bad) = shifts.iter().find(|&&l| l >= k) {
            return Err(Error::params(format!("shift {bad} out of range 0..{k}")));
        }
        Ok(LiftingSpec { k, shifts })
    }

    pub fn validate_for(&self, base: &TannerGraph) -> Result<()> {
        LiftingSpec::new(self.k, self.shifts.clone())?;
        if self.shifts.len() != base.n_edges() {
            return Err(Error::params(format!(
                "lifting sequence has {} shifts, base graph has {} edges",
                self.shifts.len(),
                base.n_edges()
            )));
        }
        Ok(())
    }
}

/// Edge ids of `g` in the canonical order of the 1's of H: by check, then
/// by variable, parallel edges in insertion order.
pub fn index_ones(g: &TannerGraph) -> Vec<usize> {
    let mut ids: Vec<usize> = (0..g.n_edges()).collect();
    ids.sort_by_key(|&e| {
        let (v, c) = g.edge(e);
        (c, v)
    });
    ids
}

pub fn sample_lifting_spec(k: usize, n_edges: usize, seed: u64) -> Result<LiftingSpec> {
    if k == 0 {
        return Err(Error::params("lifting factor K must be at least 1"));
    }
    let mut rng = rng_from_seed(seed);
    let shifts = (0..n_edges).map(|_| rng.gen_range(0..k)).collect();
    Ok(LiftingSpec { k, shifts })
}

pub fn lift(base: &TannerGraph, spec: &LiftingSpec) -> Result<TannerGraph> {
    spec.validate_for(base)?;
    let k = spec.k;
    let mut edges = Vec::with_capacity(base.n_edges() * k);
    for (i, e) in index_ones(base).into_iter().enumerate() {
        let (v, c) = base.edge(e);
        let l = spec.shifts[i];
        for a in 0..k {
            edges.push((v * k + (a + l) % k, c * k + a));
        }
    }
    TannerGraph::new(base.n_vars() * k, base.n_checks() * k, edges)
}

/// Repetition count of each base variable in a projected lifted set.
pub type RepetitionPattern = BTreeMap<usize, usize>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Projection {
    /// Base variable of every lifted member, in member order.
    pub multiset: Vec<usize>,
    pub support: Vec<usize>,
    pub repetition: RepetitionPattern,
}

pub fn project(lifted: &[usize], k: usize) -> Projection {
    let multiset: Vec<usize> = lifted.iter().map(|&v| v / k).collect();
    let mut repetition = RepetitionPattern::new();
    for &b in &multiset {
        *repetition.entry(b).or_insert(0) += 1;
    }
    Projection {
        multiset,
        support: repetition.keys().copied().collect(),
        repetition,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Survival {
    FirstOrder,
    HighOrder(RepetitionPattern),
}

pub fn classify_survival(
    base: &TannerGraph,
    spec: &LiftingSpec,
    s_l: &[usize],
) -> Result<Survival> {
    let lifted = lift(base, spec)?;
    if !is_stopping_set(&lifted, s_l)? {
        return Err(Error::contract(
            "set is not a stopping set of the lifted graph",
        ));
    }
    let mut members = s_l.to_vec();
    members.sort_unstable();
    members.dedup();
    let p = project(&members, spec.k);
    if p.repetition.values().all(|&r| r == 1) {
        Ok(Survival::FirstOrder)
    } else {
        Ok(Survival::HighOrder(p.repetition))
    }
}

/// Rotates every member one layer up within its block.
pub fn rotate(set: &[usize], k: usize, by: usize) -> Vec<usize> {
    let mut out: Vec<usize> = set.iter().map(|&v| v - v % k + (v % k + by) % k).collect();
    out.sort_unstable();
    out
}

/// All rotations of each set, deduplicated and sorted.
pub(crate) fn orbit_closure(sets: Vec<StoppingSet>, k: usize) -> Vec<StoppingSet> {
    let mut all: Vec<StoppingSet> = Vec::with_capacity(sets.len() * k);
    for s in sets {
        for by in 1..k {
            all.push(StoppingSet::from_sorted(rotate(s.members(), k, by)));
        }
        all.push(s);
    }
    all.sort_unstable();
    all.dedup();
    all
}

/// Error-floor profile of a lifted graph, searched only from layer-0
/// roots and completed by rotation.
pub fn lifted_profile(
    lifted: &TannerGraph,
    k: usize,
    d_cap: usize,
    budget: u64,
) -> Result<ErrorFloorProfile> {
    if k == 0 || lifted.n_vars() % k != 0 {
        return Err(Error::params("lifted graph size is not a multiple of K"));
    }
    let sg = SearchGraph::new(lifted);
    let roots: Vec<usize> = (0..lifted.n_vars() / k).map(|j| j * k).collect();
    profile_with(&sg, 1, d_cap, budget, |sg, d, left| {
        search::prefix_roots(sg, &roots, d, SearchMode::Minimal, left)
            .map(|(sets, used)| (orbit_closure(sets, k), used))
    })
}
