//! Stopping sets: verification, exhaustive enumeration and error-floor
//! profiles.
//!
//! A nonempty variable set `s` is a stopping set when every check adjacent
//! to `s` has at least two edges into `s`. The iterative erasure decoder
//! fails exactly on erasure patterns that contain one.

mod oracle;
pub(crate) mod search;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::TannerGraph;

pub use oracle::{brute_force_stopping_sets, BRUTE_FORCE_MAX_VARS};
pub use search::{SearchGraph, SearchMode};

/// Default node-expansion budget for enumerations.
pub const DEFAULT_BUDGET: u64 = 2_000_000_000;

/// A sorted, duplicate-free, nonempty set of 0-based variable indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StoppingSet(Vec<usize>);

impl StoppingSet {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut v: Vec<usize> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        if v.is_empty() {
            return Err(Error::params("stopping sets are nonempty"));
        }
        Ok(StoppingSet(v))
    }

    pub(crate) fn from_sorted(v: Vec<usize>) -> Self {
        debug_assert!(!v.is_empty() && v.windows(2).all(|w| w[0] < w[1]));
        StoppingSet(v)
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// 1-based indices, as used in files.
    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|&v| v + 1).collect()
    }
}

impl Serialize for StoppingSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for StoppingSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<usize>::deserialize(d)?;
        if raw.contains(&0) {
            return Err(serde::de::Error::custom("indices are 1-based"));
        }
        StoppingSet::new(raw.into_iter().map(|v| v - 1)).map_err(serde::de::Error::custom)
    }
}

/// Counts over the subgraph induced by a variable set: the set itself, every
/// check adjacent to it, and the edges between them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedStats {
    pub num_vars: usize,
    pub num_checks: usize,
    pub num_edges: usize,
    pub num_odd_checks: usize,
}

fn check_indices(g: &TannerGraph, s: &[usize]) -> Result<()> {
    if s.is_empty() {
        return Err(Error::params("variable set is empty"));
    }
    if let Some(&bad) = s.iter().find(|&&v| v >= g.n_vars()) {
        return Err(Error::params(format!(
            "variable {} out of range 1..={}",
            bad + 1,
            g.n_vars()
        )));
    }
    Ok(())
}

/// Degree of every check in the subgraph induced by `s`, counting parallel
/// edges. Duplicate members of `s` are counted once.
pub fn induced_check_degrees(g: &TannerGraph, s: &[usize]) -> BTreeMap<usize, usize> {
    let mut members = s.to_vec();
    members.sort_unstable();
    members.dedup();
    let mut deg = BTreeMap::new();
    for &v in &members {
        for c in g.var_neighbors(v) {
            *deg.entry(c).or_insert(0) += 1;
        }
    }
    deg
}

pub fn is_stopping_set(g: &TannerGraph, s: &[usize]) -> Result<bool> {
    check_indices(g, s)?;
    Ok(induced_check_degrees(g, s).values().all(|&d| d >= 2))
}

pub fn induced_stats(g: &TannerGraph, s: &[usize]) -> Result<InducedStats> {
    check_indices(g, s)?;
    let deg = induced_check_degrees(g, s);
    let mut members = s.to_vec();
    members.sort_unstable();
    members.dedup();
    Ok(InducedStats {
        num_vars: members.len(),
        num_checks: deg.len(),
        num_edges: deg.values().sum(),
        num_odd_checks: deg.values().filter(|&&d| d % 2 == 1).count(),
    })
}

/// Stopping distance, multiplicity and the minimum stopping sets of a code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorFloorProfile {
    /// `None` when no stopping set of size `<= exhaustion_cap` exists.
    pub d_stp: Option<usize>,
    pub m_s: usize,
    /// Every stopping set of size `<= exhaustion_cap` has been accounted for.
    pub exhaustion_cap: usize,
    pub min_sets: Vec<StoppingSet>,
}

impl ErrorFloorProfile {
    /// `(d, m)` pair for the `≻` order. An unknown stopping distance counts
    /// as `exhaustion_cap + 1` with multiplicity 0.
    pub fn order_key(&self) -> (usize, usize) {
        match self.d_stp {
            Some(d) => (d, self.m_s),
            None => (self.exhaustion_cap + 1, 0),
        }
    }

    pub fn asymptote(&self, eps: f64) -> Option<f64> {
        self.d_stp.map(|d| floor_asymptote(d, self.m_s as f64, eps))
    }
}

/// `m_s * eps^d_stp`, the leading error-floor term on the erasure channel.
pub fn floor_asymptote(d_stp: usize, m_s: f64, eps: f64) -> f64 {
    m_s * eps.powi(d_stp as i32)
}

/// All stopping sets of size `<= d_max`, sorted.
///
/// Sizes are exhausted one at a time, so a budget error reports the largest
/// size that was fully covered together with every set up to that size.
pub fn enumerate_stopping_sets(
    g: &TannerGraph,
    d_max: usize,
    budget: u64,
) -> Result<Vec<StoppingSet>> {
    if d_max == 0 {
        return Err(Error::params("d_max must be at least 1"));
    }
    let sg = SearchGraph::new(g);
    let mut spent = 0u64;
    let mut complete: Vec<StoppingSet> = Vec::new();
    for d in 1..=d_max {
        match search::all_roots(&sg, d, SearchMode::Extend, budget.saturating_sub(spent)) {
            Ok((sets, used)) => {
                spent += used;
                complete = sets;
            }
            Err(used) => {
                return Err(Error::Budget(Box::new(crate::error::BudgetExceeded {
                    certified_size: d - 1,
                    partial: complete,
                    expansions: spent + used,
                })));
            }
        }
    }
    Ok(complete)
}

/// Smallest stopping-set size `d <= d_cap` and every stopping set of that
/// size.
pub fn error_floor_profile(
    g: &TannerGraph,
    d_cap: usize,
    budget: u64,
) -> Result<ErrorFloorProfile> {
    profile_from(g, 1, d_cap, budget)
}

/// Like [`error_floor_profile`], but the first pass already searches up to
/// `d_from`. Any smaller sets are still found by that pass.
pub fn profile_from(
    g: &TannerGraph,
    d_from: usize,
    d_cap: usize,
    budget: u64,
) -> Result<ErrorFloorProfile> {
    let sg = SearchGraph::new(g);
    profile_with(&sg, d_from, d_cap, budget, |sg, d, left| {
        search::all_roots(sg, d, SearchMode::Minimal, left)
    })
}

/// Iterative deepening shared by the plain and the lifted profile searches.
pub(crate) fn profile_with<F>(
    sg: &SearchGraph,
    d_from: usize,
    d_cap: usize,
    budget: u64,
    mut pass: F,
) -> Result<ErrorFloorProfile>
where
    F: FnMut(&SearchGraph, usize, u64) -> std::result::Result<(Vec<StoppingSet>, u64), u64>,
{
    if d_cap == 0 || d_from == 0 {
        return Err(Error::params("size caps must be at least 1"));
    }
    let mut spent = 0u64;
    for d in d_from..=d_cap {
        match pass(sg, d, budget.saturating_sub(spent)) {
            Ok((sets, used)) => {
                spent += used;
                if let Some(min) = sets.iter().map(StoppingSet::len).min() {
                    let sets: Vec<StoppingSet> =
                        sets.into_iter().filter(|s| s.len() == min).collect();
                    return Ok(ErrorFloorProfile {
                        d_stp: Some(min),
                        m_s: sets.len(),
                        exhaustion_cap: min,
                        min_sets: sets,
                    });
                }
            }
            Err(used) => {
                return Err(Error::Budget(Box::new(crate::error::BudgetExceeded {
                    certified_size: d - 1,
                    partial: Vec::new(),
                    expansions: spent + used,
                })));
            }
        }
    }
    Ok(ErrorFloorProfile {
        d_stp: None,
        m_s: 0,
        exhaustion_cap: d_cap.max(d_from - 1),
        min_sets: Vec::new(),
    })
}
