//! Degree augmentation: every variable of degree `deg >= 3` gets
//! `d_u * (deg - 2)` pendant pairs (auxiliary check joined to the variable
//! and to a fresh degree-1 auxiliary variable).

use serde::Serialize;

use super::{anneal_with_frozen, AnnealConfig, AnnealReport};
use crate::error::{Error, Result};
use crate::graph::TannerGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AuxPair {
    pub owner: usize,
    pub var: usize,
    pub check: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentedGraph {
    pub graph: TannerGraph,
    pub aux_pairs: Vec<AuxPair>,
    pub d_u: usize,
    pub n_orig_vars: usize,
    pub n_orig_checks: usize,
    pub n_orig_edges: usize,
}

pub fn degree_augment(g: &TannerGraph, d_u: usize) -> Result<AugmentedGraph> {
    if d_u == 0 {
        return Err(Error::params("d_u must be at least 1"));
    }
    let (n, m) = (g.n_vars(), g.n_checks());
    let mut edges = g.edges().to_vec();
    let mut aux_pairs = Vec::new();
    for x in 0..n {
        let deg = g.var_degree(x);
        if deg < 3 {
            continue;
        }
        for _ in 0..d_u * (deg - 2) {
            let pair = AuxPair {
                owner: x,
                var: n + aux_pairs.len(),
                check: m + aux_pairs.len(),
            };
            edges.push((x, pair.check));
            edges.push((pair.var, pair.check));
            aux_pairs.push(pair);
        }
    }
    let a = aux_pairs.len();
    Ok(AugmentedGraph {
        graph: TannerGraph::new(n + a, m + a, edges)?,
        aux_pairs,
        d_u,
        n_orig_vars: n,
        n_orig_checks: m,
        n_orig_edges: g.n_edges(),
    })
}

/// Strips the auxiliary pairs after checking they are still intact.
pub fn remove_augment(ag: &AugmentedGraph) -> Result<TannerGraph> {
    let g = &ag.graph;
    let (n, m) = (ag.n_orig_vars, ag.n_orig_checks);
    let a = ag.aux_pairs.len();
    if g.n_vars() != n + a || g.n_checks() != m + a || g.n_edges() != ag.n_orig_edges + 2 * a {
        return Err(Error::Corruption(
            "graph size disagrees with the auxiliary bookkeeping".into(),
        ));
    }
    for p in &ag.aux_pairs {
        let mut on_check: Vec<usize> = g.check_neighbors(p.check).collect();
        on_check.sort_unstable();
        let mut want = vec![p.owner, p.var];
        want.sort_unstable();
        if on_check != want || g.var_degree(p.var) != 1 || p.owner >= n {
            return Err(Error::Corruption(format!(
                "auxiliary pair on check {} is no longer a pendant of variable {}",
                p.check + 1,
                p.owner + 1
            )));
        }
    }
    let orig = &g.edges()[..ag.n_orig_edges];
    if let Some(&(v, c)) = orig.iter().find(|&&(v, c)| v >= n || c >= m) {
        return Err(Error::Corruption(format!(
            "original edge moved to auxiliary node ({}, {})",
            v + 1,
            c + 1
        )));
    }
    TannerGraph::new(n, m, orig.to_vec())
}

/// Size of the augmented image of an original set.
pub fn augmented_size(g: &TannerGraph, s: &[usize], d_u: usize) -> usize {
    s.len()
        + d_u
            * s.iter()
                .map(|&x| g.var_degree(x).saturating_sub(2))
                .sum::<usize>()
}

/// Annealing on the augmented graph with every auxiliary edge frozen.
pub fn anneal_augmented(
    ag: &AugmentedGraph,
    cfg: &AnnealConfig,
) -> Result<(AugmentedGraph, AnnealReport)> {
    let (graph, report) = anneal_with_frozen(&ag.graph, ag.n_orig_checks, cfg)?;
    let out = AugmentedGraph {
        graph,
        ..ag.clone()
    };
    remove_augment(&out)?;
    Ok((out, report))
}
