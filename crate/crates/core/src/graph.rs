//! Sparse bipartite Tanner graphs.
//!
//! Indices in the Rust API are 0-based. File formats and the command line use
//! 1-based indices and convert at the boundary.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tanner graph of a binary LDPC code.
///
/// The edge list is a multiset: parallel edges are representable (and
/// reported by [`TannerGraph::parallel_edge_count`]). Edge ids are stable
/// under [`TannerGraph::swap_edges`], which only moves check endpoints.
#[derive(Debug, Clone)]
pub struct TannerGraph {
    n_vars: usize,
    n_checks: usize,
    edges: Vec<(usize, usize)>,
    var_edges: Vec<Vec<usize>>,
    check_edges: Vec<Vec<usize>>,
}

/// Two edges `(x_a, y_a)` and `(x_b, y_b)` to be rewired into
/// `(x_a, y_b)` and `(x_b, y_a)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgePair {
    pub a: (usize, usize),
    pub b: (usize, usize),
}

impl TannerGraph {
    /// Builds a graph from 0-based `(var, check)` pairs.
    pub fn new(n_vars: usize, n_checks: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for &(v, c) in &edges {
            if v >= n_vars || c >= n_checks {
                return Err(Error::params(format!(
                    "edge ({v}, {c}) outside {n_vars} x {n_checks}"
                )));
            }
        }
        let mut var_edges = vec![Vec::new(); n_vars];
        let mut check_edges = vec![Vec::new(); n_checks];
        for (id, &(v, c)) in edges.iter().enumerate() {
            var_edges[v].push(id);
            check_edges[c].push(id);
        }
        Ok(TannerGraph {
            n_vars,
            n_checks,
            edges,
            var_edges,
            check_edges,
        })
    }

    /// Builds a graph from a dense parity-check matrix (rows are checks).
    pub fn from_dense<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let n_checks = rows.len();
        let n_vars = rows.first().map_or(0, |r| r.as_ref().len());
        let mut edges = Vec::new();
        for (c, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n_vars {
                return Err(Error::params("ragged parity-check matrix"));
            }
            for (v, &bit) in row.iter().enumerate() {
                for _ in 0..bit {
                    edges.push((v, c));
                }
            }
        }
        TannerGraph::new(n_vars, n_checks, edges)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_checks(&self) -> usize {
        self.n_checks
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edge list as 0-based `(var, check)` pairs, indexed by edge id.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    /// Edge ids incident to variable `v`.
    pub fn var_edge_ids(&self, v: usize) -> &[usize] {
        &self.var_edges[v]
    }

    /// Edge ids incident to check `c`.
    pub fn check_edge_ids(&self, c: usize) -> &[usize] {
        &self.check_edges[c]
    }

    /// Checks adjacent to `v`, repeated once per parallel edge.
    pub fn var_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.var_edges[v].iter().map(move |&e| self.edges[e].1)
    }

    /// Variables adjacent to `c`, repeated once per parallel edge.
    pub fn check_neighbors(&self, c: usize) -> impl Iterator<Item = usize> + '_ {
        self.check_edges[c].iter().map(move |&e| self.edges[e].0)
    }

    pub fn var_degree(&self, v: usize) -> usize {
        self.var_edges[v].len()
    }

    pub fn check_degree(&self, c: usize) -> usize {
        self.check_edges[c].len()
    }

    pub fn var_degrees(&self) -> Vec<usize> {
        self.var_edges.iter().map(Vec::len).collect()
    }

    pub fn check_degrees(&self) -> Vec<usize> {
        self.check_edges.iter().map(Vec::len).collect()
    }

    pub fn max_var_degree(&self) -> usize {
        self.var_edges.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn max_check_degree(&self) -> usize {
        self.check_edges.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Number of edges that duplicate an earlier edge between the same pair.
    pub fn parallel_edge_count(&self) -> usize {
        let mut sorted = self.edges.clone();
        sorted.sort_unstable();
        sorted.windows(2).filter(|w| w[0] == w[1]).count()
    }

    pub fn has_parallel_edges(&self) -> bool {
        self.parallel_edge_count() > 0
    }

    /// Number of edges between `v` and `c`.
    pub fn multiplicity(&self, v: usize, c: usize) -> usize {
        self.var_neighbors(v).filter(|&x| x == c).count()
    }

    /// Sorted edge multiset; two graphs are equal iff these agree.
    pub fn edge_multiset(&self) -> Vec<(usize, usize)> {
        let mut sorted = self.edges.clone();
        sorted.sort_unstable();
        sorted
    }

    fn find_edge(&self, v: usize, c: usize) -> Result<usize> {
        if v >= self.n_vars || c >= self.n_checks {
            return Err(Error::NotFound(format!("edge ({v}, {c}) out of range")));
        }
        self.var_edges[v]
            .iter()
            .copied()
            .find(|&e| self.edges[e].1 == c)
            .ok_or_else(|| Error::NotFound(format!("edge ({v}, {c}) not in graph")))
    }

    /// Returns a copy with `pair.a` and `pair.b` replaced by the crossed edges.
    pub fn swap_edges(&self, pair: EdgePair) -> Result<TannerGraph> {
        let (xa, ya) = pair.a;
        let (xb, yb) = pair.b;
        if xa == xb {
            return Err(Error::params("edge swap needs two distinct variables"));
        }
        let ea = self.find_edge(xa, ya)?;
        let eb = self.find_edge(xb, yb)?;
        let mut out = self.clone();
        out.rewire(ea, eb);
        Ok(out)
    }

    /// Exchanges the check endpoints of edge ids `ea` and `eb` in place.
    ///
    /// Applying it twice restores the graph exactly, including list order.
    pub(crate) fn rewire(&mut self, ea: usize, eb: usize) {
        let ya = self.edges[ea].1;
        let yb = self.edges[eb].1;
        if ya == yb {
            return;
        }
        self.edges[ea].1 = yb;
        self.edges[eb].1 = ya;
        replace_id(&mut self.check_edges[ya], ea, eb);
        replace_id(&mut self.check_edges[yb], eb, ea);
    }

    /// Length of the shortest cycle counted in variable nodes (half the
    /// number of edges), or `None` for a forest.
    pub fn girth(&self) -> Option<usize> {
        // BFS over the bipartite graph; variable nodes are 0..n, checks n..n+m.
        let n = self.n_vars;
        let total = n + self.n_checks;
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; total];
        let mut via = vec![usize::MAX; total];
        let mut queue = VecDeque::new();
        for root in 0..total {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[root] = 0;
            via[root] = usize::MAX;
            queue.clear();
            queue.push_back(root);
            'bfs: while let Some(u) = queue.pop_front() {
                if let Some(b) = best {
                    if 2 * dist[u] + 1 >= 2 * b {
                        break;
                    }
                }
                let incident: &[usize] = if u < n {
                    &self.var_edges[u]
                } else {
                    &self.check_edges[u - n]
                };
                for &e in incident {
                    if e == via[u] {
                        continue;
                    }
                    let (v, c) = self.edges[e];
                    let w = if u < n { n + c } else { v };
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        via[w] = e;
                        queue.push_back(w);
                    } else {
                        let cycle = dist[u] + dist[w] + 1;
                        let half = cycle / 2;
                        if best.is_none_or(|b| half < b) {
                            best = Some(half);
                        }
                        if cycle <= 2 {
                            break 'bfs;
                        }
                    }
                }
            }
        }
        best
    }
}

fn replace_id(list: &mut [usize], from: usize, to: usize) {
    if let Some(slot) = list.iter_mut().find(|x| **x == from) {
        *slot = to;
    }
}

impl PartialEq for TannerGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n_vars == other.n_vars
            && self.n_checks == other.n_checks
            && self.edge_multiset() == other.edge_multiset()
    }
}

impl Eq for TannerGraph {}
