//! Random code generation from the configuration model.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::TannerGraph;
use crate::rng::{rng_from_seed, ForgeRng};

/// Maximum number of socket re-draws spent removing parallel edges.
pub const MAX_PARALLEL_RETRIES: usize = 1000;

/// Edge-perspective degree distribution pair `(lambda, rho)`.
///
/// Keys are node degrees: `lambda[&i]` is the fraction of edges attached to
/// variable nodes of degree `i` (the coefficient of `x^(i-1)` in the
/// polynomial form).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeDistribution {
    pub lambda: BTreeMap<usize, f64>,
    pub rho: BTreeMap<usize, f64>,
}

impl DegreeDistribution {
    pub fn new(lambda: &[(usize, f64)], rho: &[(usize, f64)]) -> Result<Self> {
        let dist = DegreeDistribution {
            lambda: lambda.iter().copied().collect(),
            rho: rho.iter().copied().collect(),
        };
        dist.validate()?;
        Ok(dist)
    }

    pub fn regular(dv: usize, dc: usize) -> Result<Self> {
        Self::new(&[(dv, 1.0)], &[(dc, 1.0)])
    }

    pub fn validate(&self) -> Result<()> {
        for (side, map) in [("lambda", &self.lambda), ("rho", &self.rho)] {
            if map.is_empty() {
                return Err(Error::params(format!("{side} has no terms")));
            }
            if map.keys().any(|&d| d == 0) {
                return Err(Error::params(format!("{side} has a degree-0 term")));
            }
            if map.values().any(|&f| !(f >= 0.0)) {
                return Err(Error::params(format!("{side} has a negative coefficient")));
            }
            let sum: f64 = map.values().sum();
            if (sum - 1.0).abs() > 1e-12 {
                return Err(Error::params(format!("{side} sums to {sum}, not 1")));
            }
        }
        Ok(())
    }

    /// Parses `"2:0.4187,3:0.1626,6:0.4187"` style term lists.
    pub fn parse_terms(text: &str) -> Result<Vec<(usize, f64)>> {
        text.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|term| {
                let (d, f) = term.split_once(':').ok_or_else(|| {
                    Error::params(format!("term `{term}` is not degree:fraction"))
                })?;
                let d = d
                    .trim()
                    .parse()
                    .map_err(|_| Error::params(format!("bad degree in `{term}`")))?;
                let f = f
                    .trim()
                    .parse()
                    .map_err(|_| Error::params(format!("bad fraction in `{term}`")))?;
                Ok((d, f))
            })
            .collect()
    }
}

/// Node counts per degree from edge fractions, rounded by largest remainder
/// so they add up to `total`.
pub fn node_counts(edge_fractions: &BTreeMap<usize, f64>, total: usize) -> BTreeMap<usize, usize> {
    let weights: Vec<(usize, f64)> = edge_fractions
        .iter()
        .filter(|(_, &f)| f > 0.0)
        .map(|(&d, &f)| (d, f / d as f64))
        .collect();
    let norm: f64 = weights.iter().map(|(_, w)| w).sum();
    let mut counts = BTreeMap::new();
    let mut remainders = Vec::with_capacity(weights.len());
    let mut assigned = 0usize;
    for &(d, w) in &weights {
        let exact = total as f64 * w / norm;
        let floor = exact.floor() as usize;
        counts.insert(d, floor);
        assigned += floor;
        remainders.push((exact - floor as f64, d));
    }
    // Largest remainder first; ties go to the lower degree.
    remainders.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    for &(_, d) in remainders.iter().take(total.saturating_sub(assigned)) {
        *counts.get_mut(&d).expect("degree present") += 1;
    }
    counts
}

fn expand_degrees(counts: &BTreeMap<usize, usize>) -> Vec<usize> {
    counts
        .iter()
        .flat_map(|(&d, &k)| std::iter::repeat_n(d, k))
        .collect()
}

/// Node-degree sequences realizing `dist` with `n` variable nodes.
///
/// Variable counts use largest-remainder rounding. The check count is the
/// rounded edge-count ratio; any remaining edge mismatch is absorbed by the
/// last check node.
pub fn realize_degrees(n: usize, dist: &DegreeDistribution) -> Result<(Vec<usize>, Vec<usize>)> {
    dist.validate()?;
    if n == 0 {
        return Err(Error::params("n must be positive"));
    }
    let var_degrees = expand_degrees(&node_counts(&dist.lambda, n));
    let edges: usize = var_degrees.iter().sum();
    let mean_inv_check: f64 = dist.rho.iter().map(|(&d, &f)| f / d as f64).sum();
    let m = (edges as f64 * mean_inv_check).round() as usize;
    if m == 0 {
        return Err(Error::Realization("no check nodes after rounding".into()));
    }
    let mut check_degrees = expand_degrees(&node_counts(&dist.rho, m));
    let check_edges: usize = check_degrees.iter().sum();
    if check_edges != edges {
        let last = check_degrees.last_mut().expect("m > 0");
        let adjusted = *last as i64 + edges as i64 - check_edges as i64;
        if adjusted < 1 {
            return Err(Error::Realization(format!(
                "cannot equalize {edges} variable-side and {check_edges} check-side edges"
            )));
        }
        *last = adjusted as usize;
    }
    Ok((var_degrees, check_degrees))
}

/// Configuration-model matching of sockets, re-drawing pairings that would
/// create parallel edges.
pub fn match_sockets(
    var_degrees: &[usize],
    check_degrees: &[usize],
    rng: &mut ForgeRng,
) -> Result<TannerGraph> {
    let var_sockets: Vec<usize> = var_degrees
        .iter()
        .enumerate()
        .flat_map(|(v, &d)| std::iter::repeat_n(v, d))
        .collect();
    let mut check_sockets: Vec<usize> = check_degrees
        .iter()
        .enumerate()
        .flat_map(|(c, &d)| std::iter::repeat_n(c, d))
        .collect();
    if var_sockets.len() != check_sockets.len() {
        return Err(Error::Realization(format!(
            "{} variable sockets vs {} check sockets",
            var_sockets.len(),
            check_sockets.len()
        )));
    }
    check_sockets.shuffle(rng);

    let mut mult: HashMap<(usize, usize), u32> = HashMap::with_capacity(var_sockets.len());
    for (&v, &c) in var_sockets.iter().zip(&check_sockets) {
        *mult.entry((v, c)).or_default() += 1;
    }
    let total = var_sockets.len();
    let mut retries = 0usize;
    for i in 0..total {
        loop {
            let (vi, ci) = (var_sockets[i], check_sockets[i]);
            if mult[&(vi, ci)] <= 1 {
                break;
            }
            if retries == MAX_PARALLEL_RETRIES {
                return Err(Error::Realization(format!(
                    "parallel edges remain after {MAX_PARALLEL_RETRIES} re-draws"
                )));
            }
            retries += 1;
            let j = rng.gen_range(0..total);
            let (vj, cj) = (var_sockets[j], check_sockets[j]);
            if vj == vi || cj == ci {
                continue;
            }
            if mult.get(&(vi, cj)).copied().unwrap_or(0) > 0
                || mult.get(&(vj, ci)).copied().unwrap_or(0) > 0
            {
                continue;
            }
            *mult.get_mut(&(vi, ci)).unwrap() -= 1;
            *mult.get_mut(&(vj, cj)).unwrap() -= 1;
            *mult.entry((vi, cj)).or_default() += 1;
            *mult.entry((vj, ci)).or_default() += 1;
            check_sockets.swap(i, j);
        }
    }
    let edges = var_sockets.into_iter().zip(check_sockets).collect();
    TannerGraph::new(var_degrees.len(), check_degrees.len(), edges)
}

/// Random `(dv, dc)`-regular code with `n` variable nodes and no parallel
/// edges.
pub fn sample_regular(n: usize, dv: usize, dc: usize, seed: u64) -> Result<TannerGraph> {
    if n == 0 || dv == 0 || dc == 0 {
        return Err(Error::params("n, dv and dc must be positive"));
    }
    if (n * dv) % dc != 0 {
        return Err(Error::params(format!(
            "n*dv = {} not divisible by dc = {dc}",
            n * dv
        )));
    }
    let m = n * dv / dc;
    let mut rng = rng_from_seed(seed);
    match_sockets(&vec![dv; n], &vec![dc; m], &mut rng)
}

/// Random code from the irregular ensemble `dist` with `n` variable nodes.
pub fn sample_irregular(n: usize, dist: &DegreeDistribution, seed: u64) -> Result<TannerGraph> {
    let (vd, cd) = realize_degrees(n, dist)?;
    let mut rng = rng_from_seed(seed);
    match_sockets(&vd, &cd, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example2() -> DegreeDistribution {
        DegreeDistribution::new(&[(2, 0.4187), (3, 0.1626), (6, 0.4187)], &[(6, 1.0)]).unwrap()
    }

    #[test]
    fn regular_64_has_192_edges() {
        let g = sample_regular(64, 3, 6, 11).unwrap();
        assert_eq!(g.n_checks(), 32);
        assert_eq!(g.n_edges(), 192);
        assert!(g.var_degrees().iter().all(|&d| d == 3));
        assert!(g.check_degrees().iter().all(|&d| d == 6));
        assert!(!g.has_parallel_edges());
    }

    #[test]
    fn regular_is_deterministic() {
        assert_eq!(
            sample_regular(64, 3, 6, 5).unwrap(),
            sample_regular(64, 3, 6, 5).unwrap()
        );
        assert_ne!(
            sample_regular(64, 3, 6, 5).unwrap(),
            sample_regular(64, 3, 6, 6).unwrap()
        );
    }

    #[test]
    fn regular_perfect_matching() {
        let g = sample_regular(2, 1, 1, 99).unwrap();
        assert_eq!(g.n_checks(), 2);
        assert_eq!(g.n_edges(), 2);
        assert_eq!(g.check_degrees(), vec![1, 1]);
    }

    #[test]
    fn regular_small_histogram() {
        let g = sample_regular(6, 2, 3, 3).unwrap();
        assert_eq!(g.n_checks(), 4);
        assert_eq!(g.n_edges(), 12);
        let mut hist = BTreeMap::new();
        for d in g.var_degrees() {
            *hist.entry(("v", d)).or_insert(0) += 1;
        }
        for d in g.check_degrees() {
            *hist.entry(("c", d)).or_insert(0) += 1;
        }
        assert_eq!(hist, BTreeMap::from([(("v", 2), 6), (("c", 3), 4)]));
    }

    #[test]
    fn regular_divisibility_error() {
        assert!(matches!(
            sample_regular(5, 3, 6, 0),
            Err(Error::InvalidParameters(_))
        ));
    }

    #[test]
    fn irregular_edge_totals_match_reported_counts() {
        let g72 = sample_irregular(72, &example2(), 1).unwrap();
        assert_eq!(g72.n_edges(), 216);
        assert_eq!(g72.n_checks(), 36);
        let g576 = sample_irregular(576, &example2(), 1).unwrap();
        assert_eq!(g576.n_edges(), 1726);
        assert_eq!(g576.n_checks(), 288);
        let deg2 = g576.var_degrees().iter().filter(|&&d| d == 2).count();
        assert_eq!(deg2, 362);
    }

    #[test]
    fn irregular_all_degree_two() {
        let dist = DegreeDistribution::new(&[(2, 1.0)], &[(2, 1.0)]).unwrap();
        let g = sample_irregular(6, &dist, 4).unwrap();
        assert!(g.var_degrees().iter().all(|&d| d == 2));
        assert!(g.check_degrees().iter().all(|&d| d == 2));
        assert_eq!(g.n_edges(), 12);
    }

    #[test]
    fn distribution_validation() {
        assert!(DegreeDistribution::new(&[(2, 0.5)], &[(6, 1.0)]).is_err());
        assert!(DegreeDistribution::new(&[(0, 1.0)], &[(6, 1.0)]).is_err());
        assert!(DegreeDistribution::new(&[(2, 1.5), (3, -0.5)], &[(6, 1.0)]).is_err());
        let terms = DegreeDistribution::parse_terms("2:0.4187, 3:0.1626,6:0.4187").unwrap();
        assert_eq!(terms, vec![(2, 0.4187), (3, 0.1626), (6, 0.4187)]);
    }
}
