//! Exhaustive survival census over every shift assignment of the edges
//! touching one base stopping set.

use std::collections::BTreeMap;

use num::{BigInt, BigRational};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::TannerGraph;

pub const ORACLE_MAX_K: usize = 4;
pub const ORACLE_MAX_EDGES: usize = 12;
/// Upper bound on `K^#E * (2^K - 1)^#V` for the full copy-subset census.
pub const CENSUS_WORK_LIMIT: u64 = 200_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurvivalCensus {
    #[serde(rename = "K")]
    pub k: usize,
    pub sequences: u64,
    #[serde(serialize_with = "ser_ratio")]
    pub expected_first_order: BigRational,
    /// Keyed by the sorted repetition counts; present only when the full
    /// census ran.
    #[serde(serialize_with = "ser_ratio_map")]
    pub expected_by_repetition: BTreeMap<Vec<usize>, BigRational>,
    pub high_order_complete: bool,
}

fn ser_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ser_ratio_map<S: serde::Serializer>(
    m: &BTreeMap<Vec<usize>, BigRational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.len()))?;
    for (k, v) in m {
        seq.serialize_element(&serde_json::json!({"repetition": k, "expected": v.to_string()}))?;
    }
    seq.end()
}

struct Induced {
    n_vars: usize,
    n_checks: usize,
    /// (local var, local check) per induced edge.
    edges: Vec<(usize, usize)>,
}

fn induced(g: &TannerGraph, s: &[usize]) -> Result<Induced> {
    let mut members = s.to_vec();
    members.sort_unstable();
    members.dedup();
    if members.is_empty() || members.iter().any(|&v| v >= g.n_vars()) {
        return Err(Error::params("invalid variable set"));
    }
    let mut check_ids = BTreeMap::new();
    let mut edges = Vec::new();
    for (i, &v) in members.iter().enumerate() {
        for c in g.var_neighbors(v) {
            let n = check_ids.len();
            let id = *check_ids.entry(c).or_insert(n);
            edges.push((i, id));
        }
    }
    Ok(Induced {
        n_vars: members.len(),
        n_checks: check_ids.len(),
        edges,
    })
}

#[derive(Default)]
struct Tally {
    first_order: u64,
    by_class: BTreeMap<Vec<usize>, u64>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.first_order += other.first_order;
        for (k, v) in other.by_class {
            *self.by_class.entry(k).or_insert(0) += v;
        }
        self
    }
}

fn decode_shifts(mut code: u64, k: usize, out: &mut [usize]) {
    for l in out.iter_mut() {
        *l = (code % k as u64) as usize;
        code /= k as u64;
    }
}

/// Counts layer choices (one layer per variable) that form a stopping set.
fn first_order_count(ind: &Induced, shifts: &[usize], k: usize, hist: &mut [u32]) -> u64 {
    let total = (k as u64).pow(ind.n_vars as u32);
    let mut layers = vec![0usize; ind.n_vars];
    let mut count = 0;
    for code in 0..total {
        decode_shifts(code, k, &mut layers);
        hist.iter_mut().for_each(|h| *h = 0);
        for (e, &(v, c)) in ind.edges.iter().enumerate() {
            hist[c * k + (layers[v] + k - shifts[e]) % k] += 1;
        }
        if hist.iter().all(|&h| h != 1) {
            count += 1;
        }
    }
    count
}

/// Counts every choice of nonempty layer subsets per variable that forms a
/// stopping set, keyed by the sorted subset sizes.
fn census_counts(
    ind: &Induced,
    shifts: &[usize],
    k: usize,
    hist: &mut [u32],
    by_class: &mut BTreeMap<Vec<usize>, u64>,
) {
    let masks = (1u64 << k) - 1;
    let total = masks.pow(ind.n_vars as u32);
    let mut chosen = vec![0usize; ind.n_vars];
    for code in 0..total {
        let mut c = code;
        for m in chosen.iter_mut() {
            *m = (c % masks) as usize + 1;
            c /= masks;
        }
        hist.iter_mut().for_each(|h| *h = 0);
        for (e, &(v, ch)) in ind.edges.iter().enumerate() {
            let mask = chosen[v];
            for a in 0..k {
                if mask >> a & 1 == 1 {
                    hist[ch * k + (a + k - shifts[e]) % k] += 1;
                }
            }
        }
        if hist.iter().all(|&h| h != 1) {
            let mut class: Vec<usize> = chosen.iter().map(|m| m.count_ones() as usize).collect();
            class.sort_unstable();
            *by_class.entry(class).or_insert(0) += 1;
        }
    }
}

/// Exact expected survival counts of `s` over all `K^#E` shift assignments
/// of its induced edges.
pub fn brute_force_survivals(g: &TannerGraph, s: &[usize], k: usize) -> Result<SurvivalCensus> {
    if k == 0 || k > ORACLE_MAX_K {
        return Err(Error::SizeGuard(format!(
            "oracle supports 1 <= K <= {ORACLE_MAX_K}, got {k}"
        )));
    }
    let ind = induced(g, s)?;
    if ind.edges.len() > ORACLE_MAX_EDGES {
        return Err(Error::SizeGuard(format!(
            "oracle supports at most {ORACLE_MAX_EDGES} induced edges, got {}",
            ind.edges.len()
        )));
    }
    let sequences = (k as u64).pow(ind.edges.len() as u32);
    let census_work = ((1u64 << k) - 1)
        .checked_pow(ind.n_vars as u32)
        .and_then(|w| w.checked_mul(sequences));
    let full = census_work.is_some_and(|w| w <= CENSUS_WORK_LIMIT);

    let tally = (0..sequences)
        .into_par_iter()
        .fold(Tally::default, |mut t, code| {
            let mut shifts = vec![0usize; ind.edges.len()];
            decode_shifts(code, k, &mut shifts);
            let mut hist = vec![0u32; ind.n_checks * k];
            t.first_order += first_order_count(&ind, &shifts, k, &mut hist);
            if full {
                census_counts(&ind, &shifts, k, &mut hist, &mut t.by_class);
            }
            t
        })
        .reduce(Tally::default, Tally::merge);

    let denom = BigInt::from(sequences);
    let expected_by_repetition = tally
        .by_class
        .into_iter()
        .map(|(class, n)| (class, BigRational::new(BigInt::from(n), denom.clone())))
        .collect();
    Ok(SurvivalCensus {
        k,
        sequences,
        expected_first_order: BigRational::new(BigInt::from(tally.first_order), denom),
        expected_by_repetition,
        high_order_complete: full,
    })
}
