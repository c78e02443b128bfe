//! Suppressing effect of random cyclic lifting on base stopping sets.
//!
//! For a base stopping set with induced counts `#V`, `#E`, `#C_odd`, the
//! suppressing weight is `W_sup = #E/2 - #V + #C_odd/2` and the expected
//! number of its first-order survivals under a uniform lifting sequence
//! decays as `K^-W_sup`.

mod decoding;
mod oracle;

use std::fmt;

use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::TannerGraph;
use crate::stopset::{
    induced_check_degrees, induced_stats, is_stopping_set, ErrorFloorProfile, InducedStats,
};

pub use decoding::{decodes_all, find_ordered_decoding_set};
pub use oracle::{
    brute_force_survivals, SurvivalCensus, CENSUS_WORK_LIMIT, ORACLE_MAX_EDGES, ORACLE_MAX_K,
};

/// A multiple of one half, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(i64);

impl HalfInt {
    pub fn from_halves(halves: i64) -> Self {
        HalfInt(halves)
    }

    pub fn from_int(v: i64) -> Self {
        HalfInt(2 * v)
    }

    pub fn halves(self) -> i64 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}", self.as_f64())
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_integer() {
            s.serialize_i64(self.0 / 2)
        } else {
            s.serialize_f64(self.as_f64())
        }
    }
}

pub type SuppressingWeight = HalfInt;

pub fn suppressing_weight(stats: &InducedStats) -> SuppressingWeight {
    HalfInt(stats.num_edges as i64 - 2 * stats.num_vars as i64 + stats.num_odd_checks as i64)
}

/// Suppressing weight of `s` in `g`.
pub fn set_weight(g: &TannerGraph, s: &[usize]) -> Result<SuppressingWeight> {
    Ok(suppressing_weight(&induced_stats(g, s)?))
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Number of maps from `d` edges to `K` layers in which no layer receives
/// exactly one edge.
pub fn no_singleton_count(d: usize, k: usize) -> BigInt {
    let mut total = BigInt::zero();
    let mut falling = BigInt::one(); // K!/(K-t)!
    for t in 0..=d.min(k) {
        if t > 0 {
            falling *= BigInt::from(k - t + 1);
        }
        let term = binomial(d, t) * &falling * num::pow(BigInt::from(k - t), d - t);
        if t % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn k_power(k: usize, exp: i64) -> BigRational {
    let base = BigInt::from(k);
    if exp >= 0 {
        BigRational::from_integer(num::pow(base, exp as usize))
    } else {
        BigRational::new(BigInt::one(), num::pow(base, (-exp) as usize))
    }
}

/// Exact expected number of first-order survivals of `s` under a uniformly
/// random lifting sequence with factor `k`.
pub fn theorem1_expectation(g: &TannerGraph, s: &[usize], k: usize) -> Result<BigRational> {
    if k == 0 {
        return Err(Error::params("lifting factor K must be at least 1"));
    }
    if !is_stopping_set(g, s)? {
        return Err(Error::contract(
            "expectation requested for a set that is not a stopping set",
        ));
    }
    let deg = induced_check_degrees(g, s);
    let stats = induced_stats(g, s)?;
    let mut value = k_power(k, stats.num_vars as i64 - stats.num_edges as i64);
    for &d in deg.values() {
        value *= BigRational::from_integer(no_singleton_count(d, k));
    }
    Ok(value)
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Order exponent of the first-order expectation in `K`.
pub fn prop1_exponent(stats: &InducedStats) -> f64 {
    -suppressing_weight(stats).as_f64()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// `(K, expectation)` pairs over a grid of lifting factors.
pub fn expectation_curve(
    g: &TannerGraph,
    s: &[usize],
    ks: &[usize],
) -> Result<Vec<(usize, BigRational)>> {
    ks.iter()
        .map(|&k| Ok((k, theorem1_expectation(g, s, k)?)))
        .collect()
}

/// Fitted log-log slope of the first-order expectation over `ks`.
pub fn expectation_slope(g: &TannerGraph, s: &[usize], ks: &[usize]) -> Result<f64> {
    let pts: Vec<(f64, f64)> = expectation_curve(g, s, ks)?
        .into_iter()
        .map(|(k, e)| (k as f64, rational_to_f64(&e)))
        .collect();
    Ok(log_log_slope(&pts))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FloorMode {
    Order,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleFloor {
    pub d_stp_cl: Option<usize>,
    pub m_s_cl: f64,
    pub min_w_sup: Option<SuppressingWeight>,
    pub mode: FloorMode,
    /// Exact rational multiplicity in exact mode, as `p/q`.
    pub m_s_cl_exact: Option<String>,
}

/// Stopping distance and multiplicity of the lifted ensemble.
pub fn theorem2_floor(
    profile: &ErrorFloorProfile,
    base: &TannerGraph,
    k: usize,
    mode: FloorMode,
) -> Result<EnsembleFloor> {
    let weights = profile
        .min_sets
        .iter()
        .map(|s| set_weight(base, s.members()))
        .collect::<Result<Vec<_>>>()?;
    let min_w = weights.iter().copied().min();
    let (m, exact) = match mode {
        FloorMode::Order => {
            let factor = min_w.map_or(1.0, |w| (k as f64).powf(-w.as_f64()));
            (factor * profile.m_s as f64, None)
        }
        FloorMode::Exact => {
            let mut sum = BigRational::zero();
            for s in &profile.min_sets {
                sum += theorem1_expectation(base, s.members(), k)?;
            }
            (rational_to_f64(&sum), Some(sum.to_string()))
        }
    };
    Ok(EnsembleFloor {
        d_stp_cl: profile.d_stp,
        m_s_cl: m,
        min_w_sup: min_w,
        mode,
        m_s_cl_exact: exact,
    })
}

/// Counts of a candidate lifted configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LiftedTarget {
    pub num_vars: usize,
    pub num_checks: usize,
    pub num_edges: usize,
}

/// Exponent of the algebraic lower bound: the larger of
/// `-(#E_L - #V_L - #C_L)` and `-(#E_B - #V_B - #C_B)`.
pub fn theorem3_exponent(base: &InducedStats, target: &LiftedTarget) -> i64 {
    let lifted = target.num_edges as i64 - target.num_vars as i64 - target.num_checks as i64;
    let b = base.num_edges as i64 - base.num_vars as i64 - base.num_checks as i64;
    (-lifted).max(-b)
}

/// Target counts of a first-order survival of a set with these stats.
pub fn first_order_target(base: &InducedStats) -> LiftedTarget {
    LiftedTarget {
        num_vars: base.num_vars,
        num_checks: (base.num_edges - base.num_odd_checks) / 2,
        num_edges: base.num_edges,
    }
}

/// Exponent of the algorithmic upper bound:
/// `sum over x_od of (R(x) - 1)` minus `W_sup`.
pub fn theorem4_exponent(
    g: &TannerGraph,
    s: &[usize],
    pattern: &crate::lift::RepetitionPattern,
    x_od: &[usize],
) -> Result<HalfInt> {
    if !decodes_all(g, s, pattern, x_od)? {
        return Err(Error::contract(
            "revealed set does not decode the whole stopping set",
        ));
    }
    let w = set_weight(g, s)?;
    let extra: i64 = x_od.iter().map(|x| pattern[x] as i64 - 1).sum();
    Ok(HalfInt(2 * extra - w.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stopset::{error_floor_profile, DEFAULT_BUDGET};

    fn four_cycle() -> TannerGraph {
        TannerGraph::from_dense(&[[1u8, 1], [1, 1]]).unwrap()
    }

    pub(crate) fn k4_gadget() -> TannerGraph {
        let mut edges = Vec::new();
        let mut c = 0;
        for a in 0..4 {
            for b in a + 1..4 {
                edges.push((a, c));
                edges.push((b, c));
                c += 1;
            }
        }
        TannerGraph::new(4, 6, edges).unwrap()
    }

    fn ratio(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    /// Direct count over all K^d maps.
    fn count_maps(d: usize, k: usize) -> usize {
        let mut n = 0;
        for code in 0..k.pow(d as u32) {
            let mut hist = vec![0; k];
            let mut c = code;
            for _ in 0..d {
                hist[c % k] += 1;
                c /= k;
            }
            if hist.iter().all(|&h| h != 1) {
                n += 1;
            }
        }
        n
    }

    #[test]
    fn no_singleton_small_values() {
        for k in 1..6 {
            assert_eq!(no_singleton_count(2, k), BigInt::from(k));
            assert_eq!(no_singleton_count(3, k), BigInt::from(k));
        }
        assert_eq!(no_singleton_count(4, 2), BigInt::from(8));
        for d in 0..7 {
            for k in 1..5 {
                assert_eq!(
                    no_singleton_count(d, k),
                    BigInt::from(count_maps(d, k)),
                    "d={d} k={k}"
                );
            }
        }
    }

    #[test]
    fn weights() {
        let w = set_weight(&four_cycle(), &[0, 1]).unwrap();
        assert_eq!(w, HalfInt::from_int(0));
        let w = set_weight(&k4_gadget(), &[0, 1, 2, 3]).unwrap();
        assert_eq!(w, HalfInt::from_int(2));
        assert_eq!(w.to_string(), "2");
        assert_eq!(HalfInt::from_halves(5).to_string(), "2.5");
    }

    #[test]
    fn cycle_expectation_is_one() {
        let ring = TannerGraph::from_dense(&[[1u8, 1, 0], [0, 1, 1], [1, 0, 1]]).unwrap();
        for k in 1..=16 {
            assert_eq!(
                theorem1_expectation(&ring, &[0, 1, 2], k).unwrap(),
                BigRational::one()
            );
            assert_eq!(
                theorem1_expectation(&four_cycle(), &[0, 1], k).unwrap(),
                BigRational::one()
            );
        }
    }

    #[test]
    fn gadget_expectation() {
        let g = k4_gadget();
        assert_eq!(
            theorem1_expectation(&g, &[0, 1, 2, 3], 2).unwrap(),
            ratio(1, 4)
        );
        assert_eq!(
            theorem1_expectation(&g, &[0, 1, 2, 3], 1).unwrap(),
            BigRational::one()
        );
        let ks: Vec<usize> = (2..=8).map(|e| 1 << e).collect();
        let slope = expectation_slope(&g, &[0, 1, 2, 3], &ks).unwrap();
        assert!((slope + 2.0).abs() < 0.05, "{slope}");
    }

    #[test]
    fn non_stopping_set_is_contract_error() {
        let path = TannerGraph::from_dense(&[[1u8, 1, 0], [0, 1, 1]]).unwrap();
        assert!(matches!(
            theorem1_expectation(&path, &[0, 1], 2),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn suppressing_factor() {
        let f = 32f64.powf(-HalfInt::from_int(5).as_f64());
        assert!((f - 2.98e-8).abs() / 2.98e-8 < 0.01);
    }

    #[test]
    fn floor_modes() {
        let g = four_cycle();
        let p = error_floor_profile(&g, 4, DEFAULT_BUDGET).unwrap();
        for k in [1, 2, 5] {
            let f = theorem2_floor(&p, &g, k, FloorMode::Exact).unwrap();
            assert_eq!((f.d_stp_cl, f.m_s_cl), (Some(2), 1.0));
            let f = theorem2_floor(&p, &g, k, FloorMode::Order).unwrap();
            assert_eq!(f.m_s_cl, 1.0);
        }
        let g = k4_gadget();
        let p = error_floor_profile(&g, 4, DEFAULT_BUDGET).unwrap();
        let f = theorem2_floor(&p, &g, 1, FloorMode::Exact).unwrap();
        assert_eq!(f.m_s_cl, p.m_s as f64);
    }

    #[test]
    fn theorem3_cases() {
        let st = induced_stats(&k4_gadget(), &[0, 1, 2, 3]).unwrap();
        let base_side = -(12 - 4 - 6);
        assert_eq!(base_side, -2);
        assert_eq!(theorem3_exponent(&st, &first_order_target(&st)), -2);
        let st = induced_stats(&four_cycle(), &[0, 1]).unwrap();
        assert_eq!(theorem3_exponent(&st, &first_order_target(&st)), 0);
    }

    #[test]
    fn theorem4_cases() {
        let g = four_cycle();
        let twos = [(0, 2), (1, 2)].into_iter().collect();
        let x_od = find_ordered_decoding_set(&g, &[0, 1], &twos).unwrap();
        assert_eq!(x_od.len(), 1);
        assert_eq!(
            theorem4_exponent(&g, &[0, 1], &twos, &x_od).unwrap(),
            HalfInt::from_int(1)
        );
        let g = k4_gadget();
        let ones = (0..4).map(|x| (x, 1)).collect();
        let x_od = find_ordered_decoding_set(&g, &[0, 1, 2, 3], &ones).unwrap();
        assert_eq!(x_od, vec![0]);
        assert_eq!(
            theorem4_exponent(&g, &[0, 1, 2, 3], &ones, &x_od).unwrap(),
            HalfInt::from_int(-2)
        );
        assert!(theorem4_exponent(&g, &[0, 1, 2, 3], &ones, &[]).is_err());
    }
}
