//! Peeling decoder on the binary erasure channel and frame-error-rate
//! estimation.

use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{Beta, ContinuousCDF};

use crate::error::{Error, Result};
use crate::graph::TannerGraph;
use crate::rng::{derive_seed, substream, ForgeRng, RNG_ALGORITHM};
use crate::stopset::ErrorFloorProfile;

pub const EXACT_FER_MAX_VARS: usize = 20;
/// Frames per deterministic work unit.
pub const CHUNK_FRAMES: u64 = 1024;
/// Work units dispatched together.
const WAVE_CHUNKS: u64 = 16;

/// Reusable peeling decoder.
pub struct Peeler {
    var_off: Vec<usize>,
    var_adj: Vec<usize>,
    n_checks: usize,
    erased: Vec<bool>,
    count: Vec<u32>,
    sum: Vec<usize>,
    queue: Vec<usize>,
    residual: Vec<usize>,
}

impl Peeler {
    pub fn new(g: &TannerGraph) -> Self {
        let mut var_off = vec![0];
        let mut var_adj = Vec::with_capacity(g.n_edges());
        for v in 0..g.n_vars() {
            var_adj.extend(g.var_neighbors(v));
            var_off.push(var_adj.len());
        }
        Peeler {
            var_off,
            var_adj,
            n_checks: g.n_checks(),
            erased: vec![false; g.n_vars()],
            count: vec![0; g.n_checks()],
            sum: vec![0; g.n_checks()],
            queue: Vec::new(),
            residual: Vec::new(),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.erased.len()
    }

    /// Decodes one erasure pattern; returns the sorted residual (the largest
    /// stopping set inside the pattern).
    pub fn decode(&mut self, pattern: &[usize]) -> &[usize] {
        debug_assert_eq!(self.count.len(), self.n_checks);
        for &v in pattern {
            if self.erased[v] {
                continue;
            }
            self.erased[v] = true;
            for &c in &self.var_adj[self.var_off[v]..self.var_off[v + 1]] {
                self.count[c] += 1;
                self.sum[c] += v;
            }
        }
        self.queue.clear();
        for &v in pattern {
            for &c in &self.var_adj[self.var_off[v]..self.var_off[v + 1]] {
                if self.count[c] == 1 {
                    self.queue.push(c);
                }
            }
        }
        while let Some(c) = self.queue.pop() {
            if self.count[c] != 1 {
                continue;
            }
            let v = self.sum[c];
            self.erased[v] = false;
            for &c2 in &self.var_adj[self.var_off[v]..self.var_off[v + 1]] {
                self.count[c2] -= 1;
                self.sum[c2] -= v;
                if self.count[c2] == 1 {
                    self.queue.push(c2);
                }
            }
        }
        self.residual.clear();
        for &v in pattern {
            if self.erased[v] {
                self.erased[v] = false;
                self.residual.push(v);
                for &c in &self.var_adj[self.var_off[v]..self.var_off[v + 1]] {
                    self.count[c] = 0;
                    self.sum[c] = 0;
                }
            }
        }
        self.residual.sort_unstable();
        self.residual.dedup();
        &self.residual
    }
}

pub fn peel_decode(g: &TannerGraph, erased: &[usize]) -> Result<Vec<usize>> {
    if let Some(&bad) = erased.iter().find(|&&v| v >= g.n_vars()) {
        return Err(Error::params(format!(
            "variable {} out of range 1..={}",
            bad + 1,
            g.n_vars()
        )));
    }
    Ok(Peeler::new(g).decode(erased).to_vec())
}

/// Number of failing erasure patterns of each weight `0..=n`.
pub fn failure_weights(g: &TannerGraph) -> Result<Vec<u64>> {
    let n = g.n_vars();
    if n > EXACT_FER_MAX_VARS {
        return Err(Error::SizeGuard(format!(
            "exact FER limited to {EXACT_FER_MAX_VARS} variables, got {n}"
        )));
    }
    let mut peeler = Peeler::new(g);
    let mut fails = vec![0u64; n + 1];
    let mut pattern = Vec::with_capacity(n);
    for mask in 0u32..(1u32 << n) {
        pattern.clear();
        pattern.extend((0..n).filter(|&v| mask >> v & 1 == 1));
        if !peeler.decode(&pattern).is_empty() {
            fails[pattern.len()] += 1;
        }
    }
    Ok(fails)
}

/// Exact frame error rate, summed over all `2^n` erasure patterns.
pub fn exact_fer(g: &TannerGraph, eps: f64) -> Result<f64> {
    check_eps(eps, true)?;
    Ok(fer_from_weights(&failure_weights(g)?, eps))
}

pub fn fer_from_weights(fails: &[u64], eps: f64) -> f64 {
    let n = fails.len() - 1;
    let mut terms: Vec<f64> = fails
        .iter()
        .enumerate()
        .filter(|(_, &f)| f > 0)
        .map(|(w, &f)| f as f64 * eps.powi(w as i32) * (1.0 - eps).powi((n - w) as i32))
        .collect();
    terms.sort_by(f64::total_cmp);
    terms.iter().sum()
}

fn check_eps(eps: f64, closed: bool) -> Result<()> {
    let ok = if closed {
        (0.0..=1.0).contains(&eps)
    } else {
        eps > 0.0 && eps < 1.0
    };
    if ok {
        Ok(())
    } else {
        Err(Error::params(format!(
            "erasure probability {eps} out of range"
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StopRule {
    pub min_frame_errors: u64,
    pub max_frames: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            min_frame_errors: 100,
            max_frames: 100_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CiMethod {
    Normal,
    ClopperPearson,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimPoint {
    pub eps: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub bit_errors: u64,
    pub fer: f64,
    pub ber: f64,
    pub fer_ci_lo: f64,
    pub fer_ci_hi: f64,
    pub ci_method: CiMethod,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimCurve {
    pub n: usize,
    pub seed: u64,
    pub rng: String,
    pub stop_rule: StopRule,
    pub points: Vec<SimPoint>,
}

pub const CSV_HEADER: &str = "eps,frames,frame_errors,bit_errors,fer,ber,fer_ci_lo,fer_ci_hi";

impl SimCurve {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for p in &self.points {
            writeln!(
                out,
                "{},{},{},{},{:e},{:e},{:e},{:e}",
                p.eps,
                p.frames,
                p.frame_errors,
                p.bit_errors,
                p.fer,
                p.ber,
                p.fer_ci_lo,
                p.fer_ci_hi
            )
            .unwrap();
        }
        out
    }
}

/// 95% interval for a binomial proportion: normal approximation, or
/// Clopper-Pearson below ten errors.
pub fn fer_interval(errors: u64, frames: u64) -> (f64, f64, CiMethod) {
    if frames == 0 {
        return (0.0, 1.0, CiMethod::ClopperPearson);
    }
    let k = errors as f64;
    let n = frames as f64;
    if errors < 10 {
        let lo = if errors == 0 {
            0.0
        } else {
            Beta::new(k, n - k + 1.0).map_or(0.0, |b| b.inverse_cdf(0.025))
        };
        let hi = if errors == frames {
            1.0
        } else {
            Beta::new(k + 1.0, n - k).map_or(1.0, |b| b.inverse_cdf(0.975))
        };
        (lo, hi, CiMethod::ClopperPearson)
    } else {
        let p = k / n;
        let half = 1.96 * (p * (1.0 - p) / n).sqrt();
        ((p - half).max(0.0), (p + half).min(1.0), CiMethod::Normal)
    }
}

/// Erased positions of one frame, drawn by geometric gaps.
fn sample_erasures(rng: &mut ForgeRng, n: usize, log_keep: f64, out: &mut Vec<usize>) {
    out.clear();
    let mut pos = 0usize;
    loop {
        let u: f64 = 1.0 - rng.gen::<f64>();
        let gap = (u.ln() / log_keep).floor();
        if gap >= (n - pos) as f64 {
            return;
        }
        pos += gap as usize;
        out.push(pos);
        pos += 1;
        if pos >= n {
            return;
        }
    }
}

#[derive(Default, Clone, Copy)]
struct Counts {
    frames: u64,
    frame_errors: u64,
    bit_errors: u64,
}

fn run_chunk(
    peeler: &mut Peeler,
    eps: f64,
    rng: &mut ForgeRng,
    frames: u64,
    buf: &mut Vec<usize>,
) -> Counts {
    let n = peeler.n_vars();
    let log_keep = (1.0 - eps).ln();
    let mut c = Counts {
        frames,
        ..Counts::default()
    };
    for _ in 0..frames {
        sample_erasures(rng, n, log_keep, buf);
        let residual = peeler.decode(buf);
        if !residual.is_empty() {
            c.frame_errors += 1;
            c.bit_errors += residual.len() as u64;
        }
    }
    c
}

/// Monte Carlo FER/BER per erasure probability. Frames are drawn in fixed
/// chunks with their own substreams, so results do not depend on the
/// number of worker threads.
pub fn mc_simulate(
    g: &TannerGraph,
    eps_list: &[f64],
    stop: StopRule,
    seed: u64,
) -> Result<SimCurve> {
    for &e in eps_list {
        check_eps(e, false)?;
    }
    if stop.max_frames == 0 {
        return Err(Error::params("max_frames must be positive"));
    }
    let n = g.n_vars();
    let mut points = Vec::with_capacity(eps_list.len());
    for (i, &eps) in eps_list.iter().enumerate() {
        let point_seed = derive_seed(seed, i as u64);
        let total_chunks = stop.max_frames.div_ceil(CHUNK_FRAMES);
        let mut acc = Counts::default();
        let mut next = 0u64;
        'waves: while next < total_chunks {
            let wave: Vec<u64> = (next..(next + WAVE_CHUNKS).min(total_chunks)).collect();
            let results: Vec<Counts> = wave
                .par_iter()
                .map_init(
                    || (Peeler::new(g), Vec::new()),
                    |(peeler, buf), &chunk| {
                        let frames = CHUNK_FRAMES.min(stop.max_frames - chunk * CHUNK_FRAMES);
                        let mut rng = substream(point_seed, chunk);
                        run_chunk(peeler, eps, &mut rng, frames, buf)
                    },
                )
                .collect();
            for r in results {
                acc.frames += r.frames;
                acc.frame_errors += r.frame_errors;
                acc.bit_errors += r.bit_errors;
                next += 1;
                if acc.frame_errors >= stop.min_frame_errors {
                    break 'waves;
                }
            }
        }
        let fer = acc.frame_errors as f64 / acc.frames as f64;
        let (lo, hi, method) = fer_interval(acc.frame_errors, acc.frames);
        points.push(SimPoint {
            eps,
            frames: acc.frames,
            frame_errors: acc.frame_errors,
            bit_errors: acc.bit_errors,
            fer,
            ber: acc.bit_errors as f64 / (acc.frames as f64 * n as f64),
            fer_ci_lo: lo,
            fer_ci_hi: hi,
            ci_method: method,
        });
    }
    Ok(SimCurve {
        n,
        seed,
        rng: RNG_ALGORITHM.to_string(),
        stop_rule: stop,
        points,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AveragePoint {
    pub eps: f64,
    pub fer: f64,
    pub ber: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleCurve {
    pub per_code: Vec<SimCurve>,
    pub average: Vec<AveragePoint>,
}

/// Simulates `count` codes drawn by `sampler` (called with derived seeds)
/// and averages their curves.
pub fn mc_ensemble<F>(
    sampler: F,
    count: usize,
    eps_list: &[f64],
    stop: StopRule,
    seed: u64,
) -> Result<EnsembleCurve>
where
    F: Fn(u64) -> Result<TannerGraph>,
{
    if count == 0 {
        return Err(Error::params("ensemble needs at least one code"));
    }
    let mut per_code = Vec::with_capacity(count);
    for i in 0..count {
        let g = sampler(derive_seed(seed, 2 * i as u64))?;
        per_code.push(mc_simulate(
            &g,
            eps_list,
            stop,
            derive_seed(seed, 2 * i as u64 + 1),
        )?);
    }
    let average = eps_list
        .iter()
        .enumerate()
        .map(|(j, &eps)| AveragePoint {
            eps,
            fer: per_code.iter().map(|c| c.points[j].fer).sum::<f64>() / count as f64,
            ber: per_code.iter().map(|c| c.points[j].ber).sum::<f64>() / count as f64,
        })
        .collect();
    Ok(EnsembleCurve { per_code, average })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnsembleEstimate {
    pub d_stp: usize,
    /// Mean number of size-`d_stp` stopping sets per sampled code.
    pub m_s: f64,
    pub codes: usize,
}

/// Ensemble order and multiplicity from sampled code profiles: the
/// smallest observed stopping distance and the sample mean of the number
/// of sets of that size (codes with a larger distance count zero).
pub fn ensemble_floor_estimate(profiles: &[ErrorFloorProfile]) -> Option<EnsembleEstimate> {
    let d = profiles.iter().filter_map(|p| p.d_stp).min()?;
    let total: usize = profiles
        .iter()
        .filter(|p| p.d_stp == Some(d))
        .map(|p| p.m_s)
        .sum();
    Some(EnsembleEstimate {
        d_stp: d,
        m_s: total as f64 / profiles.len() as f64,
        codes: profiles.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stopset::is_stopping_set;

    fn path3() -> TannerGraph {
        TannerGraph::from_dense(&[[1u8, 1, 0], [0, 1, 1]]).unwrap()
    }

    fn four_cycle() -> TannerGraph {
        TannerGraph::from_dense(&[[1u8, 1], [1, 1]]).unwrap()
    }

    #[test]
    fn small_decodes() {
        assert!(peel_decode(&path3(), &[0, 1]).unwrap().is_empty());
        assert_eq!(peel_decode(&path3(), &[0, 1, 2]).unwrap(), vec![0, 1, 2]);
        assert!(peel_decode(&four_cycle(), &[0]).unwrap().is_empty());
        assert_eq!(peel_decode(&four_cycle(), &[0, 1]).unwrap(), vec![0, 1]);
        assert!(peel_decode(&four_cycle(), &[]).unwrap().is_empty());
        assert!(peel_decode(&four_cycle(), &[2]).is_err());
    }

    #[test]
    fn residual_is_a_stopping_set() {
        let g = crate::generate::sample_regular(30, 3, 6, 4).unwrap();
        let mut rng = crate::rng::rng_from_seed(1);
        let mut p = Peeler::new(&g);
        for _ in 0..2000 {
            let pattern: Vec<usize> = (0..30).filter(|_| rng.gen_bool(0.45)).collect();
            let r = p.decode(&pattern).to_vec();
            if !r.is_empty() {
                assert!(is_stopping_set(&g, &r).unwrap());
                assert!(r.iter().all(|v| pattern.contains(v)));
            }
        }
    }

    #[test]
    fn exact_small_cases() {
        assert!((exact_fer(&path3(), 0.5).unwrap() - 0.125).abs() < 1e-15);
        for eps in [0.1, 0.3, 0.7] {
            assert!((exact_fer(&four_cycle(), eps).unwrap() - eps * eps).abs() < 1e-15);
        }
        assert_eq!(exact_fer(&path3(), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn exact_is_monotone() {
        let g = crate::generate::sample_regular(12, 3, 6, 2).unwrap();
        let w = failure_weights(&g).unwrap();
        let mut last = 0.0;
        for i in 1..50 {
            let f = fer_from_weights(&w, i as f64 / 50.0);
            assert!(f >= last - 1e-15);
            last = f;
        }
    }

    #[test]
    fn mc_stop_rules_and_csv() {
        let stop = StopRule {
            min_frame_errors: 50,
            max_frames: 5000,
        };
        let c = mc_simulate(&four_cycle(), &[0.5, 0.01], stop, 3).unwrap();
        assert!(c.points[0].frame_errors >= 50);
        assert_eq!(c.points[0].frames % CHUNK_FRAMES, 0);
        assert_eq!(c.points[1].frames, 5000);
        assert_eq!(c.points[1].ci_method, CiMethod::ClopperPearson);
        let csv = c.to_csv();
        assert!(csv.starts_with(CSV_HEADER));
        assert_eq!(csv.lines().count(), 3);
        assert!(mc_simulate(&four_cycle(), &[0.0], stop, 3).is_err());
    }

    #[test]
    fn mc_is_thread_count_invariant() {
        let g = crate::generate::sample_regular(16, 3, 6, 1).unwrap();
        let stop = StopRule {
            min_frame_errors: 200,
            max_frames: 200_000,
        };
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let a = one.install(|| mc_simulate(&g, &[0.2, 0.4], stop, 7).unwrap());
        let b = four.install(|| mc_simulate(&g, &[0.2, 0.4], stop, 7).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn clopper_pearson_zero_errors() {
        let (lo, hi, m) = fer_interval(0, 1000);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.003682).abs() < 1e-5, "{hi}");
        assert_eq!(m, CiMethod::ClopperPearson);
    }

    #[test]
    fn ensemble_of_one_is_the_curve() {
        let stop = StopRule {
            min_frame_errors: 20,
            max_frames: 10_000,
        };
        let e = mc_ensemble(
            |s| crate::generate::sample_regular(16, 3, 6, s),
            1,
            &[0.3],
            stop,
            5,
        )
        .unwrap();
        assert_eq!(e.average[0].fer, e.per_code[0].points[0].fer);
    }

    #[test]
    fn ensemble_estimate_mean() {
        let mk = |d: Option<usize>, m| ErrorFloorProfile {
            d_stp: d,
            m_s: m,
            exhaustion_cap: d.unwrap_or(9),
            min_sets: vec![],
        };
        let e =
            ensemble_floor_estimate(&[mk(Some(2), 1), mk(Some(5), 3), mk(None, 0), mk(Some(2), 2)])
                .unwrap();
        assert_eq!(e.d_stp, 2);
        assert!((e.m_s - 0.75).abs() < 1e-12);
    }
}
