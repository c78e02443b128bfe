//! Annealing over the shift sequence of a lifted code.

use rand::Rng;

use super::engine::{self, Landscape, Trial};
use super::{check_never_worse, AnnealConfig, AnnealReport};
use crate::error::Result;
use crate::graph::TannerGraph;
use crate::lift::{index_ones, lift, lifted_profile, orbit_closure, project, LiftingSpec};
use crate::rng::ForgeRng;
use crate::stopset::search::{self, SearchGraph, SearchMode};
use crate::stopset::StoppingSet;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Redraw {
    index: usize,
    shift: usize,
}

struct LiftLandscape<'a> {
    base: &'a TannerGraph,
    spec: LiftingSpec,
    lifted: TannerGraph,
    /// Canonical index of every base edge id.
    position: Vec<usize>,
    roots: Vec<usize>,
}

impl Landscape for LiftLandscape<'_> {
    type Move = Redraw;

    fn propose(&self, rng: &mut ForgeRng, s: &StoppingSet) -> Option<Redraw> {
        let k = self.spec.k;
        let support = project(s.members(), k).support;
        let x = support[rng.gen_range(0..support.len())];
        let edges = self.base.var_edge_ids(x);
        if edges.is_empty() {
            return None;
        }
        let e = edges[rng.gen_range(0..edges.len())];
        let index = self.position[e];
        let shift = rng.gen_range(0..k);
        if shift == self.spec.shifts[index] {
            return None;
        }
        Some(Redraw { index, shift })
    }

    fn trial(&self, mv: Redraw) -> Trial {
        let k = self.spec.k;
        let mut spec = self.spec.clone();
        spec.shifts[mv.index] = mv.shift;
        let lifted = lift(self.base, &spec).expect("shift stays in range");
        let order = index_ones(self.base);
        let x = self.base.edge(order[mv.index]).0;
        Trial {
            sg: SearchGraph::new(&lifted),
            roots: vec![(x * k, Vec::new())],
            touched: (x * k..x * k + k).collect(),
            orbit_k: k,
        }
    }

    fn commit(&mut self, mv: Redraw) {
        self.spec.shifts[mv.index] = mv.shift;
        self.lifted = lift(self.base, &self.spec).expect("shift stays in range");
    }

    fn level_pass(
        &self,
        d: usize,
        limit: u64,
    ) -> std::result::Result<(Vec<StoppingSet>, u64), u64> {
        let sg = SearchGraph::new(&self.lifted);
        search::prefix_roots(&sg, &self.roots, d, SearchMode::Minimal, limit)
            .map(|(sets, used)| (orbit_closure(sets, self.spec.k), used))
    }
}

/// Code annealing whose move redraws one shift of an edge touching the
/// projection of a current minimum stopping set.
pub fn anneal_lifting_sequence(
    base: &TannerGraph,
    spec: &LiftingSpec,
    cfg: &AnnealConfig,
) -> Result<(LiftingSpec, AnnealReport)> {
    cfg.validate()?;
    spec.validate_for(base)?;
    let lifted = lift(base, spec)?;
    let initial = lifted_profile(&lifted, spec.k, cfg.d_cap, cfg.expansion_budget)?;
    let mut position = vec![0; base.n_edges()];
    for (i, e) in index_ones(base).into_iter().enumerate() {
        position[e] = i;
    }
    let mut land = LiftLandscape {
        base,
        spec: spec.clone(),
        lifted,
        position,
        roots: (0..base.n_vars()).map(|j| j * spec.k).collect(),
    };
    let mut report = engine::drive(&mut land, cfg, initial, 0);
    report.edges_touched = land
        .spec
        .shifts
        .iter()
        .zip(&spec.shifts)
        .filter(|(a, b)| a != b)
        .count();
    check_never_worse(&report)?;
    Ok((land.spec, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anneal::StopReason;
    use crate::generate::sample_regular;
    use crate::lift::sample_lifting_spec;
    use crate::stopset::{error_floor_profile, DEFAULT_BUDGET};

    #[test]
    fn k1_never_accepts() {
        let g = sample_regular(12, 3, 6, 0).unwrap();
        let spec = LiftingSpec::new(1, vec![0; g.n_edges()]).unwrap();
        let cfg = AnnealConfig {
            per_d_attempt_cap: 50,
            ..AnnealConfig::default()
        };
        let (out, r) = anneal_lifting_sequence(&g, &spec, &cfg).unwrap();
        assert_eq!(out, spec);
        assert_eq!(r.swaps_accepted, 0);
    }

    #[test]
    fn four_cycle_double_cover_opens_up() {
        let g = TannerGraph::from_dense(&[[1u8, 1], [1, 1]]).unwrap();
        let spec = LiftingSpec::new(2, vec![0; 4]).unwrap();
        let cfg = AnnealConfig {
            seed: 3,
            per_d_attempt_cap: 100,
            d_cap: 4,
            ..AnnealConfig::default()
        };
        let (out, r) = anneal_lifting_sequence(&g, &spec, &cfg).unwrap();
        assert_eq!(r.initial_key(), (2, 2));
        assert_eq!(r.final_key(), (4, 1));
        let parity = (out.shifts[0] + out.shifts[1] + out.shifts[2] + out.shifts[3]) % 2;
        assert_eq!(parity, 1);
        assert_eq!(r.stop_reason, StopReason::Stalled);
    }

    #[test]
    fn lifted_run_matches_recompute() {
        let g = sample_regular(16, 3, 6, 11).unwrap();
        let spec = sample_lifting_spec(3, g.n_edges(), 5).unwrap();
        let cfg = AnnealConfig {
            seed: 2,
            per_d_attempt_cap: 200,
            d_cap: 12,
            ..AnnealConfig::default()
        };
        let (out, r) = anneal_lifting_sequence(&g, &spec, &cfg).unwrap();
        let truth = error_floor_profile(&lift(&g, &out).unwrap(), 12, DEFAULT_BUDGET).unwrap();
        assert_eq!(truth.order_key(), r.final_key());
        assert!(!crate::anneal::succ_compare(r.initial_key(), r.final_key()));
    }
}
