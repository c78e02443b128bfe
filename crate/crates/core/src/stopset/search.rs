//! Depth-first branch-and-bound over variable states (in / out / undecided).
//!
//! A check is *violated* when exactly one of its edges comes from the current
//! in-set. A branch is closed by choosing the violated check with the fewest
//! undecided neighbours and splitting on which of them joins the set
//! (include `u_i`, exclude `u_1..u_{i-1}`), so every subset is reached at most
//! once. Branches die when a violated check has no undecided neighbour left
//! or when the violated checks cannot all be repaired within the size bound.
//!
//! In [`SearchMode::Minimal`] the search stops at the first stopping set on
//! each path, which reaches every stopping set that contains no smaller one
//! through the same root; in particular all minimum stopping sets.
//! [`SearchMode::Extend`] keeps growing satisfied sets and reaches every
//! stopping set within the bound.

use std::ops::ControlFlow;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use super::StoppingSet;
use crate::graph::TannerGraph;

const UNDECIDED: u8 = 0;
const IN: u8 = 1;
const OUT: u8 = 2;
const ABSENT: u32 = u32::MAX;
const FLUSH_EVERY: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Minimal,
    Extend,
}

/// Compressed adjacency used by the search.
#[derive(Debug, Clone)]
pub struct SearchGraph {
    n_vars: usize,
    n_checks: usize,
    var_off: Vec<u32>,
    var_adj: Vec<u32>,
    chk_off: Vec<u32>,
    chk_adj: Vec<u32>,
}

impl SearchGraph {
    pub fn new(g: &TannerGraph) -> Self {
        let mut var_off = Vec::with_capacity(g.n_vars() + 1);
        let mut var_adj = Vec::with_capacity(g.n_edges());
        var_off.push(0);
        for v in 0..g.n_vars() {
            var_adj.extend(g.var_neighbors(v).map(|c| c as u32));
            var_off.push(var_adj.len() as u32);
        }
        let mut chk_off = Vec::with_capacity(g.n_checks() + 1);
        let mut chk_adj = Vec::with_capacity(g.n_edges());
        chk_off.push(0);
        for c in 0..g.n_checks() {
            chk_adj.extend(g.check_neighbors(c).map(|v| v as u32));
            chk_off.push(chk_adj.len() as u32);
        }
        SearchGraph {
            n_vars: g.n_vars(),
            n_checks: g.n_checks(),
            var_off,
            var_adj,
            chk_off,
            chk_adj,
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    #[inline]
    fn checks_of(&self, v: u32) -> &[u32] {
        &self.var_adj[self.var_off[v as usize] as usize..self.var_off[v as usize + 1] as usize]
    }

    #[inline]
    fn vars_of(&self, c: u32) -> &[u32] {
        &self.chk_adj[self.chk_off[c as usize] as usize..self.chk_off[c as usize + 1] as usize]
    }
}

/// Shared node-expansion counter.
pub(crate) struct Budget<'a> {
    spent: &'a AtomicU64,
    limit: u64,
}

impl<'a> Budget<'a> {
    pub(crate) fn new(spent: &'a AtomicU64, limit: u64) -> Self {
        Budget { spent, limit }
    }
}

/// The budget ran out; carries the total expansions counted so far.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Exhausted(pub u64);

pub(crate) struct Searcher<'g, 'b> {
    g: &'g SearchGraph,
    state: Vec<u8>,
    in_cnt: Vec<u32>,
    undec_cnt: Vec<u32>,
    viol_pos: Vec<u32>,
    violated: Vec<u32>,
    members: Vec<u32>,
    bound: usize,
    mode: SearchMode,
    cands: Vec<(u32, u32)>,
    frozen: Vec<u32>,
    cover: Vec<u32>,
    mark: Vec<u32>,
    touched: Vec<u32>,
    pending: u64,
    budget: &'b Budget<'b>,
}

impl<'g, 'b> Searcher<'g, 'b> {
    pub(crate) fn new(
        g: &'g SearchGraph,
        bound: usize,
        mode: SearchMode,
        budget: &'b Budget<'b>,
    ) -> Self {
        let undec_cnt = (0..g.n_checks as u32)
            .map(|c| g.vars_of(c).len() as u32)
            .collect();
        Searcher {
            g,
            state: vec![UNDECIDED; g.n_vars],
            in_cnt: vec![0; g.n_checks],
            undec_cnt,
            viol_pos: vec![ABSENT; g.n_checks],
            violated: Vec::new(),
            members: Vec::new(),
            bound,
            mode,
            cands: Vec::new(),
            frozen: Vec::new(),
            cover: vec![0; g.n_vars],
            mark: vec![ABSENT; g.n_vars],
            touched: Vec::new(),
            pending: 0,
            budget,
        }
    }

    #[inline]
    fn add_violated(&mut self, c: u32) {
        self.viol_pos[c as usize] = self.violated.len() as u32;
        self.violated.push(c);
    }

    #[inline]
    fn remove_violated(&mut self, c: u32) {
        let pos = self.viol_pos[c as usize] as usize;
        let last = self.violated.pop().expect("violated check present");
        if last != c {
            self.violated[pos] = last;
            self.viol_pos[last as usize] = pos as u32;
        }
        self.viol_pos[c as usize] = ABSENT;
    }

    fn include(&mut self, v: u32) {
        debug_assert_eq!(self.state[v as usize], UNDECIDED);
        self.state[v as usize] = IN;
        self.members.push(v);
        let g = self.g;
        for &c in g.checks_of(v) {
            let ci = c as usize;
            self.undec_cnt[ci] -= 1;
            self.in_cnt[ci] += 1;
            match self.in_cnt[ci] {
                1 => self.add_violated(c),
                2 => self.remove_violated(c),
                _ => {}
            }
        }
    }

    fn uninclude(&mut self, v: u32) {
        let g = self.g;
        for &c in g.checks_of(v) {
            let ci = c as usize;
            match self.in_cnt[ci] {
                1 => self.remove_violated(c),
                2 => self.add_violated(c),
                _ => {}
            }
            self.in_cnt[ci] -= 1;
            self.undec_cnt[ci] += 1;
        }
        self.state[v as usize] = UNDECIDED;
        self.members.pop();
    }

    fn exclude(&mut self, v: u32) {
        debug_assert_eq!(self.state[v as usize], UNDECIDED);
        self.state[v as usize] = OUT;
        let g = self.g;
        for &c in g.checks_of(v) {
            self.undec_cnt[c as usize] -= 1;
        }
    }

    fn unexclude(&mut self, v: u32) {
        self.state[v as usize] = UNDECIDED;
        let g = self.g;
        for &c in g.checks_of(v) {
            self.undec_cnt[c as usize] += 1;
        }
    }

    #[inline]
    fn tick(&mut self) -> Result<(), Exhausted> {
        self.pending += 1;
        if self.pending == FLUSH_EVERY {
            self.flush()?;
        }
        Ok(())
    }

    fn flush(&mut self) -> Result<(), Exhausted> {
        let total = self.budget.spent.fetch_add(self.pending, Ordering::Relaxed) + self.pending;
        self.pending = 0;
        if total > self.budget.limit {
            Err(Exhausted(total))
        } else {
            Ok(())
        }
    }

    /// Searches from `root` with `excluded` fixed out, reporting every
    /// stopping set found to `visit`. The searcher is left clean.
    pub(crate) fn run_root<V>(
        &mut self,
        root: u32,
        excluded: &[u32],
        visit: &mut V,
    ) -> Result<ControlFlow<()>, Exhausted>
    where
        V: FnMut(&[u32]) -> ControlFlow<()>,
    {
        for &x in excluded {
            self.exclude(x);
        }
        let flow = if self.bound == 0 {
            Ok(ControlFlow::Continue(()))
        } else {
            self.include(root);
            let r = self.dfs(visit);
            self.uninclude(root);
            r
        };
        for &x in excluded.iter().rev() {
            self.unexclude(x);
        }
        let flow = flow?;
        self.flush()?;
        Ok(flow)
    }

    /// Lower bound check: can `remaining` more variables touch every
    /// violated check?
    fn repairable(&mut self, remaining: usize) -> bool {
        let g = self.g;
        for i in 0..self.violated.len() {
            let c = self.violated[i];
            for &u in g.vars_of(c) {
                let ui = u as usize;
                if self.state[ui] != UNDECIDED || self.mark[ui] == c {
                    continue;
                }
                self.mark[ui] = c;
                if self.cover[ui] == 0 {
                    self.touched.push(u);
                }
                self.cover[ui] += 1;
            }
        }
        let mut counts: Vec<u32> = self
            .touched
            .iter()
            .map(|&u| self.cover[u as usize])
            .collect();
        for &u in &self.touched {
            self.cover[u as usize] = 0;
            self.mark[u as usize] = ABSENT;
        }
        self.touched.clear();
        let need = self.violated.len() as u32;
        if counts.len() > remaining {
            counts.select_nth_unstable_by(remaining - 1, |a, b| b.cmp(a));
            counts.truncate(remaining);
        }
        counts.iter().sum::<u32>() >= need
    }

    fn dfs<V>(&mut self, visit: &mut V) -> Result<ControlFlow<()>, Exhausted>
    where
        V: FnMut(&[u32]) -> ControlFlow<()>,
    {
        self.tick()?;
        if self.violated.is_empty() {
            if visit(&self.members).is_break() {
                return Ok(ControlFlow::Break(()));
            }
            if self.mode == SearchMode::Extend && self.members.len() < self.bound {
                return self.extend(visit);
            }
            return Ok(ControlFlow::Continue(()));
        }
        let remaining = self.bound - self.members.len();
        if remaining == 0 {
            return Ok(ControlFlow::Continue(()));
        }
        let mut best = ABSENT;
        let mut best_undec = u32::MAX;
        for &c in &self.violated {
            let u = self.undec_cnt[c as usize];
            if u == 0 {
                return Ok(ControlFlow::Continue(()));
            }
            if u < best_undec {
                best_undec = u;
                best = c;
            }
        }
        if self.violated.len() > remaining && !self.repairable(remaining) {
            return Ok(ControlFlow::Continue(()));
        }

        // Candidates: distinct undecided neighbours of the chosen check,
        // most violated checks first.
        let g = self.g;
        let start = self.cands.len();
        for &u in g.vars_of(best) {
            if self.state[u as usize] != UNDECIDED
                || self.cands[start..].iter().any(|&(_, x)| x == u)
            {
                continue;
            }
            let score = g
                .checks_of(u)
                .iter()
                .filter(|&&c| self.in_cnt[c as usize] == 1)
                .count() as u32;
            self.cands.push((score, u));
        }
        self.cands[start..].sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let end = self.cands.len();
        let frozen_start = self.frozen.len();
        let mut flow = Ok(ControlFlow::Continue(()));
        for i in start..end {
            let u = self.cands[i].1;
            self.include(u);
            let r = self.dfs(visit);
            self.uninclude(u);
            match r {
                Ok(ControlFlow::Continue(())) => {}
                other => {
                    flow = other;
                    break;
                }
            }
            self.exclude(u);
            self.frozen.push(u);
        }
        while self.frozen.len() > frozen_start {
            let u = self.frozen.pop().unwrap();
            self.unexclude(u);
        }
        self.cands.truncate(start);
        flow
    }

    fn extend<V>(&mut self, visit: &mut V) -> Result<ControlFlow<()>, Exhausted>
    where
        V: FnMut(&[u32]) -> ControlFlow<()>,
    {
        let frozen_start = self.frozen.len();
        let mut flow = Ok(ControlFlow::Continue(()));
        for v in 0..self.g.n_vars as u32 {
            if self.state[v as usize] != UNDECIDED {
                continue;
            }
            self.include(v);
            let r = self.dfs(visit);
            self.uninclude(v);
            match r {
                Ok(ControlFlow::Continue(())) => {}
                other => {
                    flow = other;
                    break;
                }
            }
            self.exclude(v);
            self.frozen.push(v);
        }
        while self.frozen.len() > frozen_start {
            let u = self.frozen.pop().unwrap();
            self.unexclude(u);
        }
        flow
    }
}

fn to_set(members: &[u32]) -> StoppingSet {
    let mut v: Vec<usize> = members.iter().map(|&x| x as usize).collect();
    v.sort_unstable();
    StoppingSet::from_sorted(v)
}

/// Runs every root in `roots`; root `r` has all variables `< r` fixed out.
/// Returns the sorted sets found and the expansions spent, or the
/// expansions spent when the budget ran out.
pub(crate) fn prefix_roots(
    sg: &SearchGraph,
    roots: &[usize],
    bound: usize,
    mode: SearchMode,
    limit: u64,
) -> Result<(Vec<StoppingSet>, u64), u64> {
    let spent = AtomicU64::new(0);
    let budget = Budget::new(&spent, limit);
    let per_root: Result<Vec<Vec<StoppingSet>>, Exhausted> = roots
        .par_iter()
        .map_init(
            || (Searcher::new(sg, bound, mode, &budget), Vec::new()),
            |(searcher, excluded), &r| {
                excluded.clear();
                excluded.extend(0..r as u32);
                let mut found = Vec::new();
                searcher
                    .run_root(r as u32, excluded, &mut |m: &[u32]| {
                        found.push(to_set(m));
                        ControlFlow::Continue(())
                    })
                    .map(|_| found)
            },
        )
        .collect();
    let used = spent.load(Ordering::Relaxed);
    match per_root {
        Ok(lists) => {
            let mut all: Vec<StoppingSet> = lists.into_iter().flatten().collect();
            all.sort_unstable();
            Ok((all, used))
        }
        Err(Exhausted(total)) => Err(total.max(used)),
    }
}

pub(crate) fn all_roots(
    sg: &SearchGraph,
    bound: usize,
    mode: SearchMode,
    limit: u64,
) -> Result<(Vec<StoppingSet>, u64), u64> {
    let roots: Vec<usize> = (0..sg.n_vars).collect();
    prefix_roots(sg, &roots, bound, mode, limit)
}

/// Single-threaded search for stopping sets of size `<= bound` that contain
/// `root` and avoid `excluded`.
pub(crate) fn rooted<V>(
    sg: &SearchGraph,
    root: usize,
    excluded: &[usize],
    bound: usize,
    limit: u64,
    visit: &mut V,
) -> Result<(ControlFlow<()>, u64), u64>
where
    V: FnMut(&[u32]) -> ControlFlow<()>,
{
    let spent = AtomicU64::new(0);
    let budget = Budget::new(&spent, limit);
    let mut searcher = Searcher::new(sg, bound, SearchMode::Minimal, &budget);
    let excluded: Vec<u32> = excluded.iter().map(|&x| x as u32).collect();
    match searcher.run_root(root as u32, &excluded, visit) {
        Ok(flow) => Ok((flow, spent.load(Ordering::Relaxed))),
        Err(Exhausted(total)) => Err(total),
    }
}
