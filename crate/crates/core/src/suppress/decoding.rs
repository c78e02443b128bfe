//! Ordered decoding of a stopping set under a repetition pattern.
//!
//! A member `x` can be decoded through a check `y` once every other member
//! on `y` is known and at least one of them has repetition `>= R(x)`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::TannerGraph;
use crate::lift::RepetitionPattern;

struct Local {
    members: Vec<usize>,
    rep: Vec<usize>,
    /// Distinct local members on each adjacent check.
    checks: Vec<Vec<usize>>,
    /// Adjacent local check ids of each member.
    var_checks: Vec<Vec<usize>>,
}

impl Local {
    fn new(g: &TannerGraph, s: &[usize], pattern: &RepetitionPattern) -> Result<Self> {
        let mut members = s.to_vec();
        members.sort_unstable();
        members.dedup();
        if members.is_empty() || members.iter().any(|&v| v >= g.n_vars()) {
            return Err(Error::params("invalid variable set"));
        }
        if pattern.len() != members.len()
            || members
                .iter()
                .any(|v| pattern.get(v).is_none_or(|&r| r == 0))
        {
            return Err(Error::params(
                "repetition pattern must give R >= 1 for exactly the set members",
            ));
        }
        let rep = members.iter().map(|v| pattern[v]).collect();
        let mut check_ids: BTreeMap<usize, usize> = BTreeMap::new();
        let mut checks: Vec<Vec<usize>> = Vec::new();
        let mut var_checks = vec![Vec::new(); members.len()];
        for (i, &v) in members.iter().enumerate() {
            for c in g.var_neighbors(v) {
                let id = *check_ids.entry(c).or_insert_with(|| {
                    checks.push(Vec::new());
                    checks.len() - 1
                });
                if !checks[id].contains(&i) {
                    checks[id].push(i);
                    var_checks[i].push(id);
                }
            }
        }
        Ok(Local {
            members,
            rep,
            checks,
            var_checks,
        })
    }

    fn decodable(&self, x: usize, known: &[bool]) -> bool {
        self.var_checks[x].iter().any(|&c| {
            let others = self.checks[c].iter().filter(|&&o| o != x);
            let mut any_other = false;
            let mut strong = false;
            for &o in others {
                if !known[o] {
                    return false;
                }
                any_other = true;
                strong |= self.rep[o] >= self.rep[x];
            }
            any_other && strong
        })
    }

    fn closure(&self, revealed: &[usize]) -> Vec<bool> {
        let mut known = vec![false; self.members.len()];
        for &r in revealed {
            known[r] = true;
        }
        loop {
            let next = (0..known.len()).find(|&x| !known[x] && self.decodable(x, &known));
            match next {
                Some(x) => known[x] = true,
                None => return known,
            }
        }
    }

    fn local_index(&self, v: usize) -> Option<usize> {
        self.members.binary_search(&v).ok()
    }
}

/// Whether revealing `x_od` lets ordered decoding recover all of `s`.
pub fn decodes_all(
    g: &TannerGraph,
    s: &[usize],
    pattern: &RepetitionPattern,
    x_od: &[usize],
) -> Result<bool> {
    let local = Local::new(g, s, pattern)?;
    let revealed = x_od
        .iter()
        .map(|&v| {
            local
                .local_index(v)
                .ok_or_else(|| Error::params(format!("variable {} is not in the set", v + 1)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(local.closure(&revealed).into_iter().all(|k| k))
}

/// Greedy small revealed set: reveal the stuck member with the largest
/// repetition (lowest index on ties) until decoding completes, then drop
/// reveals that turn out to be redundant.
pub fn find_ordered_decoding_set(
    g: &TannerGraph,
    s: &[usize],
    pattern: &RepetitionPattern,
) -> Result<Vec<usize>> {
    let local = Local::new(g, s, pattern)?;
    let mut revealed: Vec<usize> = Vec::new();
    loop {
        let known = local.closure(&revealed);
        let stuck = (0..known.len())
            .filter(|&x| !known[x])
            .max_by(|&a, &b| local.rep[a].cmp(&local.rep[b]).then(b.cmp(&a)));
        match stuck {
            Some(x) => revealed.push(x),
            None => break,
        }
    }
    let mut i = revealed.len();
    while i > 0 {
        i -= 1;
        let mut trial = revealed.clone();
        trial.remove(i);
        if local.closure(&trial).into_iter().all(|k| k) {
            revealed = trial;
        }
    }
    let mut out: Vec<usize> = revealed.into_iter().map(|x| local.members[x]).collect();
    out.sort_unstable();
    Ok(out)
}
