//! The alist sparse-matrix interchange format.
//!
//! ```text
//! n m
//! max_dv max_dc
//! <n variable degrees>
//! <m check degrees>
//! <n lines: 1-based check neighbours of each variable, 0-padded to max_dv>
//! <m lines: 1-based variable neighbours of each check, 0-padded to max_dc>
//! ```
//!
//! The reader also accepts unpadded neighbour lines.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::TannerGraph;

pub fn write_alist(g: &TannerGraph) -> String {
    let mut out = String::new();
    let var_lists: Vec<Vec<usize>> = (0..g.n_vars())
        .map(|v| sorted(g.var_neighbors(v)))
        .collect();
    let check_lists: Vec<Vec<usize>> = (0..g.n_checks())
        .map(|c| sorted(g.check_neighbors(c)))
        .collect();
    let max_dv = g.max_var_degree();
    let max_dc = g.max_check_degree();
    writeln!(out, "{} {}", g.n_vars(), g.n_checks()).unwrap();
    writeln!(out, "{max_dv} {max_dc}").unwrap();
    writeln!(out, "{}", join(var_lists.iter().map(Vec::len))).unwrap();
    writeln!(out, "{}", join(check_lists.iter().map(Vec::len))).unwrap();
    for list in &var_lists {
        writeln!(out, "{}", padded(list, max_dv)).unwrap();
    }
    for list in &check_lists {
        writeln!(out, "{}", padded(list, max_dc)).unwrap();
    }
    out
}

fn sorted(it: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut v: Vec<usize> = it.collect();
    v.sort_unstable();
    v
}

fn join(it: impl Iterator<Item = usize>) -> String {
    it.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn padded(list: &[usize], width: usize) -> String {
    join(
        list.iter()
            .map(|&x| x + 1)
            .chain(std::iter::repeat_n(0, width - list.len())),
    )
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    /// Next line as integers with its 1-based line number.
    fn next_ints(&mut self, what: &str) -> Result<(usize, Vec<usize>)> {
        let (idx, line) = self
            .inner
            .next()
            .ok_or_else(|| Error::parse(0, format!("unexpected end of input, expected {what}")))?;
        let lineno = idx + 1;
        let ints = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>().map_err(|_| {
                    Error::parse(lineno, format!("`{tok}` is not a nonnegative integer"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((lineno, ints))
    }
}

pub fn read_alist(text: &str) -> Result<TannerGraph> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    let (l1, header) = lines.next_ints("header `n m`")?;
    let [n, m] = header[..] else {
        return Err(Error::parse(l1, "header must be `n m`"));
    };
    let (l2, maxes) = lines.next_ints("`max_dv max_dc`")?;
    let [max_dv, max_dc] = maxes[..] else {
        return Err(Error::parse(l2, "second line must be `max_dv max_dc`"));
    };
    let (l3, var_deg) = lines.next_ints("variable degrees")?;
    if var_deg.len() != n {
        return Err(Error::parse(
            l3,
            format!("expected {n} variable degrees, got {}", var_deg.len()),
        ));
    }
    let (l4, check_deg) = lines.next_ints("check degrees")?;
    if check_deg.len() != m {
        return Err(Error::parse(
            l4,
            format!("expected {m} check degrees, got {}", check_deg.len()),
        ));
    }
    if var_deg.iter().copied().max().unwrap_or(0) != max_dv {
        return Err(Error::parse(
            l2,
            "max_dv disagrees with the variable degrees",
        ));
    }
    if check_deg.iter().copied().max().unwrap_or(0) != max_dc {
        return Err(Error::parse(l2, "max_dc disagrees with the check degrees"));
    }

    let mut edges = Vec::new();
    for (v, &deg) in var_deg.iter().enumerate() {
        let (ln, list) = lines.next_ints("variable neighbour list")?;
        let idx = neighbours(ln, &list, deg, max_dv, m)?;
        edges.extend(idx.into_iter().map(|c| (v, c)));
    }
    let mut by_check = vec![Vec::new(); m];
    for &(v, c) in &edges {
        by_check[c].push(v);
    }
    for (c, &deg) in check_deg.iter().enumerate() {
        let (ln, list) = lines.next_ints("check neighbour list")?;
        let mut got = neighbours(ln, &list, deg, max_dc, n)?;
        got.sort_unstable();
        if got != by_check[c] {
            return Err(Error::parse(
                ln,
                format!(
                    "check {} neighbours disagree with the variable lists",
                    c + 1
                ),
            ));
        }
    }
    for (idx, line) in lines.inner {
        if !line.trim().is_empty() {
            return Err(Error::parse(idx + 1, "trailing data after the check lists"));
        }
    }
    TannerGraph::new(n, m, edges)
}

/// Validates one neighbour line: `deg` 1-based indices in `1..=bound`
/// followed only by zero padding up to `width`.
fn neighbours(
    line: usize,
    list: &[usize],
    deg: usize,
    width: usize,
    bound: usize,
) -> Result<Vec<usize>> {
    if list.len() > width.max(deg) {
        return Err(Error::parse(
            line,
            format!("{} entries exceed width {width}", list.len()),
        ));
    }
    let (items, padding) = list.split_at(deg.min(list.len()));
    if items.len() != deg {
        return Err(Error::parse(
            line,
            format!("expected {deg} neighbours, got {}", items.len()),
        ));
    }
    if padding.iter().any(|&x| x != 0) {
        return Err(Error::parse(
            line,
            "more nonzero neighbours than the stated degree",
        ));
    }
    items
        .iter()
        .map(|&x| {
            if x == 0 {
                Err(Error::parse(line, "zero padding before the last neighbour"))
            } else if x > bound {
                Err(Error::parse(
                    line,
                    format!("index {x} out of range 1..={bound}"),
                ))
            } else {
                Ok(x - 1)
            }
        })
        .collect()
}
