//! Off-line lower bound for directed paths: a proper labeling of the host by
//! middle-level vectors, then each arc colored by a rising coordinate.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::Rng;
use serde::Serialize;

use crate::combin::binomial;
use crate::error::{Error, Result};
use crate::game::Color;
use crate::painters::{middle_level, rising_coordinate};

/// A digraph on vertices `0..n`. Both `u -> v` and `v -> u` may appear.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    arcs: Vec<(usize, usize)>,
    seen: BTreeSet<(usize, usize)>,
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            ..Self::default()
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn add_arc(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidParams(format!(
                "arc {u} -> {v} leaves the vertex range 0..{}",
                self.n
            )));
        }
        if u == v {
            return Err(Error::InvalidParams(format!("loop at {u}")));
        }
        if !self.seen.insert((u, v)) {
            return Err(Error::InvalidParams(format!("arc {u} -> {v} appears twice")));
        }
        self.arcs.push((u, v));
        Ok(())
    }

    /// Edges of the underlying simple graph, as `(min, max)` pairs.
    pub fn underlying(&self) -> BTreeSet<(usize, usize)> {
        self.arcs.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect()
    }

    /// One `u v` pair per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::InvalidParams(format!("line {}: {e}", i + 1)))?;
            match nums[..] {
                [u, v] => pairs.push((u, v)),
                _ => {
                    return Err(Error::InvalidParams(format!(
                        "line {}: expected `u v`",
                        i + 1
                    )))
                }
            }
        }
        let n = pairs.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        let mut g = Digraph::new(n);
        for (u, v) in pairs {
            g.add_arc(u, v)?;
        }
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        self.arcs.iter().map(|(u, v)| format!("{u} {v}\n")).collect()
    }

    /// `edges` distinct underlying pairs on `n` vertices, each oriented one way
    /// or both ways with equal odds.
    pub fn random<R: Rng>(n: usize, edges: usize, rng: &mut R) -> Result<Self> {
        let pairs = n * n.saturating_sub(1) / 2;
        if edges > pairs {
            return Err(Error::InvalidParams(format!(
                "{edges} edges do not fit on {n} vertices"
            )));
        }
        let mut g = Digraph::new(n);
        let mut picked = sample(rng, pairs, edges).into_vec();
        picked.sort_unstable();
        for idx in picked {
            let (u, v) = unrank_pair(idx, n);
            match rng.gen_range(0..3) {
                0 => g.add_arc(u, v)?,
                1 => g.add_arc(v, u)?,
                _ => {
                    g.add_arc(u, v)?;
                    g.add_arc(v, u)?;
                }
            }
        }
        Ok(g)
    }
}

/// Pair number `idx` of `0..n` in lexicographic order.
fn unrank_pair(mut idx: usize, n: usize) -> (usize, usize) {
    let mut u = 0;
    while idx >= n - u - 1 {
        idx -= n - u - 1;
        u += 1;
    }
    (u, u + 1 + idx)
}

/// Proper labeling of the underlying graph by indices into `labels`, greedy
/// along a degeneracy order.
pub fn degeneracy_label(g: &Digraph, labels: &[Vec<usize>]) -> Result<Vec<usize>> {
    let b = labels.len() as u64;
    let und = g.underlying();
    let limit = binomial(b + 1, 2);
    if und.len() as u64 >= limit {
        return Err(Error::Precondition(format!(
            "{} underlying edges, the labeling needs fewer than {limit}",
            und.len()
        )));
    }
    let n = g.n();
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in &und {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (degree[v], v))
            .expect("a vertex remains");
        removed[v] = true;
        order.push(v);
        for &w in &adj[v] {
            if !removed[w] {
                degree[w] -= 1;
            }
        }
    }
    let mut label = vec![usize::MAX; n];
    for &v in order.iter().rev() {
        let used: BTreeSet<usize> = adj[v].iter().map(|&w| label[w]).collect();
        label[v] = (0..labels.len()).find(|c| !used.contains(c)).ok_or_else(|| {
            Error::Inconsistency(format!("no free label for vertex {v} in a degenerate order"))
        })?;
    }
    Ok(label)
}

/// Colors each arc `u -> v` by the least coordinate where `a(v)` beats `a(u)`,
/// then checks every color class has only paths shorter than its target.
pub fn paint_and_verify(
    g: &Digraph,
    labels: &[Vec<usize>],
    targets: &[usize],
) -> Result<(Vec<Color>, bool)> {
    if labels.len() != g.n() || labels.iter().any(|a| a.len() != targets.len()) {
        return Err(Error::Precondition("one t-vector label per vertex".into()));
    }
    let mut colors = Vec::with_capacity(g.arcs().len());
    for &(u, v) in g.arcs() {
        let c = rising_coordinate(&labels[u], &labels[v]).ok_or_else(|| {
            Error::Inconsistency(format!(
                "label {:?} of {v} beats {:?} of {u} nowhere",
                labels[v], labels[u]
            ))
        })?;
        colors.push(c);
    }
    let ok = (0..targets.len()).all(|c| {
        longest_graded_path(g, labels, &colors, c).is_some_and(|len| len < targets[c])
    });
    Ok((colors, ok))
}

/// Longest path in color `c`, or `None` when some arc fails to raise coordinate `c`.
fn longest_graded_path(
    g: &Digraph,
    labels: &[Vec<usize>],
    colors: &[Color],
    c: Color,
) -> Option<usize> {
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    for (&(u, v), &col) in g.arcs().iter().zip(colors) {
        if col == c {
            if labels[v][c] <= labels[u][c] {
                return None;
            }
            arcs.push((u, v));
        }
    }
    arcs.sort_by_key(|&(u, _)| labels[u][c]);
    let mut len = vec![0usize; g.n()];
    for (u, v) in arcs {
        len[v] = len[v].max(len[u] + 1);
    }
    Some(len.into_iter().max().unwrap_or(0))
}

/// Labels the host with the middle level of `M^t` and colors it.
pub fn label_and_paint(g: &Digraph, targets: &[usize]) -> Result<(Vec<Color>, bool)> {
    let supply = middle_level(targets);
    let idx = degeneracy_label(g, &supply)?;
    let labels: Vec<Vec<usize>> = idx.iter().map(|&i| supply[i].clone()).collect();
    paint_and_verify(g, &labels, targets)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SdirBounds {
    /// `((m+1)/(3t-3))^{2t-2}`
    pub bks_lower: f64,
    /// `4 (m+1)^{2t-2}`
    pub bks_upper: f64,
    /// `C(|B|+1, 2)`
    pub ours: u64,
}

pub fn sdir_sandwich(m: usize, t: usize) -> Result<SdirBounds> {
    if m < 2 || t < 2 {
        return Err(Error::InvalidParams("need m, t >= 2".into()));
    }
    let e = 2 * t as i32 - 2;
    let b = crate::bounds::midlevel_size(&vec![m; t]).size;
    Ok(SdirBounds {
        bks_lower: ((m as f64 + 1.0) / (3.0 * t as f64 - 3.0)).powi(e),
        bks_upper: 4.0 * (m as f64 + 1.0).powi(e),
        ours: binomial(b + 1, 2),
    })
}
