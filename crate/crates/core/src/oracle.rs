//! Exact answers at desk scale: witness verification, exhaustive off-line
//! forcing checks and minimax on-line values.
//!
//! Everything here works on plain position tuples with its own path DP, so it
//! can cross-check the referee and the strategies.

use std::collections::{HashMap, HashSet};
use std::sync::atomic::{AtomicU64, Ordering};

use dashmap::DashMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combin::combinations;
use crate::error::{Error, Result};
use crate::game::{Color, GameParams};

/// A color for every increasing k-set of `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    params: GameParams,
    n: usize,
    edges: Vec<(Vec<usize>, Color)>,
}

impl Coloring {
    pub fn new(params: GameParams, n: usize, mut edges: Vec<(Vec<usize>, Color)>) -> Result<Self> {
        let k = params.k();
        let t = params.t();
        edges.sort();
        for w in edges.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::MalformedColoring(format!("{:?} colored twice", w[0].0)));
            }
        }
        for (e, c) in &edges {
            if e.len() != k || e.windows(2).any(|p| p[0] >= p[1]) || e[k - 1] >= n {
                return Err(Error::MalformedColoring(format!("{e:?} is not an increasing {k}-set of 0..{n}")));
            }
            if *c >= t {
                return Err(Error::MalformedColoring(format!("{e:?} has color {c} of {t}")));
            }
        }
        let want = crate::combin::binomial(n as u64, k as u64);
        if edges.len() as u64 != want {
            return Err(Error::MalformedColoring(format!(
                "{} of the {want} k-sets are colored",
                edges.len()
            )));
        }
        Ok(Self { params, n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn params(&self) -> &GameParams {
        &self.params
    }

    pub fn edges(&self) -> &[(Vec<usize>, Color)] {
        &self.edges
    }

    pub fn color_of(&self, edge: &[usize]) -> Option<Color> {
        self.edges
            .binary_search_by(|(e, _)| e.as_slice().cmp(edge))
            .ok()
            .map(|i| self.edges[i].1)
    }
}

/// `earlier` then `later` are consecutive edges of an ℓ-loose monotone path.
pub fn consecutive(l: usize, earlier: &[usize], later: &[usize]) -> bool {
    let k = earlier.len();
    earlier[l..] == later[..k - l] && earlier[k - 1] < later[k - l]
}

/// Longest same-color path ending at each edge, for edges sorted by last vertex.
fn path_lengths(l: usize, edges: &[(Vec<usize>, Color)]) -> Vec<usize> {
    let mut len = vec![1; edges.len()];
    for j in 0..edges.len() {
        for i in 0..j {
            if edges[i].1 == edges[j].1 && consecutive(l, &edges[i].0, &edges[j].0) {
                len[j] = len[j].max(len[i] + 1);
            }
        }
    }
    len
}

fn sort_by_last(edges: &mut [(Vec<usize>, Color)]) {
    edges.sort_by(|a, b| (a.0.last(), &a.0).cmp(&(b.0.last(), &b.0)));
}

/// True iff the coloring has no color-`i` path with `m_i` edges.
pub fn verify_witness(coloring: &Coloring) -> bool {
    let p = coloring.params();
    let mut edges = coloring.edges.clone();
    sort_by_last(&mut edges);
    path_lengths(p.l(), &edges)
        .iter()
        .zip(&edges)
        .all(|(&len, (_, c))| len < p.target(*c))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ForceOutcome {
    /// Every coloring contains a monochromatic path.
    Forced,
    /// This coloring avoids all of them.
    Avoidable(Coloring),
    /// The node budget ran out first.
    Indeterminate { nodes: u64 },
}

impl ForceOutcome {
    pub fn is_forced(&self) -> bool {
        matches!(self, ForceOutcome::Forced)
    }
}

struct ForceSearch<'a> {
    params: &'a GameParams,
    edges: Vec<Vec<usize>>,
    /// Table slot read to extend a path into each edge (`ℓ < k`).
    pred_key: Vec<usize>,
    /// Table slot each edge writes.
    succ_key: Vec<usize>,
    /// `best[slot * t + c]`: longest color-`c` path ending in an edge stored at `slot`.
    best: Vec<u8>,
    colors: Vec<Color>,
    /// Equal-target colors not yet used are interchangeable.
    class: Vec<usize>,
    dead: HashSet<(u32, Vec<u8>)>,
    nodes: u64,
    budget: u64,
    canonical_graph: bool,
}

impl ForceSearch<'_> {
    fn pred_value(&self, e: usize, c: usize) -> u8 {
        let t = self.params.t();
        if self.params.l() < self.params.k() {
            self.best[self.pred_key[e] * t + c]
        } else {
            // Matching paths: any earlier edge ending before this one starts.
            let first = self.edges[e][0];
            (0..first).map(|v| self.best[v * t + c]).max().unwrap_or(0)
        }
    }

    fn key(&self, e: usize) -> (u32, Vec<u8>) {
        let t = self.params.t();
        let boundary = e == 0 || self.edges[e].last() != self.edges[e - 1].last();
        if self.canonical_graph && boundary {
            // k = 2, ℓ = 1: old vertices only matter through their label multiset,
            // and a repeated label adds nothing for either side.
            let mut labels: Vec<&[u8]> = self.best.chunks(t).collect();
            labels.sort_unstable();
            labels.dedup();
            return (e as u32, labels.concat());
        }
        (e as u32, self.best.clone())
    }

    fn allowed(&self, c: usize, used: &[bool]) -> bool {
        if used[c] {
            return true;
        }
        (0..c).all(|d| used[d] || self.class[d] != self.class[c])
    }

    /// Whether some completion from edge `e` on avoids every target.
    fn avoid(&mut self, e: usize, used: &mut Vec<bool>) -> Option<bool> {
        if e == self.edges.len() {
            return Some(true);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        let key = self.key(e);
        if self.dead.contains(&key) {
            return Some(false);
        }
        let t = self.params.t();
        for c in 0..t {
            if !self.allowed(c, used) {
                continue;
            }
            let len = self.pred_value(e, c) + 1;
            if len as usize >= self.params.target(c) {
                continue;
            }
            let slot = self.succ_key[e] * t + c;
            let old = self.best[slot];
            self.best[slot] = old.max(len);
            let was_used = used[c];
            used[c] = true;
            self.colors[e] = c;
            let res = self.avoid(e + 1, used);
            used[c] = was_used;
            self.best[slot] = old;
            match res {
                Some(true) => return Some(true),
                Some(false) => {}
                None => return None,
            }
        }
        self.dead.insert(key);
        Some(false)
    }
}

/// Decides whether every coloring of the complete ordered k-graph on `n`
/// vertices has a monochromatic path, within `node_budget` search nodes.
pub fn offline_force_check(params: &GameParams, n: usize, node_budget: u64) -> Result<ForceOutcome> {
    let k = params.k();
    let l = params.l();
    let t = params.t();
    if params.targets().iter().any(|&m| m > u8::MAX as usize) {
        return Err(Error::InvalidParams("targets above 255 are out of range".into()));
    }
    let mut edges = combinations(n, k);
    edges.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    let (pred_key, succ_key, slots) = if l < k {
        let mut rank: HashMap<Vec<usize>, usize> = HashMap::new();
        for (i, c) in combinations(n, k - l).into_iter().enumerate() {
            rank.insert(c, i);
        }
        let pred = edges.iter().map(|e| rank[&e[..k - l]]).collect();
        let succ = edges.iter().map(|e| rank[&e[l..]]).collect();
        (pred, succ, rank.len().max(1))
    } else {
        let succ = edges.iter().map(|e| e[k - 1]).collect();
        (vec![0; edges.len()], succ, n.max(1))
    };
    let mut class = Vec::with_capacity(t);
    for c in 0..t {
        class.push((0..=c).find(|&d| params.target(d) == params.target(c)).unwrap());
    }
    let mut search = ForceSearch {
        params,
        colors: vec![0; edges.len()],
        edges,
        pred_key,
        succ_key,
        best: vec![0; slots * t],
        class,
        dead: HashSet::new(),
        nodes: 0,
        budget: node_budget,
        canonical_graph: k == 2 && l == 1,
    };
    let mut used = vec![false; t];
    match search.avoid(0, &mut used) {
        None => Ok(ForceOutcome::Indeterminate {
            nodes: search.nodes,
        }),
        Some(false) => Ok(ForceOutcome::Forced),
        Some(true) => {
            let edges = search.edges.into_iter().zip(search.colors).collect();
            Ok(ForceOutcome::Avoidable(Coloring::new(params.clone(), n, edges)?))
        }
    }
}

/// Minimax value of the on-line game with at most `vertex_budget` vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OnlineValue {
    pub vertex_budget: usize,
    pub move_budget: usize,
    /// Fewest edges Builder needs; `None` when more than `move_budget`.
    pub value: Option<usize>,
    pub nodes: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    pub memo: bool,
    pub parallel: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            memo: true,
            parallel: true,
        }
    }
}

/// Position `(vertices, edges)`; every vertex lies on some edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Position {
    vertices: u8,
    edges: Vec<(Vec<u8>, u8)>,
}

struct Solver<'a> {
    params: &'a GameParams,
    budget: usize,
    perms: Vec<Vec<u8>>,
    /// `(deepest depth known lost, shallowest depth known won)`.
    memo: Option<DashMap<Position, (u8, u8)>>,
    nodes: AtomicU64,
}

fn color_permutations(targets: &[usize]) -> Vec<Vec<u8>> {
    let t = targets.len();
    let mut out = vec![Vec::new()];
    for _ in 0..t {
        let mut next = Vec::new();
        for p in &out {
            for c in 0..t as u8 {
                if !p.contains(&c) && targets[c as usize] == targets[p.len()] {
                    let mut q = p.clone();
                    q.push(c);
                    next.push(q);
                }
            }
        }
        out = next;
    }
    out
}

impl Solver<'_> {
    fn canonical(&self, pos: &Position) -> Position {
        self.perms
            .iter()
            .map(|perm| {
                let mut edges: Vec<(Vec<u8>, u8)> = pos
                    .edges
                    .iter()
                    .map(|(e, c)| (e.clone(), perm[*c as usize]))
                    .collect();
                edges.sort();
                Position {
                    vertices: pos.vertices,
                    edges,
                }
            })
            .min()
            .expect("identity permutation")
    }

    /// Position after inserting new vertices and playing `edge`, colors pending.
    fn moves(&self, pos: &Position) -> Vec<(u8, Vec<(Vec<u8>, u8)>, Vec<u8>)> {
        let k = self.params.k();
        let a = pos.vertices as usize;
        let spare = self.budget.saturating_sub(a);
        let played: HashSet<&Vec<u8>> = pos.edges.iter().map(|(e, _)| e).collect();
        let mut out = Vec::new();
        for j in 0..=k.min(spare) {
            if k - j > a {
                continue;
            }
            // Gaps 0..=a for each new vertex, non-decreasing.
            let mut gap_lists = vec![Vec::new()];
            for _ in 0..j {
                let mut next = Vec::new();
                for g in &gap_lists {
                    let lo = g.last().copied().unwrap_or(0);
                    for x in lo..=a {
                        let mut h = g.clone();
                        h.push(x);
                        next.push(h);
                    }
                }
                gap_lists = next;
            }
            for olds in combinations(a, k - j) {
                for gaps in &gap_lists {
                    // New index of old vertex i: i + #{gaps <= i}.
                    let remap = |i: usize| (i + gaps.iter().filter(|&&g| g <= i).count()) as u8;
                    let mut edge: Vec<u8> = olds.iter().map(|&i| remap(i)).collect();
                    for (idx, &g) in gaps.iter().enumerate() {
                        let before_in_gap = gaps[..idx].iter().filter(|&&h| h == g).count();
                        let smaller = gaps.iter().filter(|&&h| h < g).count();
                        edge.push((g + smaller + before_in_gap) as u8);
                    }
                    edge.sort_unstable();
                    if j == 0 && played.contains(&edge) {
                        continue;
                    }
                    let edges = pos
                        .edges
                        .iter()
                        .map(|(e, c)| (e.iter().map(|&v| remap(v as usize)).collect(), *c))
                        .collect();
                    out.push(((a + j) as u8, edges, edge));
                }
            }
        }
        out
    }

    fn completes(&self, edges: &[(Vec<u8>, u8)]) -> bool {
        let mut list: Vec<(Vec<usize>, Color)> = edges
            .iter()
            .map(|(e, c)| (e.iter().map(|&v| v as usize).collect(), *c as usize))
            .collect();
        sort_by_last(&mut list);
        path_lengths(self.params.l(), &list)
            .iter()
            .zip(&list)
            .any(|(&len, (_, c))| len >= self.params.target(*c))
    }

    /// Builder can force a monochromatic path within `depth` more edges.
    fn wins(&self, pos: &Position, depth: u8, parallel: bool) -> bool {
        if depth == 0 {
            return false;
        }
        self.nodes.fetch_add(1, Ordering::Relaxed);
        let key = self.memo.as_ref().map(|_| self.canonical(pos));
        if let (Some(memo), Some(key)) = (&self.memo, &key) {
            if let Some(entry) = memo.get(key) {
                let (lost, won) = *entry;
                if depth <= lost {
                    return false;
                }
                if depth >= won {
                    return true;
                }
            }
        }
        let t = self.params.t() as u8;
        let used: Vec<bool> = (0..t).map(|c| pos.edges.iter().any(|e| e.1 == c)).collect();
        let try_move = |(vertices, edges, edge): &(u8, Vec<(Vec<u8>, u8)>, Vec<u8>)| {
            (0..t).all(|c| {
                // Unused colors with equal targets are interchangeable.
                let redundant = !used[c as usize]
                    && (0..c).any(|d| {
                        !used[d as usize]
                            && self.params.target(d as usize) == self.params.target(c as usize)
                    });
                if redundant {
                    return true;
                }
                let mut next = edges.clone();
                next.push((edge.clone(), c));
                self.completes(&next)
                    || self.wins(
                        &Position {
                            vertices: *vertices,
                            edges: next,
                        },
                        depth - 1,
                        false,
                    )
            })
        };
        let moves = self.moves(pos);
        let won = if parallel {
            moves.par_iter().any(try_move)
        } else {
            moves.iter().any(try_move)
        };
        if let (Some(memo), Some(key)) = (&self.memo, key) {
            let mut entry = memo.entry(key).or_insert((0, u8::MAX));
            if won {
                entry.1 = entry.1.min(depth);
            } else {
                entry.0 = entry.0.max(depth);
            }
        }
        won
    }
}

/// Minimax on-line value by iterative deepening, Builder limited to
/// `vertex_budget` vertices (placed anywhere in the order) and Painter
/// coloring each edge as it arrives.
pub fn exact_online_value(
    params: &GameParams,
    vertex_budget: usize,
    move_budget: usize,
    opts: SolverOptions,
) -> Result<OnlineValue> {
    if vertex_budget > 16 || move_budget > 64 {
        return Err(Error::BudgetExceeded {
            what: "oracle search size".into(),
            limit: 16,
        });
    }
    let solver = Solver {
        params,
        budget: vertex_budget,
        perms: color_permutations(params.targets()),
        memo: opts.memo.then(DashMap::new),
        nodes: AtomicU64::new(0),
    };
    let start = Position {
        vertices: 0,
        edges: Vec::new(),
    };
    let mut value = None;
    for d in 1..=move_budget {
        if solver.wins(&start, d as u8, opts.parallel) {
            value = Some(d);
            break;
        }
    }
    Ok(OnlineValue {
        vertex_budget,
        move_budget,
        value,
        nodes: solver.nodes.load(Ordering::Relaxed),
    })
}

/// Values for each vertex budget in `budgets`, to show where they settle.
pub fn online_value_series(
    params: &GameParams,
    budgets: std::ops::RangeInclusive<usize>,
    move_budget: usize,
    opts: SolverOptions,
) -> Result<Vec<OnlineValue>> {
    budgets
        .map(|n| exact_online_value(params, n, move_budget, opts))
        .collect()
}

/// Smallest budget from which every later value in `series` is the same solved value.
pub fn stabilization_point(series: &[OnlineValue]) -> Option<usize> {
    let last = series.last()?.value?;
    let from = series
        .iter()
        .rposition(|v| v.value != Some(last))
        .map_or(0, |i| i + 1);
    Some(series[from].vertex_budget)
}
