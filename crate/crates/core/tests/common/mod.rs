//! Reference computations shared by the integration tests. They follow the
//! definitions directly, with no incremental bookkeeping.

#![allow(dead_code)]

use std::collections::HashMap;

use ordered_ramsey::builders::{Builder, RandomBuilder};
use ordered_ramsey::game::{GameParams, GameState, Transcript, VertexId};
use ordered_ramsey::painters::{Painter, RandomPainter};
use ordered_ramsey::posets::{Elem, Hierarchy};

/// All `r`-subsets of `0..n`, lexicographic.
pub fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            rec(x + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, r, &mut Vec::new(), &mut out);
    out
}

fn positions(state: &GameState, edge: &[VertexId]) -> Vec<usize> {
    edge.iter().map(|&v| state.position(v).unwrap()).collect()
}

/// Whether edge `b` can come right after edge `a` on an ℓ-loose path (positions).
pub fn loose_successor(l: usize, a: &[usize], b: &[usize]) -> bool {
    let k = a.len();
    if l == k {
        return a[k - 1] < b[0];
    }
    a[l..] == b[..k - l]
}

/// Longest monochromatic path ending at each edge, by plain recursion.
pub fn brute_path_lens(state: &GameState) -> HashMap<Vec<VertexId>, usize> {
    let l = state.params().l();
    let edges: Vec<(Vec<usize>, usize, Vec<VertexId>)> = state
        .edges()
        .iter()
        .map(|e| (positions(state, &e.vertices), e.color, e.vertices.clone()))
        .collect();
    fn longest(
        i: usize,
        l: usize,
        edges: &[(Vec<usize>, usize, Vec<VertexId>)],
        memo: &mut Vec<Option<usize>>,
    ) -> usize {
        if let Some(v) = memo[i] {
            return v;
        }
        let mut best = 1;
        for j in 0..edges.len() {
            if edges[j].1 == edges[i].1 && loose_successor(l, &edges[j].0, &edges[i].0) {
                best = best.max(longest(j, l, edges, memo) + 1);
            }
        }
        memo[i] = Some(best);
        best
    }
    let mut memo = vec![None; edges.len()];
    (0..edges.len())
        .map(|i| (edges[i].2.clone(), longest(i, l, &edges, &mut memo)))
        .collect()
}

/// Plays a random builder against a random painter and returns the last
/// state before Builder wins, with at most `max_edges` edges.
pub fn random_state(params: &GameParams, seed: u64, max_edges: usize) -> GameState {
    let mut builder = RandomBuilder::new(seed).with_insert_prob(0.3);
    let mut painter = RandomPainter::new(seed.wrapping_mul(31).wrapping_add(7));
    let mut state = GameState::new(params.clone());
    while state.num_edges() < max_edges {
        let before = state.clone();
        let Ok(mv) = builder.next_move(&state) else {
            break;
        };
        for &p in &mv.insert_at {
            state.insert_vertex(Some(p)).unwrap();
        }
        let h = state.play_edge(&mv.edge).unwrap();
        let edge = h.edge().to_vec();
        let c = painter.color(&state, &edge).unwrap().color;
        state.assign_color(h, c).unwrap();
        if state.is_over() {
            return before;
        }
    }
    state
}

/// `g` labels computed from the definition.
pub struct RefLabels<'a> {
    state: &'a GameState,
    hier: &'a Hierarchy,
    lens: HashMap<Vec<VertexId>, usize>,
    k: usize,
    l: usize,
    h: usize,
    memo: HashMap<Vec<usize>, Option<Elem>>,
}

impl<'a> RefLabels<'a> {
    pub fn new(state: &'a GameState, hier: &'a Hierarchy) -> Self {
        let p = state.params();
        Self {
            state,
            hier,
            lens: brute_path_lens(state),
            k: p.k(),
            l: p.l(),
            h: p.h(),
            memo: HashMap::new(),
        }
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn level_of(&self, size: usize) -> usize {
        self.h - (self.k - size) / self.l
    }

    pub fn size_of(&self, level: usize) -> usize {
        self.k - (self.h - level) * self.l
    }

    /// Poset of level-`j` labels.
    pub fn poset(&self, level: usize) -> &ordered_ramsey::posets::Poset {
        self.hier.level(self.h - level + 1)
    }

    fn ids(&self, set: &[usize]) -> Vec<VertexId> {
        set.iter().map(|&p| self.state.order()[p]).collect()
    }

    pub fn is_edge(&self, set: &[usize]) -> bool {
        self.state.contains_edge(&self.ids(set))
    }

    pub fn precursors(&self, set: &[usize]) -> Vec<Vec<usize>> {
        subsets(set[0], self.l)
            .into_iter()
            .map(|mut z| {
                z.extend_from_slice(set);
                z
            })
            .collect()
    }

    pub fn label(&mut self, set: &[usize]) -> Option<Elem> {
        if set.len() == self.k {
            let ids = self.ids(set);
            let rec = self.state.edge(&ids)?;
            let height = self.lens[&ids].min(self.state.params().target(rec.color) - 1);
            return self.hier.level(1).chain_element(rec.color, height);
        }
        if let Some(&v) = self.memo.get(set) {
            return v;
        }
        let level = self.level_of(set.len());
        let gens: Vec<Elem> = self
            .precursors(set)
            .iter()
            .filter_map(|z| self.label(z))
            .collect();
        let below = self.hier.level(self.h - level);
        let down = below.downset_generated(gens);
        let v = self.hier.level(self.h - level + 1).index_of(&down);
        assert!(v.is_some(), "generated down-set is a lattice element");
        self.memo.insert(set.to_vec(), v);
        v
    }

    fn maximal(&mut self, set: &[usize]) -> Vec<Elem> {
        let level = self.level_of(set.len());
        let g = self.label(set).unwrap();
        let members = self.poset(level).members(g).unwrap();
        self.poset(level + 1).maximal_elements(&members)
    }

    /// The ℓ vertices `y2` adds after `y1`.
    pub fn tail(&self, y1: &[usize], y2: &[usize]) -> Option<Vec<usize>> {
        let size = y1.len();
        if size > self.l {
            return (y1[self.l..] == y2[..size - self.l]).then(|| y2[size - self.l..].to_vec());
        }
        let pad = self.l - size;
        if y2[0] < pad {
            return None;
        }
        let t: Vec<usize> = (y2[0] - pad..y2[0]).chain(y2.iter().copied()).collect();
        (t[0] > y1[size - 1]).then_some(t)
    }

    fn with_tail(&self, z: &[usize], tail: &[usize]) -> Vec<usize> {
        let mut u: Vec<usize> = z.iter().chain(tail).copied().collect();
        u.sort_unstable();
        u.dedup();
        u
    }

    /// The recursive relation: `y2` follows `y1`.
    pub fn follows(&mut self, y1: &[usize], y2: &[usize]) -> bool {
        if y1.len() == self.k {
            return self.is_edge(y1) && self.is_edge(y2) && loose_successor(self.l, y1, y2);
        }
        match self.tail(y1, y2) {
            Some(t) => self.follows_with(y1, &t),
            None => false,
        }
    }

    fn follows_with(&mut self, y: &[usize], tail: &[usize]) -> bool {
        if y.len() + self.l == self.k {
            return self.is_edge(&self.with_tail(y, tail));
        }
        let maximal = self.maximal(y);
        maximal.into_iter().all(|w| {
            self.precursors(y)
                .into_iter()
                .any(|z| self.label(&z) == Some(w) && self.follows_with(&z, tail))
        })
    }

    /// Every instance of `U(y)`, as the list of its deepest sets (level h-1).
    /// Gives up with `None` beyond `cap` instances.
    pub fn instances(&mut self, y: &[usize], cap: usize) -> Option<Vec<Vec<Vec<usize>>>> {
        if self.level_of(y.len()) == self.h - 1 {
            return Some(vec![vec![y.to_vec()]]);
        }
        let mut acc: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
        for w in self.maximal(y) {
            let mut options = Vec::new();
            for z in self.precursors(y) {
                if self.label(&z) == Some(w) {
                    options.extend(self.instances(&z, cap)?);
                }
            }
            let mut next = Vec::new();
            for a in &acc {
                for o in &options {
                    let mut leaves = a.clone();
                    leaves.extend(o.iter().cloned());
                    next.push(leaves);
                }
            }
            if next.len() > cap {
                return None;
            }
            acc = next;
        }
        Some(acc)
    }

    /// `y2` follows `y1` by the instance characterization, or `None` if the
    /// instance count exceeds `cap`.
    pub fn follows_by_instances(&mut self, y1: &[usize], y2: &[usize], cap: usize) -> Option<bool> {
        if y1.len() == self.k {
            return Some(self.follows(y1, y2));
        }
        let Some(t) = self.tail(y1, y2) else {
            return Some(false);
        };
        let all = self.instances(y1, cap)?;
        Some(
            all.iter()
                .any(|leaves| leaves.iter().all(|z| self.is_edge(&self.with_tail(z, &t)))),
        )
    }
}

/// All labeled sets below edge level, by vertex ids, with their labels.
pub fn all_vertex_set_labels(
    state: &GameState,
    hier: &Hierarchy,
) -> HashMap<Vec<VertexId>, (usize, Elem)> {
    let mut r = RefLabels::new(state, hier);
    let mut out = HashMap::new();
    for level in 1..r.h() {
        let size = r.size_of(level);
        for set in subsets(state.num_vertices(), size) {
            if let Some(g) = r.label(&set) {
                let ids: Vec<VertexId> = set.iter().map(|&p| state.order()[p]).collect();
                out.insert(ids, (level, g));
            }
        }
    }
    for e in state.edges() {
        let pos = positions(state, &e.vertices);
        if let Some(g) = r.label(&pos) {
            out.insert(e.vertices.clone(), (r.h(), g));
        }
    }
    out
}

/// Replays `transcript` and counts labels that moved down or sideways
/// between consecutive rounds.
pub fn monotonicity_violations(transcript: &Transcript, hier: &Hierarchy) -> usize {
    let params = transcript.header.params().unwrap();
    let h = params.h();
    let mut state = GameState::new(params);
    let mut prev: HashMap<Vec<VertexId>, (usize, Elem)> = HashMap::new();
    let mut bad = 0;
    for r in &transcript.rounds {
        for &(_, pos) in &r.insert {
            state.insert_vertex(Some(pos)).unwrap();
        }
        let handle = state.play_edge(&r.edge).unwrap();
        state.assign_color(handle, r.color).unwrap();
        if state.is_over() {
            break;
        }
        let now = all_vertex_set_labels(&state, hier);
        for (set, &(level, old)) in &prev {
            let poset = hier.level(h - level + 1);
            match now.get(set) {
                Some(&(_, new)) if poset.leq(old, new) => {}
                _ => bad += 1,
            }
        }
        prev = now;
    }
    bad
}

/// Pairs where `y2` follows `y1` but `g(y2) <= g(y1)`.
pub fn follower_violations(state: &GameState, hier: &Hierarchy) -> usize {
    let mut r = RefLabels::new(state, hier);
    let mut bad = 0;
    for level in 1..=r.h() {
        let sets: Vec<_> = subsets(state.num_vertices(), r.size_of(level))
            .into_iter()
            .filter(|s| level < r.h() || r.is_edge(s))
            .collect();
        for y1 in &sets {
            for y2 in &sets {
                if r.follows(y1, y2) {
                    let (g1, g2) = (r.label(y1).unwrap(), r.label(y2).unwrap());
                    if r.poset(level).leq(g2, g1) {
                        bad += 1;
                    }
                }
            }
        }
    }
    bad
}

/// Compares the recursive relation with the instance characterization on
/// every pair below edge level. Returns `(pairs compared, mismatches)`.
pub fn instance_mismatches(state: &GameState, hier: &Hierarchy, cap: usize) -> (usize, usize) {
    let mut r = RefLabels::new(state, hier);
    let (mut checked, mut bad) = (0, 0);
    for level in 1..r.h() {
        let sets = subsets(state.num_vertices(), r.size_of(level));
        for y1 in &sets {
            for y2 in &sets {
                let rec = r.follows(y1, y2);
                if let Some(inst) = r.follows_by_instances(y1, y2, cap) {
                    checked += 1;
                    if inst != rec {
                        bad += 1;
                    }
                }
            }
        }
    }
    (checked, bad)
}
