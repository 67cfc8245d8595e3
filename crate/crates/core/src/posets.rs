//! The poset hierarchy `Q_1, Q_2, ...` behind every strategy.
//!
//! `Q_1` is a disjoint union of chains, one per color. Each later level is
//! the lattice of all down-sets of the previous one, ordered by inclusion.
//! Elements of every level carry a stable index: `Q_1` is indexed chain by
//! chain from the bottom up, and higher levels are indexed by
//! `(rank, member list)` where the rank of a down-set is its size. Every
//! tie-break in the crate keys off these indices.

use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of an element inside one [`Poset`].
pub type Elem = usize;

/// Default cap on the number of down-sets [`downset_lattice`] will enumerate.
pub const DEFAULT_ELEMENT_BUDGET: usize = 1_000_000;

/// Posets smaller than this keep a dense comparability matrix.
pub const DENSE_LIMIT: usize = 4096;

/// Chain lengths of `Q_1`: entry `i` is `m_i - 1` for color `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChainSpec {
    chain_lengths: Vec<usize>,
}

impl ChainSpec {
    pub fn new(chain_lengths: Vec<usize>) -> Result<Self> {
        if chain_lengths.len() < 2 {
            return Err(Error::InvalidParams(format!(
                "need at least 2 colors, got {}",
                chain_lengths.len()
            )));
        }
        if let Some(i) = chain_lengths.iter().position(|&len| len == 0) {
            return Err(Error::InvalidParams(format!(
                "chain {i} is empty (forbidden length m_{i} must be at least 2)"
            )));
        }
        Ok(Self { chain_lengths })
    }

    /// Chain spec from the forbidden path lengths `m_i` (edges per color).
    pub fn from_targets(targets: &[usize]) -> Result<Self> {
        if let Some(i) = targets.iter().position(|&m| m < 2) {
            return Err(Error::InvalidParams(format!(
                "target m_{i} = {} is below 2",
                targets[i]
            )));
        }
        Self::new(targets.iter().map(|m| m - 1).collect())
    }

    pub fn diagonal(m: usize, t: usize) -> Result<Self> {
        Self::from_targets(&vec![m; t])
    }

    pub fn t(&self) -> usize {
        self.chain_lengths.len()
    }

    pub fn chain_lengths(&self) -> &[usize] {
        &self.chain_lengths
    }

    /// The targets `m_i = chain length + 1`.
    pub fn targets(&self) -> Vec<usize> {
        self.chain_lengths.iter().map(|len| len + 1).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        self.chain_lengths.windows(2).all(|w| w[0] == w[1])
    }

    /// `|Q_1|`.
    pub fn total(&self) -> usize {
        self.chain_lengths.iter().sum()
    }
}

/// A down-set of some host poset, stored as a membership bitset.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DownSet(FixedBitSet);

impl DownSet {
    pub fn empty(host_len: usize) -> Self {
        DownSet(FixedBitSet::with_capacity(host_len))
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.0.contains(x)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn members(&self) -> impl Iterator<Item = Elem> + '_ {
        self.0.ones()
    }

    pub fn as_bitset(&self) -> &FixedBitSet {
        &self.0
    }

    pub fn is_subset(&self, other: &DownSet) -> bool {
        self.0.is_subset(&other.0)
    }
}

#[derive(Debug, Clone)]
enum Relation {
    /// `up[x]` holds every `y` with `x <= y`.
    Dense(Vec<FixedBitSet>),
    /// Comparisons answered from the element representation.
    Implicit,
}

/// One level of the hierarchy. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Poset {
    level: usize,
    /// `(chain, height)` per element; level 1 only. Heights start at 1.
    chain_meta: Vec<(usize, usize)>,
    chain_offsets: Vec<usize>,
    /// Member sets over the parent poset; level >= 2 only.
    members: Vec<FixedBitSet>,
    parent_len: usize,
    index: HashMap<FixedBitSet, Elem>,
    ranks: Vec<usize>,
    relation: Relation,
    /// Principal ideals `{ y : y <= x }`.
    below: Vec<FixedBitSet>,
}

/// Builds `Q_1`: `t` disjoint chains, chain `i` with `m_i - 1` elements.
pub fn build_q1(spec: &ChainSpec) -> Poset {
    let mut chain_meta = Vec::with_capacity(spec.total());
    let mut chain_offsets = Vec::with_capacity(spec.t());
    for (chain, &len) in spec.chain_lengths().iter().enumerate() {
        chain_offsets.push(chain_meta.len());
        for height in 1..=len {
            chain_meta.push((chain, height));
        }
    }
    let ranks = chain_meta.iter().map(|&(_, h)| h - 1).collect();
    let mut poset = Poset {
        level: 1,
        chain_meta,
        chain_offsets,
        members: Vec::new(),
        parent_len: 0,
        index: HashMap::new(),
        ranks,
        relation: Relation::Implicit,
        below: Vec::new(),
    };
    poset.finish_relation();
    poset
}

/// The lattice of all down-sets of `p`, ordered by inclusion.
///
/// Fails with [`Error::BudgetExceeded`] once more than `budget` down-sets
/// have been found.
pub fn downset_lattice(p: &Poset, budget: usize) -> Result<Poset> {
    let n = p.len();
    let mut found: Vec<FixedBitSet> = Vec::new();
    let mut chosen_closure = FixedBitSet::with_capacity(n);
    let mut blocked = FixedBitSet::with_capacity(n);
    // comparable[x] = below(x) | above(x)
    let comparable: Vec<FixedBitSet> = (0..n)
        .map(|x| {
            let mut c = p.below[x].clone();
            for y in 0..n {
                if p.leq(x, y) {
                    c.insert(y);
                }
            }
            c
        })
        .collect();
    enumerate_antichains(
        p,
        &comparable,
        0,
        &mut chosen_closure,
        &mut blocked,
        &mut found,
        budget,
    )?;

    found.sort_by(|a, b| {
        a.count_ones(..)
            .cmp(&b.count_ones(..))
            .then_with(|| a.ones().cmp(b.ones()))
    });
    let ranks = found.iter().map(|s| s.count_ones(..)).collect();
    let index = found
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect();
    let mut poset = Poset {
        level: p.level + 1,
        chain_meta: Vec::new(),
        chain_offsets: Vec::new(),
        members: found,
        parent_len: n,
        index,
        ranks,
        relation: Relation::Implicit,
        below: Vec::new(),
    };
    poset.finish_relation();
    Ok(poset)
}

/// DFS over antichains; every antichain generates exactly one down-set.
fn enumerate_antichains(
    p: &Poset,
    comparable: &[FixedBitSet],
    start: Elem,
    closure: &mut FixedBitSet,
    blocked: &mut FixedBitSet,
    out: &mut Vec<FixedBitSet>,
    budget: usize,
) -> Result<()> {
    if out.len() >= budget {
        return Err(Error::BudgetExceeded {
            what: format!("down-set count of level {}", p.level + 1),
            limit: budget as u64,
        });
    }
    out.push(closure.clone());
    for x in start..p.len() {
        if blocked.contains(x) {
            continue;
        }
        let saved_closure = closure.clone();
        let saved_blocked = blocked.clone();
        closure.union_with(&p.below[x]);
        blocked.union_with(&comparable[x]);
        enumerate_antichains(p, comparable, x + 1, closure, blocked, out, budget)?;
        *closure = saved_closure;
        *blocked = saved_blocked;
    }
    Ok(())
}

impl Poset {
    fn finish_relation(&mut self) {
        let n = self.len();
        if n < DENSE_LIMIT {
            let mut up = vec![FixedBitSet::with_capacity(n); n];
            for (x, row) in up.iter_mut().enumerate() {
                for y in 0..n {
                    if self.leq_implicit(x, y) {
                        row.insert(y);
                    }
                }
            }
            self.relation = Relation::Dense(up);
        }
        let below = (0..n)
            .map(|x| {
                let mut b = FixedBitSet::with_capacity(n);
                for y in 0..n {
                    if self.leq(y, x) {
                        b.insert(y);
                    }
                }
                b
            })
            .collect();
        self.below = below;
    }

    fn leq_implicit(&self, x: Elem, y: Elem) -> bool {
        if self.level == 1 {
            let (cx, hx) = self.chain_meta[x];
            let (cy, hy) = self.chain_meta[y];
            cx == cy && hx <= hy
        } else {
            self.members[x].is_subset(&self.members[y])
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.relation, Relation::Dense(_))
    }

    pub fn leq(&self, x: Elem, y: Elem) -> bool {
        match &self.relation {
            Relation::Dense(up) => up[x].contains(y),
            Relation::Implicit => self.leq_implicit(x, y),
        }
    }

    pub fn lt(&self, x: Elem, y: Elem) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn comparable(&self, x: Elem, y: Elem) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// Size of the down-set for level >= 2; `height - 1` on `Q_1`.
    pub fn rank(&self, x: Elem) -> usize {
        self.ranks[x]
    }

    pub fn max_rank(&self) -> usize {
        self.ranks.iter().copied().max().unwrap_or(0)
    }

    /// Principal ideal of `x`.
    pub fn principal_ideal(&self, x: Elem) -> DownSet {
        DownSet(self.below[x].clone())
    }

    /// `(chain, height)` of a `Q_1` element.
    pub fn chain_of(&self, x: Elem) -> Option<(usize, usize)> {
        self.chain_meta.get(x).copied()
    }

    /// The `Q_1` element at `height` (1-based) on `chain`.
    pub fn chain_element(&self, chain: usize, height: usize) -> Option<Elem> {
        let offset = *self.chain_offsets.get(chain)?;
        let len = self
            .chain_offsets
            .get(chain + 1)
            .copied()
            .unwrap_or(self.chain_meta.len())
            - offset;
        (1..=len).contains(&height).then(|| offset + height - 1)
    }

    /// Member set of a level >= 2 element, as a down-set of the parent.
    pub fn members(&self, x: Elem) -> Option<DownSet> {
        self.members.get(x).map(|m| DownSet(m.clone()))
    }

    pub fn members_ref(&self, x: Elem) -> Option<&FixedBitSet> {
        self.members.get(x)
    }

    /// Element of this level whose member set is `set` (a down-set of the parent).
    pub fn index_of(&self, set: &DownSet) -> Option<Elem> {
        if self.level == 1 {
            return None;
        }
        let mut key = set.0.clone();
        key.grow(self.parent_len);
        self.index.get(&key).copied()
    }

    /// True iff `set` is downward closed here.
    pub fn is_downset(&self, set: &FixedBitSet) -> bool {
        set.ones().all(|x| self.below[x].is_subset(set))
    }

    /// `{ x : x <= g for some g in gens }`.
    pub fn downset_generated<I: IntoIterator<Item = Elem>>(&self, gens: I) -> DownSet {
        let mut set = FixedBitSet::with_capacity(self.len());
        for g in gens {
            set.union_with(&self.below[g]);
        }
        DownSet(set)
    }

    /// Maximal members of a down-set, ascending by index.
    pub fn maximal_elements(&self, set: &DownSet) -> Vec<Elem> {
        set.members()
            .filter(|&x| !set.members().any(|y| self.lt(x, y)))
            .collect()
    }

    /// The unique maximum (level >= 2 only).
    pub fn top(&self) -> Option<Elem> {
        (self.level >= 2).then(|| self.len() - 1)
    }

    /// The unique minimum, `∅` (level >= 2 only).
    pub fn bottom(&self) -> Option<Elem> {
        (self.level >= 2).then_some(0)
    }

    /// `V^i`: the unique element of rank `i`, for `0 <= i <= level - 2`.
    pub fn bottom_chain(&self, i: usize) -> Result<Elem> {
        if self.level < 2 || i + 2 > self.level {
            return Err(Error::Precondition(format!(
                "V^{i} is only defined for i <= level - 2 = {}",
                self.level as isize - 2
            )));
        }
        let mut at_rank = (0..self.len()).filter(|&x| self.ranks[x] == i);
        match (at_rank.next(), at_rank.next()) {
            (Some(x), None) => Ok(x),
            _ => Err(Error::Inconsistency(format!(
                "rank {i} of level {} is not a single element",
                self.level
            ))),
        }
    }

    /// Elements sorted by rank, then index.
    pub fn linear_extension(&self) -> Vec<Elem> {
        let mut order: Vec<Elem> = (0..self.len()).collect();
        order.sort_by_key(|&x| (self.ranks[x], x));
        order
    }

    /// Size of a largest antichain (Dilworth via bipartite matching).
    pub fn width(&self) -> usize {
        let all: Vec<Elem> = (0..self.len()).collect();
        self.len() - self.matching_size(&all)
    }

    /// A maximum antichain; the lexicographically least one by index.
    pub fn max_antichain(&self) -> Vec<Elem> {
        let width = self.width();
        let mut chosen = Vec::with_capacity(width);
        let mut candidates: Vec<Elem> = (0..self.len()).collect();
        for x in 0..self.len() {
            if chosen.len() == width {
                break;
            }
            if !candidates.contains(&x) {
                continue;
            }
            let rest: Vec<Elem> = candidates
                .iter()
                .copied()
                .filter(|&y| y != x && !self.comparable(x, y))
                .collect();
            let need = width - chosen.len() - 1;
            if rest.len() >= need && rest.len() - self.matching_size(&rest) == need {
                chosen.push(x);
                candidates = rest;
            }
        }
        chosen
    }

    /// Maximum matching in the strict-order bipartite graph on `subset`
    /// (Hopcroft–Karp). `|subset| - matching` is the width of the subposet.
    fn matching_size(&self, subset: &[Elem]) -> usize {
        let n = subset.len();
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| self.lt(subset[i], subset[j]))
                    .collect()
            })
            .collect();
        hopcroft_karp(n, n, &adj)
    }

    pub fn dump(&self) -> PosetDump {
        PosetDump {
            level: self.level,
            size: self.len(),
            elements: (0..self.len())
                .map(|x| DumpElement {
                    index: x,
                    rank: self.ranks[x],
                    members: self
                        .members
                        .get(x)
                        .map(|m| m.ones().collect())
                        .unwrap_or_default(),
                    chain: self.chain_meta.get(x).map(|c| c.0),
                    height: self.chain_meta.get(x).map(|c| c.1),
                })
                .collect(),
        }
    }
}

fn hopcroft_karp(left: usize, right: usize, adj: &[Vec<usize>]) -> usize {
    const NIL: usize = usize::MAX;
    let mut match_l = vec![NIL; left];
    let mut match_r = vec![NIL; right];
    let mut dist = vec![0usize; left];
    let mut matched = 0;
    loop {
        // BFS layering from free left vertices.
        let mut queue = VecDeque::new();
        for u in 0..left {
            if match_l[u] == NIL {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_r[v];
                if w == NIL {
                    found = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            return matched;
        }
        fn augment(
            u: usize,
            adj: &[Vec<usize>],
            match_l: &mut [usize],
            match_r: &mut [usize],
            dist: &mut [usize],
        ) -> bool {
            for &v in &adj[u] {
                let w = match_r[v];
                if w == usize::MAX
                    || (dist[w] == dist[u] + 1 && augment(w, adj, match_l, match_r, dist))
                {
                    match_l[u] = v;
                    match_r[v] = u;
                    return true;
                }
            }
            dist[u] = usize::MAX;
            false
        }
        for u in 0..left {
            if match_l[u] == NIL && augment(u, adj, &mut match_l, &mut match_r, &mut dist) {
                matched += 1;
            }
        }
    }
}

/// JSON dump of a poset for debugging and golden files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetDump {
    pub level: usize,
    pub size: usize,
    pub elements: Vec<DumpElement>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DumpElement {
    pub index: usize,
    pub rank: usize,
    pub members: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<usize>,
}

/// `Q_1, ..., Q_depth` for one chain spec.
#[derive(Debug, Clone)]
pub struct Hierarchy {
    spec: ChainSpec,
    levels: Vec<Poset>,
}

impl Hierarchy {
    pub fn build(spec: &ChainSpec, depth: usize) -> Result<Self> {
        Self::build_with_budget(spec, depth, DEFAULT_ELEMENT_BUDGET)
    }

    pub fn build_with_budget(spec: &ChainSpec, depth: usize, budget: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidParams("hierarchy depth must be >= 1".into()));
        }
        let mut levels = vec![build_q1(spec)];
        while levels.len() < depth {
            let next = downset_lattice(levels.last().unwrap(), budget)?;
            levels.push(next);
        }
        Ok(Self {
            spec: spec.clone(),
            levels,
        })
    }

    pub fn spec(&self) -> &ChainSpec {
        &self.spec
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// `Q_j`, 1-based.
    pub fn level(&self, j: usize) -> &Poset {
        &self.levels[j - 1]
    }

    /// `q_j = |Q_j|`.
    pub fn q(&self, j: usize) -> usize {
        self.levels[j - 1].len()
    }

    /// `Q_{j+1}` element equal to the down-set of `Q_j` generated by `gens`.
    pub fn generate(&self, j: usize, gens: impl IntoIterator<Item = Elem>) -> Result<Elem> {
        let set = self.level(j).downset_generated(gens);
        self.level(j + 1).index_of(&set).ok_or_else(|| {
            Error::Inconsistency(format!("generated down-set missing from Q_{}", j + 1))
        })
    }
}
