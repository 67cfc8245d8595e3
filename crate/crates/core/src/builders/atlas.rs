//! Builder-side labels `g_j`, the `follows` relation and instance trees.
//!
//! Sets are lists of 0-based positions in increasing order. A set of size
//! `j' = k - (h-j)ℓ` sits at level `j` and carries a label in `Q_{h-j+1}`;
//! edges (level `h`) carry `Q_1` labels.

use std::collections::HashMap;

use crate::combin::combinations;
use crate::error::{Error, Result};
use crate::game::{GameState, VertexId};
use crate::posets::{Elem, Hierarchy, Poset};

pub type PosSet = Vec<usize>;

pub struct GAtlas<'a> {
    state: &'a GameState,
    hier: &'a Hierarchy,
    k: usize,
    l: usize,
    h: usize,
    memo: HashMap<PosSet, Option<Elem>>,
}

/// One node of an instance of `U(Y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceNode {
    pub label: Elem,
    pub level: usize,
    pub set: PosSet,
    pub children: Vec<InstanceNode>,
}

impl InstanceNode {
    pub fn leaf_count(&self) -> usize {
        if self.children.is_empty() {
            1
        } else {
            self.children.iter().map(InstanceNode::leaf_count).sum()
        }
    }

    /// Associated sets of all nodes at `level`, left to right.
    pub fn sets_at_level(&self, level: usize) -> Vec<PosSet> {
        let mut out = Vec::new();
        self.collect(level, &mut out);
        out
    }

    fn collect(&self, level: usize, out: &mut Vec<PosSet>) {
        if self.level == level {
            out.push(self.set.clone());
        } else if self.level < level {
            for c in &self.children {
                c.collect(level, out);
            }
        }
    }
}

pub fn union(a: &[usize], b: &[usize]) -> PosSet {
    let mut u: PosSet = a.iter().chain(b).copied().collect();
    u.sort_unstable();
    u.dedup();
    u
}

impl<'a> GAtlas<'a> {
    pub fn new(state: &'a GameState, hier: &'a Hierarchy) -> Result<Self> {
        let p = state.params();
        let h = p.h();
        if h < 2 {
            return Err(Error::Precondition("g-labels need l < k".into()));
        }
        if hier.depth() < h {
            return Err(Error::Precondition(format!(
                "hierarchy has {} levels, labels need {h}",
                hier.depth()
            )));
        }
        if hier.spec().targets() != p.targets() {
            return Err(Error::Precondition("hierarchy built for other targets".into()));
        }
        Ok(Self {
            state,
            hier,
            k: p.k(),
            l: p.l(),
            h,
            memo: HashMap::new(),
        })
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn state(&self) -> &GameState {
        self.state
    }

    /// Level of sets with `size` vertices, if such sets are labeled.
    pub fn level_of(&self, size: usize) -> Option<usize> {
        if size == 0 || size > self.k || (self.k - size) % self.l != 0 {
            return None;
        }
        let back = (self.k - size) / self.l;
        (back < self.h).then(|| self.h - back)
    }

    pub fn size_of(&self, level: usize) -> usize {
        self.k - (self.h - level) * self.l
    }

    /// The poset holding level-`j` labels, `Q_{h-j+1}`.
    pub fn poset(&self, level: usize) -> &Poset {
        self.hier.level(self.h - level + 1)
    }

    fn ids(&self, set: &[usize]) -> Option<Vec<VertexId>> {
        set.iter().map(|&p| self.state.vertex_at(p)).collect()
    }

    pub fn is_edge(&self, set: &[usize]) -> bool {
        self.ids(set).is_some_and(|ids| self.state.contains_edge(&ids))
    }

    fn edge_label(&self, set: &[usize]) -> Option<Elem> {
        let rec = self.state.edge(&self.ids(set)?)?;
        let top = self.state.params().target(rec.color) - 1;
        self.hier.level(1).chain_element(rec.color, rec.path_len.min(top))
    }

    /// Sets `Z` with `Z^+ = set`, in lexicographic order.
    pub fn precursors(&self, set: &[usize]) -> Vec<PosSet> {
        let Some(&first) = set.first() else {
            return Vec::new();
        };
        combinations(first, self.l)
            .into_iter()
            .map(|mut z| {
                z.extend_from_slice(set);
                z
            })
            .collect()
    }

    /// `g_j(set)`; `None` for a k-set that is not an edge.
    pub fn label(&mut self, set: &[usize]) -> Result<Option<Elem>> {
        let level = self.level_of(set.len()).ok_or_else(|| {
            Error::Precondition(format!("sets of size {} carry no label", set.len()))
        })?;
        if level == self.h {
            return Ok(self.edge_label(set));
        }
        if let Some(&cached) = self.memo.get(set) {
            return Ok(cached);
        }
        let mut gens = Vec::new();
        for z in self.precursors(set) {
            if let Some(g) = self.label(&z)? {
                gens.push(g);
            }
        }
        let elem = self.hier.generate(self.h - level, gens)?;
        self.memo.insert(set.to_vec(), Some(elem));
        Ok(Some(elem))
    }

    fn known_label(&mut self, set: &[usize]) -> Result<Elem> {
        self.label(set)?
            .ok_or_else(|| Error::Inconsistency(format!("set {set:?} has no label")))
    }

    /// Maximal elements of the down-set that is the label of `set` (level < h).
    pub fn maximal_children(&mut self, set: &[usize]) -> Result<Vec<Elem>> {
        let level = self.level_of(set.len()).unwrap_or(self.h);
        let label = self.known_label(set)?;
        let members = self.poset(level).members(label).ok_or_else(|| {
            Error::Inconsistency(format!("label of {set:?} is not a down-set"))
        })?;
        Ok(self.poset(level + 1).maximal_elements(&members))
    }

    /// The `ℓ` vertices that `y2` adds after `y1`, when the pair can follow.
    ///
    /// For sets of at most `ℓ` vertices the precursor of `y2` that must follow
    /// a precursor of `y1` is padded with the vertices just left of `y2`.
    pub fn tail(&self, y1: &[usize], y2: &[usize]) -> Option<PosSet> {
        let size = y1.len();
        if size != y2.len() || size == 0 {
            return None;
        }
        if size > self.l {
            if y1[self.l..] != y2[..size - self.l] {
                return None;
            }
            return Some(y2[size - self.l..].to_vec());
        }
        let need = self.l - size;
        let first = y2[0];
        if first < need {
            return None;
        }
        let tail: PosSet = (first - need..first).chain(y2.iter().copied()).collect();
        (tail[0] > y1[size - 1]).then_some(tail)
    }

    /// Whether `y2` follows `y1`.
    pub fn follows(&mut self, y1: &[usize], y2: &[usize]) -> Result<bool> {
        if y1.len() == self.k {
            let k = self.k;
            let l = self.l;
            return Ok(self.is_edge(y1)
                && self.is_edge(y2)
                && y1[l..] == y2[..k - l]
                && (l < k || y1[k - 1] < y2[0]));
        }
        match self.tail(y1, y2) {
            Some(tail) => self.follows_tail(y1, &tail),
            None => Ok(false),
        }
    }

    /// Whether the set `y^+ ∪ tail` follows `y`.
    pub fn follows_tail(&mut self, y: &[usize], tail: &[usize]) -> Result<bool> {
        if y.len() + self.l == self.k {
            return Ok(self.is_edge(&union(y, tail)));
        }
        for w in self.maximal_children(y)? {
            let mut found = false;
            for z in self.precursors(y) {
                if self.label(&z)? == Some(w) && self.follows_tail(&z, tail)? {
                    found = true;
                    break;
                }
            }
            if !found {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// An instance of `U(set)`; each node takes the lexicographically least
    /// precursor carrying its label.
    pub fn instance(&mut self, set: &[usize]) -> Result<InstanceNode> {
        let level = self
            .level_of(set.len())
            .ok_or_else(|| Error::Precondition(format!("no level for {set:?}")))?;
        let label = self.known_label(set)?;
        let mut node = InstanceNode {
            label,
            level,
            set: set.to_vec(),
            children: Vec::new(),
        };
        if level == self.h {
            return Ok(node);
        }
        let precursors = self.precursors(set);
        for w in self.maximal_children(set)? {
            let mut chosen = None;
            for z in &precursors {
                if self.label(z)? == Some(w) {
                    chosen = Some(z.clone());
                    break;
                }
            }
            let z = chosen.ok_or_else(|| {
                Error::Inconsistency(format!("no precursor of {set:?} carries label {w}"))
            })?;
            node.children.push(self.instance(&z)?);
        }
        Ok(node)
    }

    /// k-sets that must be edges for `tail` to make the pair follow, given an
    /// instance rooted at level <= h-1.
    pub fn required_edges(&self, instance: &InstanceNode, tail: &[usize]) -> Vec<PosSet> {
        let mut out: Vec<PosSet> = instance
            .sets_at_level(self.h - 1)
            .iter()
            .map(|z| union(z, tail))
            .collect();
        out.sort();
        out.dedup();
        out
    }
}
