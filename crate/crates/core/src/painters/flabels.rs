use std::collections::HashMap;

use crate::combin::combinations;
use crate::error::{Error, Result};
use crate::game::{BuilderMode, Color, GameParams, GameState, VertexId};
use crate::oracle::Coloring;
use crate::posets::{ChainSpec, Elem, Hierarchy, Poset};

use super::{GreedyPainter, PaintDecision, Painter};

/// How vertices get their names from `Q_h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Naming {
    /// Distinct elements of a maximum antichain, in order of first use.
    /// Safe against insertions anywhere.
    Antichain,
    /// All of `Q_h` in linear-extension order, one name per block of `ℓ`
    /// consecutive positions after the first `s - 1`. Needs a vertex order
    /// that never changes under insertion.
    Positional,
}

/// Painter-side labels `f_j`, fixed once computed.
#[derive(Debug, Clone)]
pub struct FAtlas {
    k: usize,
    l: usize,
    h: usize,
    s: usize,
    hier: Hierarchy,
    naming: Naming,
    supply: Vec<Elem>,
    names: HashMap<VertexId, Elem>,
    labels: HashMap<Vec<VertexId>, Elem>,
}

impl FAtlas {
    pub fn new(params: &GameParams, naming: Naming) -> Result<Self> {
        let spec = ChainSpec::from_targets(params.targets())?;
        let hier = Hierarchy::build(&spec, params.h())?;
        let top = hier.level(params.h());
        let supply = match naming {
            Naming::Antichain => top.max_antichain(),
            Naming::Positional => top.linear_extension(),
        };
        Self::with_supply(params, hier, naming, supply)
    }

    /// Names drawn from `supply` (elements of `Q_h`) in the given order.
    pub fn with_supply(
        params: &GameParams,
        hier: Hierarchy,
        naming: Naming,
        supply: Vec<Elem>,
    ) -> Result<Self> {
        let h = params.h();
        if hier.depth() < h || hier.spec().targets() != params.targets() {
            return Err(Error::Precondition("hierarchy does not match the game".into()));
        }
        Ok(Self {
            k: params.k(),
            l: params.l(),
            h,
            s: params.s(),
            hier,
            naming,
            supply,
            names: HashMap::new(),
            labels: HashMap::new(),
        })
    }

    pub fn supply(&self) -> usize {
        self.supply.len()
    }

    pub fn naming(&self) -> Naming {
        self.naming
    }

    pub fn hierarchy(&self) -> &Hierarchy {
        &self.hier
    }

    fn level_of(&self, size: usize) -> usize {
        self.h - (self.k - size) / self.l
    }

    /// Poset holding labels of sets at `level`, `Q_{h-level+1}`.
    pub fn poset(&self, level: usize) -> &Poset {
        self.hier.level(self.h - level + 1)
    }

    /// Names every vertex of `edge` that has none yet, or fails without
    /// naming any when the supply would run out.
    pub fn ensure_named(&mut self, state: &GameState, edge: &[VertexId]) -> Result<()> {
        match self.naming {
            Naming::Antichain => {
                let mut fresh: Vec<VertexId> = edge
                    .iter()
                    .copied()
                    .filter(|v| !self.names.contains_key(v))
                    .collect();
                fresh.sort_unstable();
                if self.names.len() + fresh.len() > self.supply.len() {
                    return Err(Error::SupplyExhausted {
                        supply: self.supply.len(),
                    });
                }
                for v in fresh {
                    let name = self.supply[self.names.len()];
                    self.names.insert(v, name);
                }
            }
            Naming::Positional => {
                for &v in edge {
                    if self.names.contains_key(&v) {
                        continue;
                    }
                    let pos = state.position(v).ok_or(Error::UnknownVertex(v))?;
                    if pos + 1 < self.s {
                        // Never the rightmost vertex of a labeled set.
                        continue;
                    }
                    let block = (pos + 1 - self.s) / self.l;
                    let name = *self.supply.get(block).ok_or(Error::SupplyExhausted {
                        supply: self.supply.len(),
                    })?;
                    self.names.insert(v, name);
                }
            }
        }
        Ok(())
    }

    pub fn name_of(&self, v: VertexId) -> Option<Elem> {
        self.names.get(&v).copied()
    }

    /// `f_j(set)` for a set of named vertices in left-to-right order.
    pub fn label(&mut self, set: &[VertexId]) -> Result<Elem> {
        if let Some(&f) = self.labels.get(set) {
            return Ok(f);
        }
        let size = set.len();
        if size < self.s || (size - self.s) % self.l != 0 || size > self.k {
            return Err(Error::Precondition(format!("sets of size {size} carry no label")));
        }
        let f = if size == self.s {
            let v = set[size - 1];
            self.name_of(v)
                .ok_or_else(|| Error::Precondition(format!("vertex {v} has no name")))?
        } else {
            let lower = self.label(&set[..size - self.l])?;
            let upper = self.label(&set[self.l..])?;
            let level = self.level_of(size - self.l);
            let host = self.poset(level);
            let up = host.members_ref(upper).expect("level >= 2 element");
            let down = host.members_ref(lower).expect("level >= 2 element");
            up.difference(down).next().ok_or_else(|| {
                Error::Inconsistency(format!(
                    "f-label of {:?} is contained in that of {:?}",
                    &set[self.l..],
                    &set[..size - self.l]
                ))
            })?
        };
        self.labels.insert(set.to_vec(), f);
        Ok(f)
    }

    /// Color of `edge`: the chain holding its `Q_1` label.
    pub fn color_of(&mut self, edge: &[VertexId]) -> Result<Color> {
        let f = self.label(edge)?;
        self.hier
            .level(1)
            .chain_of(f)
            .map(|(c, _)| c)
            .ok_or_else(|| Error::Inconsistency(format!("edge label {f} is not in Q_1")))
    }

    /// All labeled sets with their labels.
    pub fn labeled(&self) -> impl Iterator<Item = (&Vec<VertexId>, &Elem)> {
        self.labels.iter()
    }

    /// Checks `f(Y1) ≱ f(Y2)` for every labeled pair that can still be the
    /// two ends `Y^-`, `Y^+` of one set.
    pub fn check_incomparability(&self, state: &GameState) -> Result<()> {
        if self.naming == Naming::Antichain {
            let names: Vec<Elem> = self.names.values().copied().collect();
            let top = self.hier.level(self.h);
            for (i, &a) in names.iter().enumerate() {
                for &b in &names[i + 1..] {
                    if top.comparable(a, b) {
                        return Err(Error::Inconsistency(format!(
                            "vertex names {a} and {b} are comparable"
                        )));
                    }
                }
            }
        }
        let mut by_size: HashMap<usize, Vec<(&Vec<VertexId>, Elem)>> = HashMap::new();
        for (set, &f) in &self.labels {
            by_size.entry(set.len()).or_default().push((set, f));
        }
        let pos = |v: VertexId| state.position(v).unwrap_or(usize::MAX);
        for (size, sets) in by_size {
            let level = self.level_of(size);
            let host = self.poset(level);
            let violation = |a: &[VertexId], fa: Elem, b: &[VertexId], fb: Elem| {
                Error::Inconsistency(format!(
                    "f({a:?}) = {fa} is above f({b:?}) = {fb} although {b:?} can follow {a:?}"
                ))
            };
            if size > self.l {
                let mut by_prefix: HashMap<&[VertexId], Vec<(&Vec<VertexId>, Elem)>> =
                    HashMap::new();
                for &(set, f) in &sets {
                    by_prefix.entry(&set[..size - self.l]).or_default().push((set, f));
                }
                for &(a, fa) in &sets {
                    for &(b, fb) in by_prefix.get(&a[self.l..]).into_iter().flatten() {
                        if host.leq(fb, fa) {
                            return Err(violation(a, fa, b, fb));
                        }
                    }
                }
            } else {
                let gap = self.l - size;
                for &(a, fa) in &sets {
                    for &(b, fb) in &sets {
                        let (end_a, start_b) = (pos(a[size - 1]), pos(b[0]));
                        if end_a >= start_b {
                            continue;
                        }
                        let possible = match self.naming {
                            Naming::Antichain => true,
                            Naming::Positional => start_b - end_a > gap,
                        };
                        if possible && host.leq(fb, fa) {
                            return Err(violation(a, fa, b, fb));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The general Painter: colors each edge by the chain of its `f_h` label,
/// handing over to the greedy painter once names run out.
#[derive(Debug, Clone)]
pub struct PaperPainter {
    atlas: FAtlas,
    delegated_since: Option<usize>,
}

impl PaperPainter {
    pub fn new(params: &GameParams, naming: Naming) -> Result<Self> {
        if naming == Naming::Positional && params.mode() == BuilderMode::FreeInsertion {
            return Err(Error::InvalidParams(
                "positional names need append-only play or a fixed vertex set".into(),
            ));
        }
        Ok(Self::from_atlas(FAtlas::new(params, naming)?))
    }

    pub fn from_atlas(atlas: FAtlas) -> Self {
        Self {
            atlas,
            delegated_since: None,
        }
    }

    pub fn atlas(&self) -> &FAtlas {
        &self.atlas
    }
}

impl Painter for PaperPainter {
    fn name(&self) -> String {
        match self.atlas.naming {
            Naming::Antichain => "paper-general".into(),
            Naming::Positional => "paper-general:positional".into(),
        }
    }

    fn color(&mut self, state: &GameState, edge: &[VertexId]) -> Result<PaintDecision> {
        if self.delegated_since.is_none() {
            match self.atlas.ensure_named(state, edge) {
                Ok(()) => return Ok(PaintDecision::own(self.atlas.color_of(edge)?)),
                Err(Error::SupplyExhausted { .. }) => {
                    self.delegated_since = Some(state.round() + 1);
                }
                Err(e) => return Err(e),
            }
        }
        Ok(PaintDecision {
            color: GreedyPainter::pick(state, edge),
            delegated: true,
        })
    }

    fn check_invariants(&self, state: &GameState) -> Result<()> {
        self.atlas.check_incomparability(state)
    }

    fn delegated_since(&self) -> Option<usize> {
        self.delegated_since
    }
}

/// Colors every increasing k-set of `n` fixed vertices by positional f-labels.
/// Valid (no monochromatic path) for `n <= ℓ q_h + s - 1`.
pub fn offline_witness(params: &GameParams, n: usize) -> Result<Coloring> {
    let fixed = params.clone().with_mode(BuilderMode::FixedVertexSet(n));
    let mut atlas = FAtlas::new(&fixed, Naming::Positional)?;
    let limit = params.l() * atlas.supply() + params.s() - 1;
    if n > limit {
        return Err(Error::Precondition(format!(
            "witness is only guaranteed on at most {limit} vertices, asked for {n}"
        )));
    }
    let state = GameState::new(fixed);
    let k = params.k();
    let mut edges = Vec::new();
    for c in combinations(n, k) {
        let ids: Vec<VertexId> = c.iter().map(|&p| p as VertexId + 1).collect();
        atlas.ensure_named(&state, &ids)?;
        edges.push((c, atlas.color_of(&ids)?));
    }
    Coloring::new(params.clone(), n, edges)
}
