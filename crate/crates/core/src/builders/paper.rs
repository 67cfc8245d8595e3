use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::game::{BuilderMode, GameParams, GameState, VertexId};
use crate::posets::{ChainSpec, Hierarchy};

use super::atlas::{union, GAtlas, PosSet};
use super::{Builder, BuilderMove};

/// The label-raising Builder for any `k` and shift `ℓ`, on `ℓ q_h + s` fixed
/// vertices. With `ℓ = k` it plays disjoint intervals.
#[derive(Debug, Clone)]
pub struct PaperBuilder {
    k: usize,
    l: usize,
    h: usize,
    s: usize,
    n: usize,
    hier: Hierarchy,
    queue: VecDeque<PosSet>,
    augmentations: usize,
}

impl PaperBuilder {
    pub fn new(params: &GameParams) -> Result<Self> {
        let spec = ChainSpec::from_targets(params.targets())?;
        let h = params.h();
        let hier = Hierarchy::build(&spec, h)?;
        Self::with_hierarchy(params, hier)
    }

    pub fn with_hierarchy(params: &GameParams, hier: Hierarchy) -> Result<Self> {
        let h = params.h();
        if hier.depth() < h || hier.spec().targets() != params.targets() {
            return Err(Error::Precondition("hierarchy does not match the game".into()));
        }
        let s = params.s();
        let n = params.l() * hier.q(h) + s;
        Ok(Self {
            k: params.k(),
            l: params.l(),
            h,
            s,
            n,
            hier,
            queue: VecDeque::new(),
            augmentations: 0,
        })
    }

    pub fn arena_size(&self) -> usize {
        self.n
    }

    pub fn hierarchy(&self) -> &Hierarchy {
        &self.hier
    }

    /// Number of label-raising batches started so far.
    pub fn augmentations(&self) -> usize {
        self.augmentations
    }

    fn to_ids(state: &GameState, set: &[usize]) -> Vec<VertexId> {
        set.iter()
            .map(|&p| state.vertex_at(p).expect("position in arena"))
            .collect()
    }

    fn interval_move(&self, state: &GameState) -> Result<BuilderMove> {
        let i = state.num_edges();
        if i > self.hier.q(1) {
            return Err(Error::Inconsistency(format!(
                "{i} disjoint intervals played without a repeated color"
            )));
        }
        let set: PosSet = (i * self.k..(i + 1) * self.k).collect();
        Ok(BuilderMove::edge(Self::to_ids(state, &set)))
    }

    /// The winning edge, when some basic `s`-set away from the right end has the top label.
    fn winning_edge(&self, atlas: &mut GAtlas) -> Result<Option<PosSet>> {
        let top_h = self.hier.level(self.h).top().expect("h >= 2");
        let last = self.n - self.l;
        for i in 0..=last - self.s {
            let start: PosSet = (i..i + self.s).collect();
            if atlas.label(&start)? != Some(top_h) {
                continue;
            }
            let mut y = start;
            let mut level = 1;
            while level < self.h - 1 {
                let want = atlas.poset(level + 1).top().expect("level < h");
                let mut next = None;
                for z in atlas.precursors(&y) {
                    if atlas.label(&z)? == Some(want) {
                        next = Some(z);
                        break;
                    }
                }
                y = next.ok_or_else(|| {
                    Error::Inconsistency(format!("top label of {y:?} has no top precursor"))
                })?;
                level += 1;
            }
            let tail: PosSet = (last..self.n).collect();
            return Ok(Some(union(&y, &tail)));
        }
        Ok(None)
    }

    /// Missing edges that make the second of the leftmost equal-label pair of
    /// restricted sets follow the first.
    fn augmentation(&self, atlas: &mut GAtlas) -> Result<Vec<PosSet>> {
        let q = self.hier.q(self.h);
        let restricted: Vec<PosSet> = (self.h - 2..q)
            .map(|i| (i * self.l..i * self.l + self.s).collect())
            .collect();
        let mut labels = Vec::with_capacity(restricted.len());
        for r in &restricted {
            labels.push(atlas.label(r)?);
        }
        for x in 0..restricted.len() {
            for y in x + 1..restricted.len() {
                if labels[x] != labels[y] {
                    continue;
                }
                let tail = atlas.tail(&restricted[x], &restricted[y]).ok_or_else(|| {
                    Error::Inconsistency("restricted sets cannot follow each other".into())
                })?;
                let instance = atlas.instance(&restricted[x])?;
                let missing: Vec<PosSet> = atlas
                    .required_edges(&instance, &tail)
                    .into_iter()
                    .filter(|e| !atlas.is_edge(e))
                    .collect();
                if missing.is_empty() {
                    return Err(Error::Inconsistency(format!(
                        "{:?} already follows {:?} despite equal labels",
                        restricted[y], restricted[x]
                    )));
                }
                return Ok(missing);
            }
        }
        Err(Error::Inconsistency(
            "no repeated label among the restricted sets".into(),
        ))
    }
}

impl Builder for PaperBuilder {
    fn name(&self) -> String {
        if self.l == 1 {
            "paper-general".into()
        } else {
            "paper-loose".into()
        }
    }

    fn arena(&self, params: &GameParams) -> Result<GameParams> {
        Ok(params.clone().with_mode(BuilderMode::FixedVertexSet(self.n)))
    }

    fn next_move(&mut self, state: &GameState) -> Result<BuilderMove> {
        if state.num_vertices() != self.n {
            return Err(Error::Precondition(format!(
                "arena has {} vertices, strategy needs {}",
                state.num_vertices(),
                self.n
            )));
        }
        if self.h == 1 {
            return self.interval_move(state);
        }
        let mut atlas = GAtlas::new(state, &self.hier)?;
        if let Some(edge) = self.winning_edge(&mut atlas)? {
            if atlas.is_edge(&edge) {
                return Err(Error::Inconsistency(format!("winning edge {edge:?} already played")));
            }
            self.queue.clear();
            return Ok(BuilderMove::edge(Self::to_ids(state, &edge)));
        }
        while let Some(e) = self.queue.pop_front() {
            if !atlas.is_edge(&e) {
                return Ok(BuilderMove::edge(Self::to_ids(state, &e)));
            }
        }
        let missing = self.augmentation(&mut atlas)?;
        self.augmentations += 1;
        self.queue.extend(missing);
        let e = self.queue.pop_front().expect("augmentation is nonempty");
        Ok(BuilderMove::edge(Self::to_ids(state, &e)))
    }
}
