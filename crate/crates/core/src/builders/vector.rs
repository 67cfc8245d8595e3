use crate::error::{Error, Result};
use crate::game::{BuilderMode, GameParams, GameState, VertexId};

use super::{Builder, BuilderMove};

/// `a(v)`: coordinate `i` is the most edges of a color-`i` path ending at `v`.
pub type VectorLabel = Vec<usize>;

/// The graph-case Builder on `∏ m_i + 1` fixed vertices.
#[derive(Debug, Clone)]
pub struct VectorBuilder {
    targets: Vec<usize>,
    n: usize,
}

impl VectorBuilder {
    pub fn new(params: &GameParams) -> Result<Self> {
        if params.k() != 2 || params.l() != 1 {
            return Err(Error::InvalidParams(
                "the vector-label builder plays graphs (k = 2, l = 1)".into(),
            ));
        }
        params.chain_spec()?;
        let n = params
            .targets()
            .iter()
            .try_fold(1usize, |acc, &m| acc.checked_mul(m))
            .and_then(|p| p.checked_add(1))
            .ok_or_else(|| Error::InvalidParams("arena size overflows".into()))?;
        Ok(Self {
            targets: params.targets().to_vec(),
            n,
        })
    }

    pub fn arena_size(&self) -> usize {
        self.n
    }

    /// Labels of all vertices, by position.
    pub fn labels(state: &GameState) -> Vec<VectorLabel> {
        let t = state.params().t();
        let mut labels = vec![vec![0; t]; state.num_vertices()];
        for e in state.edges() {
            let pos = state.position(e.vertices[1]).expect("edge vertex exists");
            let a = &mut labels[pos][e.color];
            *a = (*a).max(e.path_len);
        }
        labels
    }
}

impl Builder for VectorBuilder {
    fn name(&self) -> String {
        "paper-k2".into()
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
        let labels = Self::labels(state);
        let top: VectorLabel = self.targets.iter().map(|m| m - 1).collect();
        let id = |p: usize| -> VertexId { state.vertex_at(p).expect("position in arena") };
        let last = self.n - 1;
        if let Some(z) = labels[..last].iter().position(|a| *a == top) {
            return Ok(BuilderMove::edge(vec![id(z), id(last)]));
        }
        for x in 0..last {
            for y in x + 1..last {
                if labels[x] == labels[y] {
                    let edge = vec![id(x), id(y)];
                    if state.contains_edge(&edge) {
                        return Err(Error::Inconsistency(format!(
                            "vertices {x} and {y} share a label but are adjacent"
                        )));
                    }
                    return Ok(BuilderMove::edge(edge));
                }
            }
        }
        Err(Error::Inconsistency("no repeated label below the top".into()))
    }
}
