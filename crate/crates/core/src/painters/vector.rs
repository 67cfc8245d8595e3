use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::game::{GameParams, GameState, VertexId};

use super::{GreedyPainter, PaintDecision, Painter};

/// Vectors `a` with `0 <= a_i < m_i` and `Σ a_i = ⌊Σ(m_i - 1)/2⌋`, in lexicographic order.
pub fn middle_level(targets: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = targets.iter().map(|m| m - 1).sum();
    let want = total / 2;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(targets.len());
    fn rec(targets: &[usize], left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let i = cur.len();
        if i == targets.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let room: usize = targets[i + 1..].iter().map(|m| m - 1).sum();
        for a in 0..targets[i].min(left + 1) {
            if left - a <= room {
                cur.push(a);
                rec(targets, left - a, cur, out);
                cur.pop();
            }
        }
    }
    rec(targets, want, &mut cur, &mut out);
    out
}

/// First coordinate where `v` exceeds `u`.
pub fn rising_coordinate(u: &[usize], v: &[usize]) -> Option<usize> {
    u.iter().zip(v).position(|(a, b)| b > a)
}

/// The graph-case Painter: vertices named by distinct middle-level vectors,
/// edge `uv` colored by the first coordinate where `v` beats `u`.
#[derive(Debug, Clone)]
pub struct VectorPainter {
    supply: Vec<Vec<usize>>,
    names: HashMap<VertexId, usize>,
    delegated_since: Option<usize>,
}

impl VectorPainter {
    pub fn new(params: &GameParams) -> Result<Self> {
        if params.k() != 2 || params.l() != 1 {
            return Err(Error::InvalidParams(
                "the vector-label painter plays graphs (k = 2, l = 1)".into(),
            ));
        }
        params.chain_spec()?;
        Ok(Self {
            supply: middle_level(params.targets()),
            names: HashMap::new(),
            delegated_since: None,
        })
    }

    pub fn supply(&self) -> usize {
        self.supply.len()
    }

    pub fn name_of(&self, v: VertexId) -> Option<&[usize]> {
        self.names.get(&v).map(|&i| self.supply[i].as_slice())
    }
}

impl Painter for VectorPainter {
    fn name(&self) -> String {
        "paper-k2".into()
    }

    fn color(&mut self, state: &GameState, edge: &[VertexId]) -> Result<PaintDecision> {
        if self.delegated_since.is_none() {
            let mut fresh: Vec<VertexId> = edge
                .iter()
                .copied()
                .filter(|v| !self.names.contains_key(v))
                .collect();
            fresh.sort_unstable();
            if self.names.len() + fresh.len() > self.supply.len() {
                self.delegated_since = Some(state.round() + 1);
            } else {
                for v in fresh {
                    let next = self.names.len();
                    self.names.insert(v, next);
                }
            }
        }
        if self.delegated_since.is_some() {
            return Ok(PaintDecision {
                color: GreedyPainter::pick(state, edge),
                delegated: true,
            });
        }
        let a = &self.supply[self.names[&edge[0]]];
        let b = &self.supply[self.names[&edge[1]]];
        let color = rising_coordinate(a, b).ok_or_else(|| {
            Error::Inconsistency(format!("label {b:?} beats {a:?} in no coordinate"))
        })?;
        Ok(PaintDecision::own(color))
    }

    fn check_invariants(&self, _state: &GameState) -> Result<()> {
        let mut seen: Vec<usize> = self.names.values().copied().collect();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != self.names.len() {
            return Err(Error::Inconsistency("two vertices share a name".into()));
        }
        Ok(())
    }

    fn delegated_since(&self) -> Option<usize> {
        self.delegated_since
    }
}
