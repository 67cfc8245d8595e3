use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{BuilderMode, GameState, Transcript, VertexId};

use super::{Builder, BuilderMove};

/// Plays uniformly random unplayed k-sets, inserting fresh vertices at random
/// positions when the mode allows.
#[derive(Debug, Clone)]
pub struct RandomBuilder {
    seed: u64,
    rng: ChaCha8Rng,
    insert_prob: f64,
}

impl RandomBuilder {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            insert_prob: 0.5,
        }
    }

    pub fn with_insert_prob(mut self, p: f64) -> Self {
        self.insert_prob = p.clamp(0.0, 1.0);
        self
    }
}

impl Builder for RandomBuilder {
    fn name(&self) -> String {
        format!("random:{}", self.seed)
    }

    fn next_move(&mut self, state: &GameState) -> Result<BuilderMove> {
        let k = state.params().k();
        let mode = state.params().mode();
        let room = match mode {
            BuilderMode::FixedVertexSet(_) => 0,
            _ => state
                .params()
                .vertex_budget()
                .map_or(usize::MAX, |b| b.saturating_sub(state.num_vertices())),
        };
        let can_insert = room > 0;
        let mut order: Vec<VertexId> = state.order().to_vec();
        let mut insert_at = Vec::new();
        let mut next_id = state.next_vertex_id();
        let mut insert = |order: &mut Vec<VertexId>, rng: &mut ChaCha8Rng| {
            let pos = match mode {
                BuilderMode::AppendOnly => order.len(),
                _ => rng.gen_range(0..=order.len()),
            };
            order.insert(pos, next_id);
            next_id += 1;
            pos
        };
        if can_insert {
            while order.len() < k {
                insert_at.push(insert(&mut order, &mut self.rng));
            }
            if self.rng.gen_bool(self.insert_prob) {
                let extra = self.rng.gen_range(1..=k).min(room.saturating_sub(insert_at.len()));
                for _ in 0..extra {
                    insert_at.push(insert(&mut order, &mut self.rng));
                }
            }
        }
        for _ in 0..64 {
            if order.len() < k {
                break;
            }
            let mut picked = sample(&mut self.rng, order.len(), k).into_vec();
            picked.sort_unstable();
            let edge: Vec<VertexId> = picked.iter().map(|&p| order[p]).collect();
            if !state.contains_edge(&edge) {
                return Ok(BuilderMove { insert_at, edge });
            }
        }
        if !can_insert || insert_at.len() >= room {
            let free = free_k_sets(state).next();
            return free.map(BuilderMove::edge).ok_or_else(|| match mode {
                BuilderMode::FixedVertexSet(_) => {
                    Error::Precondition("every k-set has been played".into())
                }
                _ => Error::BudgetExceeded {
                    what: "vertex count".into(),
                    limit: state.num_vertices() as u64,
                },
            });
        }
        // A brand new vertex makes every k-set through it unplayed.
        let pos = insert(&mut order, &mut self.rng);
        insert_at.push(pos);
        let others = sample(&mut self.rng, order.len() - 1, k - 1).into_vec();
        let mut picked: Vec<usize> = others
            .into_iter()
            .map(|p| if p >= pos { p + 1 } else { p })
            .chain([pos])
            .collect();
        picked.sort_unstable();
        let edge = picked.iter().map(|&p| order[p]).collect();
        Ok(BuilderMove { insert_at, edge })
    }
}

fn free_k_sets(state: &GameState) -> impl Iterator<Item = Vec<VertexId>> + '_ {
    let k = state.params().k();
    crate::combin::combinations(state.num_vertices(), k)
        .into_iter()
        .map(|c| c.iter().map(|&p| state.order()[p]).collect::<Vec<_>>())
        .filter(|e| !state.contains_edge(e))
}

/// Replays the moves of a recorded transcript.
#[derive(Debug, Clone)]
pub struct ScriptBuilder {
    transcript: Transcript,
    next: usize,
}

impl ScriptBuilder {
    pub fn new(transcript: Transcript) -> Self {
        Self {
            transcript,
            next: 0,
        }
    }
}

impl Builder for ScriptBuilder {
    fn name(&self) -> String {
        "script".into()
    }

    fn arena(&self, _params: &crate::game::GameParams) -> Result<crate::game::GameParams> {
        self.transcript.header.params()
    }

    fn next_move(&mut self, _state: &GameState) -> Result<BuilderMove> {
        let r = self
            .transcript
            .rounds
            .get(self.next)
            .ok_or_else(|| Error::Transcript("script has no more moves".into()))?;
        self.next += 1;
        Ok(BuilderMove {
            insert_at: r.insert.iter().map(|&(_, pos)| pos).collect(),
            edge: r.edge.clone(),
        })
    }
}
