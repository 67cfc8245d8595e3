use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combin::combinations;
use crate::error::Result;
use crate::game::{Color, GameState, VertexId};

use super::{PaintDecision, Painter};

/// Uniform colors from a seeded generator.
#[derive(Debug, Clone)]
pub struct RandomPainter {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomPainter {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Painter for RandomPainter {
    fn name(&self) -> String {
        format!("random:{}", self.seed)
    }

    fn color(&mut self, state: &GameState, _edge: &[VertexId]) -> Result<PaintDecision> {
        Ok(PaintDecision::own(self.rng.gen_range(0..state.params().t())))
    }
}

/// Color giving the new edge the shortest path ending at it; ties to the lowest color.
#[derive(Debug, Clone, Copy, Default)]
pub struct GreedyPainter;

impl GreedyPainter {
    pub fn pick(state: &GameState, edge: &[VertexId]) -> Color {
        (0..state.params().t())
            .min_by_key(|&c| (state.path_len_if(edge, c), c))
            .unwrap_or(0)
    }
}

impl Painter for GreedyPainter {
    fn name(&self) -> String {
        "greedy".into()
    }

    fn color(&mut self, state: &GameState, edge: &[VertexId]) -> Result<PaintDecision> {
        Ok(PaintDecision::own(Self::pick(state, edge)))
    }
}

/// One-ply lookahead: avoid losing now, then avoid handing Builder an edge
/// that wins in every color. Ties go to the greedy choice.
#[derive(Debug, Clone, Copy, Default)]
pub struct SpitePainter;

impl SpitePainter {
    /// Some unplayed k-set on the current vertices completes a path in every color.
    fn builder_has_forcing_edge(state: &GameState) -> bool {
        let k = state.params().k();
        let t = state.params().t();
        combinations(state.num_vertices(), k).into_iter().any(|c| {
            let edge: Vec<VertexId> = c.iter().map(|&p| state.order()[p]).collect();
            !state.contains_edge(&edge) && (0..t).all(|col| state.would_complete(&edge, col))
        })
    }

    fn score(state: &GameState, edge: &[VertexId], color: Color) -> usize {
        if state.would_complete(edge, color) {
            return 0;
        }
        let mut next = state.clone();
        let handle = next.play_edge(edge).expect("edge is pending in the original");
        next.assign_color(handle, color).expect("color in range");
        if Self::builder_has_forcing_edge(&next) {
            1
        } else {
            2
        }
    }
}

impl Painter for SpitePainter {
    fn name(&self) -> String {
        "spite".into()
    }

    fn color(&mut self, state: &GameState, edge: &[VertexId]) -> Result<PaintDecision> {
        // The pending edge blocks play_edge on clones; score on a copy without it.
        let mut base = state.clone();
        base.clear_pending();
        let best = (0..state.params().t())
            .max_by_key(|&c| {
                (
                    Self::score(&base, edge, c),
                    std::cmp::Reverse(base.path_len_if(edge, c)),
                    std::cmp::Reverse(c),
                )
            })
            .unwrap_or(0);
        Ok(PaintDecision::own(best))
    }
}
