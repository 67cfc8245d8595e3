//! Painter strategies.

mod baseline;
mod flabels;
mod vector;

pub use baseline::{GreedyPainter, RandomPainter, SpitePainter};
pub use flabels::{offline_witness, FAtlas, Naming, PaperPainter};
pub use vector::{middle_level, rising_coordinate, VectorPainter};

use crate::error::{Error, Result};
use crate::game::{BuilderMode, Color, GameParams, GameState, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PaintDecision {
    pub color: Color,
    /// Chosen by a fallback after the strategy ran out of names.
    pub delegated: bool,
}

impl PaintDecision {
    pub fn own(color: Color) -> Self {
        Self {
            color,
            delegated: false,
        }
    }
}

pub trait Painter {
    fn name(&self) -> String;

    /// Color for the pending `edge` (vertex ids in left-to-right order).
    fn color(&mut self, state: &GameState, edge: &[VertexId]) -> Result<PaintDecision>;

    /// Checks the strategy's internal invariants against `state`.
    fn check_invariants(&self, _state: &GameState) -> Result<()> {
        Ok(())
    }

    /// First round colored by a fallback, if any.
    fn delegated_since(&self) -> Option<usize> {
        None
    }
}

/// Painter by CLI name: `paper-k2`, `paper-general`, `offline-witness`,
/// `random:<seed>`, `greedy`, `spite`.
pub fn painter_by_name(name: &str, params: &GameParams) -> Result<Box<dyn Painter>> {
    match name {
        "paper-k2" => Ok(Box::new(VectorPainter::new(params)?)),
        "paper-general" => {
            let naming = match params.mode() {
                BuilderMode::FreeInsertion => Naming::Antichain,
                _ => Naming::Positional,
            };
            Ok(Box::new(PaperPainter::new(params, naming)?))
        }
        "offline-witness" => Ok(Box::new(PaperPainter::new(params, Naming::Positional)?)),
        "greedy" | "greedy-min-path" => Ok(Box::new(GreedyPainter)),
        "spite" => Ok(Box::new(SpitePainter)),
        _ => match name.strip_prefix("random:") {
            Some(seed) => {
                let seed = seed
                    .parse()
                    .map_err(|_| Error::InvalidParams(format!("bad seed in `{name}`")))?;
                Ok(Box::new(RandomPainter::new(seed)))
            }
            None => Err(Error::InvalidParams(format!("unknown painter `{name}`"))),
        },
    }
}
