//! Builder strategies.

mod atlas;
mod baseline;
mod paper;
mod vector;

pub use atlas::{union, GAtlas, InstanceNode, PosSet};
pub use baseline::{RandomBuilder, ScriptBuilder};
pub use paper::PaperBuilder;
pub use vector::{VectorBuilder, VectorLabel};

use crate::error::{Error, Result};
use crate::game::{GameParams, GameState, Transcript, VertexId};

/// Vertices to insert, then the edge to present.
///
/// `insert_at` positions are applied in order, each against the order as it
/// stands after the previous insertions. Inserted vertices get consecutive
/// ids starting at [`GameState::next_vertex_id`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BuilderMove {
    pub insert_at: Vec<usize>,
    pub edge: Vec<VertexId>,
}

impl BuilderMove {
    pub fn edge(edge: Vec<VertexId>) -> Self {
        Self {
            insert_at: Vec::new(),
            edge,
        }
    }
}

pub trait Builder {
    fn name(&self) -> String;

    /// The game this builder plays, given the requested parameters.
    /// Strategies with a fixed arena switch the mode here.
    fn arena(&self, params: &GameParams) -> Result<GameParams> {
        Ok(params.clone())
    }

    fn next_move(&mut self, state: &GameState) -> Result<BuilderMove>;
}

/// Builder by CLI name: `paper-k2`, `paper-general`, `paper-loose`, `script:<file>`,
/// `random:<seed>`.
pub fn builder_by_name(name: &str, params: &GameParams) -> Result<Box<dyn Builder>> {
    match name {
        "paper-k2" => Ok(Box::new(VectorBuilder::new(params)?)),
        "paper-general" | "paper-loose" => Ok(Box::new(PaperBuilder::new(params)?)),
        _ => {
            if let Some(path) = name.strip_prefix("script:") {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Transcript(format!("{path}: {e}")))?;
                return Ok(Box::new(ScriptBuilder::new(Transcript::from_jsonl(&text)?)));
            }
            if let Some(seed) = name.strip_prefix("random:") {
                let seed = seed
                    .parse()
                    .map_err(|_| Error::InvalidParams(format!("bad seed in `{name}`")))?;
                return Ok(Box::new(RandomBuilder::new(seed)));
            }
            Err(Error::InvalidParams(format!("unknown builder `{name}`")))
        }
    }
}
