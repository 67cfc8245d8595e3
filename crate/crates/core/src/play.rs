//! Referee loop: alternates a builder and a painter on one game state.

use serde::Serialize;

use crate::builders::{builder_by_name, Builder};
use crate::error::{Error, Result};
use crate::game::{GameParams, GameState, Witness};
use crate::painters::{painter_by_name, Painter};

#[derive(Debug, Clone, Copy)]
pub struct PlayOptions {
    pub max_rounds: usize,
    /// Run the painter's invariant check after every colored edge.
    pub check_invariants: bool,
}

impl Default for PlayOptions {
    fn default() -> Self {
        Self {
            max_rounds: 100_000,
            check_invariants: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    Won,
    RoundLimit,
    VertexBudget,
}

#[derive(Debug, Clone)]
pub struct GameReport {
    pub builder: String,
    pub painter: String,
    pub state: GameState,
    pub witness: Option<Witness>,
    pub rounds: usize,
    pub stop: StopReason,
    /// First round the painter handed to its fallback.
    pub first_delegation: Option<usize>,
}

impl GameReport {
    pub fn summary(&self) -> String {
        let mut line = format!(
            "builder={} painter={} rounds={} result={}",
            self.builder,
            self.painter,
            self.rounds,
            match self.stop {
                StopReason::Won => "builder-wins",
                StopReason::RoundLimit => "round-limit",
                StopReason::VertexBudget => "vertex-budget",
            }
        );
        if let Some(w) = &self.witness {
            line.push_str(&format!(" color={}", w.color));
        }
        if let Some(r) = self.first_delegation {
            line.push_str(&format!(" delegated-from={r}"));
        }
        line
    }
}

/// Plays until Builder wins or a limit is hit. `params` is the arena the
/// builder asked for (see [`Builder::arena`]).
pub fn play(
    params: &GameParams,
    builder: &mut dyn Builder,
    painter: &mut dyn Painter,
    opts: PlayOptions,
) -> Result<GameReport> {
    let mut state = GameState::new(params.clone());
    let mut stop = StopReason::RoundLimit;
    while state.round() < opts.max_rounds {
        let mv = match builder.next_move(&state) {
            Ok(mv) => mv,
            Err(Error::BudgetExceeded { .. }) => {
                stop = StopReason::VertexBudget;
                break;
            }
            Err(e) => return Err(e),
        };
        for &pos in &mv.insert_at {
            match state.insert_vertex(Some(pos)) {
                Ok(_) => {}
                Err(Error::BudgetExceeded { .. }) => {
                    stop = StopReason::VertexBudget;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if stop == StopReason::VertexBudget {
            break;
        }
        let handle = state.play_edge(&mv.edge)?;
        let edge = handle.edge().to_vec();
        let decision = painter.color(&state, &edge)?;
        state.assign_color(handle, decision.color)?;
        if decision.delegated {
            state.mark_delegated();
        }
        if opts.check_invariants {
            painter.check_invariants(&state)?;
        }
        if state.is_over() {
            stop = StopReason::Won;
            break;
        }
    }
    Ok(GameReport {
        builder: builder.name(),
        painter: painter.name(),
        witness: state.check_win(),
        rounds: state.round(),
        stop,
        first_delegation: painter.delegated_since(),
        state,
    })
}

/// Builds both strategies by name on the builder's arena and plays.
pub fn play_named(
    params: &GameParams,
    builder: &str,
    painter: &str,
    opts: PlayOptions,
) -> Result<GameReport> {
    let mut b = builder_by_name(builder, params)?;
    let arena = b.arena(params)?;
    let mut p = painter_by_name(painter, &arena)?;
    play(&arena, b.as_mut(), p.as_mut(), opts)
}
