//! The referee: vertex order, colored edges and longest monochromatic
//! ℓ-loose monotone paths.
//!
//! Colors are 0-based indices `0..t`. Vertex ids are stable and start at 1;
//! positions are 0-based indices into the current left-to-right order.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::posets::ChainSpec;

pub type VertexId = u32;
pub type Color = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BuilderMode {
    FreeInsertion,
    AppendOnly,
    FixedVertexSet(usize),
}

impl fmt::Display for BuilderMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuilderMode::FreeInsertion => write!(f, "free-insertion"),
            BuilderMode::AppendOnly => write!(f, "append-only"),
            BuilderMode::FixedVertexSet(n) => write!(f, "fixed-vertex-set:{n}"),
        }
    }
}

impl FromStr for BuilderMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free-insertion" | "free" => Ok(BuilderMode::FreeInsertion),
            "append-only" | "append" => Ok(BuilderMode::AppendOnly),
            _ => s
                .strip_prefix("fixed-vertex-set:")
                .or_else(|| s.strip_prefix("fixed:"))
                .and_then(|n| n.parse().ok())
                .map(BuilderMode::FixedVertexSet)
                .ok_or_else(|| Error::InvalidParams(format!("unknown builder mode `{s}`"))),
        }
    }
}

/// Uniformity, shift, targets and the builder variant of one game.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameParams {
    k: usize,
    l: usize,
    targets: Vec<usize>,
    mode: BuilderMode,
    vertex_budget: Option<usize>,
}

impl GameParams {
    /// `targets[i]` is `m_i`, the number of edges of the forbidden path in color `i`.
    pub fn new(k: usize, l: usize, targets: Vec<usize>, mode: BuilderMode) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParams(format!("uniformity k = {k} must be >= 2")));
        }
        if l < 1 || l > k {
            return Err(Error::InvalidParams(format!(
                "shift l = {l} must satisfy 1 <= l <= k = {k}"
            )));
        }
        if targets.is_empty() {
            return Err(Error::InvalidParams("need at least one color".into()));
        }
        if targets.iter().any(|&m| m == 0) {
            return Err(Error::InvalidParams("every target m_i must be >= 1".into()));
        }
        if let BuilderMode::FixedVertexSet(n) = mode {
            if n > u32::MAX as usize / 2 {
                return Err(Error::InvalidParams(format!("fixed vertex set of {n} is too large")));
            }
        }
        Ok(Self {
            k,
            l,
            targets,
            mode,
            vertex_budget: None,
        })
    }

    pub fn diagonal(k: usize, l: usize, m: usize, t: usize, mode: BuilderMode) -> Result<Self> {
        Self::new(k, l, vec![m; t], mode)
    }

    pub fn with_vertex_budget(mut self, budget: usize) -> Self {
        self.vertex_budget = Some(budget);
        self
    }

    pub fn with_mode(mut self, mode: BuilderMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn t(&self) -> usize {
        self.targets.len()
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn target(&self, color: Color) -> usize {
        self.targets[color]
    }

    pub fn mode(&self) -> BuilderMode {
        self.mode
    }

    pub fn vertex_budget(&self) -> Option<usize> {
        self.vertex_budget
    }

    /// `h = ⌈k/ℓ⌉`.
    pub fn h(&self) -> usize {
        self.k.div_ceil(self.l)
    }

    /// `s = k - (h-1)ℓ`, the size of the smallest labeled sets.
    pub fn s(&self) -> usize {
        self.k - (self.h() - 1) * self.l
    }

    /// `r_i = k + ℓ(m_i - 1)`, vertices of the forbidden path in color `i`.
    pub fn path_vertices(&self, color: Color) -> usize {
        self.k + self.l * (self.targets[color] - 1)
    }

    pub fn chain_spec(&self) -> Result<ChainSpec> {
        ChainSpec::from_targets(&self.targets)
    }
}

/// One colored edge. `vertices` are in left-to-right order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeRecord {
    pub vertices: Vec<VertexId>,
    pub color: Color,
    /// Edges in the longest same-color path ending with this edge.
    pub path_len: usize,
    /// Edges in the longest same-color path starting with this edge.
    pub fwd_len: usize,
    pub round: usize,
}

/// Handle for an edge awaiting Painter's color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PendingMove {
    edge: Vec<VertexId>,
}

impl PendingMove {
    pub fn edge(&self) -> &[VertexId] {
        &self.edge
    }
}

/// A monochromatic path with `m_i` edges in color `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub color: Color,
    pub edges: Vec<Vec<VertexId>>,
}

#[derive(Debug, Clone)]
pub struct GameState {
    params: GameParams,
    order: Vec<VertexId>,
    /// `position[id - 1]`
    position: Vec<usize>,
    edges: Vec<EdgeRecord>,
    by_key: HashMap<Vec<VertexId>, usize>,
    /// Edges keyed by their first `k - ℓ` vertices.
    by_prefix: HashMap<Vec<VertexId>, Vec<usize>>,
    /// Edges keyed by their last `k - ℓ` vertices.
    by_suffix: HashMap<Vec<VertexId>, Vec<usize>>,
    pending: Option<Vec<VertexId>>,
    pending_inserts: Vec<(VertexId, usize)>,
    finished: bool,
    records: Vec<RoundRecord>,
}

impl PartialEq for GameState {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params
            && self.order == other.order
            && self.edges == other.edges
            && self.pending == other.pending
            && self.records == other.records
    }
}

impl GameState {
    pub fn new(params: GameParams) -> Self {
        let mut state = GameState {
            params,
            order: Vec::new(),
            position: Vec::new(),
            edges: Vec::new(),
            by_key: HashMap::new(),
            by_prefix: HashMap::new(),
            by_suffix: HashMap::new(),
            pending: None,
            pending_inserts: Vec::new(),
            finished: false,
            records: Vec::new(),
        };
        if let BuilderMode::FixedVertexSet(n) = state.params.mode {
            state.order = (1..=n as VertexId).collect();
            state.position = (0..n).collect();
        }
        state
    }

    pub fn params(&self) -> &GameParams {
        &self.params
    }

    pub fn num_vertices(&self) -> usize {
        self.order.len()
    }

    /// Vertex ids in left-to-right order.
    pub fn order(&self) -> &[VertexId] {
        &self.order
    }

    pub fn position(&self, v: VertexId) -> Option<usize> {
        let idx = (v as usize).checked_sub(1)?;
        self.position.get(idx).copied()
    }

    /// Id the next inserted vertex will get.
    pub fn next_vertex_id(&self) -> VertexId {
        (self.position.len() + 1) as VertexId
    }

    pub fn vertex_at(&self, pos: usize) -> Option<VertexId> {
        self.order.get(pos).copied()
    }

    pub fn edges(&self) -> &[EdgeRecord] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Number of colored edges so far.
    pub fn round(&self) -> usize {
        self.edges.len()
    }

    pub fn is_over(&self) -> bool {
        self.finished
    }

    pub fn pending(&self) -> Option<&[VertexId]> {
        self.pending.as_deref()
    }

    pub fn edge(&self, vertices: &[VertexId]) -> Option<&EdgeRecord> {
        self.by_key.get(vertices).map(|&i| &self.edges[i])
    }

    pub fn contains_edge(&self, vertices: &[VertexId]) -> bool {
        self.by_key.contains_key(vertices)
    }

    /// Edges whose last `k - ℓ` vertices are `suffix`.
    pub fn edges_with_suffix(&self, suffix: &[VertexId]) -> impl Iterator<Item = &EdgeRecord> {
        self.by_suffix
            .get(suffix)
            .into_iter()
            .flatten()
            .map(|&i| &self.edges[i])
    }

    /// Inserts a fresh vertex at `position` (`None` = right end).
    pub fn insert_vertex(&mut self, position: Option<usize>) -> Result<VertexId> {
        let len = self.order.len();
        let pos = position.unwrap_or(len);
        match self.params.mode {
            BuilderMode::FixedVertexSet(_) => {
                return Err(Error::ModeViolation(
                    "vertices cannot be added to a fixed vertex set".into(),
                ))
            }
            BuilderMode::AppendOnly if pos != len => {
                return Err(Error::ModeViolation(format!(
                    "append-only builder inserted at position {pos} of {len}"
                )))
            }
            _ => {}
        }
        if pos > len {
            return Err(Error::ModeViolation(format!(
                "position {pos} is past the end of {len} vertices"
            )));
        }
        if let Some(budget) = self.params.vertex_budget {
            if len >= budget {
                return Err(Error::BudgetExceeded {
                    what: "vertex count".into(),
                    limit: budget as u64,
                });
            }
        }
        let id = (self.position.len() + 1) as VertexId;
        self.order.insert(pos, id);
        self.position.push(0);
        for (p, &v) in self.order.iter().enumerate().skip(pos) {
            self.position[v as usize - 1] = p;
        }
        self.pending_inserts.push((id, pos));
        Ok(id)
    }

    /// Sorts `vertices` into the current order, checking they form a new k-set.
    pub fn normalize_edge(&self, vertices: &[VertexId]) -> Result<Vec<VertexId>> {
        let k = self.params.k;
        if vertices.len() != k {
            return Err(Error::Arity {
                expected: k,
                got: vertices.len(),
            });
        }
        let mut edge = vertices.to_vec();
        for &v in &edge {
            if self.position(v).is_none() {
                return Err(Error::UnknownVertex(v));
            }
        }
        edge.sort_by_key(|&v| self.position[v as usize - 1]);
        if edge.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Arity {
                expected: k,
                got: {
                    let mut d = edge.clone();
                    d.dedup();
                    d.len()
                },
            });
        }
        if self.by_key.contains_key(&edge) {
            return Err(Error::DuplicateEdge(edge));
        }
        Ok(edge)
    }

    /// Builder presents a k-set; it waits for [`GameState::assign_color`].
    pub fn play_edge(&mut self, vertices: &[VertexId]) -> Result<PendingMove> {
        if self.finished {
            return Err(Error::GameOver);
        }
        if self.pending.is_some() {
            return Err(Error::MovePending);
        }
        let edge = self.normalize_edge(vertices)?;
        self.pending = Some(edge.clone());
        Ok(PendingMove { edge })
    }

    fn prefix_key(&self, edge: &[VertexId]) -> Vec<VertexId> {
        edge[..self.params.k - self.params.l].to_vec()
    }

    fn suffix_key(&self, edge: &[VertexId]) -> Vec<VertexId> {
        edge[self.params.l..].to_vec()
    }

    /// `earlier` then `later` can be consecutive edges of an ℓ-loose path.
    /// Assumes `earlier^+ = later^-` already holds.
    fn ordered(&self, earlier: &[VertexId], later: &[VertexId]) -> bool {
        let k = self.params.k;
        let l = self.params.l;
        self.position[earlier[k - 1] as usize - 1] < self.position[later[k - l] as usize - 1]
    }

    fn predecessors<'a>(&'a self, edge: &'a [VertexId], color: Color) -> impl Iterator<Item = usize> + 'a {
        let key = self.prefix_key(edge);
        self.by_suffix
            .get(&key)
            .into_iter()
            .flatten()
            .copied()
            .filter(move |&i| self.edges[i].color == color && self.ordered(&self.edges[i].vertices, edge))
    }

    fn successors<'a>(&'a self, edge: &'a [VertexId], color: Color) -> impl Iterator<Item = usize> + 'a {
        let key = self.suffix_key(edge);
        self.by_prefix
            .get(&key)
            .into_iter()
            .flatten()
            .copied()
            .filter(move |&i| self.edges[i].color == color && self.ordered(edge, &self.edges[i].vertices))
    }

    /// Longest same-color path that would end with `edge` if it got `color`.
    pub fn path_len_if(&self, edge: &[VertexId], color: Color) -> usize {
        1 + self
            .predecessors(edge, color)
            .map(|i| self.edges[i].path_len)
            .max()
            .unwrap_or(0)
    }

    fn fwd_len_if(&self, edge: &[VertexId], color: Color) -> usize {
        1 + self
            .successors(edge, color)
            .map(|i| self.edges[i].fwd_len)
            .max()
            .unwrap_or(0)
    }

    /// Longest same-color path through `edge` if it got `color`.
    pub fn through_len_if(&self, edge: &[VertexId], color: Color) -> usize {
        self.path_len_if(edge, color) + self.fwd_len_if(edge, color) - 1
    }

    /// Whether giving `edge` (in order, unplayed) `color` ends the game.
    pub fn would_complete(&self, edge: &[VertexId], color: Color) -> bool {
        self.through_len_if(edge, color) >= self.params.targets[color]
    }

    /// Painter colors the pending edge.
    pub fn assign_color(&mut self, handle: PendingMove, color: Color) -> Result<()> {
        let t = self.params.t();
        if color >= t {
            return Err(Error::ColorOutOfRange { color, t });
        }
        match &self.pending {
            Some(edge) if *edge == handle.edge => {}
            Some(_) => return Err(Error::Precondition("stale move handle".into())),
            None => return Err(Error::NoPendingMove),
        }
        let edge = self.pending.take().unwrap();
        let path_len = self.path_len_if(&edge, color);
        let fwd_len = self.fwd_len_if(&edge, color);
        let idx = self.edges.len();
        let round = idx + 1;
        self.edges.push(EdgeRecord {
            vertices: edge.clone(),
            color,
            path_len,
            fwd_len,
            round,
        });
        self.by_key.insert(edge.clone(), idx);
        let prefix = self.prefix_key(&edge);
        let suffix = self.suffix_key(&edge);
        self.by_prefix.entry(prefix).or_default().push(idx);
        self.by_suffix.entry(suffix).or_default().push(idx);
        self.propagate(idx);

        self.records.push(RoundRecord {
            round,
            edge: edge.clone(),
            color,
            path_len: self.edges[idx].path_len,
            insert: std::mem::take(&mut self.pending_inserts),
            delegated: false,
        });
        if self.edges.iter().any(|e| e.path_len >= self.params.targets[e.color]) {
            self.finished = true;
        }
        Ok(())
    }

    /// Pushes the new edge's lengths through later and earlier edges.
    fn propagate(&mut self, idx: usize) {
        let mut queue = VecDeque::from([idx]);
        while let Some(i) = queue.pop_front() {
            let (edge, color, len) = {
                let e = &self.edges[i];
                (e.vertices.clone(), e.color, e.path_len)
            };
            let next: Vec<usize> = self.successors(&edge, color).collect();
            for j in next {
                if self.edges[j].path_len < len + 1 {
                    self.edges[j].path_len = len + 1;
                    queue.push_back(j);
                }
            }
        }
        let mut queue = VecDeque::from([idx]);
        while let Some(i) = queue.pop_front() {
            let (edge, color, len) = {
                let e = &self.edges[i];
                (e.vertices.clone(), e.color, e.fwd_len)
            };
            let prev: Vec<usize> = self.predecessors(&edge, color).collect();
            for j in prev {
                if self.edges[j].fwd_len < len + 1 {
                    self.edges[j].fwd_len = len + 1;
                    queue.push_back(j);
                }
            }
        }
    }

    /// Withdraws the pending move, if any. Used on scratch copies for lookahead.
    pub(crate) fn clear_pending(&mut self) {
        self.pending = None;
    }

    /// Flags the last colored round as played by a fallback painter.
    pub fn mark_delegated(&mut self) {
        if let Some(r) = self.records.last_mut() {
            r.delegated = true;
        }
    }

    /// The monochromatic path that ended the game, if any.
    pub fn check_win(&self) -> Option<Witness> {
        let (end, rec) = self
            .edges
            .iter()
            .enumerate()
            .find(|(_, e)| e.path_len >= self.params.targets[e.color])?;
        let color = rec.color;
        let target = self.params.targets[color];
        let mut path = vec![end];
        let mut cur = end;
        while path.len() < target {
            let want = self.edges[cur].path_len - 1;
            cur = self
                .predecessors(&self.edges[cur].vertices, color)
                .filter(|&i| self.edges[i].path_len == want)
                .min()?;
            path.push(cur);
        }
        path.reverse();
        Some(Witness {
            color,
            edges: path.into_iter().map(|i| self.edges[i].vertices.clone()).collect(),
        })
    }

    pub fn transcript(&self) -> Transcript {
        Transcript {
            header: TranscriptHeader::from_params(&self.params),
            rounds: self.records.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptHeader {
    pub k: usize,
    pub l: usize,
    pub t: usize,
    pub m: Vec<usize>,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_budget: Option<usize>,
}

impl TranscriptHeader {
    pub fn from_params(params: &GameParams) -> Self {
        Self {
            k: params.k,
            l: params.l,
            t: params.t(),
            m: params.targets.clone(),
            mode: params.mode.to_string(),
            vertex_budget: params.vertex_budget,
        }
    }

    pub fn params(&self) -> Result<GameParams> {
        if self.t != self.m.len() {
            return Err(Error::Transcript(format!(
                "header t = {} but {} targets",
                self.t,
                self.m.len()
            )));
        }
        let mut params = GameParams::new(self.k, self.l, self.m.clone(), self.mode.parse()?)?;
        params.vertex_budget = self.vertex_budget;
        Ok(params)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    pub edge: Vec<VertexId>,
    pub color: Color,
    pub path_len: usize,
    /// Vertices `(id, position)` inserted before this round's edge.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub insert: Vec<(VertexId, usize)>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub delegated: bool,
}

/// Append-only move log; JSON Lines with a header line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub header: TranscriptHeader,
    pub rounds: Vec<RoundRecord>,
}

impl Transcript {
    pub fn to_jsonl(&self) -> String {
        let mut out = serde_json::to_string(&self.header).expect("header serializes");
        out.push('\n');
        for r in &self.rounds {
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header_line = lines
            .next()
            .ok_or_else(|| Error::Transcript("empty transcript".into()))?;
        let header: TranscriptHeader = serde_json::from_str(header_line)
            .map_err(|e| Error::Transcript(format!("header: {e}")))?;
        let mut rounds = Vec::new();
        for (i, line) in lines.enumerate() {
            let r: RoundRecord = serde_json::from_str(line)
                .map_err(|e| Error::Transcript(format!("record {}: {e}", i + 1)))?;
            rounds.push(r);
        }
        Ok(Self { header, rounds })
    }

    /// Rebuilds the final state, checking every recorded value on the way.
    pub fn replay(&self) -> Result<GameState> {
        let mut state = GameState::new(self.header.params()?);
        let mut last_round = 0;
        for r in &self.rounds {
            if r.round <= last_round {
                return Err(Error::Transcript(format!(
                    "round {} does not increase past {last_round}",
                    r.round
                )));
            }
            last_round = r.round;
            for &(id, pos) in &r.insert {
                let got = state.insert_vertex(Some(pos))?;
                if got != id {
                    return Err(Error::Transcript(format!(
                        "round {}: inserted vertex got id {got}, transcript says {id}",
                        r.round
                    )));
                }
            }
            let handle = state.play_edge(&r.edge)?;
            if handle.edge != r.edge {
                return Err(Error::Transcript(format!(
                    "round {}: edge {:?} is not in vertex order",
                    r.round, r.edge
                )));
            }
            state.assign_color(handle, r.color)?;
            if r.delegated {
                state.mark_delegated();
            }
            let got = state.records.last().unwrap().path_len;
            if got != r.path_len {
                return Err(Error::Transcript(format!(
                    "round {}: path_len {got} but transcript says {}",
                    r.round, r.path_len
                )));
            }
        }
        Ok(state)
    }
}
