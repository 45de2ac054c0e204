//! Synchronous congested-clique engine.
//!
//! `n` nodes, fully connected. In every round each ordered pair `(s, d)`
//! carries at most one [`MessageWord`]; the engine checks this on every
//! delivery instead of trusting callers. A node may address itself, which
//! uses the `(s, s)` slot like any other pair.
//!
//! Round accounting has two counters. `rounds_charged` prices bulk routing
//! with the analytic load formula (see [`LoadProfile::charged_rounds`]) and
//! is always maintained. `rounds_explicit` is only present in
//! [`RoutingMode::Explicit`], where bulk routing is actually simulated
//! round by round through a two-phase relay.

mod protocol;
mod routing;
mod word;

use thiserror::Error;

use crate::graph::VertexId;

pub use protocol::{NodeProgram, Status};
pub use routing::{LoadProfile, RoutingDemand, Transfer};
pub use word::{MessageWord, WORD_BITS, WORD_BYTES};

/// Words received by one node in one delivery, ordered by sender id.
pub type Inbox = Vec<(VertexId, MessageWord)>;

pub const DEFAULT_ROUND_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error(
        "capacity violation in round {round}: node {src} sent more than one word to node {dst}"
    )]
    CapacityViolation {
        src: VertexId,
        dst: VertexId,
        round: u64,
    },
    #[error("node {vertex} out of range for a clique of {n} nodes")]
    EndpointOutOfRange { vertex: u64, n: usize },
    #[error("protocol did not halt within {0} rounds")]
    RoundLimit(u64),
    #[error("expected one outbox row or program per node ({expected}), got {got}")]
    NodeCount { expected: usize, got: usize },
    #[error("relay stream from node {src} to node {dst} is malformed")]
    RelayFraming { src: VertexId, dst: VertexId },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RoutingMode {
    #[default]
    Charged,
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseMetrics {
    pub name: String,
    pub rounds_charged: u64,
    pub rounds_explicit: Option<u64>,
    pub messages: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RunMetrics {
    pub rounds_charged: u64,
    pub rounds_explicit: Option<u64>,
    pub messages_total: u64,
    pub phases: Vec<PhaseMetrics>,
}

impl RunMetrics {
    fn new(mode: RoutingMode) -> Self {
        Self {
            rounds_explicit: (mode == RoutingMode::Explicit).then_some(0),
            ..Self::default()
        }
    }
}

/// One round's worth of outgoing words, one row per sender.
#[derive(Debug, Clone)]
pub struct RoundOutbox {
    rows: Vec<Vec<(VertexId, MessageWord)>>,
}

impl RoundOutbox {
    pub fn new(n: usize) -> Self {
        Self {
            rows: vec![Vec::new(); n],
        }
    }

    pub fn send(&mut self, src: VertexId, dst: VertexId, word: MessageWord) {
        self.rows[src as usize].push((dst, word));
    }

    pub fn row_mut(&mut self, src: VertexId) -> &mut Vec<(VertexId, MessageWord)> {
        &mut self.rows[src as usize]
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }
}

pub struct Engine {
    n: usize,
    mode: RoutingMode,
    round_limit: u64,
    metrics: RunMetrics,
    phase: Option<String>,
}

impl Engine {
    pub fn new(n: usize, mode: RoutingMode) -> Self {
        Self {
            n,
            mode,
            round_limit: DEFAULT_ROUND_LIMIT,
            metrics: RunMetrics::new(mode),
            phase: None,
        }
    }

    pub fn with_round_limit(mut self, limit: u64) -> Self {
        self.round_limit = limit;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> RoutingMode {
        self.mode
    }

    pub fn round_limit(&self) -> u64 {
        self.round_limit
    }

    pub fn metrics(&self) -> &RunMetrics {
        &self.metrics
    }

    /// Subsequent rounds and messages are attributed to `name` in the
    /// per-phase breakdown.
    pub fn set_phase(&mut self, name: impl Into<String>) {
        self.phase = Some(name.into());
    }

    fn check_vertex(&self, x: VertexId) -> Result<(), SimError> {
        if (x as usize) < self.n {
            Ok(())
        } else {
            Err(SimError::EndpointOutOfRange {
                vertex: x as u64,
                n: self.n,
            })
        }
    }

    fn charge(&mut self, charged: u64, explicit: u64, messages: u64) {
        let m = &mut self.metrics;
        m.rounds_charged += charged;
        m.messages_total += messages;
        if let Some(x) = m.rounds_explicit.as_mut() {
            *x += explicit;
        }
        let Some(name) = &self.phase else { return };
        if m.phases.last().is_none_or(|p| &p.name != name) {
            m.phases.push(PhaseMetrics {
                name: name.clone(),
                rounds_charged: 0,
                rounds_explicit: m.rounds_explicit.map(|_| 0),
                messages: 0,
            });
        }
        let p = m.phases.last_mut().unwrap();
        p.rounds_charged += charged;
        p.messages += messages;
        if let Some(x) = p.rounds_explicit.as_mut() {
            *x += explicit;
        }
    }

    /// Delivers one round of words without touching the counters.
    /// `round` only labels a capacity violation.
    fn deliver(&self, mut outbox: RoundOutbox, round: u64) -> Result<Vec<Inbox>, SimError> {
        if outbox.rows.len() != self.n {
            return Err(SimError::NodeCount {
                expected: self.n,
                got: outbox.rows.len(),
            });
        }
        let mut inboxes: Vec<Inbox> = vec![Vec::new(); self.n];
        for (src, row) in outbox.rows.iter_mut().enumerate() {
            row.sort_by_key(|&(dst, _)| dst);
            for (i, &(dst, word)) in row.iter().enumerate() {
                self.check_vertex(dst)?;
                if i > 0 && row[i - 1].0 == dst {
                    return Err(SimError::CapacityViolation {
                        src: src as VertexId,
                        dst,
                        round,
                    });
                }
                inboxes[dst as usize].push((src as VertexId, word));
            }
        }
        Ok(inboxes)
    }

    fn next_round(&self) -> u64 {
        self.metrics
            .rounds_explicit
            .unwrap_or(self.metrics.rounds_charged)
            + 1
    }

    /// Runs one synchronous round. Inboxes come back ordered by sender id.
    pub fn run_round(&mut self, outbox: RoundOutbox) -> Result<Vec<Inbox>, SimError> {
        let words = outbox.len() as u64;
        let inboxes = self.deliver(outbox, self.next_round())?;
        self.charge(1, 1, words);
        Ok(inboxes)
    }

    /// Every `(src, word)` is sent to all nodes in a single round. Two
    /// entries with the same source violate capacity.
    pub fn broadcast(&mut self, sends: &[(VertexId, MessageWord)]) -> Result<Vec<Inbox>, SimError> {
        let mut outbox = RoundOutbox::new(self.n);
        for &(src, word) in sends {
            self.check_vertex(src)?;
            for dst in 0..self.n as VertexId {
                outbox.send(src, dst, word);
            }
        }
        self.run_round(outbox)
    }

    /// Every node learns every contributed word.
    ///
    /// Round `t` has each node send its `t`-th word to all nodes, so the
    /// cost is the largest contribution length in both modes. The returned
    /// list is what every node holds, ordered by contributor id. Explicit
    /// mode pushes each round through checked delivery and confirms all
    /// nodes received the same words.
    pub fn all_gather(
        &mut self,
        contributions: &[Vec<MessageWord>],
    ) -> Result<Vec<(VertexId, MessageWord)>, SimError> {
        if contributions.len() != self.n {
            return Err(SimError::NodeCount {
                expected: self.n,
                got: contributions.len(),
            });
        }
        let rounds = contributions.iter().map(Vec::len).max().unwrap_or(0) as u64;
        let total: u64 = contributions.iter().map(|c| c.len() as u64).sum();

        if self.mode == RoutingMode::Explicit {
            for t in 0..rounds as usize {
                let mut outbox = RoundOutbox::new(self.n);
                for (src, words) in contributions.iter().enumerate() {
                    if let Some(&word) = words.get(t) {
                        for dst in 0..self.n as VertexId {
                            outbox.send(src as VertexId, dst, word);
                        }
                    }
                }
                let round = self.next_round() + t as u64;
                let inboxes = self.deliver(outbox, round)?;
                if let Some(first) = inboxes.first() {
                    debug_assert!(inboxes.iter().all(|ib| ib == first));
                }
            }
        }
        self.charge(rounds, rounds, total * self.n as u64);

        let mut gathered: Vec<(VertexId, MessageWord)> = contributions
            .iter()
            .enumerate()
            .flat_map(|(src, ws)| ws.iter().map(move |&w| (src as VertexId, w)))
            .collect();
        gathered.sort_unstable();
        Ok(gathered)
    }
}
