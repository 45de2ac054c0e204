use super::{Engine, Inbox, MessageWord, RoundOutbox, SimError};
use crate::graph::VertexId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Running,
    Halted,
}

/// Per-node behaviour for [`Engine::run_protocol`].
///
/// `step` sees the words delivered in the previous round (empty on the
/// first call), ordered by sender, and may queue at most one word per
/// destination. A program that returns [`Status::Halted`] is not stepped
/// again; words it queued in that final step are still delivered.
pub trait NodeProgram {
    fn step(
        &mut self,
        me: VertexId,
        inbox: &[(VertexId, MessageWord)],
        outbox: &mut Vec<(VertexId, MessageWord)>,
    ) -> Status;
}

impl Engine {
    /// Steps all programs and delivers their words until every program has
    /// halted and nothing is in flight. Returns the number of rounds used.
    pub fn run_protocol<P: NodeProgram>(&mut self, programs: &mut [P]) -> Result<u64, SimError> {
        if programs.len() != self.n {
            return Err(SimError::NodeCount {
                expected: self.n,
                got: programs.len(),
            });
        }
        let mut halted = vec![false; self.n];
        let mut inboxes: Vec<Inbox> = vec![Vec::new(); self.n];
        let mut rounds = 0u64;
        loop {
            let mut outbox = RoundOutbox::new(self.n);
            for (id, prog) in programs.iter_mut().enumerate() {
                if halted[id] {
                    continue;
                }
                let row = outbox.row_mut(id as VertexId);
                if prog.step(id as VertexId, &inboxes[id], row) == Status::Halted {
                    halted[id] = true;
                }
            }
            if outbox.is_empty() && halted.iter().all(|&h| h) {
                return Ok(rounds);
            }
            if rounds >= self.round_limit {
                return Err(SimError::RoundLimit(self.round_limit));
            }
            inboxes = self.run_round(outbox)?;
            rounds += 1;
        }
    }
}
