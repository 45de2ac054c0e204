use std::collections::{BTreeMap, HashMap};

use super::{Engine, Inbox, MessageWord, RoundOutbox, RoutingMode, SimError};
use crate::graph::VertexId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transfer {
    pub src: VertexId,
    pub dst: VertexId,
    pub word: MessageWord,
}

/// A multiset of words to move between nodes, with no per-round limits.
#[derive(Debug, Clone, Default)]
pub struct RoutingDemand {
    transfers: Vec<Transfer>,
}

impl RoutingDemand {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, src: VertexId, dst: VertexId, word: MessageWord) {
        self.transfers.push(Transfer { src, dst, word });
    }

    pub fn len(&self) -> usize {
        self.transfers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transfers.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Transfer> {
        self.transfers.iter()
    }
}

impl FromIterator<Transfer> for RoutingDemand {
    fn from_iter<I: IntoIterator<Item = Transfer>>(iter: I) -> Self {
        Self {
            transfers: iter.into_iter().collect(),
        }
    }
}

impl Extend<Transfer> for RoutingDemand {
    fn extend<I: IntoIterator<Item = Transfer>>(&mut self, iter: I) {
        self.transfers.extend(iter);
    }
}

/// Per-node send/receive maxima of a demand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LoadProfile {
    pub out_max: u64,
    pub in_max: u64,
    pub total: u64,
}

impl LoadProfile {
    pub fn of(demand: &RoutingDemand, n: usize) -> Result<Self, SimError> {
        let mut out = vec![0u64; n];
        let mut inc = vec![0u64; n];
        for t in demand.iter() {
            for x in [t.src, t.dst] {
                if x as usize >= n {
                    return Err(SimError::EndpointOutOfRange {
                        vertex: x as u64,
                        n,
                    });
                }
            }
            out[t.src as usize] += 1;
            inc[t.dst as usize] += 1;
        }
        Ok(Self {
            out_max: out.into_iter().max().unwrap_or(0),
            in_max: inc.into_iter().max().unwrap_or(0),
            total: demand.len() as u64,
        })
    }

    /// `ceil(out_max / n) + ceil(in_max / n)`, or 0 for an empty demand.
    ///
    /// Stands in for a constant-round routing protocol on loads of at most
    /// `n` per node, applied once per multiple of `n`.
    pub fn charged_rounds(&self, n: usize) -> u64 {
        if self.total == 0 {
            return 0;
        }
        let n = n as u64;
        self.out_max.div_ceil(n) + self.in_max.div_ceil(n)
    }
}

fn relay_header(origin: VertexId, dst: VertexId) -> MessageWord {
    MessageWord::Control(((origin as u64) << 32) | dst as u64)
}

fn split_header(word: MessageWord) -> Option<(VertexId, VertexId)> {
    match word {
        MessageWord::Control(x) => Some(((x >> 32) as VertexId, x as VertexId)),
        _ => None,
    }
}

/// Frames queued on each ordered link, indexed by sender.
type Links = Vec<BTreeMap<VertexId, Vec<MessageWord>>>;

/// `(link sender, (origin, final destination), payload)` per receiver.
type Arrivals = Vec<Vec<(VertexId, (VertexId, VertexId), MessageWord)>>;

impl Engine {
    /// Moves every word of `demand` to its destination, tagged with its
    /// source. Inboxes are sorted by `(source, word)` in both modes.
    ///
    /// Charged rounds are [`LoadProfile::charged_rounds`] of the demand.
    /// In explicit mode the two-phase relay is simulated as well and its
    /// measured rounds go to `rounds_explicit`.
    pub fn route(&mut self, demand: &RoutingDemand) -> Result<Vec<Inbox>, SimError> {
        let profile = LoadProfile::of(demand, self.n)?;
        let charged = profile.charged_rounds(self.n);
        let inboxes = match self.mode {
            RoutingMode::Charged => {
                let mut inboxes: Vec<Inbox> = vec![Vec::new(); self.n];
                for t in demand.iter() {
                    inboxes[t.dst as usize].push((t.src, t.word));
                }
                self.charge(charged, 0, profile.total);
                inboxes
            }
            RoutingMode::Explicit => {
                let (inboxes, rounds, messages) = self.relay(demand)?;
                self.charge(charged, rounds, messages);
                inboxes
            }
        };
        Ok(inboxes
            .into_iter()
            .map(|mut ib| {
                ib.sort_unstable();
                ib
            })
            .collect())
    }

    /// Phase A spreads each source's words over relays, phase B forwards
    /// them to their destinations. Each payload travels behind a header
    /// word carrying `(origin, destination)`, so a relayed word occupies
    /// its link for two rounds.
    fn relay(&self, demand: &RoutingDemand) -> Result<(Vec<Inbox>, u64, u64), SimError> {
        let n = self.n as u64;
        let mut seq: HashMap<(VertexId, VertexId), u64> = HashMap::new();
        let mut links: Links = vec![BTreeMap::new(); self.n];
        for t in demand.iter() {
            let j = seq.entry((t.src, t.dst)).or_insert(0);
            let relay = ((t.src as u64 + t.dst as u64 + *j) % n) as VertexId;
            *j += 1;
            links[t.src as usize]
                .entry(relay)
                .or_default()
                .extend([relay_header(t.src, t.dst), t.word]);
        }
        let start = self.next_round();
        let (at_relays, rounds_a, msgs_a) = self.pump(links, start)?;

        let mut links: Links = vec![BTreeMap::new(); self.n];
        for (relay, arrivals) in at_relays.into_iter().enumerate() {
            for (_, (origin, dst), word) in arrivals {
                links[relay]
                    .entry(dst)
                    .or_default()
                    .extend([relay_header(origin, dst), word]);
            }
        }
        let (at_dst, rounds_b, msgs_b) = self.pump(links, start + rounds_a)?;

        let mut inboxes: Vec<Inbox> = vec![Vec::new(); self.n];
        for (dst, arrivals) in at_dst.into_iter().enumerate() {
            for (relay, (origin, to), word) in arrivals {
                if to as usize != dst {
                    return Err(SimError::RelayFraming {
                        src: relay,
                        dst: dst as VertexId,
                    });
                }
                inboxes[dst].push((origin, word));
            }
        }
        Ok((inboxes, rounds_a + rounds_b, msgs_a + msgs_b))
    }

    /// Drains every link one frame per round through checked delivery and
    /// reassembles header/payload pairs at the receivers.
    fn pump(&self, links: Links, first_round: u64) -> Result<(Arrivals, u64, u64), SimError> {
        let rounds = links
            .iter()
            .flat_map(|m| m.values().map(Vec::len))
            .max()
            .unwrap_or(0);
        let mut pending: Vec<HashMap<VertexId, (VertexId, VertexId)>> =
            vec![HashMap::new(); self.n];
        let mut arrivals: Arrivals = vec![Vec::new(); self.n];
        let mut messages = 0u64;
        for t in 0..rounds {
            let mut outbox = RoundOutbox::new(self.n);
            for (src, row) in links.iter().enumerate() {
                for (&dst, frames) in row {
                    if let Some(&w) = frames.get(t) {
                        outbox.send(src as VertexId, dst, w);
                    }
                }
            }
            messages += outbox.len() as u64;
            let inboxes = self.deliver(outbox, first_round + t as u64)?;
            for (dst, inbox) in inboxes.into_iter().enumerate() {
                for (src, word) in inbox {
                    match pending[dst].remove(&src) {
                        Some(header) => arrivals[dst].push((src, header, word)),
                        None => {
                            let header = split_header(word).ok_or(SimError::RelayFraming {
                                src,
                                dst: dst as VertexId,
                            })?;
                            pending[dst].insert(src, header);
                        }
                    }
                }
            }
        }
        if let Some((dst, p)) = pending.iter().enumerate().find(|(_, p)| !p.is_empty()) {
            let src = *p.keys().next().unwrap();
            return Err(SimError::RelayFraming {
                src,
                dst: dst as VertexId,
            });
        }
        Ok((arrivals, rounds as u64, messages))
    }
}
