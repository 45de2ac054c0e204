use crate::graph::{Edge, VertexId};

/// Bits available to one message on one ordered pair in one round.
pub const WORD_BITS: usize = 160;
pub const WORD_BYTES: usize = WORD_BITS / 8;

// 2-bit tag + two 32-bit ids + 64-bit weight
const _: () = assert!(2 + 32 + 32 + 64 <= WORD_BITS);

const TAG_EDGE: u8 = 0;
const TAG_COUNT: u8 = 1;
const TAG_CONTROL: u8 = 2;

/// The single message an ordered pair of nodes may exchange per round.
///
/// Every variant packs into [`WORD_BITS`] bits: a 2-bit tag, two 32-bit
/// vertex ids and a 64-bit weight for edges, or one 64-bit integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MessageWord {
    Edge(Edge),
    Count(u64),
    Control(u64),
}

impl MessageWord {
    pub fn encode(&self) -> [u8; WORD_BYTES] {
        let mut buf = [0u8; WORD_BYTES];
        match *self {
            MessageWord::Edge(e) => {
                buf[0] = TAG_EDGE;
                buf[1..5].copy_from_slice(&e.u().to_le_bytes());
                buf[5..9].copy_from_slice(&e.v().to_le_bytes());
                buf[9..17].copy_from_slice(&e.w().to_le_bytes());
            }
            MessageWord::Count(c) => {
                buf[0] = TAG_COUNT;
                buf[9..17].copy_from_slice(&c.to_le_bytes());
            }
            MessageWord::Control(c) => {
                buf[0] = TAG_CONTROL;
                buf[9..17].copy_from_slice(&c.to_le_bytes());
            }
        }
        buf
    }

    /// Inverse of [`encode`](Self::encode). `None` for an unknown tag or a
    /// non-canonical edge.
    pub fn decode(buf: &[u8; WORD_BYTES]) -> Option<Self> {
        let u64_at = |at: usize| u64::from_le_bytes(buf[at..at + 8].try_into().unwrap());
        let u32_at = |at: usize| VertexId::from_le_bytes(buf[at..at + 4].try_into().unwrap());
        match buf[0] {
            TAG_EDGE => {
                let (u, v) = (u32_at(1), u32_at(5));
                (u < v)
                    .then(|| Edge::new(u, v, u64_at(9)).ok())
                    .flatten()
                    .map(MessageWord::Edge)
            }
            TAG_COUNT => Some(MessageWord::Count(u64_at(9))),
            TAG_CONTROL => Some(MessageWord::Control(u64_at(9))),
            _ => None,
        }
    }

    pub fn as_edge(&self) -> Option<Edge> {
        match self {
            MessageWord::Edge(e) => Some(*e),
            _ => None,
        }
    }

    pub fn as_count(&self) -> Option<u64> {
        match self {
            MessageWord::Count(c) => Some(*c),
            _ => None,
        }
    }
}
