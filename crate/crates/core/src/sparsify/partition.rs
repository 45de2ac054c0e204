use std::fmt;
use std::ops::Range;

use super::exact;
use crate::graph::{Edge, VertexId};

/// Partition of `0..n` into contiguous ranges of `part_size` vertices (the
/// last range may be shorter), tagged with the sparsity exponent
/// `eps = 1/2^eps_exp`.
///
/// Every node can rebuild the scheme from `n` and the iteration number, so
/// it is globally known without communication.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionScheme {
    n: usize,
    part_size: usize,
    eps_exp: u32,
}

/// Unordered pair of part indices, stored with `i <= j`. 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockIndex {
    i: usize,
    j: usize,
}

impl BlockIndex {
    pub fn new(a: usize, b: usize) -> Self {
        Self {
            i: a.min(b),
            j: a.max(b),
        }
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }
}

impl fmt::Display for BlockIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.i, self.j)
    }
}

impl PartitionScheme {
    /// Singleton parts; `eps = 1`.
    pub fn initial(n: usize) -> Self {
        assert!(n >= 1, "partition needs at least one vertex");
        Self {
            n,
            part_size: 1,
            eps_exp: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn part_size(&self) -> usize {
        self.part_size
    }

    pub fn eps_exp(&self) -> u32 {
        self.eps_exp
    }

    /// Number of parts.
    pub fn ell(&self) -> usize {
        self.n.div_ceil(self.part_size)
    }

    pub fn part_of(&self, v: VertexId) -> usize {
        v as usize / self.part_size
    }

    pub fn range(&self, part: usize) -> Range<usize> {
        let start = part * self.part_size;
        start..(start + self.part_size).min(self.n)
    }

    pub fn part_len(&self, part: usize) -> usize {
        self.range(part).len()
    }

    pub fn block_of(&self, e: &Edge) -> BlockIndex {
        BlockIndex::new(self.part_of(e.u()), self.part_of(e.v()))
    }

    /// Vertices covered by a block: `|T_i ∪ T_j|`.
    pub fn block_vertices(&self, b: BlockIndex) -> usize {
        if b.i == b.j {
            self.part_len(b.i)
        } else {
            self.part_len(b.i) + self.part_len(b.j)
        }
    }

    /// How many consecutive parts the next coarsening merges:
    /// `ceil(ell / ceil(n^(eps/2)))`.
    pub fn merge_factor(&self) -> usize {
        let target = exact::ceil_n_eps(self.n as u64, self.eps_exp + 1) as usize;
        self.ell().div_ceil(target)
    }

    /// Merges consecutive parts in groups of [`merge_factor`](Self::merge_factor)
    /// and halves `eps`.
    pub fn coarsen(&self) -> Self {
        Self {
            n: self.n,
            part_size: (self.part_size * self.merge_factor()).min(self.n),
            eps_exp: self.eps_exp + 1,
        }
    }

    /// True when `n^eps` is an integer, i.e. no ceiling was needed.
    pub fn is_exact(&self) -> bool {
        exact::is_exact_root(self.n as u64, self.eps_exp)
    }
}

/// Position of `b` in the row-major listing of pairs `i <= j` over
/// `ell` parts.
pub fn triangular_index(b: BlockIndex, ell: usize) -> usize {
    let (i, j) = (b.i, b.j);
    debug_assert!(j < ell);
    i * ell - i * i.saturating_sub(1) / 2 + (j - i)
}

/// The node responsible for collecting block `b` when there are `ell`
/// parts. Labels wrap around modulo `n` once there are more pairs than
/// nodes.
pub fn assign_label(b: BlockIndex, ell: usize, n: usize) -> VertexId {
    (triangular_index(b, ell) % n) as VertexId
}

/// Most labels any single node holds.
pub fn label_multiplicity(ell: usize, n: usize) -> usize {
    (ell * (ell + 1) / 2).div_ceil(n)
}
