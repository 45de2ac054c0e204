use std::collections::BTreeMap;

use super::exact;
use super::partition::{BlockIndex, PartitionScheme};
use crate::graph::{Edge, Graph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    TooManyParts {
        ell: usize,
        bound: usize,
    },
    PartTooLarge {
        part: usize,
        size: usize,
        bound: usize,
    },
    BlockOverfull {
        block: BlockIndex,
        count: usize,
        bound: usize,
    },
}

/// Outcome of checking an edge set against a partition at `eps = 1/2^eps_exp`.
///
/// Bounds are `ceil(n^eps)` parts, `slack * ceil(n^(1-eps))` vertices per
/// part and `slack * 2 * ceil(n^(1-eps))` edges per block. `slack` is 1
/// when `n^eps` is integral and 2 otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsityCert {
    pub eps_exp: u32,
    pub slack: usize,
    pub ell_bound: usize,
    pub part_bound: usize,
    pub block_bound: usize,
    pub part_sizes: Vec<usize>,
    /// Only non-empty blocks appear.
    pub block_counts: BTreeMap<BlockIndex, usize>,
    pub total_edges: usize,
    /// `slack * 2 * ceil(n^(1+eps))`; reported, not part of pass/fail.
    pub edge_bound: usize,
    pub violations: Vec<Violation>,
}

impl SparsityCert {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn within_edge_bound(&self) -> bool {
        self.total_edges <= self.edge_bound
    }
}

pub fn check_sparse(g: &Graph, scheme: &PartitionScheme) -> SparsityCert {
    check_sparse_edges(g.edges(), scheme)
}

pub fn check_sparse_edges(edges: &[Edge], scheme: &PartitionScheme) -> SparsityCert {
    let n = scheme.n() as u64;
    let i = scheme.eps_exp();
    let slack = if scheme.is_exact() { 1 } else { 2 };
    let ell_bound = exact::ceil_n_eps(n, i) as usize;
    let part_bound = slack * exact::ceil_n_one_minus_eps(n, i) as usize;
    let block_bound = 2 * part_bound;
    let edge_bound = slack * 2 * exact::ceil_n_one_plus_eps(n, i) as usize;

    let part_sizes: Vec<usize> = (0..scheme.ell()).map(|p| scheme.part_len(p)).collect();
    let mut block_counts = BTreeMap::new();
    for e in edges {
        *block_counts.entry(scheme.block_of(e)).or_insert(0) += 1;
    }

    let mut violations = Vec::new();
    if scheme.ell() > ell_bound {
        violations.push(Violation::TooManyParts {
            ell: scheme.ell(),
            bound: ell_bound,
        });
    }
    for (part, &size) in part_sizes.iter().enumerate() {
        if size > part_bound {
            violations.push(Violation::PartTooLarge {
                part,
                size,
                bound: part_bound,
            });
        }
    }
    for (&block, &count) in &block_counts {
        if count > block_bound {
            violations.push(Violation::BlockOverfull {
                block,
                count,
                bound: block_bound,
            });
        }
    }

    SparsityCert {
        eps_exp: i,
        slack,
        ell_bound,
        part_bound,
        block_bound,
        part_sizes,
        block_counts,
        total_edges: edges.len(),
        edge_bound,
        violations,
    }
}
