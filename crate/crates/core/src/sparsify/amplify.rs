use std::collections::{BTreeMap, HashSet};

use super::cert::{check_sparse_edges, SparsityCert};
use super::exact;
use super::partition::{assign_label, BlockIndex, PartitionScheme};
use super::SparsifyError;
use crate::clique::{Engine, MessageWord, RoutingDemand};
use crate::graph::{kruskal, Edge, VertexId};

/// The minimum spanning forest one label node computed for one block.
#[derive(Debug, Clone)]
pub struct BlockForest {
    pub block: BlockIndex,
    pub label: VertexId,
    pub collected: usize,
    pub forest: Vec<Edge>,
}

#[derive(Debug, Clone)]
pub struct AmplifyReport {
    /// The coarsened partition the surviving edges are sparse against.
    pub scheme: PartitionScheme,
    pub forests: Vec<BlockForest>,
    pub cert: SparsityCert,
    pub edges_before: usize,
    pub edges_after: usize,
    pub rounds_charged: u64,
    pub rounds_explicit: Option<u64>,
    pub messages: u64,
}

/// Edges node `v` is responsible for sending: those where it is the lower endpoint.
pub(crate) fn owned(v: usize, incident: &[Edge]) -> impl Iterator<Item = &Edge> {
    incident.iter().filter(move |e| e.u() as usize == v)
}

pub(crate) fn gather_edges(local: &[Vec<Edge>]) -> Vec<Edge> {
    local
        .iter()
        .enumerate()
        .flat_map(|(v, inc)| owned(v, inc).copied())
        .collect()
}

fn invariant(msg: String) -> SparsifyError {
    SparsifyError::Invariant(msg)
}

/// One amplification step: from a pair that is sparse at `eps` to a
/// subgraph sparse at `eps/2` that still contains the minimum spanning forest.
///
/// `local[v]` holds node `v`'s incident edges (each edge at both
/// endpoints) and is pruned in place to the survivors.
///
/// 1. Each edge is routed by its lower endpoint to the label node of its
///    block under the coarsened partition.
/// 2. Each label node computes the minimum spanning forest of each block
///    it collected.
/// 3. Every forest edge is routed back to both endpoints, which keep
///    exactly the edges they hear about.
pub fn amplify(
    engine: &mut Engine,
    scheme: &PartitionScheme,
    local: &mut [Vec<Edge>],
) -> Result<AmplifyReport, SparsifyError> {
    let n = engine.n();
    if local.len() != n || scheme.n() != n {
        return Err(invariant(format!(
            "clique has {n} nodes, edge lists {} and partition {}",
            local.len(),
            scheme.n()
        )));
    }
    let before = gather_edges(local);
    let pre = check_sparse_edges(&before, scheme);
    if !pre.passed() {
        return Err(SparsifyError::Precondition(Box::new(pre)));
    }
    let start = engine.metrics().clone();

    let coarse = scheme.coarsen();
    let ell = coarse.ell();
    let label = |b: BlockIndex| assign_label(b, ell, n);

    engine.set_phase(format!("amplify {}: collect", coarse.eps_exp()));
    let mut demand = RoutingDemand::new();
    for (v, inc) in local.iter().enumerate() {
        for e in owned(v, inc) {
            demand.push(
                v as VertexId,
                label(coarse.block_of(e)),
                MessageWord::Edge(*e),
            );
        }
    }
    let inboxes = engine.route(&demand)?;

    // (ceil(l/l'))^2 fine blocks make one coarse block
    let g = scheme.merge_factor();
    let load_bound = g * g * pre.block_bound;
    let coarse_slack = if coarse.is_exact() { 1 } else { 2 };
    let forest_bound =
        2 * coarse_slack * exact::ceil_n_one_minus_eps(n as u64, coarse.eps_exp()) as usize;

    let mut forests = Vec::new();
    for (x, inbox) in inboxes.iter().enumerate() {
        let mut blocks: BTreeMap<BlockIndex, Vec<Edge>> = BTreeMap::new();
        for &(_, word) in inbox {
            let e = word
                .as_edge()
                .ok_or_else(|| invariant(format!("node {x} received a non-edge word")))?;
            let b = coarse.block_of(&e);
            if label(b) as usize != x {
                return Err(invariant(format!(
                    "edge {e} of block {b} delivered to node {x}"
                )));
            }
            blocks.entry(b).or_default().push(e);
        }
        for (block, edges) in blocks {
            if edges.len() > load_bound {
                return Err(invariant(format!(
                    "block {block} collected {} edges, bound {load_bound}",
                    edges.len()
                )));
            }
            let forest = kruskal(&edges);
            let spanned = coarse.block_vertices(block);
            if forest.len() >= spanned.max(1) || forest.len() > forest_bound {
                return Err(invariant(format!(
                    "forest of block {block} has {} edges on {spanned} vertices",
                    forest.len()
                )));
            }
            forests.push(BlockForest {
                block,
                label: x as VertexId,
                collected: edges.len(),
                forest,
            });
        }
    }

    engine.set_phase(format!("amplify {}: redistribute", coarse.eps_exp()));
    let mut demand = RoutingDemand::new();
    for bf in &forests {
        for e in &bf.forest {
            demand.push(bf.label, e.u(), MessageWord::Edge(*e));
            demand.push(bf.label, e.v(), MessageWord::Edge(*e));
        }
    }
    let inboxes = engine.route(&demand)?;

    for (v, (inc, inbox)) in local.iter_mut().zip(inboxes).enumerate() {
        let keep: HashSet<Edge> = inbox.iter().filter_map(|(_, w)| w.as_edge()).collect();
        let before_len = inc.len();
        inc.retain(|e| keep.contains(e));
        if inc.len() != keep.len() {
            return Err(invariant(format!(
                "node {v} was told about {} survivors but holds {} of them (of {before_len})",
                keep.len(),
                inc.len()
            )));
        }
    }

    let after = gather_edges(local);
    let cert = check_sparse_edges(&after, &coarse);
    if !cert.passed() {
        return Err(SparsifyError::Postcondition(Box::new(cert)));
    }
    let end = engine.metrics();
    Ok(AmplifyReport {
        scheme: coarse,
        forests,
        cert,
        edges_before: before.len(),
        edges_after: after.len(),
        rounds_charged: end.rounds_charged - start.rounds_charged,
        rounds_explicit: end
            .rounds_explicit
            .zip(start.rounds_explicit)
            .map(|(a, b)| a - b),
        messages: end.messages_total - start.messages_total,
    })
}
