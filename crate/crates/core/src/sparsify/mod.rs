//! Deterministic minimum-spanning-forest sparsification on the clique
//! engine, and the `O(log log n)`-round MST built on top of it.

mod amplify;
mod cert;
pub mod exact;
mod partition;

use thiserror::Error;

use crate::clique::{
    Engine, MessageWord, RoundOutbox, RoutingDemand, RoutingMode, RunMetrics, SimError,
};
use crate::graph::{kruskal, Edge, Forest, Graph, VertexId};

pub use amplify::{amplify, AmplifyReport, BlockForest};
pub use cert::{check_sparse, check_sparse_edges, SparsityCert, Violation};
pub use partition::{
    assign_label, label_multiplicity, triangular_index, BlockIndex, PartitionScheme,
};

/// Charged-round ceiling for one amplification step when block loads stay
/// within `2n`: collecting costs at most `1 + 2` (each node sends fewer than
/// `n` edges, each label node receives at most `2n`) and redistributing at
/// most `4 + 1` (a label node sends each of fewer than `2n` forest edges to
/// two endpoints, each node hears about fewer than `n`).
pub const AMPLIFY_ROUND_BOUND: u64 = 8;

#[derive(Debug, Error)]
pub enum SparsifyError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("input is not sparse at eps = 1/2^{}: {:?}", .0.eps_exp, .0.violations)]
    Precondition(Box<SparsityCert>),
    #[error("output is not sparse at eps = 1/2^{}: {:?}", .0.eps_exp, .0.violations)]
    Postcondition(Box<SparsityCert>),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// Accounting for one amplification step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationMetrics {
    pub iter: u32,
    pub eps_exp: u32,
    pub edges_before: usize,
    pub edges_after: usize,
    pub rounds_charged: u64,
    pub rounds_explicit: Option<u64>,
    pub messages: u64,
    pub cert_ok: bool,
}

impl From<(u32, &AmplifyReport)> for IterationMetrics {
    fn from((iter, r): (u32, &AmplifyReport)) -> Self {
        Self {
            iter,
            eps_exp: r.scheme.eps_exp(),
            edges_before: r.edges_before,
            edges_after: r.edges_after,
            rounds_charged: r.rounds_charged,
            rounds_explicit: r.rounds_explicit,
            messages: r.messages,
            cert_ok: r.cert.passed(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SparsifyResult {
    /// Surviving edges in key order.
    pub edges: Vec<Edge>,
    pub scheme: PartitionScheme,
    pub iterations: Vec<IterationMetrics>,
    pub cert: SparsityCert,
    pub metrics: RunMetrics,
}

impl SparsifyResult {
    /// Whether the surviving edges have the same minimum spanning forest as `g`.
    pub fn preserves_msf(&self, g: &Graph) -> bool {
        kruskal(&self.edges) == kruskal(g.edges())
    }

    /// `2 * ceil(n^(1 + 1/2^k))`, times the slack factor for inexact `n`.
    pub fn edge_bound(&self) -> usize {
        self.cert.edge_bound
    }
}

/// Step-by-step driver for repeated amplification on one engine.
pub struct Sparsifier {
    engine: Engine,
    scheme: PartitionScheme,
    local: Vec<Vec<Edge>>,
    iterations: Vec<IterationMetrics>,
}

impl Sparsifier {
    pub fn new(g: &Graph, mode: RoutingMode) -> Self {
        Self::with_engine(g, Engine::new(g.n(), mode))
    }

    pub fn with_engine(g: &Graph, engine: Engine) -> Self {
        assert_eq!(engine.n(), g.n(), "engine size must match the graph");
        Self {
            engine,
            scheme: PartitionScheme::initial(g.n()),
            local: g.incidence(),
            iterations: Vec::new(),
        }
    }

    pub fn step(&mut self) -> Result<AmplifyReport, SparsifyError> {
        let report = amplify(&mut self.engine, &self.scheme, &mut self.local)?;
        self.scheme = report.scheme;
        let iter = self.iterations.len() as u32 + 1;
        self.iterations.push((iter, &report).into());
        Ok(report)
    }

    pub fn scheme(&self) -> &PartitionScheme {
        &self.scheme
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn local_edges(&self) -> &[Vec<Edge>] {
        &self.local
    }

    /// Current surviving edges in key order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut edges = amplify::gather_edges(&self.local);
        edges.sort_unstable();
        edges
    }

    pub fn finish(self) -> SparsifyResult {
        let edges = self.edges();
        let cert = check_sparse_edges(&edges, &self.scheme);
        SparsifyResult {
            edges,
            scheme: self.scheme,
            iterations: self.iterations,
            cert,
            metrics: self.engine.metrics().clone(),
        }
    }
}

/// Applies `k` amplification steps starting from singleton parts. The
/// result is sparse at `eps = 1/2^k` and keeps the minimum spanning forest.
pub fn sparsify(g: &Graph, k: u32, mode: RoutingMode) -> Result<SparsifyResult, SparsifyError> {
    let mut s = Sparsifier::new(g, mode);
    for _ in 0..k {
        s.step()?;
    }
    Ok(s.finish())
}

#[derive(Debug, Clone)]
pub struct MstResult {
    pub forest: Forest,
    /// Amplification steps run before the final gather.
    pub k: u32,
    pub iterations: Vec<IterationMetrics>,
    /// Edges left for the final gather.
    pub gathered_edges: usize,
    /// Charged rounds spent after sparsification.
    pub finale_rounds: u64,
    pub metrics: RunMetrics,
}

/// Number of amplification steps `mst` runs: `ceil(log2 log2 n)`, 0 for `n <= 2`.
pub fn mst_iterations(n: usize) -> u32 {
    exact::ceil_log2_log2(n as u64)
}

/// Minimum spanning forest in `O(log log n)` rounds: sparsify to
/// `eps <= 1/log2 n`, leaving `O(n)` edges, then let every node learn all
/// of them and compute the forest locally.
///
/// The gather runs in three parts: every node announces how many edges it
/// owns (one round), edges are rebalanced so that edge number `r` in the
/// global order lands on node `r mod n`, and the balanced holders send
/// one edge per round to everyone.
pub fn mst(g: &Graph, mode: RoutingMode) -> Result<MstResult, SparsifyError> {
    let n = g.n();
    let k = mst_iterations(n);
    let mut s = Sparsifier::new(g, mode);
    for _ in 0..k {
        s.step()?;
    }
    let rounds_before = s.engine.metrics().rounds_charged;
    let Sparsifier {
        mut engine,
        local,
        iterations,
        ..
    } = s;

    let owned: Vec<Vec<Edge>> = local
        .iter()
        .enumerate()
        .map(|(v, inc)| {
            let mut mine: Vec<Edge> = amplify::owned(v, inc).copied().collect();
            mine.sort_unstable();
            mine
        })
        .collect();

    engine.set_phase("gather: counts");
    let mut outbox = RoundOutbox::new(n);
    for (v, mine) in owned.iter().enumerate() {
        for dst in 0..n as VertexId {
            outbox.send(v as VertexId, dst, MessageWord::Count(mine.len() as u64));
        }
    }
    let inboxes = engine.run_round(outbox)?;

    engine.set_phase("gather: balance");
    let mut demand = RoutingDemand::new();
    for (v, mine) in owned.iter().enumerate() {
        // inbox is sender-ordered, so the prefix is the count from nodes before v
        let offset: u64 = inboxes[v]
            .iter()
            .take_while(|&&(src, _)| (src as usize) < v)
            .filter_map(|(_, w)| w.as_count())
            .sum();
        for (r, e) in mine.iter().enumerate() {
            let holder = ((offset + r as u64) % n as u64) as VertexId;
            demand.push(v as VertexId, holder, MessageWord::Edge(*e));
        }
    }
    let held = engine.route(&demand)?;

    engine.set_phase("gather: all-to-all");
    let contributions: Vec<Vec<MessageWord>> = held
        .into_iter()
        .map(|ib| ib.into_iter().map(|(_, w)| w).collect())
        .collect();
    let learned = engine.all_gather(&contributions)?;
    let edges: Vec<Edge> = learned.iter().filter_map(|(_, w)| w.as_edge()).collect();
    if edges.len() != demand.len() {
        return Err(SparsifyError::Invariant(format!(
            "gathered {} of {} surviving edges",
            edges.len(),
            demand.len()
        )));
    }
    let forest = Forest::from_edges(kruskal(&edges));

    let metrics = engine.metrics().clone();
    Ok(MstResult {
        forest,
        k,
        iterations,
        gathered_edges: edges.len(),
        finale_rounds: metrics.rounds_charged - rounds_before,
        metrics,
    })
}
