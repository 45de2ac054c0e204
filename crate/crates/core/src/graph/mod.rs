//! Weighted undirected graphs, the strict edge order, and the sequential
//! minimum spanning forest oracle.

mod dsu;
mod generate;
mod io;

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

pub use dsu::DisjointSet;
pub use generate::{gen_graph, Model};
pub use io::{parse_graph, read_graph, render_graph, write_graph};

pub type VertexId = u32;
pub type Weight = u64;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("endpoint {vertex} out of range for n = {n}")]
    EndpointOutOfRange { vertex: u64, n: usize },
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(VertexId, VertexId),
    #[error("vertex count {0} exceeds the 32-bit id space")]
    TooManyVertices(usize),
    #[error("invalid generator parameter: {0}")]
    InvalidParameter(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<GraphError>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// An undirected weighted edge stored canonically with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    u: VertexId,
    v: VertexId,
    w: Weight,
}

/// Lexicographic `(w, u, v)` key. Distinct canonical edges never share a key,
/// so ordering edges by key makes the minimum spanning forest unique.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeKey(pub Weight, pub VertexId, pub VertexId);

impl Edge {
    pub fn new(a: VertexId, b: VertexId, w: Weight) -> Result<Self, GraphError> {
        match a.cmp(&b) {
            Ordering::Less => Ok(Self { u: a, v: b, w }),
            Ordering::Greater => Ok(Self { u: b, v: a, w }),
            Ordering::Equal => Err(GraphError::SelfLoop(a)),
        }
    }

    pub fn u(&self) -> VertexId {
        self.u
    }

    pub fn v(&self) -> VertexId {
        self.v
    }

    pub fn w(&self) -> Weight {
        self.w
    }

    pub fn key(&self) -> EdgeKey {
        EdgeKey(self.w, self.u, self.v)
    }

    pub fn endpoints(&self) -> (VertexId, VertexId) {
        (self.u, self.v)
    }

    /// The endpoint that is not `x`. `x` must be an endpoint.
    pub fn other(&self, x: VertexId) -> VertexId {
        debug_assert!(x == self.u || x == self.v);
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

pub fn edge_key(e: &Edge) -> EdgeKey {
    e.key()
}

impl Ord for Edge {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Edge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.u, self.v, self.w)
    }
}

/// Vertex count plus a duplicate-free list of edges over `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self, GraphError> {
        if n > VertexId::MAX as usize + 1 {
            return Err(GraphError::TooManyVertices(n));
        }
        let edges: Vec<Edge> = edges.into_iter().collect();
        let mut seen = HashSet::with_capacity(edges.len());
        for e in &edges {
            if e.v as usize >= n {
                return Err(GraphError::EndpointOutOfRange {
                    vertex: e.v as u64,
                    n,
                });
            }
            if !seen.insert((e.u, e.v)) {
                return Err(GraphError::DuplicateEdge(e.u, e.v));
            }
        }
        Ok(Self { n, edges })
    }

    /// Builds a graph from raw `(a, b, w)` triples.
    pub fn from_triples(
        n: usize,
        triples: &[(VertexId, VertexId, Weight)],
    ) -> Result<Self, GraphError> {
        let edges = triples
            .iter()
            .map(|&(a, b, w)| Edge::new(a, b, w))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(n, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn into_edges(self) -> Vec<Edge> {
        self.edges
    }

    /// Per-vertex incident edge lists; every edge appears in both endpoint lists.
    pub fn incidence(&self) -> Vec<Vec<Edge>> {
        let mut lists = vec![Vec::new(); self.n];
        for e in &self.edges {
            lists[e.u as usize].push(*e);
            lists[e.v as usize].push(*e);
        }
        lists
    }
}

/// Edges of a spanning forest, kept sorted by [`EdgeKey`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Forest {
    edges: Vec<Edge>,
}

impl Forest {
    pub fn from_edges(mut edges: Vec<Edge>) -> Self {
        edges.sort_unstable();
        Self { edges }
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn total_weight(&self) -> u128 {
        self.edges.iter().map(|e| e.w as u128).sum()
    }

    /// True when the edges contain no cycle on vertex set `0..n`.
    pub fn is_acyclic(&self, n: usize) -> bool {
        let mut ds = DisjointSet::new(n);
        self.edges
            .iter()
            .all(|e| ds.union(e.u as usize, e.v as usize))
    }
}

/// Minimum spanning forest of an arbitrary edge set under [`EdgeKey`] order.
///
/// Vertex ids are compressed first, so the cost depends on the number of
/// edges rather than on the largest id. Returns edges in key order.
pub fn kruskal(edges: &[Edge]) -> Vec<Edge> {
    let mut ids: Vec<VertexId> = edges.iter().flat_map(|e| [e.u, e.v]).collect();
    ids.sort_unstable();
    ids.dedup();
    let local = |x: VertexId| ids.binary_search(&x).expect("endpoint was collected");

    let mut sorted = edges.to_vec();
    sorted.sort_unstable();
    let mut ds = DisjointSet::new(ids.len());
    let mut forest = Vec::with_capacity(ids.len().saturating_sub(1));
    for e in sorted {
        if ds.union(local(e.u), local(e.v)) {
            forest.push(e);
        }
    }
    forest
}

/// The unique minimum spanning forest of `g`.
pub fn msf_oracle(g: &Graph) -> Forest {
    Forest {
        edges: kruskal(g.edges()),
    }
}

/// Component id per vertex. Ids are dense, numbered in order of each
/// component's smallest vertex.
pub fn components(g: &Graph) -> Vec<usize> {
    let mut ds = DisjointSet::new(g.n());
    for e in g.edges() {
        ds.union(e.u as usize, e.v as usize);
    }
    let mut id_of_root = vec![usize::MAX; g.n()];
    let mut next = 0;
    (0..g.n())
        .map(|x| {
            let root = ds.find(x);
            if id_of_root[root] == usize::MAX {
                id_of_root[root] = next;
                next += 1;
            }
            id_of_root[root]
        })
        .collect()
}

pub fn component_count(g: &Graph) -> usize {
    components(g).into_iter().max().map_or(0, |c| c + 1)
}
