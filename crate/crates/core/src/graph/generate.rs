use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Edge, Graph, GraphError, VertexId, Weight};

/// Random graph families. Weights are uniform in `[0, 2^32)` so that raw
/// weight collisions occur at moderate sizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    Complete,
    /// Each pair independently with probability `p`.
    Gnp(f64),
    /// Exactly `m` distinct pairs, uniformly.
    Gnm(usize),
    Path,
    /// Random labelled forest with the given number of trees.
    Forest(usize),
}

const WEIGHT_RANGE: Weight = 1 << 32;

fn max_edges(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Deterministic in `(n, model, seed)`. Edges come out sorted by endpoints.
pub fn gen_graph(n: usize, model: Model, seed: u64) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(GraphError::InvalidParameter("n must be at least 1".into()));
    }
    if n > VertexId::MAX as usize + 1 {
        return Err(GraphError::TooManyVertices(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(VertexId, VertexId)> = match model {
        Model::Complete => all_pairs(n).collect(),
        Model::Gnp(p) => {
            if !(0.0..=1.0).contains(&p) {
                return Err(GraphError::InvalidParameter(format!(
                    "p = {p} is outside [0, 1]"
                )));
            }
            all_pairs(n).filter(|_| rng.random_bool(p)).collect()
        }
        Model::Gnm(m) => {
            if m > max_edges(n) {
                return Err(GraphError::InvalidParameter(format!(
                    "m = {m} exceeds n(n-1)/2 = {}",
                    max_edges(n)
                )));
            }
            let mut picks = index::sample(&mut rng, max_edges(n), m).into_vec();
            picks.sort_unstable();
            pairs_at(n, &picks)
        }
        Model::Path => (1..n as VertexId).map(|v| (v - 1, v)).collect(),
        Model::Forest(trees) => {
            if trees == 0 || trees > n {
                return Err(GraphError::InvalidParameter(format!(
                    "forest needs 1 <= trees <= n, got {trees}"
                )));
            }
            let mut order: Vec<VertexId> = (0..n as VertexId).collect();
            order.shuffle(&mut rng);
            (trees..n)
                .map(|i| {
                    let parent = order[rng.random_range(0..i)];
                    let (a, b) = (order[i], parent);
                    (a.min(b), a.max(b))
                })
                .collect()
        }
    };
    pairs.sort_unstable();
    let edges = pairs
        .into_iter()
        .map(|(a, b)| Edge::new(a, b, rng.random_range(0..WEIGHT_RANGE)))
        .collect::<Result<Vec<_>, _>>()?;
    Graph::new(n, edges)
}

fn all_pairs(n: usize) -> impl Iterator<Item = (VertexId, VertexId)> {
    let n = n as VertexId;
    (0..n).flat_map(move |u| (u + 1..n).map(move |v| (u, v)))
}

/// Maps sorted row-major pair indices back to `(u, v)` pairs.
fn pairs_at(n: usize, sorted: &[usize]) -> Vec<(VertexId, VertexId)> {
    let mut out = Vec::with_capacity(sorted.len());
    let (mut u, mut row_start) = (0usize, 0usize);
    for &idx in sorted {
        while idx >= row_start + (n - 1 - u) {
            row_start += n - 1 - u;
            u += 1;
        }
        let v = u + 1 + (idx - row_start);
        out.push((u as VertexId, v as VertexId));
    }
    out
}
