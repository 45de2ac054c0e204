#![allow(dead_code)]

use clique_msf::graph::{Edge, EdgeKey, Graph, Weight};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Minimum spanning forest by dense Prim, restarted from every unvisited
/// vertex. Shares nothing with the library's Kruskal beyond `Edge`.
pub fn prim(g: &Graph) -> Vec<Edge> {
    let n = g.n();
    let mut adj: Vec<Vec<Edge>> = vec![Vec::new(); n];
    for e in g.edges() {
        adj[e.u() as usize].push(*e);
        adj[e.v() as usize].push(*e);
    }
    let mut visited = vec![false; n];
    let mut best: Vec<Option<Edge>> = vec![None; n];
    let mut out = Vec::new();
    for root in 0..n {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        let mut next = Some(root);
        while let Some(x) = next {
            for e in &adj[x] {
                let y = e.other(x as u32) as usize;
                if !visited[y] && best[y].is_none_or(|b| e.key() < b.key()) {
                    best[y] = Some(*e);
                }
            }
            next = None;
            let mut pick: Option<(EdgeKey, usize)> = None;
            for (y, b) in best.iter().enumerate() {
                if let (false, Some(b)) = (visited[y], b) {
                    if pick.is_none_or(|(k, _)| b.key() < k) {
                        pick = Some((b.key(), y));
                    }
                }
            }
            if let Some((_, y)) = pick {
                visited[y] = true;
                out.push(best[y].take().unwrap());
                next = Some(y);
            }
        }
    }
    out.sort();
    out
}

/// Rewrites every weight to `w % modulus` so ties are common.
pub fn collide_weights(g: &Graph, modulus: Weight) -> Graph {
    Graph::new(
        g.n(),
        g.edges()
            .iter()
            .map(|e| Edge::new(e.u(), e.v(), e.w() % modulus).unwrap()),
    )
    .unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn pick<T: Copy>(rng: &mut ChaCha8Rng, xs: &[T]) -> T {
    xs[rng.random_range(0..xs.len())]
}
