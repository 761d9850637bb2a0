//! Small test graphs: named paths, cycles and complete graphs, every
//! connected simple graph on up to four labelled vertices, and seeded random
//! weighted multigraphs with loops and parallel edges.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{EdgeRecord, WeightedMultigraph};

/// Path `1-2-…-n` with the given edge weights.
pub fn weighted_path(weights: &[f64]) -> WeightedMultigraph {
    let edges: Vec<_> = weights.iter().enumerate().map(|(i, &w)| (i, i + 1, w)).collect();
    WeightedMultigraph::from_edges(weights.len() + 1, &edges).expect("valid path")
}

pub fn path(n: usize) -> WeightedMultigraph {
    weighted_path(&vec![1.0; n - 1])
}

/// Path with end weights `√2` and inner weights 1.
pub fn root2_path(n: usize) -> WeightedMultigraph {
    let mut w = vec![1.0; n - 1];
    w[0] = 2f64.sqrt();
    w[n - 2] = 2f64.sqrt();
    weighted_path(&w)
}

pub fn cycle(n: usize) -> WeightedMultigraph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
    WeightedMultigraph::from_edges(n, &edges).expect("valid cycle")
}

pub fn complete(n: usize) -> WeightedMultigraph {
    let edges: Vec<_> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j, 1.0)))
        .collect();
    WeightedMultigraph::from_edges(n, &edges).expect("valid complete graph")
}

/// Every connected simple graph on vertex set `{1..n}` (labelled, so
/// isomorphic copies appear separately).
pub fn connected_simple_graphs(n: usize) -> Vec<WeightedMultigraph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    for mask in 1u32..(1 << pairs.len()) {
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(b, _)| mask & (1 << b) != 0)
            .map(|(_, &(i, j))| (i, j, 1.0))
            .collect();
        let g = WeightedMultigraph::from_edges(n, &edges).expect("valid simple graph");
        if g.is_connected() {
            out.push(g);
        }
    }
    out
}

/// Connected simple graphs on 2, 3 and 4 vertices: 1 + 4 + 38.
pub fn small_connected_graphs() -> Vec<WeightedMultigraph> {
    (2..=4).flat_map(connected_simple_graphs).collect()
}

/// Connected weighted multigraph on `n` vertices: a random spanning tree,
/// a few extra edges (possibly parallel), and a few loops. Weights are
/// uniform on `[0.5, 2]`.
pub fn random_multigraph(rng: &mut impl Rng, n: usize) -> WeightedMultigraph {
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        edges.push(EdgeRecord::new(u, v, random_weight(rng)));
    }
    for _ in 0..rng.random_range(0..=n) {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a != b {
            edges.push(EdgeRecord::new(a, b, random_weight(rng)));
        }
    }
    // at least one parallel edge
    let dup = edges[rng.random_range(0..edges.len())];
    edges.push(EdgeRecord::new(dup.a, dup.b, random_weight(rng)));
    for _ in 0..rng.random_range(1..=2) {
        let v = rng.random_range(0..n);
        edges.push(EdgeRecord::new(v, v, random_weight(rng)));
    }
    let labels = (1..=n).map(|i| i.to_string()).collect();
    WeightedMultigraph::new(labels, edges).expect("valid random graph")
}

fn random_weight(rng: &mut impl Rng) -> f64 {
    rng.random_range(0.5..=2.0)
}

/// `count` random multigraphs with `min_n ≤ n ≤ max_n`, reproducible from `seed`.
pub fn random_corpus(count: usize, min_n: usize, max_n: usize, seed: u64) -> Vec<WeightedMultigraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(min_n..=max_n);
            random_multigraph(&mut rng, n)
        })
        .collect()
}

/// Seed of the default random corpus.
pub const DEFAULT_SEED: u64 = 20_260_416;
