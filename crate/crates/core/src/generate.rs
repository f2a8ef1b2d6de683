//! Graph generators for experiments and tests.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::rng::trial_rng;

/// Two cliques `K_k` joined by a path of `path_edges` edges, with integer
/// weights uniform on `{1, …, weight_max}`.
///
/// Vertices `0..k` form the first clique, `k..k+p-1` are the interior path
/// vertices, and the last `k` vertices form the second clique. The path runs
/// from vertex `k-1` to vertex `k+p-1`. `n = 2k + p - 1`, `m = k(k-1) + p`.
pub fn gen_barbell(
    k: usize,
    path_edges: usize,
    weight_max: u32,
    seed: u64,
) -> Result<WeightedGraph> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "clique size must be at least 2, got {k}"
        )));
    }
    if path_edges < 1 {
        return Err(Error::InvalidParameter(
            "path needs at least one edge".into(),
        ));
    }
    if weight_max < 1 {
        return Err(Error::InvalidParameter(
            "weight_max must be at least 1".into(),
        ));
    }
    let n = 2 * k + path_edges - 1;
    let second = k + path_edges - 1;
    let mut pairs = Vec::with_capacity(k * (k - 1) + path_edges);
    for base in [0, second] {
        for i in 0..k {
            for j in (i + 1)..k {
                pairs.push((base + i, base + j));
            }
        }
    }
    for step in 0..path_edges {
        pairs.push((k - 1 + step, k + step));
    }
    let mut rng = trial_rng(seed, 0);
    let edges: Vec<_> = pairs
        .into_iter()
        .map(|(u, v)| (u, v, rng.random_range(1..=weight_max) as f64))
        .collect();
    WeightedGraph::new(n, edges)
}

/// Erdős–Rényi `G(n, edge_prob)` with integer weights uniform on
/// `{1, …, weight_max}`.
pub fn gen_random(n: usize, edge_prob: f64, weight_max: u32, seed: u64) -> Result<WeightedGraph> {
    if n < 1 {
        return Err(Error::InvalidParameter("need at least one vertex".into()));
    }
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(Error::InvalidParameter(format!(
            "edge_prob must lie in [0, 1], got {edge_prob}"
        )));
    }
    if weight_max < 1 {
        return Err(Error::InvalidParameter(
            "weight_max must be at least 1".into(),
        ));
    }
    let mut rng = trial_rng(seed, 0);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let keep = rng.random::<f64>() < edge_prob;
            let w = rng.random_range(1..=weight_max) as f64;
            if keep {
                edges.push((u, v, w));
            }
        }
    }
    WeightedGraph::new(n, edges)
}
