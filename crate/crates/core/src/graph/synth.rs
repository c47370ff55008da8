//! Synthetic graph generators for tests, examples and benchmarks.

use std::collections::HashSet;

use rand::Rng;

use super::{Graph, NodeId, TypeId};
use crate::samplers::AliasTable;

/// `m` distinct undirected edges without self-loops, endpoints uniform.
pub fn uniform_edges<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Vec<(NodeId, NodeId)> {
    assert!(n >= 2, "need at least two nodes");
    let max_edges = n * (n - 1) / 2;
    assert!(m <= max_edges, "{m} edges do not fit in {n} nodes");
    let mut seen = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let u = rng.gen_range(0..n) as NodeId;
        let v = rng.gen_range(0..n) as NodeId;
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        if seen.insert(key) {
            edges.push(key);
        }
    }
    edges
}

/// `m` distinct undirected edges whose endpoints follow a Chung-Lu power law
/// with degree exponent `gamma` (> 2).
pub fn power_law_edges<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    gamma: f64,
    rng: &mut R,
) -> Vec<(NodeId, NodeId)> {
    assert!(gamma > 2.0);
    assert!(m <= n * (n - 1) / 4, "too dense for rejection of duplicates");
    let expected: Vec<f64> = (0..n)
        .map(|i| ((i + 1) as f64).powf(-1.0 / (gamma - 1.0)))
        .collect();
    let table = AliasTable::new(&expected).expect("positive weights");
    let mut seen = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let u = table.sample(rng) as NodeId;
        let v = table.sample(rng) as NodeId;
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        if seen.insert(key) {
            edges.push(key);
        }
    }
    edges
}

fn assemble<R: Rng + ?Sized>(
    n: usize,
    edges: Vec<(NodeId, NodeId)>,
    weighted: bool,
    rng: &mut R,
) -> Graph {
    let arcs = edges.into_iter().map(|(u, v)| {
        let w = if weighted { rng.gen_range(0.5..5.0) } else { 1.0 };
        (u, v, w)
    });
    let arcs: Vec<_> = arcs.collect();
    Graph::from_edges(n, arcs, true).expect("generated edges are valid")
}

/// Symmetric graph with `m` uniform random undirected edges.
pub fn random_graph<R: Rng + ?Sized>(n: usize, m: usize, weighted: bool, rng: &mut R) -> Graph {
    let edges = uniform_edges(n, m, rng);
    assemble(n, edges, weighted, rng)
}

/// Symmetric heavy-tailed graph (Chung-Lu, exponent `gamma`).
pub fn power_law_graph<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    gamma: f64,
    weighted: bool,
    rng: &mut R,
) -> Graph {
    let edges = power_law_edges(n, m, gamma, rng);
    assemble(n, edges, weighted, rng)
}

/// Star with node 0 at the center and `leaves` unit-weight spokes.
pub fn star(leaves: usize) -> Graph {
    let edges = (1..=leaves as NodeId).map(|leaf| (0, leaf, 1.0));
    Graph::from_edges(leaves + 1, edges, true).expect("valid star")
}

/// Uniform random type labels in `0..num_types`; every label is used when
/// `n >= num_types`.
pub fn random_types<R: Rng + ?Sized>(n: usize, num_types: usize, rng: &mut R) -> Vec<TypeId> {
    let mut types: Vec<TypeId> = (0..n)
        .map(|_| rng.gen_range(0..num_types) as TypeId)
        .collect();
    for (t, slot) in types.iter_mut().take(num_types).enumerate() {
        *slot = t as TypeId;
    }
    types
}
