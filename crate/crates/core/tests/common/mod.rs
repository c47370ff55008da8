//! Helpers shared by the integration tests: random inputs and reference
//! implementations that avoid the crate's own graph and model code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use mhwalk::{EdgeRef, Graph, ModelKind, NodeId, RandomWalkModel, WalkerState};
use rand::Rng;

pub type Adjacency = BTreeMap<NodeId, BTreeMap<NodeId, f64>>;

/// `m` random undirected edges on `n` nodes, with occasional self-loops and
/// repeated pairs.
pub fn random_edges<R: Rng>(rng: &mut R, n: usize, m: usize, weighted: bool) -> Vec<(NodeId, NodeId, f64)> {
    (0..m)
        .map(|_| {
            let u = rng.gen_range(0..n) as NodeId;
            let v = rng.gen_range(0..n) as NodeId;
            let w = if weighted { rng.gen_range(0.5..3.0) } else { 1.0 };
            (u, v, w)
        })
        .collect()
}

/// Symmetric adjacency with duplicate edges summed and self-loops kept once.
pub fn adjacency(n: usize, edges: &[(NodeId, NodeId, f64)]) -> Adjacency {
    let mut adj: Adjacency = (0..n as NodeId).map(|v| (v, BTreeMap::new())).collect();
    for &(u, v, w) in edges {
        *adj.get_mut(&u).unwrap().entry(v).or_insert(0.0) += w;
        if u != v {
            *adj.get_mut(&v).unwrap().entry(u).or_insert(0.0) += w;
        }
    }
    adj
}

/// Reference transition distributions written directly from the model
/// definitions, keyed by target node.
pub struct Oracle<'a> {
    pub adj: &'a Adjacency,
    pub types: &'a [u16],
    pub num_types: usize,
}

impl Oracle<'_> {
    fn w(&self, v: NodeId, u: NodeId) -> f64 {
        self.adj[&v][&u]
    }

    fn alpha(&self, s: NodeId, u: NodeId, p: f64, q: f64) -> f64 {
        if u == s {
            1.0 / p
        } else if self.adj[&s].contains_key(&u) {
            1.0
        } else {
            1.0 / q
        }
    }

    fn edge_type(&self, a: NodeId, b: NodeId) -> usize {
        self.types[a as usize] as usize * self.num_types + self.types[b as usize] as usize
    }

    fn normalize(weights: BTreeMap<NodeId, f64>) -> BTreeMap<NodeId, f64> {
        let total: f64 = weights.values().sum();
        weights.into_iter().map(|(u, w)| (u, w / total)).collect()
    }

    pub fn deepwalk(&self, v: NodeId) -> BTreeMap<NodeId, f64> {
        Self::normalize(self.adj[&v].clone())
    }

    pub fn node2vec(&self, s: NodeId, v: NodeId, p: f64, q: f64) -> BTreeMap<NodeId, f64> {
        Self::normalize(
            self.adj[&v]
                .iter()
                .map(|(&u, &w)| (u, self.alpha(s, u, p, q) * w))
                .collect(),
        )
    }

    pub fn edge2vec(&self, s: NodeId, v: NodeId, p: f64, q: f64, m: &[Vec<f64>]) -> BTreeMap<NodeId, f64> {
        let from = self.edge_type(s, v);
        Self::normalize(
            self.adj[&v]
                .iter()
                .map(|(&u, &w)| (u, self.alpha(s, u, p, q) * m[from][self.edge_type(v, u)] * w))
                .collect(),
        )
    }

    pub fn metapath2vec(&self, v: NodeId, next_type: u16) -> BTreeMap<NodeId, f64> {
        Self::normalize(
            self.adj[&v]
                .iter()
                .map(|(&u, &w)| (u, if self.types[u as usize] == next_type { w } else { 0.0 }))
                .collect(),
        )
    }

    /// `α w / |K|` with `K` the neighbors of `v` sharing the type of `u`.
    pub fn fairwalk(&self, s: NodeId, v: NodeId, p: f64, q: f64) -> BTreeMap<NodeId, f64> {
        let group = |u: NodeId| {
            self.adj[&v]
                .keys()
                .filter(|&&k| self.types[k as usize] == self.types[u as usize])
                .count() as f64
        };
        Self::normalize(
            self.adj[&v]
                .iter()
                .map(|(&u, &w)| (u, self.alpha(s, u, p, q) * w / group(u)))
                .collect(),
        )
    }

    /// Group-normalized form: `α_u w_vu / (|Φ| Σ_{k ∈ K} α_k w_vk)` with `|Φ|`
    /// the number of types among the neighbors of `v`.
    pub fn fairwalk_grouped(&self, s: NodeId, v: NodeId, p: f64, q: f64) -> BTreeMap<NodeId, f64> {
        let types_present: BTreeSet<u16> = self.adj[&v].keys().map(|&k| self.types[k as usize]).collect();
        let group_sum = |t: u16| -> f64 {
            self.adj[&v]
                .iter()
                .filter(|(&k, _)| self.types[k as usize] == t)
                .map(|(&k, &w)| self.alpha(s, k, p, q) * w)
                .sum()
        };
        self.adj[&v]
            .iter()
            .map(|(&u, &w)| {
                let t = self.types[u as usize];
                (u, self.alpha(s, u, p, q) * w / (types_present.len() as f64 * group_sum(t)))
            })
            .collect()
    }
}

/// Normalized dynamic weights of `state`, keyed by target node.
pub fn model_probs<M: RandomWalkModel + ?Sized>(model: &M, state: WalkerState) -> BTreeMap<NodeId, f64> {
    let g = model.graph();
    let v = state.position;
    let weights: Vec<(NodeId, f64)> = (0..g.degree(v))
        .map(|i| {
            let e = EdgeRef::new(v, i);
            (g.target(e), model.calculate_weight(state, e))
        })
        .collect();
    let total: f64 = weights.iter().map(|x| x.1).sum();
    weights.into_iter().map(|(u, w)| (u, w / total)).collect()
}

pub fn max_abs_diff(a: &BTreeMap<NodeId, f64>, b: &BTreeMap<NodeId, f64>) -> f64 {
    assert_eq!(a.keys().collect::<Vec<_>>(), b.keys().collect::<Vec<_>>());
    a.values().zip(b.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Every state a walker of `kind` can be in on `graph`, bootstrap states excluded.
/// Metapath states are enumerated for every metapath index at every node.
pub fn all_states(graph: &Graph, kind: ModelKind, metapath_len: usize) -> Vec<WalkerState> {
    let mut out = Vec::new();
    for v in 0..graph.node_count() as NodeId {
        match kind {
            ModelKind::DeepWalk => out.push(WalkerState::at(v)),
            ModelKind::Metapath2Vec => {
                out.extend((0..metapath_len as u32).map(|i| WalkerState::new(v, i)));
            }
            _ => out.extend((0..graph.degree(v) as u32).map(|i| WalkerState::new(v, i))),
        }
    }
    out
}

/// Counts of categorical draws.
pub fn counts<I: IntoIterator<Item = usize>>(draws: I, k: usize) -> Vec<u64> {
    let mut c = vec![0u64; k];
    for d in draws {
        c[d] += 1;
    }
    c
}

/// Pearson chi-square statistic of `counts` against probabilities `probs`.
pub fn chi_square(counts: &[u64], probs: &[f64]) -> f64 {
    let total: u64 = counts.iter().sum();
    counts
        .iter()
        .zip(probs)
        .filter(|(_, &p)| p > 0.0)
        .map(|(&c, &p)| {
            let e = p * total as f64;
            (c as f64 - e).powi(2) / e
        })
        .sum()
}

/// Upper 0.1% quantile of chi-square with `df` degrees of freedom
/// (Wilson-Hilferty approximation).
pub fn chi_square_critical(df: usize) -> f64 {
    let k = df as f64;
    let z = 3.090_232;
    k * (1.0 - 2.0 / (9.0 * k) + z * (2.0 / (9.0 * k)).sqrt()).powi(3)
}
