//! A model defined outside the crate: first-order walks biased toward
//! high-degree neighbors, weight = w(v, u) * deg(u)^beta.

use mhwalk::graph::synth;
use mhwalk::{generate_walks, EdgeRef, Graph, NodeId, RandomWalkModel, WalkConfig, WalkerState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct DegreeBiased<'g> {
    graph: &'g Graph,
    beta: f64,
    envelope: f64,
}

impl<'g> DegreeBiased<'g> {
    fn new(graph: &'g Graph, beta: f64) -> Self {
        let max_degree = (0..graph.node_count() as NodeId).map(|v| graph.degree(v)).max().unwrap_or(1);
        DegreeBiased {
            graph,
            beta,
            envelope: (max_degree as f64).powf(beta),
        }
    }
}

impl RandomWalkModel for DegreeBiased<'_> {
    fn graph(&self) -> &Graph {
        self.graph
    }

    fn initial_state(&self, start: NodeId) -> Option<WalkerState> {
        Some(WalkerState::at(start))
    }

    fn calculate_weight(&self, _state: WalkerState, candidate: EdgeRef) -> f64 {
        let u = self.graph.target(candidate);
        self.graph.weight(candidate) * (self.graph.degree(u) as f64).powf(self.beta)
    }

    fn update_state(&self, _state: WalkerState, chosen: EdgeRef) -> WalkerState {
        WalkerState::at(self.graph.target(chosen))
    }

    // first order: one sampler per node
    fn bucket_width(&self, _node: NodeId) -> usize {
        1
    }

    fn slot_affix(&self, _state: WalkerState) -> Option<usize> {
        Some(0)
    }

    fn weight_envelope(&self) -> f64 {
        self.envelope
    }
}

fn main() -> mhwalk::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let graph = synth::power_law_graph(3_000, 30_000, 2.1, false, &mut rng);
    for beta in [0.0, 1.0] {
        let model = DegreeBiased::new(&graph, beta);
        let corpus = generate_walks(&model, &WalkConfig { walk_length: 40, ..Default::default() })?;
        let visits: Vec<u32> = corpus.walks().flat_map(|w| w.iter().copied()).collect();
        let mean = visits.iter().map(|&v| graph.degree(v) as f64).sum::<f64>() / visits.len() as f64;
        println!("beta={beta}: mean visited degree {mean:.1}");
    }
    Ok(())
}
