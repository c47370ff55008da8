//! fairwalk on a graph where one group is much larger: the walk splits each
//! step evenly across the neighbor groups.

use mhwalk::graph::synth;
use mhwalk::{generate_walks, ModelParams, WalkConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> mhwalk::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 2_000;
    let types: Vec<mhwalk::TypeId> = (0..n).map(|_| (rng.gen::<f64>() < 0.1) as mhwalk::TypeId).collect();
    let graph = synth::random_graph(n, 20_000, false, &mut rng).with_node_types(types)?;

    for params in [ModelParams::node2vec(1.0, 1.0), ModelParams::fairwalk(1.0, 1.0)] {
        let kind = params.kind;
        let model = params.bind(&graph)?;
        let corpus = generate_walks(&model, &WalkConfig { walk_length: 40, ..Default::default() })?;
        let visits: Vec<u32> = corpus.walks().flat_map(|w| w[1..].iter().copied()).collect();
        let minority = visits.iter().filter(|&&v| graph.node_type(v) == 1).count();
        println!("{kind}: minority share of visits {:.3}", minority as f64 / visits.len() as f64);
    }
    Ok(())
}
