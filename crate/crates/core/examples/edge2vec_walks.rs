//! edge2vec walks where consecutive edges of the same type are preferred.

use mhwalk::graph::synth;
use mhwalk::{generate_walks, ModelParams, TypeMatrix, WalkConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> mhwalk::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let types = synth::random_types(1_500, 2, &mut rng);
    let graph = synth::random_graph(1_500, 12_000, false, &mut rng).with_node_types(types)?;

    // without explicit labels an edge's type is derived from its endpoint types
    let k = graph.num_edge_types();
    let rows = (0..k).map(|i| (0..k).map(|j| if i == j { 4.0 } else { 1.0 }).collect()).collect();
    let model = ModelParams::edge2vec(1.0, 1.0, TypeMatrix::new(rows)?).bind(&graph)?;

    let corpus = generate_walks(&model, &WalkConfig { walk_length: 30, ..Default::default() })?;
    let (mut same, mut total) = (0usize, 0usize);
    for walk in corpus.walks() {
        for w in walk.windows(3) {
            total += 1;
            same += (graph.edge_type_between(w[0], w[1]) == graph.edge_type_between(w[1], w[2])) as usize;
        }
    }
    println!("{k} edge types, same-type continuation {:.3}", same as f64 / total as f64);
    Ok(())
}
