//! Metapath-guided walks on a two-type graph (think authors and papers).

use mhwalk::graph::synth;
use mhwalk::{generate_walks, ModelParams, WalkConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> mhwalk::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let types = synth::random_types(1_000, 2, &mut rng);
    let graph = synth::random_graph(1_000, 8_000, false, &mut rng).with_node_types(types)?;

    // author -> paper -> author, cycling
    let model = ModelParams::metapath2vec(vec![0, 1, 0]).bind(&graph)?;
    let corpus = generate_walks(&model, &WalkConfig { walks_per_node: 5, walk_length: 20, ..Default::default() })?;

    let first = corpus.walk(0);
    let labels: Vec<String> = first.iter().map(|&v| format!("{v}:{}", graph.node_type(v))).collect();
    println!("{}", labels.join(" "));
    println!(
        "{} walks, {} type-1 starts skipped, {} cut short",
        corpus.len(),
        corpus.stats.skipped_starts,
        corpus.stats.early_terminations
    );
    Ok(())
}
