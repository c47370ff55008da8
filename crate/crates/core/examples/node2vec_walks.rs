//! Second-order node2vec walks with a low return parameter and a high in-out
//! parameter, so walks stay local (BFS-like).

use mhwalk::graph::synth;
use mhwalk::{generate_walks, ModelParams, WalkConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> mhwalk::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let graph = synth::power_law_graph(2_000, 20_000, 2.3, true, &mut rng);

    for (p, q) in [(0.25, 4.0), (4.0, 0.25)] {
        let model = ModelParams::node2vec(p, q).bind(&graph)?;
        let corpus = generate_walks(&model, &WalkConfig { walk_length: 40, ..Default::default() })?;
        // share of steps that return to the node visited two steps earlier
        let (mut back, mut total) = (0usize, 0usize);
        for walk in corpus.walks() {
            for w in walk.windows(3) {
                total += 1;
                back += (w[0] == w[2]) as usize;
            }
        }
        println!(
            "p={p} q={q}: return rate {:.3}, acceptance {:.3}, {} samplers initialized",
            back as f64 / total as f64,
            corpus.stats.acceptance_ratio(),
            corpus.stats.initialized_samplers
        );
    }
    Ok(())
}
