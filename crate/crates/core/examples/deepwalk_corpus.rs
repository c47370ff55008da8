//! Uniform walks on a synthetic power-law graph, written to a text corpus.
//!
//! cargo run --release --example deepwalk_corpus -- /tmp/walks.txt

use mhwalk::graph::synth;
use mhwalk::{generate_walks, write_corpus, ModelParams, WalkConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> mhwalk::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "walks.txt".into());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let graph = synth::power_law_graph(5_000, 40_000, 2.2, false, &mut rng);
    let model = ModelParams::deepwalk().bind(&graph)?;

    let config = WalkConfig {
        threads: 4,
        ..Default::default()
    };
    let corpus = generate_walks(&model, &config)?;
    write_corpus(&corpus, &out)?;

    let s = &corpus.stats;
    println!("{} walks, {} steps, {:.0} steps/s -> {out}", s.walks, s.steps, s.steps_per_sec);
    Ok(())
}
