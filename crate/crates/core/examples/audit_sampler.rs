//! Empirical check of the M-H sampler: draw repeatedly from random walker
//! states and report the KL divergence from each exact next-edge distribution.

use mhwalk::audit::{audit_model, AuditConfig};
use mhwalk::graph::synth;
use mhwalk::ModelParams;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let graph = synth::random_graph(500, 3_000, true, &mut rng);
    let model = ModelParams::node2vec(0.5, 2.0).bind(&graph)?;
    let report = audit_model(
        &model,
        &AuditConfig {
            states: 20,
            draws: 50_000,
            ..Default::default()
        },
    )?;
    report.write_csv(&mut std::io::stdout())?;
    println!("max KL {:.2e}", report.max_kl());
    Ok(())
}
