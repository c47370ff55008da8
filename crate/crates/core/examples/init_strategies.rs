//! Random versus high-weight initialization on skewed targets, first through
//! the closed-form convergence constants, then by simulation.

use mhwalk::analysis::{generate_target, kappa_high_weight, kappa_random, simulate_grid, write_sim_csv};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (n, t) = (200, 40);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    println!("ratio  kappa_random  kappa_high");
    for ratio in [1.0, 2.0, 5.0, 10.0, 50.0] {
        let d = generate_target(n, t, ratio, &mut rng)?;
        println!("{ratio:>5}  {:>12.3}  {:>10.3}", kappa_random(&d), kappa_high_weight(&d));
    }

    let results = simulate_grid(n, t, &[1.0, 5.0, 50.0], 50, 5, 8)?;
    write_sim_csv(&results, &mut std::io::stdout())?;
    Ok(())
}
