//! Rejection sampling acceptance against the envelope bound, and the number of
//! trials per accepted draw as the envelope grows.

use mhwalk::samplers::{rejection_sample, RejectionProposal};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> mhwalk::Result<()> {
    let d = 50;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    println!("boost  expected  observed");
    for boost in [1.0, 2.0, 4.0, 16.0] {
        // one neighbor boosted, the rest at the static weight
        let mut target = vec![1.0; d];
        target[0] = boost;
        let proposal = RejectionProposal::new(&vec![1.0; d], boost)?;
        let draws = 100_000u64;
        let mut trials = 0u64;
        for _ in 0..draws {
            trials += rejection_sample(&target, &proposal, &mut rng)?.1;
        }
        let expected = target.iter().sum::<f64>() / (boost * d as f64);
        println!("{boost:>5}  {expected:>8.4}  {:>8.4}", draws as f64 / trials as f64);
    }
    Ok(())
}
