//! Exact distance of an M-H chain from its target after i steps, next to the
//! geometric upper bound.

use mhwalk::analysis::{
    chain_distributions, initial_distribution, kappa_for, kl_divergence, kl_upper_bound, mh_coefficient_a,
    InitDistribution, TargetDistribution,
};

fn main() -> mhwalk::Result<()> {
    let weights: Vec<f64> = (1..=12).map(|i| (i * i) as f64).collect();
    let pi = TargetDistribution::new(&weights)?;
    let a = mh_coefficient_a(&pi, pi.n());

    for init in [InitDistribution::Random, InitDistribution::HighWeight] {
        let pi0 = initial_distribution(init, &pi);
        let kappa = kappa_for(init, &pi);
        println!("{init:?}: kappa {kappa:.3}, a {a:.3}");
        for (i, dist) in chain_distributions(pi.probs(), &pi0, 20).iter().enumerate().step_by(4) {
            let kl = kl_divergence(dist, pi.probs())?;
            println!("  i={i:>2}  KL {kl:.3e}  bound {:.3e}", kl_upper_bound(kappa, a, i as u32));
        }
    }
    Ok(())
}
