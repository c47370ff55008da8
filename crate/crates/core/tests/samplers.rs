mod common;

use mhwalk::analysis::{empirical_kl, TargetDistribution};
use mhwalk::graph::synth;
use mhwalk::samplers::{
    direct_sample, direct_sample_with, mh_init, mh_sample, rejection_sample, AliasTable, InitStrategy, MhSampler,
    RejectionProposal,
};
use mhwalk::{ModelParams, WalkerState};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{chi_square, chi_square_critical, counts};

const WEIGHTS: [f64; 6] = [0.5, 3.0, 0.0, 1.5, 7.0, 2.0];

fn probs(weights: &[f64]) -> Vec<f64> {
    let total: f64 = weights.iter().sum();
    weights.iter().map(|w| w / total).collect()
}

#[test]
fn alias_chi_square() {
    let table = AliasTable::new(&WEIGHTS).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let c = counts((0..200_000).map(|_| table.sample(&mut rng)), WEIGHTS.len());
    assert_eq!(c[2], 0);
    assert!(chi_square(&c, &probs(&WEIGHTS)) < chi_square_critical(4));
}

#[test]
fn direct_chi_square() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let c = counts((0..200_000).map(|_| direct_sample(&WEIGHTS, &mut rng).unwrap()), WEIGHTS.len());
    assert_eq!(c[2], 0);
    assert!(chi_square(&c, &probs(&WEIGHTS)) < chi_square_critical(4));
    assert_eq!(direct_sample_with(3, |_| 0.0, &mut rng), None);
}

#[test]
fn rejection_chi_square() {
    let proposal = RejectionProposal::new(&[1.0; 6], 7.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let c = counts(
        (0..200_000).map(|_| rejection_sample(&WEIGHTS, &proposal, &mut rng).unwrap().0),
        WEIGHTS.len(),
    );
    assert_eq!(c[2], 0);
    assert!(chi_square(&c, &probs(&WEIGHTS)) < chi_square_critical(4));
}

#[test]
fn mh_matches_target_for_every_init() {
    for (k, strategy) in [InitStrategy::Random, InitStrategy::high_weight(), InitStrategy::burn_in()]
        .into_iter()
        .enumerate()
    {
        let mut rng = ChaCha8Rng::seed_from_u64(34 + k as u64);
        let w = |i: usize| WEIGHTS[i];
        let mut s = MhSampler::initialize(strategy, WEIGHTS.len(), w, &mut rng).unwrap();
        let mut c = vec![0u64; WEIGHTS.len()];
        for _ in 0..500_000 {
            s.step(WEIGHTS.len(), w, &mut rng);
            c[s.last().unwrap()] += 1;
        }
        assert_eq!(c[2], 0);
        let kl = empirical_kl(&c, &probs(&WEIGHTS)).unwrap();
        assert!(kl < 1e-3, "{strategy:?}: {kl}");
    }
}

#[test]
fn mh_on_model_state() {
    // star center under deepwalk: the chain over the spokes follows the weights
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    let g = synth::random_graph(30, 120, true, &mut rng);
    let m = ModelParams::deepwalk().bind(&g).unwrap();
    let v = (0..30).max_by_key(|&v| g.degree(v)).unwrap();
    let state = WalkerState::at(v);
    let mut s = mh_init(InitStrategy::Random, &m, state, &mut rng).unwrap();
    let mut c = vec![0u64; g.degree(v)];
    for _ in 0..400_000 {
        c[mh_sample(&mut s, &m, state, &mut rng).index()] += 1;
    }
    let kl = empirical_kl(&c, &probs(g.weights(v))).unwrap();
    assert!(kl < 1e-3, "{kl}");
}

#[test]
fn mh_dead_end_is_reported() {
    let g = mhwalk::Graph::from_edges(2, [(0, 1, 0.0)], false).unwrap();
    let m = ModelParams::deepwalk().bind(&g).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    assert!(matches!(
        mh_init(InitStrategy::Random, &m, WalkerState::at(0), &mut rng),
        Err(mhwalk::Error::DeadEnd(0))
    ));
}

#[test]
fn rejection_acceptance_equals_mass_over_envelope() {
    // node2vec-style target: one entry boosted by 1/p = 4 over unit weights
    let d = 20;
    let mut target = vec![1.0; d];
    target[0] = 4.0;
    let proposal = RejectionProposal::new(&vec![1.0; d], 4.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let draws = 200_000u64;
    let trials: u64 = (0..draws).map(|_| rejection_sample(&target, &proposal, &mut rng).unwrap().1).sum();
    let expected = target.iter().sum::<f64>() / (4.0 * d as f64);
    let observed = draws as f64 / trials as f64;
    assert!((observed - expected).abs() < 0.01, "{observed} vs {expected}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn alias_table_reproduces_weights(weights in prop::collection::vec(0.0f64..10.0, 1..50)) {
        prop_assume!(weights.iter().any(|&w| w > 0.0));
        let table = AliasTable::new(&weights).unwrap();
        let got = table.probabilities();
        for (g, p) in got.iter().zip(probs(&weights)) {
            prop_assert!((g - p).abs() < 1e-12);
        }
    }

    #[test]
    fn mh_kernel_reversible(weights in prop::collection::vec(0.01f64..10.0, 2..16)) {
        let pi = TargetDistribution::new(&weights).unwrap();
        let k = mhwalk::analysis::mh_kernel(pi.probs());
        let p = pi.probs();
        for i in 0..p.len() {
            for j in 0..p.len() {
                prop_assert!((p[i] * k[i][j] - p[j] * k[j][i]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn mh_stays_on_support(seed in 0u64..1000, mask in prop::collection::vec(any::<bool>(), 2..20)) {
        prop_assume!(mask.iter().any(|&b| b));
        let weights: Vec<f64> = mask.iter().map(|&b| if b { 1.5 } else { 0.0 }).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = weights.len();
        let mut s = MhSampler::initialize(InitStrategy::Random, n, |i| weights[i], &mut rng).unwrap();
        for _ in 0..200 {
            s.step(n, |i| weights[i], &mut rng);
            prop_assert!(weights[s.last().unwrap()] > 0.0);
        }
    }

    #[test]
    fn high_weight_exact_is_argmax(weights in prop::collection::vec(0.0f64..10.0, 1..32)) {
        prop_assume!(weights.iter().any(|&w| w > 0.0));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let s = MhSampler::initialize(InitStrategy::high_weight(), weights.len(), |i| weights[i], &mut rng).unwrap();
        let max = weights.iter().copied().fold(0.0, f64::max);
        let first = weights.iter().position(|&w| w == max).unwrap();
        prop_assert_eq!(s.last(), Some(first));
    }

    #[test]
    fn direct_sample_in_support(weights in prop::collection::vec(0.0f64..10.0, 1..40), seed in 0u64..1000) {
        prop_assume!(weights.iter().any(|&w| w > 0.0));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let i = direct_sample(&weights, &mut rng).unwrap();
            prop_assert!(weights[i] > 0.0);
        }
        let _ = rng.gen::<u8>();
    }
}
