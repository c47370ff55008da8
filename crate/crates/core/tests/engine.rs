use mhwalk::engine::{read_corpus, stats_path, EdgeSampler};
use mhwalk::graph::synth;
use mhwalk::samplers::InitStrategy;
use mhwalk::{
    generate_walks, write_corpus, Graph, ModelParams, RandomWalkModel, SamplerKind, WalkConfig, WalkCorpus,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn corpus_bytes(c: &WalkCorpus) -> Vec<u8> {
    let mut buf = Vec::new();
    c.write_to(&mut buf).unwrap();
    buf
}

fn graph() -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let g = synth::power_law_graph(500, 3000, 2.3, true, &mut rng);
    let types = synth::random_types(500, 2, &mut rng);
    g.with_node_types(types).unwrap()
}

#[test]
fn every_sampler_produces_valid_walks() {
    let g = graph();
    let models = [
        ModelParams::deepwalk(),
        ModelParams::node2vec(0.25, 4.0),
        ModelParams::fairwalk(1.0, 1.0),
        ModelParams::edge2vec(0.25, 0.25, mhwalk::TypeMatrix::ones(g.num_edge_types())),
        ModelParams::metapath2vec(vec![0, 1, 0]),
    ];
    for params in models {
        let kind = params.kind;
        let model = params.bind(&g).unwrap();
        for sampler in SamplerKind::ALL {
            let config = WalkConfig {
                walks_per_node: 2,
                walk_length: 20,
                sampler,
                ..Default::default()
            };
            let corpus = generate_walks(&model, &config).unwrap();
            let starts = (0..500).filter(|&v| model.initial_state(v).is_some()).count();
            assert_eq!(corpus.len(), 2 * starts, "{kind} {sampler}");
            assert_eq!(corpus.stats.skipped_starts, 500 - starts);
            for walk in corpus.walks() {
                assert!(walk.len() <= 21);
                assert!(walk.windows(2).all(|p| g.is_adjacent(p[0], p[1])), "{kind} {sampler}");
            }
        }
    }
}

#[test]
fn walks_are_node_major() {
    let g = graph();
    let model = ModelParams::deepwalk().bind(&g).unwrap();
    let config = WalkConfig {
        walks_per_node: 3,
        walk_length: 5,
        ..Default::default()
    };
    let corpus = generate_walks(&model, &config).unwrap();
    for (i, walk) in corpus.walks().enumerate() {
        assert_eq!(walk[0] as usize, i / 3);
    }
}

#[test]
fn single_thread_runs_are_byte_identical() {
    let g = graph();
    let model = ModelParams::node2vec(0.5, 2.0).bind(&g).unwrap();
    for sampler in SamplerKind::ALL {
        let config = WalkConfig {
            walks_per_node: 2,
            walk_length: 30,
            seed: 9,
            sampler,
            init: InitStrategy::burn_in(),
            ..Default::default()
        };
        let a = generate_walks(&model, &config).unwrap();
        let b = generate_walks(&model, &config).unwrap();
        assert_eq!(corpus_bytes(&a), corpus_bytes(&b), "{sampler}");
        let other = generate_walks(&model, &WalkConfig { seed: 10, ..config }).unwrap();
        assert_ne!(corpus_bytes(&a), corpus_bytes(&other));
    }
}

#[test]
fn exact_samplers_do_not_depend_on_thread_count() {
    // walker streams are per (start, k), so only shared M-H slots can make
    // threaded runs differ
    let g = graph();
    let model = ModelParams::node2vec(0.5, 2.0).bind(&g).unwrap();
    for sampler in [SamplerKind::Alias, SamplerKind::Direct] {
        let config = WalkConfig {
            walks_per_node: 2,
            walk_length: 30,
            sampler,
            ..Default::default()
        };
        let one = generate_walks(&model, &config).unwrap();
        let four = generate_walks(&model, &WalkConfig { threads: 4, ..config }).unwrap();
        assert_eq!(corpus_bytes(&one), corpus_bytes(&four), "{sampler}");
    }
}

#[test]
fn threaded_mh_run_is_valid() {
    let g = graph();
    let model = ModelParams::node2vec(0.25, 4.0).bind(&g).unwrap();
    let config = WalkConfig {
        walks_per_node: 10,
        walk_length: 40,
        threads: 8,
        ..Default::default()
    };
    let corpus = generate_walks(&model, &config).unwrap();
    assert_eq!(corpus.len(), 5000);
    assert!(corpus
        .walks()
        .all(|w| w.windows(2).all(|p| g.is_adjacent(p[0], p[1]))));
    assert!(corpus.stats.initialized_samplers > 0);
}

#[test]
fn dead_ends_truncate_walks() {
    // 0 -> 1 -> 2, with 2 a sink
    let g = Graph::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)], false).unwrap();
    let model = ModelParams::deepwalk().bind(&g).unwrap();
    for sampler in SamplerKind::ALL {
        let config = WalkConfig {
            walks_per_node: 1,
            walk_length: 10,
            sampler,
            ..Default::default()
        };
        let corpus = generate_walks(&model, &config).unwrap();
        let walks: Vec<&[u32]> = corpus.walks().collect();
        assert_eq!(walks, vec![&[0, 1, 2][..], &[1, 2][..], &[2][..]]);
        assert_eq!(corpus.stats.early_terminations, 3);
    }
}

#[test]
fn metapath_start_mismatch_is_skipped() {
    let g = Graph::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)], true)
        .unwrap()
        .with_node_types(vec![0, 1, 0])
        .unwrap();
    let model = ModelParams::metapath2vec(vec![1, 0]).bind(&g).unwrap();
    let corpus = generate_walks(&model, &WalkConfig::default()).unwrap();
    assert_eq!(corpus.len(), 10);
    assert_eq!(corpus.stats.skipped_starts, 2);
}

#[test]
fn corpus_file_round_trip() {
    let g = graph();
    let model = ModelParams::deepwalk().bind(&g).unwrap();
    let corpus = generate_walks(
        &model,
        &WalkConfig {
            walks_per_node: 1,
            walk_length: 10,
            ..Default::default()
        },
    )
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("walks.txt");
    write_corpus(&corpus, &path).unwrap();
    let back = read_corpus(&path).unwrap();
    assert_eq!(back.walks().collect::<Vec<_>>(), corpus.walks().collect::<Vec<_>>());
    let stats: serde_json::Value =
        serde_json::from_str(std::fs::read_to_string(stats_path(&path)).unwrap().trim()).unwrap();
    assert_eq!(stats["walks"], 500);
    for key in ["early_terminations", "skipped_starts", "steps_per_sec"] {
        assert!(stats.get(key).is_some(), "{key}");
    }
}

#[test]
fn mh_memory_is_one_word_per_state() {
    let g = graph();
    let model = ModelParams::node2vec(1.0, 1.0).bind(&g).unwrap();
    let sampler = EdgeSampler::new(&model, SamplerKind::Mh, InitStrategy::Random).unwrap();
    let slots = sampler.manager().unwrap().total_slots();
    assert_eq!(slots, g.arc_count());
    assert_eq!(
        sampler.memory_bytes(),
        slots * 4 + (g.node_count() + 1) * std::mem::size_of::<usize>()
    );
}
