mod common;

use std::io::Write;

use mhwalk::graph::{load_edge_list, load_edge_types, load_node_types, synth, write_edge_list, LoadOptions};
use mhwalk::{Error, Graph};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn write_temp(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn weighted_symmetric() -> LoadOptions {
    LoadOptions {
        weighted: true,
        symmetrize: true,
        node_count: None,
    }
}

#[test]
fn round_trip_preserves_graph() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g = synth::random_graph(300, 2000, true, &mut rng);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    write_edge_list(&g, &path).unwrap();
    let back = load_edge_list(
        &path,
        LoadOptions {
            weighted: true,
            symmetrize: false,
            node_count: Some(g.node_count()),
        },
    )
    .unwrap();
    assert_eq!(back.offsets(), g.offsets());
    assert_eq!(back.all_neighbors(), g.all_neighbors());
    assert_eq!(back.all_weights(), g.all_weights());
    assert!(back.is_symmetric());
    assert_eq!(back.checksum(), g.checksum());
}

#[test]
fn comments_blank_lines_and_defaults() {
    let f = write_temp("# header\n\n0 1\n  # indented\n1 2\n");
    let g = load_edge_list(f.path(), weighted_symmetric()).unwrap();
    assert_eq!(g.node_count(), 3);
    assert_eq!(g.arc_count(), 4);
    assert!(g.has_unit_weights());
}

#[test]
fn parse_error_reports_line() {
    let f = write_temp("0 1\n1 x\n");
    match load_edge_list(f.path(), weighted_symmetric()) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn negative_weight_rejected() {
    let f = write_temp("0 1 -2\n");
    assert!(matches!(load_edge_list(f.path(), weighted_symmetric()), Err(Error::Validation(_))));
}

#[test]
fn missing_file_is_io_error() {
    let err = load_edge_list("/nonexistent/graph.txt", weighted_symmetric()).unwrap_err();
    assert_eq!(err.exit_code(), 1);
}

#[test]
fn node_types_must_cover_every_node() {
    let edges = write_temp("0 1\n1 2\n");
    let g = load_edge_list(edges.path(), weighted_symmetric()).unwrap();
    let types = write_temp("0 0\n1 1\n");
    let err = load_node_types(types.path(), g.clone()).unwrap_err();
    assert!(err.to_string().contains("node 2"), "{err}");

    let types = write_temp("0 0\n1 1\n2 0\n");
    let g = load_node_types(types.path(), g).unwrap();
    assert_eq!(g.node_types().unwrap(), &[0, 1, 0]);
    assert_eq!(g.num_node_types(), 2);
}

#[test]
fn edge_types_apply_to_both_directions() {
    let edges = write_temp("0 1\n1 2\n");
    let g = load_edge_list(edges.path(), weighted_symmetric()).unwrap();
    let types = write_temp("0 1 2\n");
    let g = load_edge_types(types.path(), g).unwrap();
    assert_eq!(g.edge_type_between(0, 1), 2);
    assert_eq!(g.edge_type_between(1, 0), 2);
    assert_eq!(g.edge_type_between(1, 2), 0);
    assert_eq!(g.num_edge_types(), 3);

    let missing = write_temp("0 2 1\n");
    assert!(load_edge_types(missing.path(), g).is_err());
}

#[test]
fn blog_catalog_scale_mean_degree() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let n = 10_312;
    let edges = synth::uniform_edges(n, 333_983, &mut rng);
    let g = Graph::from_edges(n, edges.into_iter().map(|(u, v)| (u, v, 1.0)), true).unwrap();
    // distinct undirected pairs only; duplicates collapse
    let mean = g.mean_degree();
    assert!((mean - 64.78).abs() < 0.5, "mean degree {mean}");
    assert!(g.is_symmetric());
}

#[test]
fn adjacency_exhaustive_on_small_graph() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let edges = common::random_edges(&mut rng, 60, 300, false);
    let g = Graph::from_edges(60, edges.iter().copied(), true).unwrap();
    let adj = common::adjacency(60, &edges);
    for u in 0..60u32 {
        for v in 0..60u32 {
            assert_eq!(g.is_adjacent(u, v), adj[&u].contains_key(&v), "({u}, {v})");
        }
        assert_eq!(g.degree(u), adj[&u].len());
    }
}

proptest! {
    #[test]
    fn csr_invariants(n in 1usize..40, raw in prop::collection::vec((0u32..40, 0u32..40, 0.0f64..5.0), 0..120)) {
        let edges: Vec<_> = raw.into_iter().map(|(u, v, w)| (u % n as u32, v % n as u32, w)).collect();
        let g = Graph::from_edges(n, edges.iter().copied(), true).unwrap();
        prop_assert_eq!(g.offsets().len(), n + 1);
        prop_assert_eq!(*g.offsets().last().unwrap(), g.arc_count());
        for v in 0..n as u32 {
            let nb = g.neighbors(v);
            prop_assert!(nb.windows(2).all(|p| p[0] < p[1]));
            for (i, &u) in nb.iter().enumerate() {
                prop_assert_eq!(g.neighbor_index(v, u), Some(i));
                prop_assert!(g.is_adjacent(u, v));
            }
        }
        let total_in: f64 = edges.iter().map(|e| if e.0 == e.1 { e.2 } else { 2.0 * e.2 }).sum();
        let total: f64 = g.all_weights().iter().sum();
        prop_assert!((total - total_in).abs() < 1e-9 * total_in.max(1.0));
    }
}
