//! Random walk generation for network representation learning.
//!
//! Walk models (deepwalk, node2vec, metapath2vec, edge2vec, fairwalk or your
//! own) describe their transitions through a walker state and a dynamic edge
//! weight. The engine samples next edges with Metropolis-Hastings chains that
//! keep one word per state, so each step costs constant time regardless of
//! degree. Alias, direct and rejection samplers are available for comparison.
//!
//! ```
//! use mhwalk::{generate_walks, Graph, ModelParams, WalkConfig};
//!
//! let graph = Graph::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)], true).unwrap();
//! let model = ModelParams::node2vec(0.25, 4.0).bind(&graph).unwrap();
//! let corpus = generate_walks(&model, &WalkConfig { walk_length: 5, ..Default::default() }).unwrap();
//! assert_eq!(corpus.len(), 30);
//! ```

pub mod analysis;
pub mod audit;
pub mod bench;
pub mod cli;
pub mod engine;
pub mod error;
pub mod graph;
pub mod manager;
pub mod models;
pub mod samplers;

pub use engine::{generate_walks, read_corpus, write_corpus, RunStats, SamplerKind, WalkConfig, WalkCorpus};
pub use error::{Error, Result};
pub use graph::{EdgeRef, Graph, NodeId, TypeId};
pub use manager::{SamplerManager, SlotLayout};
pub use models::{ModelKind, ModelParams, RandomWalkModel, TypeMatrix, WalkModel, WalkerState};
pub use samplers::{InitKind, InitStrategy};
