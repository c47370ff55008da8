//! The random-walk model abstraction.
//!
//! A model is fully described by two behaviors: the *dynamic weight* of a
//! candidate edge under the walker's current state, and the *state update*
//! applied after an edge is taken. Normalizing the dynamic weights over a
//! node's out-arcs gives the transition distribution for that state, but no
//! sampler in this crate needs the normalizer except the exact baselines.
//!
//! A state is a `(position, affixture)` pair. The affixture is model specific:
//!
//! | model        | affixture                                        | states per node |
//! |--------------|--------------------------------------------------|-----------------|
//! | deepwalk     | [`NONE`]                                         | 1               |
//! | node2vec     | index of the previous node in `neighbors(pos)`   | `degree(pos)`   |
//! | edge2vec     | same as node2vec                                 | `degree(pos)`   |
//! | fairwalk     | same as node2vec                                 | `degree(pos)`   |
//! | metapath2vec | index of `type(pos)` within the metapath         | `#node types`   |
//!
//! Second-order walks start in a bootstrap state (affixture [`NONE`]) whose
//! distribution is the static edge-weight distribution.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeRef, Graph, NodeId, TypeId};

/// Affixture sentinel: first-order state, or second-order bootstrap state.
pub const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WalkerState {
    pub position: NodeId,
    pub affixture: u32,
}

impl WalkerState {
    pub fn new(position: NodeId, affixture: u32) -> Self {
        WalkerState {
            position,
            affixture,
        }
    }

    pub fn at(position: NodeId) -> Self {
        WalkerState::new(position, NONE)
    }

    #[inline]
    pub fn has_affixture(&self) -> bool {
        self.affixture != NONE
    }
}

/// Behavior every walk model provides to the samplers, the sampler manager and
/// the walk engine.
pub trait RandomWalkModel: Sync {
    fn graph(&self) -> &Graph;

    /// State of a walker starting at `start`, or `None` when the model forbids
    /// starting there.
    fn initial_state(&self, start: NodeId) -> Option<WalkerState>;

    /// Unnormalized dynamic weight of `candidate`, an out-arc of `state.position`.
    fn calculate_weight(&self, state: WalkerState, candidate: EdgeRef) -> f64;

    fn update_state(&self, state: WalkerState, chosen: EdgeRef) -> WalkerState;

    /// Number of distinct states whose position is `node`.
    fn bucket_width(&self, node: NodeId) -> usize;

    /// Index of `state` within its position's bucket; `None` for transient
    /// states that are sampled exactly instead of through a managed sampler.
    fn slot_affix(&self, state: WalkerState) -> Option<usize>;

    /// Upper bound on `calculate_weight / static weight` over all states and
    /// arcs; the envelope constant for rejection sampling over static weights.
    fn weight_envelope(&self) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    #[value(name = "deepwalk")]
    DeepWalk,
    #[value(name = "node2vec")]
    Node2Vec,
    #[value(name = "metapath2vec")]
    Metapath2Vec,
    #[value(name = "edge2vec")]
    Edge2Vec,
    #[value(name = "fairwalk")]
    Fairwalk,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::DeepWalk,
        ModelKind::Node2Vec,
        ModelKind::Metapath2Vec,
        ModelKind::Edge2Vec,
        ModelKind::Fairwalk,
    ];

    pub fn is_second_order(self) -> bool {
        matches!(
            self,
            ModelKind::Node2Vec | ModelKind::Edge2Vec | ModelKind::Fairwalk
        )
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::DeepWalk => "deepwalk",
            ModelKind::Node2Vec => "node2vec",
            ModelKind::Metapath2Vec => "metapath2vec",
            ModelKind::Edge2Vec => "edge2vec",
            ModelKind::Fairwalk => "fairwalk",
        })
    }
}

/// Square non-negative matrix indexed by edge type (edge2vec's `M`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypeMatrix {
    dim: usize,
    values: Vec<f64>,
}

impl TypeMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<TypeMatrix> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::Config("edge type matrix is empty".into()));
        }
        let mut values = Vec::with_capacity(dim * dim);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Config(format!(
                    "edge type matrix row {i} has {} entries, expected {dim}",
                    row.len()
                )));
            }
            if let Some(bad) = row.iter().find(|x| !x.is_finite() || **x < 0.0) {
                return Err(Error::Config(format!(
                    "edge type matrix row {i} has invalid entry {bad}"
                )));
            }
            values.extend(row);
        }
        Ok(TypeMatrix { dim, values })
    }

    /// Matrix with every entry equal to one.
    pub fn ones(dim: usize) -> TypeMatrix {
        TypeMatrix {
            dim,
            values: vec![1.0; dim * dim],
        }
    }

    /// Parses one comma-separated row per line.
    pub fn parse_csv(text: &str) -> Result<TypeMatrix> {
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split(',')
                .map(|f| {
                    f.trim().parse::<f64>().map_err(|_| {
                        Error::Config(format!("edge type matrix line {}: bad entry {f:?}", i + 1))
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        TypeMatrix::new(rows)
    }

    pub fn load_csv(path: impl AsRef<Path>) -> Result<TypeMatrix> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        TypeMatrix::parse_csv(&text)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, from: usize, to: usize) -> f64 {
        self.values[from * self.dim + to]
    }

    pub fn max_entry(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

/// Parses a comma-separated metapath such as `0,1,0`.
pub fn parse_metapath(text: &str) -> Result<Vec<TypeId>> {
    text.split(',')
        .map(|f| {
            f.trim()
                .parse::<TypeId>()
                .map_err(|_| Error::Config(format!("bad metapath entry {f:?}")))
        })
        .collect()
}

/// Model choice and hyper-parameters, before binding to a graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelParams {
    pub kind: ModelKind,
    pub p: f64,
    pub q: f64,
    pub metapath: Vec<TypeId>,
    pub matrix: Option<TypeMatrix>,
}

impl ModelParams {
    pub fn deepwalk() -> Self {
        ModelParams {
            kind: ModelKind::DeepWalk,
            p: 1.0,
            q: 1.0,
            metapath: Vec::new(),
            matrix: None,
        }
    }

    pub fn node2vec(p: f64, q: f64) -> Self {
        ModelParams {
            kind: ModelKind::Node2Vec,
            p,
            q,
            ..ModelParams::deepwalk()
        }
    }

    pub fn fairwalk(p: f64, q: f64) -> Self {
        ModelParams {
            kind: ModelKind::Fairwalk,
            p,
            q,
            ..ModelParams::deepwalk()
        }
    }

    pub fn edge2vec(p: f64, q: f64, matrix: TypeMatrix) -> Self {
        ModelParams {
            kind: ModelKind::Edge2Vec,
            p,
            q,
            matrix: Some(matrix),
            ..ModelParams::deepwalk()
        }
    }

    pub fn metapath2vec(metapath: Vec<TypeId>) -> Self {
        ModelParams {
            kind: ModelKind::Metapath2Vec,
            metapath,
            ..ModelParams::deepwalk()
        }
    }

    /// Checks the parameters against `graph` and precomputes per-node data.
    pub fn bind(self, graph: &Graph) -> Result<WalkModel<'_>> {
        WalkModel::new(graph, self)
    }
}

/// A built-in model bound to a graph.
#[derive(Debug, Clone)]
pub struct WalkModel<'g> {
    graph: &'g Graph,
    params: ModelParams,
    // fairwalk: neighbor count per (node, type), row-major by node
    type_counts: Vec<u32>,
    // metapath2vec: index reached after the last metapath entry
    metapath_wrap: usize,
}

impl<'g> WalkModel<'g> {
    pub fn new(graph: &'g Graph, params: ModelParams) -> Result<Self> {
        let kind = params.kind;
        if kind.is_second_order() || kind == ModelKind::DeepWalk {
            // p and q are unused by deepwalk but must still be sane
            for (name, value) in [("p", params.p), ("q", params.q)] {
                if !(value > 0.0) || !value.is_finite() {
                    return Err(Error::Config(format!("{name} must be positive, got {value}")));
                }
            }
        }
        if kind.is_second_order() && !graph.is_symmetric() {
            return Err(Error::Config(format!(
                "{kind} requires a symmetric graph; load it with symmetrization"
            )));
        }

        let mut type_counts = Vec::new();
        let mut metapath_wrap = 0;
        match kind {
            ModelKind::DeepWalk | ModelKind::Node2Vec => {}
            ModelKind::Metapath2Vec => {
                if !graph.has_node_types() {
                    return Err(Error::Config("metapath2vec requires node types".into()));
                }
                let mp = &params.metapath;
                if mp.len() < 2 {
                    return Err(Error::Config("metapath needs at least two types".into()));
                }
                if let Some(&t) = mp.iter().find(|&&t| t as usize >= graph.num_node_types()) {
                    return Err(Error::Config(format!(
                        "metapath type {t} is not a node type of the graph"
                    )));
                }
                metapath_wrap = if mp[0] == mp[mp.len() - 1] { 1 } else { 0 };
            }
            ModelKind::Edge2Vec => {
                let matrix = params
                    .matrix
                    .as_ref()
                    .ok_or_else(|| Error::Config("edge2vec requires an edge type matrix".into()))?;
                if matrix.dim() != graph.num_edge_types() {
                    return Err(Error::Config(format!(
                        "edge type matrix is {0}x{0} but the graph has {1} edge types",
                        matrix.dim(),
                        graph.num_edge_types()
                    )));
                }
            }
            ModelKind::Fairwalk => {
                if !graph.has_node_types() {
                    return Err(Error::Config("fairwalk requires node types".into()));
                }
                let t = graph.num_node_types();
                type_counts = vec![0u32; graph.node_count() * t];
                for v in 0..graph.node_count() as NodeId {
                    for &u in graph.neighbors(v) {
                        type_counts[v as usize * t + graph.node_type(u) as usize] += 1;
                    }
                }
            }
        }

        Ok(WalkModel {
            graph,
            params,
            type_counts,
            metapath_wrap,
        })
    }

    pub fn kind(&self) -> ModelKind {
        self.params.kind
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// Metapath index that follows the last entry.
    pub fn metapath_wrap_index(&self) -> usize {
        self.metapath_wrap
    }

    #[inline]
    fn next_metapath_index(&self, index: usize) -> usize {
        if index + 1 < self.params.metapath.len() {
            index + 1
        } else {
            self.metapath_wrap
        }
    }

    /// Node type the next node must have, for a metapath2vec state.
    #[inline]
    pub fn required_type(&self, state: WalkerState) -> TypeId {
        debug_assert!(state.has_affixture(), "metapath2vec state without affixture");
        self.params.metapath[self.next_metapath_index(state.affixture as usize)]
    }

    /// node2vec's return/in-out factor for stepping to `u` having come from `s`.
    #[inline]
    fn alpha(&self, s: NodeId, u: NodeId) -> f64 {
        if u == s {
            1.0 / self.params.p
        } else {
            // search the shorter slice; the graph is symmetric
            let adjacent = if self.graph.degree(s) <= self.graph.degree(u) {
                self.graph.is_adjacent(s, u)
            } else {
                self.graph.is_adjacent(u, s)
            };
            if adjacent {
                1.0
            } else {
                1.0 / self.params.q
            }
        }
    }

    fn max_alpha(&self) -> f64 {
        1f64.max(1.0 / self.params.p).max(1.0 / self.params.q)
    }
}

impl RandomWalkModel for WalkModel<'_> {
    fn graph(&self) -> &Graph {
        self.graph
    }

    fn initial_state(&self, start: NodeId) -> Option<WalkerState> {
        match self.params.kind {
            ModelKind::Metapath2Vec => {
                if self.graph.node_type(start) == self.params.metapath[0] {
                    Some(WalkerState::new(start, 0))
                } else {
                    None
                }
            }
            _ => Some(WalkerState::at(start)),
        }
    }

    #[inline]
    fn calculate_weight(&self, state: WalkerState, candidate: EdgeRef) -> f64 {
        debug_assert_eq!(candidate.source, state.position);
        let g = self.graph;
        let w = g.weight(candidate);
        match self.params.kind {
            ModelKind::DeepWalk => {
                debug_assert!(!state.has_affixture(), "deepwalk state with affixture");
                w
            }
            ModelKind::Metapath2Vec => {
                if g.node_type(g.target(candidate)) == self.required_type(state) {
                    w
                } else {
                    0.0
                }
            }
            _ if !state.has_affixture() => w,
            ModelKind::Node2Vec => {
                let v = state.position;
                let s = g.neighbors(v)[state.affixture as usize];
                self.alpha(s, g.target(candidate)) * w
            }
            ModelKind::Edge2Vec => {
                let v = state.position;
                let s = g.neighbors(v)[state.affixture as usize];
                let matrix = self.params.matrix.as_ref().expect("bound edge2vec model");
                let m = matrix.get(g.edge_type_between(s, v), g.edge_type(candidate));
                self.alpha(s, g.target(candidate)) * m * w
            }
            ModelKind::Fairwalk => {
                let v = state.position;
                let s = g.neighbors(v)[state.affixture as usize];
                let u = g.target(candidate);
                let group = self.type_counts
                    [v as usize * g.num_node_types() + g.node_type(u) as usize];
                self.alpha(s, u) * w / group as f64
            }
        }
    }

    fn update_state(&self, state: WalkerState, chosen: EdgeRef) -> WalkerState {
        debug_assert_eq!(chosen.source, state.position);
        let next = self.graph.target(chosen);
        match self.params.kind {
            ModelKind::DeepWalk => WalkerState::at(next),
            ModelKind::Metapath2Vec => WalkerState::new(
                next,
                self.next_metapath_index(state.affixture as usize) as u32,
            ),
            _ => {
                let back = self
                    .graph
                    .neighbor_index(next, state.position)
                    .expect("second-order models run on symmetric graphs");
                WalkerState::new(next, back as u32)
            }
        }
    }

    fn bucket_width(&self, node: NodeId) -> usize {
        match self.params.kind {
            ModelKind::DeepWalk => 1,
            ModelKind::Metapath2Vec => self.graph.num_node_types(),
            _ => self.graph.degree(node),
        }
    }

    #[inline]
    fn slot_affix(&self, state: WalkerState) -> Option<usize> {
        match self.params.kind {
            ModelKind::DeepWalk => Some(0),
            ModelKind::Metapath2Vec => Some(self.required_type(state) as usize),
            _ if state.has_affixture() => Some(state.affixture as usize),
            _ => None,
        }
    }

    fn weight_envelope(&self) -> f64 {
        match self.params.kind {
            ModelKind::DeepWalk | ModelKind::Metapath2Vec => 1.0,
            ModelKind::Node2Vec | ModelKind::Fairwalk => self.max_alpha(),
            ModelKind::Edge2Vec => {
                self.max_alpha() * self.params.matrix.as_ref().map_or(1.0, TypeMatrix::max_entry)
            }
        }
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| Error::Config(format!("unknown model {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)], true).unwrap()
    }

    #[test]
    fn deepwalk_weight_is_static_weight() {
        let g = Graph::from_edges(2, [(0, 1, 2.5)], true).unwrap();
        let m = ModelParams::deepwalk().bind(&g).unwrap();
        assert_eq!(m.calculate_weight(WalkerState::at(0), EdgeRef::new(0, 0)), 2.5);
    }

    #[test]
    fn node2vec_unit_pq_is_static() {
        let g = triangle();
        let m = ModelParams::node2vec(1.0, 1.0).bind(&g).unwrap();
        for aff in 0..2 {
            let st = WalkerState::new(1, aff);
            for i in 0..2 {
                assert_eq!(m.calculate_weight(st, EdgeRef::new(1, i)), 1.0);
            }
        }
    }

    #[test]
    fn node2vec_return_weight() {
        // path 0-1-2: at 1 having come from 0
        let g = Graph::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)], true).unwrap();
        let m = ModelParams::node2vec(0.25, 2.0).bind(&g).unwrap();
        let st = WalkerState::new(1, g.neighbor_index(1, 0).unwrap() as u32);
        assert_eq!(m.calculate_weight(st, EdgeRef::new(1, 0)), 4.0);
        assert_eq!(m.calculate_weight(st, EdgeRef::new(1, 1)), 0.5);
    }

    #[test]
    fn node2vec_update_on_triangle() {
        let g = triangle();
        let m = ModelParams::node2vec(1.0, 1.0).bind(&g).unwrap();
        let st = WalkerState::new(1, g.neighbor_index(1, 0).unwrap() as u32);
        let edge = EdgeRef::new(1, g.neighbor_index(1, 2).unwrap());
        let next = m.update_state(st, edge);
        assert_eq!(next.position, 2);
        assert_eq!(next.affixture as usize, g.neighbor_index(2, 1).unwrap());
    }

    #[test]
    fn second_order_rejects_directed_graph() {
        let g = Graph::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)], false).unwrap();
        assert!(matches!(
            ModelParams::node2vec(1.0, 1.0).bind(&g),
            Err(Error::Config(_))
        ));
        assert!(ModelParams::deepwalk().bind(&g).is_ok());
    }

    #[test]
    fn invalid_pq() {
        let g = triangle();
        assert!(ModelParams::node2vec(0.0, 1.0).bind(&g).is_err());
        assert!(ModelParams::node2vec(1.0, f64::NAN).bind(&g).is_err());
    }

    #[test]
    fn metapath_mismatch_is_zero() {
        let g = triangle().with_node_types(vec![0, 1, 0]).unwrap();
        let m = ModelParams::metapath2vec(vec![0, 1]).bind(&g).unwrap();
        let st = m.initial_state(0).unwrap();
        // from 0 the next type must be 1: node 1 matches, node 2 does not
        assert_eq!(m.calculate_weight(st, EdgeRef::new(0, 0)), 1.0);
        assert_eq!(m.calculate_weight(st, EdgeRef::new(0, 1)), 0.0);
    }

    #[test]
    fn metapath_cycles() {
        let g = triangle().with_node_types(vec![0, 1, 0]).unwrap();
        let m = ModelParams::metapath2vec(vec![0, 1]).bind(&g).unwrap();
        let st = WalkerState::new(0, 0);
        let st = m.update_state(st, EdgeRef::new(0, 0));
        assert_eq!(st, WalkerState::new(1, 1));
        let st = m.update_state(st, EdgeRef::new(1, 0));
        assert_eq!(st.affixture, 0);

        let sym = ModelParams::metapath2vec(vec![0, 1, 0]).bind(&g).unwrap();
        assert_eq!(sym.metapath_wrap_index(), 1);
        assert_eq!(sym.next_metapath_index(2), 1);
        assert!(sym.initial_state(1).is_none());
    }

    #[test]
    fn fairwalk_two_groups() {
        // center 0 with neighbors 1,2 (type 0) and 3,4 (type 1)
        let g = Graph::from_edges(5, (1..5).map(|u| (0, u, 1.0)), true)
            .unwrap()
            .with_node_types(vec![0, 0, 0, 1, 1])
            .unwrap();
        let m = ModelParams::fairwalk(1.0, 1.0).bind(&g).unwrap();
        // arrived at 0 from node 1
        let st = WalkerState::new(0, 0);
        for i in 0..4 {
            assert_eq!(m.calculate_weight(st, EdgeRef::new(0, i)), 0.5);
        }
    }

    #[test]
    fn edge2vec_matrix_dimension_checked() {
        let g = triangle().with_node_types(vec![0, 1, 0]).unwrap();
        assert!(ModelParams::edge2vec(1.0, 1.0, TypeMatrix::ones(3)).bind(&g).is_err());
        assert!(ModelParams::edge2vec(1.0, 1.0, TypeMatrix::ones(4)).bind(&g).is_ok());
    }

    #[test]
    fn matrix_csv() {
        let m = TypeMatrix::parse_csv("1,0.5\n0.25, 2\n").unwrap();
        assert_eq!(m.get(1, 0), 0.25);
        assert!(TypeMatrix::parse_csv("1,2\n3\n").is_err());
        assert!(TypeMatrix::parse_csv("1,-2\n3,4\n").is_err());
        assert_eq!(parse_metapath("0, 1,0").unwrap(), vec![0, 1, 0]);
    }

    #[test]
    fn kind_round_trip() {
        for k in ModelKind::ALL {
            assert_eq!(k.to_string().parse::<ModelKind>().unwrap(), k);
        }
    }
}
