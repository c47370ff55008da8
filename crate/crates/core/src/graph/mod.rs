//! Compressed sparse row storage for directed or symmetric networks.
//!
//! Every node owns a contiguous slice of the flat `neighbors` array, sorted by
//! node id, so adjacency tests are a binary search. Edge weights live in a
//! parallel array. Heterogeneous networks additionally carry one type label per
//! node and, optionally, one explicit type label per arc.

mod io;
pub mod synth;

pub use io::{load_edge_list, load_edge_types, load_node_types, write_edge_list, LoadOptions};

use crate::error::{Error, Result};

pub type NodeId = u32;
pub type TypeId = u16;

/// Handle for the arc `source -> neighbors(source)[neighbor_index]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeRef {
    pub source: NodeId,
    pub neighbor_index: u32,
}

impl EdgeRef {
    pub fn new(source: NodeId, neighbor_index: usize) -> Self {
        EdgeRef {
            source,
            neighbor_index: neighbor_index as u32,
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        self.neighbor_index as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<NodeId>,
    weights: Vec<f64>,
    node_types: Option<Vec<TypeId>>,
    num_node_types: usize,
    edge_types: Option<Vec<TypeId>>,
    num_edge_types: usize,
    symmetric: bool,
    unit_weights: bool,
}

impl Graph {
    /// Builds a graph from arcs. Duplicate arcs collapse by summing weights.
    ///
    /// With `symmetrize`, every arc is inserted in both directions with the same
    /// weight (self-loops are inserted once).
    pub fn from_edges<I>(node_count: usize, edges: I, symmetrize: bool) -> Result<Graph>
    where
        I: IntoIterator<Item = (NodeId, NodeId, f64)>,
    {
        let mut arcs: Vec<(NodeId, NodeId, f64)> = Vec::new();
        for (u, v, w) in edges {
            if (u as usize) >= node_count || (v as usize) >= node_count {
                return Err(Error::Validation(format!(
                    "edge ({u}, {v}) references a node outside 0..{node_count}"
                )));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::Validation(format!(
                    "edge ({u}, {v}) has invalid weight {w}"
                )));
            }
            arcs.push((u, v, w));
            if symmetrize && u != v {
                arcs.push((v, u, w));
            }
        }
        arcs.sort_unstable_by_key(|&(u, v, _)| (u, v));

        let mut offsets = vec![0usize; node_count + 1];
        let mut neighbors = Vec::with_capacity(arcs.len());
        let mut weights: Vec<f64> = Vec::with_capacity(arcs.len());
        let mut last: Option<(NodeId, NodeId)> = None;
        for (u, v, w) in arcs {
            if last == Some((u, v)) {
                *weights.last_mut().unwrap() += w;
                continue;
            }
            last = Some((u, v));
            neighbors.push(v);
            weights.push(w);
            offsets[u as usize + 1] += 1;
        }
        for i in 0..node_count {
            offsets[i + 1] += offsets[i];
        }

        let mut graph = Graph {
            offsets,
            neighbors,
            weights,
            node_types: None,
            num_node_types: 0,
            edge_types: None,
            num_edge_types: 1,
            symmetric: false,
            unit_weights: false,
        };
        graph.unit_weights = graph.weights.iter().all(|&w| w == 1.0);
        graph.symmetric = symmetrize || graph.detect_symmetry();
        Ok(graph)
    }

    fn detect_symmetry(&self) -> bool {
        (0..self.node_count() as NodeId)
            .all(|u| self.neighbors(u).iter().all(|&v| self.is_adjacent(v, u)))
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of stored arcs; a symmetric graph stores each undirected edge twice.
    #[inline]
    pub fn arc_count(&self) -> usize {
        self.neighbors.len()
    }

    pub fn mean_degree(&self) -> f64 {
        if self.node_count() == 0 {
            0.0
        } else {
            self.arc_count() as f64 / self.node_count() as f64
        }
    }

    #[inline]
    pub fn degree(&self, v: NodeId) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    #[inline]
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        let v = v as usize;
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn weights(&self, v: NodeId) -> &[f64] {
        let v = v as usize;
        &self.weights[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn target(&self, edge: EdgeRef) -> NodeId {
        self.neighbors[self.offsets[edge.source as usize] + edge.index()]
    }

    #[inline]
    pub fn weight(&self, edge: EdgeRef) -> f64 {
        self.weights[self.offsets[edge.source as usize] + edge.index()]
    }

    /// Global arc position of `edge` in the flat neighbor array.
    #[inline]
    pub fn arc_position(&self, edge: EdgeRef) -> usize {
        self.offsets[edge.source as usize] + edge.index()
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn all_neighbors(&self) -> &[NodeId] {
        &self.neighbors
    }

    pub fn all_weights(&self) -> &[f64] {
        &self.weights
    }

    /// Position of `v` inside the sorted neighbor slice of `u`.
    #[inline]
    pub fn neighbor_index(&self, u: NodeId, v: NodeId) -> Option<usize> {
        self.neighbors(u).binary_search(&v).ok()
    }

    #[inline]
    pub fn is_adjacent(&self, u: NodeId, v: NodeId) -> bool {
        self.neighbor_index(u, v).is_some()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// True when every stored weight is exactly 1.0.
    pub fn has_unit_weights(&self) -> bool {
        self.unit_weights
    }

    /// A node with outgoing arcs whose weights are all zero.
    pub fn is_sink(&self, v: NodeId) -> bool {
        self.degree(v) > 0 && self.weights(v).iter().all(|&w| w == 0.0)
    }

    pub fn has_node_types(&self) -> bool {
        self.node_types.is_some()
    }

    pub fn node_types(&self) -> Option<&[TypeId]> {
        self.node_types.as_deref()
    }

    #[inline]
    pub fn node_type(&self, v: NodeId) -> TypeId {
        match &self.node_types {
            Some(types) => types[v as usize],
            None => 0,
        }
    }

    /// Number of node type labels (`max id + 1`); 1 for untyped graphs.
    pub fn num_node_types(&self) -> usize {
        if self.node_types.is_some() {
            self.num_node_types
        } else {
            1
        }
    }

    /// Number of arc type labels. Without an explicit edge-type file the type of
    /// arc `(s, v)` is the pair code `type(s) * num_node_types + type(v)`.
    pub fn num_edge_types(&self) -> usize {
        if self.edge_types.is_some() {
            self.num_edge_types
        } else {
            self.num_node_types() * self.num_node_types()
        }
    }

    pub fn has_explicit_edge_types(&self) -> bool {
        self.edge_types.is_some()
    }

    /// Type of the arc `edge`.
    #[inline]
    pub fn edge_type(&self, edge: EdgeRef) -> usize {
        match &self.edge_types {
            Some(types) => types[self.arc_position(edge)] as usize,
            None => self.derived_edge_type(edge.source, self.target(edge)),
        }
    }

    /// Type of the arc `s -> v`, which must exist.
    #[inline]
    pub fn edge_type_between(&self, s: NodeId, v: NodeId) -> usize {
        match &self.edge_types {
            Some(types) => {
                let idx = self
                    .neighbor_index(s, v)
                    .unwrap_or_else(|| panic!("no arc {s} -> {v}"));
                types[self.offsets[s as usize] + idx] as usize
            }
            None => self.derived_edge_type(s, v),
        }
    }

    #[inline]
    fn derived_edge_type(&self, s: NodeId, v: NodeId) -> usize {
        self.node_type(s) as usize * self.num_node_types() + self.node_type(v) as usize
    }

    /// Attaches one type label per node.
    pub fn with_node_types(mut self, types: Vec<TypeId>) -> Result<Graph> {
        if types.len() != self.node_count() {
            return Err(Error::Validation(format!(
                "expected {} node types, got {}",
                self.node_count(),
                types.len()
            )));
        }
        self.num_node_types = types.iter().map(|&t| t as usize + 1).max().unwrap_or(1);
        self.node_types = Some(types);
        Ok(self)
    }

    /// Attaches explicit arc types, parallel to the flat neighbor array.
    pub fn with_edge_types(mut self, types: Vec<TypeId>) -> Result<Graph> {
        if types.len() != self.arc_count() {
            return Err(Error::Validation(format!(
                "expected {} edge types, got {}",
                self.arc_count(),
                types.len()
            )));
        }
        self.num_edge_types = types.iter().map(|&t| t as usize + 1).max().unwrap_or(1);
        self.edge_types = Some(types);
        Ok(self)
    }

    /// SHA-256 over the CSR arrays and type labels, hex encoded.
    pub fn checksum(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut hasher = Sha256::new();
        hasher.update((self.node_count() as u64).to_le_bytes());
        for &o in &self.offsets {
            hasher.update((o as u64).to_le_bytes());
        }
        for &v in &self.neighbors {
            hasher.update(v.to_le_bytes());
        }
        for &w in &self.weights {
            hasher.update(w.to_bits().to_le_bytes());
        }
        if let Some(types) = &self.node_types {
            for &t in types {
                hasher.update(t.to_le_bytes());
            }
        }
        if let Some(types) = &self.edge_types {
            for &t in types {
                hasher.update(t.to_le_bytes());
            }
        }
        format!("{:x}", hasher.finalize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)], true).unwrap()
    }

    #[test]
    fn triangle_is_symmetric_with_six_arcs() {
        let g = triangle();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.arc_count(), 6);
        assert!(g.is_symmetric());
        assert!(g.has_unit_weights());
        assert_eq!(g.neighbors(0), &[1, 2]);
        assert_eq!(g.neighbors(2), &[0, 1]);
    }

    #[test]
    fn adjacency() {
        let g = triangle();
        assert!(g.is_adjacent(0, 1));
        assert!(!g.is_adjacent(0, 0));
        assert_eq!(g.neighbor_index(1, 2), Some(1));
    }

    #[test]
    fn duplicates_collapse_by_sum() {
        let g = Graph::from_edges(2, [(0, 1, 2.5), (0, 1, 1.5)], false).unwrap();
        assert_eq!(g.arc_count(), 1);
        assert_eq!(g.weights(0), &[4.0]);
        assert!(!g.is_symmetric());
    }

    #[test]
    fn directed_input_listing_both_directions_is_detected_symmetric() {
        let g = Graph::from_edges(2, [(0, 1, 1.0), (1, 0, 1.0)], false).unwrap();
        assert!(g.is_symmetric());
    }

    #[test]
    fn self_loop_symmetrized_once() {
        let g = Graph::from_edges(2, [(0, 0, 1.0), (0, 1, 1.0)], true).unwrap();
        assert_eq!(g.neighbors(0), &[0, 1]);
        assert_eq!(g.weights(0), &[1.0, 1.0]);
    }

    #[test]
    fn rejects_negative_weight_and_out_of_range() {
        assert!(matches!(
            Graph::from_edges(2, [(0, 1, -1.0)], false),
            Err(Error::Validation(_))
        ));
        assert!(Graph::from_edges(2, [(0, 5, 1.0)], false).is_err());
    }

    #[test]
    fn sinks_and_zero_degree() {
        let g = Graph::from_edges(3, [(0, 1, 0.0)], false).unwrap();
        assert!(g.is_sink(0));
        assert!(!g.is_sink(2));
        assert_eq!(g.degree(2), 0);
    }

    #[test]
    fn derived_edge_types() {
        let g = triangle().with_node_types(vec![0, 1, 0]).unwrap();
        assert_eq!(g.num_node_types(), 2);
        assert_eq!(g.num_edge_types(), 4);
        assert_eq!(g.edge_type_between(0, 1), 1);
        assert_eq!(g.edge_type_between(1, 0), 2);
        assert_eq!(g.edge_type(EdgeRef::new(2, 0)), 0);
    }
}
