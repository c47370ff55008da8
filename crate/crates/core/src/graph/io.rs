//! Whitespace-separated text formats for graphs and type labels.
//!
//! Lines starting with `#` and blank lines are ignored everywhere.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{Graph, NodeId, TypeId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadOptions {
    /// Read the optional third column as the edge weight; otherwise every edge weighs 1.
    pub weighted: bool,
    /// Insert every edge in both directions.
    pub symmetrize: bool,
    /// Lower bound on the node count, for graphs whose highest ids are isolated.
    pub node_count: Option<usize>,
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}

/// Yields `(line_number, fields)` for every non-comment, non-blank line.
fn records<'a, R: BufRead + 'a>(
    reader: R,
    path: &'a Path,
) -> impl Iterator<Item = Result<(usize, Vec<String>)>> + 'a {
    reader
        .lines()
        .enumerate()
        .filter_map(move |(i, line)| match line {
            Err(e) => Some(Err(Error::io(path, e))),
            Ok(line) => {
                let trimmed = line.trim();
                if trimmed.is_empty() || trimmed.starts_with('#') {
                    None
                } else {
                    Some(Ok((
                        i + 1,
                        trimmed.split_whitespace().map(str::to_owned).collect(),
                    )))
                }
            }
        })
}

fn parse_field<T: std::str::FromStr>(
    field: &str,
    what: &str,
    path: &Path,
    line: usize,
) -> Result<T> {
    field.parse().map_err(|_| Error::Parse {
        path: path.to_path_buf(),
        line,
        message: format!("invalid {what} {field:?}"),
    })
}

/// Loads an edge list of `src dst [weight]` lines.
pub fn load_edge_list(path: impl AsRef<Path>, options: LoadOptions) -> Result<Graph> {
    let path = path.as_ref();
    read_edge_list(open(path)?, path, options)
}

pub(crate) fn read_edge_list<R: BufRead>(
    reader: R,
    path: &Path,
    options: LoadOptions,
) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut max_id: Option<NodeId> = None;
    for record in records(reader, path) {
        let (line, fields) = record?;
        if fields.len() < 2 || fields.len() > 3 {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("expected \"src dst [weight]\", found {} fields", fields.len()),
            });
        }
        let u: NodeId = parse_field(&fields[0], "node id", path, line)?;
        let v: NodeId = parse_field(&fields[1], "node id", path, line)?;
        let w = match (options.weighted, fields.get(2)) {
            (true, Some(field)) => parse_field::<f64>(field, "weight", path, line)?,
            _ => 1.0,
        };
        if !(w >= 0.0) || !w.is_finite() {
            return Err(Error::Validation(format!(
                "{}:{line}: weight {w} must be finite and non-negative",
                path.display()
            )));
        }
        max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
        edges.push((u, v, w));
    }
    let node_count = max_id
        .map_or(0, |m| m as usize + 1)
        .max(options.node_count.unwrap_or(0));
    Graph::from_edges(node_count, edges, options.symmetrize)
}

/// Loads `node_id type_id` lines; every node of `graph` must be covered.
pub fn load_node_types(path: impl AsRef<Path>, graph: Graph) -> Result<Graph> {
    let path = path.as_ref();
    read_node_types(open(path)?, path, graph)
}

pub(crate) fn read_node_types<R: BufRead>(reader: R, path: &Path, graph: Graph) -> Result<Graph> {
    let n = graph.node_count();
    let mut types: Vec<Option<TypeId>> = vec![None; n];
    for record in records(reader, path) {
        let (line, fields) = record?;
        if fields.len() != 2 {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                message: "expected \"node_id type_id\"".into(),
            });
        }
        let v: usize = parse_field(&fields[0], "node id", path, line)?;
        let t: TypeId = parse_field(&fields[1], "type id", path, line)?;
        if v >= n {
            return Err(Error::Validation(format!(
                "{}:{line}: unknown node id {v} (graph has {n} nodes)",
                path.display()
            )));
        }
        match types[v] {
            Some(prev) if prev != t => {
                return Err(Error::Validation(format!(
                    "{}:{line}: node {v} assigned conflicting types {prev} and {t}",
                    path.display()
                )))
            }
            _ => types[v] = Some(t),
        }
    }
    if let Some(missing) = types.iter().position(Option::is_none) {
        return Err(Error::Validation(format!(
            "{}: node {missing} has no type",
            path.display()
        )));
    }
    graph.with_node_types(types.into_iter().map(Option::unwrap).collect())
}

/// Loads `src dst type_id` lines assigning explicit arc types. On symmetric
/// graphs the label applies to both directions. Unlisted arcs get type 0.
pub fn load_edge_types(path: impl AsRef<Path>, graph: Graph) -> Result<Graph> {
    let path = path.as_ref();
    read_edge_types(open(path)?, path, graph)
}

pub(crate) fn read_edge_types<R: BufRead>(reader: R, path: &Path, graph: Graph) -> Result<Graph> {
    let mut types: Vec<TypeId> = vec![0; graph.arc_count()];
    for record in records(reader, path) {
        let (line, fields) = record?;
        if fields.len() != 3 {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                message: "expected \"src dst type_id\"".into(),
            });
        }
        let u: NodeId = parse_field(&fields[0], "node id", path, line)?;
        let v: NodeId = parse_field(&fields[1], "node id", path, line)?;
        let t: TypeId = parse_field(&fields[2], "type id", path, line)?;
        let n = graph.node_count();
        if u as usize >= n || v as usize >= n {
            return Err(Error::Validation(format!(
                "{}:{line}: unknown node in arc ({u}, {v})",
                path.display()
            )));
        }
        let idx = graph.neighbor_index(u, v).ok_or_else(|| {
            Error::Validation(format!("{}:{line}: no arc {u} -> {v}", path.display()))
        })?;
        types[graph.offsets()[u as usize] + idx] = t;
        if graph.is_symmetric() {
            let back = graph.neighbor_index(v, u).expect("symmetric graph");
            types[graph.offsets()[v as usize] + back] = t;
        }
    }
    graph.with_edge_types(types)
}

/// Writes every stored arc as `src dst weight`, preceded by a comment header.
/// Reloading with `weighted: true, symmetrize: false` and the same node count
/// reproduces the CSR arrays exactly.
pub fn write_edge_list(graph: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    write_arcs(graph, &mut out).map_err(|e| Error::io(path, e))
}

pub(crate) fn write_arcs<W: Write>(graph: &Graph, out: &mut W) -> std::io::Result<()> {
    writeln!(
        out,
        "# nodes {} arcs {}",
        graph.node_count(),
        graph.arc_count()
    )?;
    for u in 0..graph.node_count() as NodeId {
        for (&v, &w) in graph.neighbors(u).iter().zip(graph.weights(u)) {
            writeln!(out, "{u} {v} {w}")?;
        }
    }
    out.flush()
}
