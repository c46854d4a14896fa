//! Reading and writing environment graphs.
//!
//! Edge-list text:
//!
//! ```text
//! cgl-graph v1 <node_count>
//! # kind {"type":"lattice","rows":8,"cols":8}
//! 1 2
//! 1 9
//! ...
//! ```
//!
//! Lines starting with `#` are comments; a `# kind <json>` comment restores
//! the generator tag on load (otherwise the graph is `custom`). The JSON form
//! is `{"version": 1, "node_count": n, "edges": [[u, v], ...]}` with an
//! optional `kind` field.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CglError, Result};
use crate::graph::{EnvironmentGraph, GraphKind, NodeId};

const HEADER: &str = "cgl-graph";
const VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    Json,
}

impl GraphFormat {
    /// `.json` selects JSON; anything else is the edge list.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => GraphFormat::Json,
            _ => GraphFormat::EdgeList,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphDocument {
    version: u32,
    node_count: usize,
    edges: Vec<[NodeId; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<GraphKind>,
}

pub fn to_edge_list(graph: &EnvironmentGraph) -> String {
    let mut out = format!("{HEADER} v{VERSION} {}\n", graph.node_count());
    if *graph.kind() != GraphKind::Custom {
        let kind = serde_json::to_string(graph.kind()).expect("graph kind serializes");
        let _ = writeln!(out, "# kind {kind}");
    }
    for (u, v) in graph.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn parse_edge_list(text: &str) -> Result<EnvironmentGraph> {
    let mut node_count = None;
    let mut kind = GraphKind::Custom;
    let mut edges = Vec::new();
    let mut seen = std::collections::BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(json) = comment.trim_start().strip_prefix("kind ") {
                kind = serde_json::from_str(json).map_err(|e| CglError::Parse {
                    line: line_no,
                    message: format!("bad kind tag: {e}"),
                })?;
            }
            continue;
        }
        let Some(n) = node_count else {
            node_count = Some(parse_header(line, line_no)?);
            continue;
        };
        let mut fields = line.split_whitespace();
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(CglError::Parse {
                line: line_no,
                message: format!("expected `u v`, found `{line}`"),
            });
        };
        let u = parse_id(a, line_no)?;
        let v = parse_id(b, line_no)?;
        for node in [u, v] {
            if node == 0 || node > n {
                return Err(CglError::Parse {
                    line: line_no,
                    message: format!("node id {node} outside 1..={n}"),
                });
            }
        }
        if u == v {
            return Err(CglError::Parse {
                line: line_no,
                message: format!("self-loop at node {u}"),
            });
        }
        let key = (u.min(v), u.max(v));
        if let Some(first) = seen.insert(key, line_no) {
            return Err(CglError::Parse {
                line: line_no,
                message: format!("duplicate edge ({}, {}), first seen on line {first}", key.0, key.1),
            });
        }
        edges.push(key);
    }

    let n = node_count.ok_or(CglError::Parse {
        line: 1,
        message: format!("missing `{HEADER} v{VERSION} <node_count>` header"),
    })?;
    EnvironmentGraph::from_edges(n, edges, kind)
}

fn parse_header(line: &str, line_no: usize) -> Result<usize> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    let bad = |message: String| CglError::Parse { line: line_no, message };
    match fields.as_slice() {
        [HEADER, version, count] => {
            if *version != format!("v{VERSION}") {
                return Err(bad(format!("unsupported version `{version}`")));
            }
            let n: usize = count.parse().map_err(|_| bad(format!("bad node count `{count}`")))?;
            if n == 0 {
                return Err(bad("node count must be positive".into()));
            }
            Ok(n)
        }
        _ => Err(bad(format!(
            "expected header `{HEADER} v{VERSION} <node_count>`, found `{line}`"
        ))),
    }
}

fn parse_id(field: &str, line_no: usize) -> Result<NodeId> {
    field.parse().map_err(|_| CglError::Parse {
        line: line_no,
        message: format!("`{field}` is not a node id"),
    })
}

pub fn to_json(graph: &EnvironmentGraph) -> String {
    let doc = GraphDocument {
        version: VERSION,
        node_count: graph.node_count(),
        edges: graph.edges().map(|(u, v)| [u, v]).collect(),
        kind: (*graph.kind() != GraphKind::Custom).then(|| graph.kind().clone()),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("graph serializes");
    text.push('\n');
    text
}

pub fn parse_json(text: &str) -> Result<EnvironmentGraph> {
    let doc: GraphDocument = serde_json::from_str(text)?;
    if doc.version != VERSION {
        return Err(CglError::Validation(format!(
            "unsupported graph document version {}",
            doc.version
        )));
    }
    EnvironmentGraph::from_edges(
        doc.node_count,
        doc.edges.into_iter().map(|[u, v]| (u, v)),
        doc.kind.unwrap_or(GraphKind::Custom),
    )
}

/// Parses either format, sniffing JSON by a leading `{`.
pub fn parse_graph(text: &str) -> Result<EnvironmentGraph> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_edge_list(text)
    }
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<EnvironmentGraph> {
    parse_graph(&fs::read_to_string(path)?)
}

pub fn save_graph(graph: &EnvironmentGraph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = match GraphFormat::from_path(path) {
        GraphFormat::EdgeList => to_edge_list(graph),
        GraphFormat::Json => to_json(graph),
    };
    fs::write(path, text)?;
    Ok(())
}
