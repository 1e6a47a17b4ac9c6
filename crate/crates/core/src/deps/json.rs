use std::collections::BTreeMap;

use serde_json::{json, Value};
use thiserror::Error;

use super::{DependencyEdge, DependencyGraph, DependencyType};
use crate::json::to_canonical_string;
use crate::source::{Language, SourceRange};

pub const GRAPH_SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Error)]
pub enum GraphJsonError {
    #[error("invalid graph JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("invalid graph JSON: {0}")]
    Shape(String),
}

pub fn export_graph_json(graph: &DependencyGraph) -> Vec<u8> {
    let nodes: Vec<Value> =
        graph.nodes.iter().map(|(path, lang)| json!({"path": path, "language": lang.as_str()})).collect();
    let edges: Vec<Value> = graph
        .edges
        .iter()
        .map(|e| {
            json!({
                "from": e.from_file,
                "to": e.to_file,
                "fromEntity": e.from_entity,
                "toEntity": e.to_entity,
                "type": e.dep_type.as_str(),
                "line": e.location.line,
                "col": e.location.col,
                "expr": e.expression,
                "crossLanguage": e.cross_language,
            })
        })
        .collect();
    let doc = json!({"schemaVersion": GRAPH_SCHEMA_VERSION, "nodes": nodes, "edges": edges});
    to_canonical_string(&doc).into_bytes()
}

/// Parses an exported graph. Edge locations carry only line and column.
pub fn parse_graph_json(bytes: &[u8]) -> Result<DependencyGraph, GraphJsonError> {
    let doc: Value = serde_json::from_slice(bytes)?;
    let shape = |m: &str| GraphJsonError::Shape(m.to_string());
    if doc.get("schemaVersion").and_then(Value::as_u64) != Some(GRAPH_SCHEMA_VERSION) {
        return Err(shape("unsupported schemaVersion"));
    }
    let mut nodes = BTreeMap::new();
    for n in doc.get("nodes").and_then(Value::as_array).ok_or_else(|| shape("missing nodes"))? {
        let path = n.get("path").and_then(Value::as_str).ok_or_else(|| shape("node without path"))?;
        let lang = n
            .get("language")
            .and_then(Value::as_str)
            .and_then(Language::parse)
            .ok_or_else(|| shape("node without language"))?;
        nodes.insert(path.to_string(), lang);
    }
    let mut edges = Vec::new();
    for e in doc.get("edges").and_then(Value::as_array).ok_or_else(|| shape("missing edges"))? {
        let s = |k: &str| e.get(k).and_then(Value::as_str).map(str::to_string).ok_or_else(|| shape(&format!("edge without {k}")));
        let n = |k: &str| e.get(k).and_then(Value::as_u64).ok_or_else(|| shape(&format!("edge without {k}")));
        let dep_type = DependencyType::parse(&s("type")?).ok_or_else(|| shape("unknown edge type"))?;
        let location = SourceRange { start: 0, end: 0, line: n("line")? as u32, col: n("col")? as u32 };
        edges.push(DependencyEdge {
            from_entity: s("fromEntity")?,
            to_entity: s("toEntity")?,
            from_file: s("from")?,
            to_file: s("to")?,
            dep_type,
            location,
            expression: s("expr")?,
            cross_language: e.get("crossLanguage").and_then(Value::as_bool).ok_or_else(|| shape("edge without crossLanguage"))?,
        });
    }
    Ok(DependencyGraph::new(nodes, edges))
}
