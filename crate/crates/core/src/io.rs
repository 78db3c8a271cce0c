//! Graph document serialization and export.
//!
//! The document format is UTF-8 JSON with one top-level object; node records
//! use the keys `identity`, `labels` and `properties`, relationship records
//! add `type`, `start` and `end`. Numbers with a decimal point or exponent
//! load as reals, plain integers as integers. Saving is deterministic:
//! records are emitted in ascending-id order with sorted property keys, so
//! identical graphs produce byte-identical documents.

use crate::graph::{
    GraphError, NodeId, NodeRecord, PropertyGraph, PropertyMap, PropertyValue, RelationshipId,
    RelationshipRecord,
};
use serde_json::{json, Map, Number, Value};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("integrity error: {0}")]
    Integrity(String),
}

fn integrity(msg: impl Into<String>) -> DocumentError {
    DocumentError::Integrity(msg.into())
}

/// Maps a JSON value to a property value. Integer vs real is decided by the
/// JSON number form (decimal point / exponent => real).
pub(crate) fn property_from_json(value: &Value) -> Result<PropertyValue, String> {
    match value {
        Value::String(s) => Ok(PropertyValue::Text(s.clone())),
        Value::Bool(b) => Ok(PropertyValue::Boolean(*b)),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(PropertyValue::Integer(i))
            } else if let Some(f) = n.as_f64() {
                Ok(PropertyValue::Real(f))
            } else {
                Err(format!("unsupported number literal {n}"))
            }
        }
        Value::Array(items) => {
            let mut texts = Vec::with_capacity(items.len());
            for item in items {
                match item {
                    Value::String(s) => texts.push(s.clone()),
                    other => return Err(format!("list property entries must be text, got {other}")),
                }
            }
            Ok(PropertyValue::TextList(texts))
        }
        other => Err(format!("unsupported property value {other}")),
    }
}

pub(crate) fn property_to_json(value: &PropertyValue) -> Value {
    match value {
        PropertyValue::Text(s) => Value::String(s.clone()),
        PropertyValue::Integer(i) => Value::Number((*i).into()),
        PropertyValue::Real(r) => Number::from_f64(*r).map(Value::Number).unwrap_or(Value::Null),
        PropertyValue::Boolean(b) => Value::Bool(*b),
        PropertyValue::TextList(items) => {
            Value::Array(items.iter().cloned().map(Value::String).collect())
        }
    }
}

pub(crate) fn property_map_from_json(value: &Value) -> Result<PropertyMap, String> {
    let obj = value
        .as_object()
        .ok_or_else(|| format!("expected a property object, got {value}"))?;
    let mut map = PropertyMap::new();
    for (name, raw) in obj {
        map.insert(name.clone(), property_from_json(raw).map_err(|e| format!("{name}: {e}"))?);
    }
    Ok(map)
}

pub(crate) fn property_map_to_json(map: &PropertyMap) -> Value {
    let mut obj = Map::new();
    for (name, value) in map {
        obj.insert(name.clone(), property_to_json(value));
    }
    Value::Object(obj)
}

fn require_u64(obj: &Map<String, Value>, key: &str, what: &str) -> Result<u64, DocumentError> {
    obj.get(key)
        .and_then(Value::as_u64)
        .ok_or_else(|| integrity(format!("{what} record is missing a non-negative `{key}`")))
}

/// Loads a graph from document text.
///
/// Loading is idempotent: the same document always produces the same graph,
/// with ids, labels, properties and relationships preserved exactly.
pub fn load_graph(text: &str) -> Result<PropertyGraph, DocumentError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| DocumentError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let root = doc
        .as_object()
        .ok_or_else(|| integrity("document root must be an object"))?;

    let mut graph = PropertyGraph::new();
    let mut seen_nodes = BTreeSet::new();
    let nodes = root
        .get("nodes")
        .and_then(Value::as_array)
        .ok_or_else(|| integrity("document is missing a `nodes` list"))?;
    for raw in nodes {
        let obj = raw
            .as_object()
            .ok_or_else(|| integrity("node record must be an object"))?;
        let identity = require_u64(obj, "identity", "node")?;
        if !seen_nodes.insert(identity) {
            return Err(integrity(format!("duplicate node identity {identity}")));
        }
        let labels = obj
            .get("labels")
            .and_then(Value::as_array)
            .ok_or_else(|| integrity(format!("node {identity} is missing `labels`")))?
            .iter()
            .map(|v| {
                v.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| integrity(format!("node {identity} has a non-text label")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let properties = match obj.get("properties") {
            Some(v) => property_map_from_json(v)
                .map_err(|e| integrity(format!("node {identity}: {e}")))?,
            None => PropertyMap::new(),
        };
        graph
            .insert_node_with_id(NodeRecord {
                id: NodeId(identity),
                labels,
                properties,
            })
            .map_err(|e: GraphError| integrity(format!("node {identity}: {e}")))?;
    }

    let mut seen_rels = BTreeSet::new();
    let rels = root
        .get("relationships")
        .and_then(Value::as_array)
        .ok_or_else(|| integrity("document is missing a `relationships` list"))?;
    for raw in rels {
        let obj = raw
            .as_object()
            .ok_or_else(|| integrity("relationship record must be an object"))?;
        let identity = require_u64(obj, "identity", "relationship")?;
        if !seen_rels.insert(identity) {
            return Err(integrity(format!("duplicate relationship identity {identity}")));
        }
        let rel_type = obj
            .get("type")
            .and_then(Value::as_str)
            .ok_or_else(|| integrity(format!("relationship {identity} is missing `type`")))?;
        let start = require_u64(obj, "start", "relationship")?;
        let end = require_u64(obj, "end", "relationship")?;
        let properties = match obj.get("properties") {
            Some(v) => property_map_from_json(v)
                .map_err(|e| integrity(format!("relationship {identity}: {e}")))?,
            None => PropertyMap::new(),
        };
        graph
            .insert_relationship_with_id(RelationshipRecord {
                id: RelationshipId(identity),
                rel_type: rel_type.to_string(),
                start: NodeId(start),
                end: NodeId(end),
                properties,
            })
            .map_err(|e: GraphError| integrity(format!("relationship {identity}: {e}")))?;
    }

    if let Some(meta) = root.get("metadata").and_then(Value::as_object) {
        if let Some(total) = meta.get("node_total").and_then(Value::as_u64) {
            if total as usize != graph.node_count() {
                return Err(integrity(format!(
                    "declared node total {total} does not match {} stored nodes",
                    graph.node_count()
                )));
            }
        }
        if let Some(total) = meta.get("relationship_total").and_then(Value::as_u64) {
            if total as usize != graph.relationship_count() {
                return Err(integrity(format!(
                    "declared relationship total {total} does not match {} stored relationships",
                    graph.relationship_count()
                )));
            }
        }
    }

    Ok(graph)
}

/// Serializes a graph to document text. `name` goes into the metadata block
/// together with the actual node/relationship totals.
pub fn save_graph_named(graph: &PropertyGraph, name: &str) -> String {
    let nodes: Vec<Value> = graph
        .nodes()
        .map(|n| {
            json!({
                "identity": n.id.0,
                "labels": n.labels,
                "properties": property_map_to_json(&n.properties),
            })
        })
        .collect();
    let relationships: Vec<Value> = graph
        .relationships()
        .map(|r| {
            json!({
                "identity": r.id.0,
                "type": r.rel_type,
                "start": r.start.0,
                "end": r.end.0,
                "properties": property_map_to_json(&r.properties),
            })
        })
        .collect();
    let doc = json!({
        "metadata": {
            "name": name,
            "node_total": graph.node_count(),
            "relationship_total": graph.relationship_count(),
        },
        "nodes": nodes,
        "relationships": relationships,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("document serialization");
    text.push('\n');
    text
}

pub fn save_graph(graph: &PropertyGraph) -> String {
    save_graph_named(graph, "graph")
}

fn escape_text(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            other => out.push(other),
        }
    }
    out
}

fn render_create_value(value: &PropertyValue) -> String {
    match value {
        PropertyValue::Text(s) => format!("\"{}\"", escape_text(s)),
        PropertyValue::Integer(i) => i.to_string(),
        PropertyValue::Real(r) => format!("{r:?}"),
        PropertyValue::Boolean(b) => b.to_string(),
        PropertyValue::TextList(items) => {
            let rendered: Vec<String> =
                items.iter().map(|s| format!("\"{}\"", escape_text(s))).collect();
            format!("[{}]", rendered.join(", "))
        }
    }
}

fn render_property_block(properties: &PropertyMap) -> String {
    if properties.is_empty() {
        return String::new();
    }
    let body: Vec<String> = properties
        .iter()
        .map(|(k, v)| format!("{k}: {}", render_create_value(v)))
        .collect();
    format!(" {{{}}}", body.join(", "))
}

/// Renders the graph as a newline-separated list of CREATE statements, one
/// per node and one per relationship, with node variables derived from ids.
pub fn export_create_script(graph: &PropertyGraph) -> String {
    let mut out = String::new();
    for node in graph.nodes() {
        out.push_str(&format!(
            "CREATE (n{}:{}{})\n",
            node.id.0,
            node.labels.join(":"),
            render_property_block(&node.properties)
        ));
    }
    for rel in graph.relationships() {
        out.push_str(&format!(
            "CREATE (n{})-[:{}{}]->(n{})\n",
            rel.start.0,
            rel.rel_type,
            render_property_block(&rel.properties),
            rel.end.0
        ));
    }
    out
}
