//! Directed property graph with labelled nodes and typed relationships.
//!
//! Nodes carry one or more labels plus a map of typed property values;
//! relationships carry a type, a direction and an optional property map.
//! The graph is append-only: the workload is build-then-query, so node or
//! relationship deletion is deliberately unsupported. After construction a
//! graph is immutable and can be shared freely between concurrent readers.

use serde::de::{self, SeqAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use thiserror::Error;

/// Identifier of a node, unique within one graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub u64);

/// Identifier of a relationship, unique within one graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RelationshipId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for RelationshipId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A typed property value.
///
/// `Real` values are always finite and `TextList` entries are non-empty;
/// both are enforced when the value enters a graph.
#[derive(Debug, Clone, PartialEq)]
pub enum PropertyValue {
    Text(String),
    Integer(i64),
    Real(f64),
    Boolean(bool),
    TextList(Vec<String>),
}

impl PropertyValue {
    /// Equality with Integer/Real numeric coercion, as used by property-map
    /// constraints and `=` comparisons in queries.
    pub fn loose_eq(&self, other: &PropertyValue) -> bool {
        use PropertyValue::*;
        match (self, other) {
            (Integer(a), Real(b)) | (Real(b), Integer(a)) => (*a as f64) == *b,
            (a, b) => a == b,
        }
    }

    fn validate(&self) -> Result<(), String> {
        match self {
            PropertyValue::Real(r) if !r.is_finite() => {
                Err(format!("non-finite real value {r}"))
            }
            PropertyValue::TextList(items) if items.iter().any(|s| s.is_empty()) => {
                Err("text list contains an empty entry".to_string())
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for PropertyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropertyValue::Text(s) => write!(f, "{s}"),
            PropertyValue::Integer(i) => write!(f, "{i}"),
            PropertyValue::Real(r) => write!(f, "{r:?}"),
            PropertyValue::Boolean(b) => write!(f, "{b}"),
            PropertyValue::TextList(items) => write!(f, "[{}]", items.join(", ")),
        }
    }
}

impl Serialize for PropertyValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            PropertyValue::Text(s) => serializer.serialize_str(s),
            PropertyValue::Integer(i) => serializer.serialize_i64(*i),
            PropertyValue::Real(r) => serializer.serialize_f64(*r),
            PropertyValue::Boolean(b) => serializer.serialize_bool(*b),
            PropertyValue::TextList(items) => items.serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for PropertyValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ValueVisitor;

        impl<'de> Visitor<'de> for ValueVisitor {
            type Value = PropertyValue;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a string, integer, real, boolean or list of strings")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<PropertyValue, E> {
                Ok(PropertyValue::Text(v.to_string()))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<PropertyValue, E> {
                Ok(PropertyValue::Integer(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<PropertyValue, E> {
                i64::try_from(v)
                    .map(PropertyValue::Integer)
                    .map_err(|_| E::custom("integer out of range"))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<PropertyValue, E> {
                Ok(PropertyValue::Real(v))
            }

            fn visit_bool<E: de::Error>(self, v: bool) -> Result<PropertyValue, E> {
                Ok(PropertyValue::Boolean(v))
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<PropertyValue, A::Error> {
                let mut items = Vec::new();
                while let Some(item) = seq.next_element::<String>()? {
                    items.push(item);
                }
                Ok(PropertyValue::TextList(items))
            }
        }

        deserializer.deserialize_any(ValueVisitor)
    }
}

impl From<&str> for PropertyValue {
    fn from(s: &str) -> Self {
        PropertyValue::Text(s.to_string())
    }
}

impl From<String> for PropertyValue {
    fn from(s: String) -> Self {
        PropertyValue::Text(s)
    }
}

impl From<i64> for PropertyValue {
    fn from(i: i64) -> Self {
        PropertyValue::Integer(i)
    }
}

impl From<bool> for PropertyValue {
    fn from(b: bool) -> Self {
        PropertyValue::Boolean(b)
    }
}

/// Property map attached to a node or relationship. A BTreeMap keeps
/// iteration (and therefore serialization) deterministic.
pub type PropertyMap = BTreeMap<String, PropertyValue>;

/// A labelled node.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeRecord {
    pub id: NodeId,
    pub labels: Vec<String>,
    pub properties: PropertyMap,
}

impl NodeRecord {
    pub fn has_label(&self, label: &str) -> bool {
        self.labels.iter().any(|l| l == label)
    }

    pub fn property(&self, name: &str) -> Option<&PropertyValue> {
        self.properties.get(name)
    }

    /// Shorthand for a text-valued property.
    pub fn text_property(&self, name: &str) -> Option<&str> {
        match self.properties.get(name) {
            Some(PropertyValue::Text(s)) => Some(s.as_str()),
            _ => None,
        }
    }

    /// Shorthand for an integer-valued property.
    pub fn integer_property(&self, name: &str) -> Option<i64> {
        match self.properties.get(name) {
            Some(PropertyValue::Integer(i)) => Some(*i),
            _ => None,
        }
    }

    /// Shorthand for a text-list property.
    pub fn list_property(&self, name: &str) -> Option<&[String]> {
        match self.properties.get(name) {
            Some(PropertyValue::TextList(items)) => Some(items.as_slice()),
            _ => None,
        }
    }
}

/// A directed, typed relationship between two nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationshipRecord {
    pub id: RelationshipId,
    pub rel_type: String,
    pub start: NodeId,
    pub end: NodeId,
    pub properties: PropertyMap,
}

/// Direction filter for [`PropertyGraph::neighbors`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Outgoing,
    Incoming,
    Both,
}

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("a node requires at least one label")]
    EmptyLabels,
    #[error("invalid {kind} identifier `{value}`")]
    InvalidIdentifier { kind: &'static str, value: String },
    #[error("unknown node id {0}")]
    UnknownNode(NodeId),
    #[error("invalid property `{name}`: {reason}")]
    InvalidProperty { name: String, reason: String },
}

/// `[A-Za-z][A-Za-z0-9_]*`
pub fn is_valid_label(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// `[A-Z][A-Z0-9_]*`
pub fn is_valid_relationship_type(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase())
        && chars.all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_')
}

/// `[A-Za-z_][A-Za-z0-9_]*` — property names, variables and parameters.
pub fn is_valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// In-memory directed property graph.
///
/// Node and relationship ids are never reused within a graph instance, and
/// every relationship endpoint always resolves to a stored node.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PropertyGraph {
    nodes: BTreeMap<NodeId, NodeRecord>,
    relationships: BTreeMap<RelationshipId, RelationshipRecord>,
    outgoing: HashMap<NodeId, Vec<RelationshipId>>,
    incoming: HashMap<NodeId, Vec<RelationshipId>>,
    next_node_id: u64,
    next_relationship_id: u64,
}

impl PropertyGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn relationship_count(&self) -> usize {
        self.relationships.len()
    }

    pub fn node(&self, id: NodeId) -> Option<&NodeRecord> {
        self.nodes.get(&id)
    }

    pub fn relationship(&self, id: RelationshipId) -> Option<&RelationshipRecord> {
        self.relationships.get(&id)
    }

    /// Nodes in ascending id order.
    pub fn nodes(&self) -> impl Iterator<Item = &NodeRecord> {
        self.nodes.values()
    }

    /// Relationships in ascending id order.
    pub fn relationships(&self) -> impl Iterator<Item = &RelationshipRecord> {
        self.relationships.values()
    }

    fn validate_properties(properties: &PropertyMap) -> Result<(), GraphError> {
        for (name, value) in properties {
            if !is_valid_name(name) {
                return Err(GraphError::InvalidIdentifier {
                    kind: "property",
                    value: name.clone(),
                });
            }
            value.validate().map_err(|reason| GraphError::InvalidProperty {
                name: name.clone(),
                reason,
            })?;
        }
        Ok(())
    }

    /// Adds a node and returns its id.
    pub fn add_node(
        &mut self,
        labels: Vec<String>,
        properties: PropertyMap,
    ) -> Result<NodeId, GraphError> {
        if labels.is_empty() {
            return Err(GraphError::EmptyLabels);
        }
        for label in &labels {
            if !is_valid_label(label) {
                return Err(GraphError::InvalidIdentifier {
                    kind: "label",
                    value: label.clone(),
                });
            }
        }
        Self::validate_properties(&properties)?;
        let id = NodeId(self.next_node_id);
        self.next_node_id += 1;
        self.nodes.insert(id, NodeRecord { id, labels, properties });
        Ok(id)
    }

    /// Inserts a node with a caller-chosen id, used when loading documents.
    /// Returns false if the id is already taken.
    pub(crate) fn insert_node_with_id(&mut self, record: NodeRecord) -> Result<bool, GraphError> {
        if record.labels.is_empty() {
            return Err(GraphError::EmptyLabels);
        }
        for label in &record.labels {
            if !is_valid_label(label) {
                return Err(GraphError::InvalidIdentifier {
                    kind: "label",
                    value: label.clone(),
                });
            }
        }
        Self::validate_properties(&record.properties)?;
        if self.nodes.contains_key(&record.id) {
            return Ok(false);
        }
        self.next_node_id = self.next_node_id.max(record.id.0 + 1);
        self.nodes.insert(record.id, record);
        Ok(true)
    }

    /// Adds a directed relationship and returns its id. Self-loops are
    /// permitted; pattern matching handles them.
    pub fn add_relationship(
        &mut self,
        start: NodeId,
        rel_type: &str,
        end: NodeId,
        properties: PropertyMap,
    ) -> Result<RelationshipId, GraphError> {
        if !is_valid_relationship_type(rel_type) {
            return Err(GraphError::InvalidIdentifier {
                kind: "relationship type",
                value: rel_type.to_string(),
            });
        }
        if !self.nodes.contains_key(&start) {
            return Err(GraphError::UnknownNode(start));
        }
        if !self.nodes.contains_key(&end) {
            return Err(GraphError::UnknownNode(end));
        }
        Self::validate_properties(&properties)?;
        let id = RelationshipId(self.next_relationship_id);
        self.next_relationship_id += 1;
        self.relationships.insert(
            id,
            RelationshipRecord {
                id,
                rel_type: rel_type.to_string(),
                start,
                end,
                properties,
            },
        );
        self.outgoing.entry(start).or_default().push(id);
        self.incoming.entry(end).or_default().push(id);
        Ok(id)
    }

    /// Inserts a relationship with a caller-chosen id, used when loading
    /// documents. Returns false if the id is already taken.
    pub(crate) fn insert_relationship_with_id(
        &mut self,
        record: RelationshipRecord,
    ) -> Result<bool, GraphError> {
        if !is_valid_relationship_type(&record.rel_type) {
            return Err(GraphError::InvalidIdentifier {
                kind: "relationship type",
                value: record.rel_type.clone(),
            });
        }
        if !self.nodes.contains_key(&record.start) {
            return Err(GraphError::UnknownNode(record.start));
        }
        if !self.nodes.contains_key(&record.end) {
            return Err(GraphError::UnknownNode(record.end));
        }
        Self::validate_properties(&record.properties)?;
        if self.relationships.contains_key(&record.id) {
            return Ok(false);
        }
        self.next_relationship_id = self.next_relationship_id.max(record.id.0 + 1);
        self.outgoing.entry(record.start).or_default().push(record.id);
        self.incoming.entry(record.end).or_default().push(record.id);
        self.relationships.insert(record.id, record);
        Ok(true)
    }

    /// Incident relationships of a node matching an optional type filter and
    /// a direction, as `(relationship, other endpoint)` pairs in ascending
    /// relationship-id order.
    ///
    /// With `Direction::Both` the result is the multiset union of the
    /// outgoing and incoming lists, so a self-loop appears twice.
    pub fn neighbors(
        &self,
        node: NodeId,
        type_filter: Option<&str>,
        direction: Direction,
    ) -> Result<Vec<(RelationshipId, NodeId)>, GraphError> {
        if !self.nodes.contains_key(&node) {
            return Err(GraphError::UnknownNode(node));
        }
        let mut hits: Vec<(RelationshipId, NodeId)> = Vec::new();
        let matches_type =
            |rel: &RelationshipRecord| type_filter.is_none_or(|t| rel.rel_type == t);
        if matches!(direction, Direction::Outgoing | Direction::Both) {
            for rid in self.outgoing.get(&node).map(Vec::as_slice).unwrap_or(&[]) {
                let rel = &self.relationships[rid];
                if matches_type(rel) {
                    hits.push((*rid, rel.end));
                }
            }
        }
        if matches!(direction, Direction::Incoming | Direction::Both) {
            for rid in self.incoming.get(&node).map(Vec::as_slice).unwrap_or(&[]) {
                let rel = &self.relationships[rid];
                if matches_type(rel) {
                    hits.push((*rid, rel.start));
                }
            }
        }
        hits.sort();
        Ok(hits)
    }

    /// Number of nodes carrying the given label.
    pub fn count_by_label(&self, label: &str) -> usize {
        self.nodes.values().filter(|n| n.has_label(label)).count()
    }

    /// Number of relationships of the given type.
    pub fn count_by_type(&self, rel_type: &str) -> usize {
        self.relationships
            .values()
            .filter(|r| r.rel_type == rel_type)
            .count()
    }

    /// Nodes carrying the given label, ascending id order.
    pub fn nodes_with_label<'a>(&'a self, label: &'a str) -> impl Iterator<Item = &'a NodeRecord> {
        self.nodes.values().filter(move |n| n.has_label(label))
    }

    /// First node whose property equals the given value, if any.
    pub fn find_by_property(&self, name: &str, value: &PropertyValue) -> Option<&NodeRecord> {
        self.nodes
            .values()
            .find(|n| n.property(name).is_some_and(|v| v.loose_eq(value)))
    }
}

/// Convenience constructor for property maps in builders and tests.
pub fn props<I, K>(entries: I) -> PropertyMap
where
    I: IntoIterator<Item = (K, PropertyValue)>,
    K: Into<String>,
{
    entries.into_iter().map(|(k, v)| (k.into(), v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn add_node_assigns_sequential_ids() {
        let mut g = PropertyGraph::new();
        let system = g
            .add_node(
                labels(&["System"]),
                props([
                    ("name", PropertyValue::from("Study Turbine")),
                    ("location", PropertyValue::from("Levenmouth,Fife")),
                    ("rated_power", PropertyValue::from("7MW")),
                    ("type", PropertyValue::from("Offshore")),
                ]),
            )
            .unwrap();
        assert_eq!(g.node_count(), 1);
        let rec = g.node(system).unwrap();
        assert_eq!(rec.text_property("rated_power"), Some("7MW"));

        let feature = g.add_node(labels(&["Feature"]), PropertyMap::new()).unwrap();
        assert_ne!(system, feature);
        assert!(g.node(feature).unwrap().properties.is_empty());
    }

    #[test]
    fn empty_labels_rejected() {
        let mut g = PropertyGraph::new();
        assert_eq!(
            g.add_node(vec![], PropertyMap::new()),
            Err(GraphError::EmptyLabels)
        );
    }

    #[test]
    fn invalid_identifiers_rejected() {
        let mut g = PropertyGraph::new();
        assert!(matches!(
            g.add_node(labels(&["9System"]), PropertyMap::new()),
            Err(GraphError::InvalidIdentifier { kind: "label", .. })
        ));
        let a = g.add_node(labels(&["A"]), PropertyMap::new()).unwrap();
        let b = g.add_node(labels(&["B"]), PropertyMap::new()).unwrap();
        assert!(matches!(
            g.add_relationship(a, "contains", b, PropertyMap::new()),
            Err(GraphError::InvalidIdentifier { kind: "relationship type", .. })
        ));
    }

    #[test]
    fn non_finite_real_rejected() {
        let mut g = PropertyGraph::new();
        let res = g.add_node(
            labels(&["A"]),
            props([("x", PropertyValue::Real(f64::NAN))]),
        );
        assert!(matches!(res, Err(GraphError::InvalidProperty { .. })));
    }

    #[test]
    fn relationship_endpoints_must_exist() {
        let mut g = PropertyGraph::new();
        let a = g.add_node(labels(&["A"]), PropertyMap::new()).unwrap();
        assert_eq!(
            g.add_relationship(a, "FOR", NodeId(999_999), PropertyMap::new()),
            Err(GraphError::UnknownNode(NodeId(999_999)))
        );
        // self-loop is allowed
        let rid = g.add_relationship(a, "FOR", a, PropertyMap::new()).unwrap();
        assert_eq!(g.relationship(rid).unwrap().start, a);
        assert_eq!(g.relationship(rid).unwrap().end, a);
    }

    #[test]
    fn neighbors_isolated_node_is_empty() {
        let mut g = PropertyGraph::new();
        let a = g.add_node(labels(&["A"]), PropertyMap::new()).unwrap();
        assert!(g.neighbors(a, None, Direction::Both).unwrap().is_empty());
        assert!(g.neighbors(NodeId(7), None, Direction::Both).is_err());
    }

    #[test]
    fn neighbors_matches_filter_and_direction() {
        let mut g = PropertyGraph::new();
        let system = g.add_node(labels(&["System"]), PropertyMap::new()).unwrap();
        let mut children = Vec::new();
        for i in 0..11 {
            let c = g
                .add_node(labels(&[&format!("Sub{i}")]), PropertyMap::new())
                .unwrap();
            g.add_relationship(system, "CONTAINS", c, PropertyMap::new())
                .unwrap();
            children.push(c);
        }
        g.add_relationship(children[0], "RELATESTO", system, PropertyMap::new())
            .unwrap();

        let out = g
            .neighbors(system, Some("CONTAINS"), Direction::Outgoing)
            .unwrap();
        assert_eq!(out.len(), 11);
        assert_eq!(
            g.neighbors(system, Some("CONTAINS"), Direction::Incoming)
                .unwrap()
                .len(),
            0
        );
        assert_eq!(g.neighbors(system, None, Direction::Both).unwrap().len(), 12);
    }

    #[test]
    fn self_loop_appears_twice_in_both() {
        let mut g = PropertyGraph::new();
        let a = g.add_node(labels(&["A"]), PropertyMap::new()).unwrap();
        g.add_relationship(a, "FOR", a, PropertyMap::new()).unwrap();
        let both = g.neighbors(a, None, Direction::Both).unwrap();
        assert_eq!(both.len(), 2);
    }

    // Seeded randomized check: neighbors() agrees with a full scan of the
    // relationship list, and Both is the multiset union of Out and In.
    #[test]
    fn neighbors_agrees_with_full_scan() {
        let mut rng = crate::rng::SplitMix64::new(0x5eed);
        for _ in 0..30 {
            let mut g = PropertyGraph::new();
            let n = 2 + (rng.next_u64() % 8) as usize;
            let ids: Vec<NodeId> = (0..n)
                .map(|i| {
                    g.add_node(labels(&[&format!("L{}", i % 3)]), PropertyMap::new())
                        .unwrap()
                })
                .collect();
            let m = rng.next_u64() % 24;
            let types = ["FOR", "HAS", "TYPE"];
            for _ in 0..m {
                let s = ids[(rng.next_u64() as usize) % n];
                let e = ids[(rng.next_u64() as usize) % n];
                let t = types[(rng.next_u64() as usize) % types.len()];
                g.add_relationship(s, t, e, PropertyMap::new()).unwrap();
            }
            for &node in &ids {
                for filter in [None, Some("FOR"), Some("HAS")] {
                    let mut expect_out: Vec<(RelationshipId, NodeId)> = g
                        .relationships()
                        .filter(|r| r.start == node && filter.is_none_or(|t| r.rel_type == t))
                        .map(|r| (r.id, r.end))
                        .collect();
                    expect_out.sort();
                    assert_eq!(
                        g.neighbors(node, filter, Direction::Outgoing).unwrap(),
                        expect_out
                    );

                    let mut expect_in: Vec<(RelationshipId, NodeId)> = g
                        .relationships()
                        .filter(|r| r.end == node && filter.is_none_or(|t| r.rel_type == t))
                        .map(|r| (r.id, r.start))
                        .collect();
                    expect_in.sort();
                    assert_eq!(
                        g.neighbors(node, filter, Direction::Incoming).unwrap(),
                        expect_in
                    );

                    let mut union = expect_out;
                    union.extend(g.neighbors(node, filter, Direction::Incoming).unwrap());
                    union.sort();
                    assert_eq!(g.neighbors(node, filter, Direction::Both).unwrap(), union);
                }
            }
        }
    }

    // After construction a graph is shared read-only between threads.
    #[test]
    fn graph_is_send_and_sync() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<PropertyGraph>();
    }

    #[test]
    fn count_by_label_over_multi_label_nodes() {
        let mut g = PropertyGraph::new();
        assert_eq!(g.count_by_label("Feature"), 0);
        g.add_node(labels(&["Feature"]), PropertyMap::new()).unwrap();
        g.add_node(labels(&["Feature", "Derived"]), PropertyMap::new())
            .unwrap();
        g.add_node(labels(&["Alarm1"]), PropertyMap::new()).unwrap();
        assert_eq!(g.count_by_label("Feature"), 2);
        assert_eq!(g.count_by_label("Derived"), 1);
        // label-count sum >= node count, equal when all nodes single-labelled
        let sum: usize = ["Feature", "Derived", "Alarm1"]
            .iter()
            .map(|l| g.count_by_label(l))
            .sum();
        assert!(sum >= g.node_count());
    }
}
