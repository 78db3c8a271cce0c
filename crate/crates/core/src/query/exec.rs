//! Pattern-match execution over a property graph.
//!
//! Matching walks each path left to right with label- and constraint-first
//! pruning, threading variable bindings across comma-separated paths (join
//! semantics). Within one path match no relationship is bound twice; node
//! repetition is allowed. The result rows are the distinct bindings of the
//! named variables, sorted lexicographically by their node ids, in variable
//! declaration order.

use super::ast::*;
use crate::graph::{
    Direction, NodeId, NodeRecord, PropertyGraph, PropertyValue, RelationshipId,
    RelationshipRecord,
};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

pub type ParamMap = BTreeMap<String, PropertyValue>;

#[derive(Debug, Error, PartialEq)]
pub enum ExecError {
    #[error("missing parameter ${0}")]
    MissingParameter(String),
    #[error("type mismatch: cannot compare {left} with {right}")]
    TypeMismatch {
        left: &'static str,
        right: &'static str,
    },
}

/// One cell of a result row.
#[derive(Debug, Clone, PartialEq)]
pub enum ResultValue {
    Node(NodeRecord),
    Relationship(RelationshipRecord),
    Value(PropertyValue),
    /// A projected property that is absent on the bound node.
    Null,
}

impl ResultValue {
    pub fn as_node(&self) -> Option<&NodeRecord> {
        match self {
            ResultValue::Node(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_value(&self) -> Option<&PropertyValue> {
        match self {
            ResultValue::Value(v) => Some(v),
            _ => None,
        }
    }
}

/// Tabular query result: one column per return item, one row per distinct
/// binding of the named pattern variables.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<ResultValue>>,
}

impl ResultTable {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    /// Cell by row index and column name.
    pub fn get(&self, row: usize, column: &str) -> Option<&ResultValue> {
        let idx = self.columns.iter().position(|c| c == column)?;
        self.rows.get(row)?.get(idx)
    }
}

fn variant_name(v: &PropertyValue) -> &'static str {
    match v {
        PropertyValue::Text(_) => "Text",
        PropertyValue::Integer(_) => "Integer",
        PropertyValue::Real(_) => "Real",
        PropertyValue::Boolean(_) => "Boolean",
        PropertyValue::TextList(_) => "TextList",
    }
}

/// Comparison semantics: Integer/Real pairs compare numerically, Text
/// compares lexicographically, Boolean and TextList support only `=`/`<>`;
/// any other cross-variant pairing is a TypeMismatch.
pub(crate) fn compare(
    op: Comparator,
    left: &PropertyValue,
    right: &PropertyValue,
) -> Result<bool, ExecError> {
    use PropertyValue::*;
    let ord = match (left, right) {
        (Integer(a), Integer(b)) => a.partial_cmp(b),
        (Integer(a), Real(b)) => (*a as f64).partial_cmp(b),
        (Real(a), Integer(b)) => a.partial_cmp(&(*b as f64)),
        (Real(a), Real(b)) => a.partial_cmp(b),
        (Text(a), Text(b)) => a.partial_cmp(b),
        (Boolean(a), Boolean(b)) => match op {
            Comparator::Eq => return Ok(a == b),
            Comparator::Ne => return Ok(a != b),
            _ => {
                return Err(ExecError::TypeMismatch {
                    left: "Boolean",
                    right: "Boolean",
                })
            }
        },
        (TextList(a), TextList(b)) => match op {
            Comparator::Eq => return Ok(a == b),
            Comparator::Ne => return Ok(a != b),
            _ => {
                return Err(ExecError::TypeMismatch {
                    left: "TextList",
                    right: "TextList",
                })
            }
        },
        (l, r) => {
            return Err(ExecError::TypeMismatch {
                left: variant_name(l),
                right: variant_name(r),
            })
        }
    };
    // Real values in a graph are finite, so ordering is always defined.
    let ord = ord.expect("finite comparison");
    Ok(match op {
        Comparator::Eq => ord == std::cmp::Ordering::Equal,
        Comparator::Ne => ord != std::cmp::Ordering::Equal,
        Comparator::Lt => ord == std::cmp::Ordering::Less,
        Comparator::Le => ord != std::cmp::Ordering::Greater,
        Comparator::Gt => ord == std::cmp::Ordering::Greater,
        Comparator::Ge => ord != std::cmp::Ordering::Less,
    })
}

fn resolve(value: &ConstraintValue, params: &ParamMap) -> Result<PropertyValue, ExecError> {
    match value {
        ConstraintValue::Literal(v) => Ok(v.clone()),
        ConstraintValue::Parameter(name) => params
            .get(name)
            .cloned()
            .ok_or_else(|| ExecError::MissingParameter(name.clone())),
    }
}

struct ResolvedNode<'a> {
    variable: Option<&'a str>,
    label: Option<&'a str>,
    constraints: Vec<(&'a str, PropertyValue)>,
}

struct ResolvedPath<'a> {
    nodes: Vec<ResolvedNode<'a>>,
    rels: &'a [RelPattern],
}

fn node_matches(node: &NodeRecord, pattern: &ResolvedNode<'_>) -> bool {
    if let Some(label) = pattern.label {
        if !node.has_label(label) {
            return false;
        }
    }
    pattern.constraints.iter().all(|(name, value)| {
        node.property(name).is_some_and(|actual| actual.loose_eq(value))
    })
}

struct Matcher<'a> {
    graph: &'a PropertyGraph,
    paths: &'a [ResolvedPath<'a>],
    env: BTreeMap<&'a str, NodeId>,
    solutions: Vec<BTreeMap<&'a str, NodeId>>,
}

impl<'a> Matcher<'a> {
    /// Binds a pattern node to a concrete node if consistent with the
    /// environment; returns whether a new binding was introduced.
    fn try_bind(&mut self, pattern: &ResolvedNode<'a>, node: NodeId) -> Option<bool> {
        match pattern.variable {
            None => Some(false),
            Some(var) => match self.env.get(var) {
                Some(bound) if *bound == node => Some(false),
                Some(_) => None,
                None => {
                    self.env.insert(var, node);
                    Some(true)
                }
            },
        }
    }

    fn solve_path(&mut self, path_idx: usize) {
        if path_idx == self.paths.len() {
            self.solutions.push(self.env.clone());
            return;
        }
        let path = &self.paths[path_idx];
        let first = &path.nodes[0];
        let candidates: Vec<NodeId> = match first.variable.and_then(|v| self.env.get(v)) {
            Some(&bound) => vec![bound],
            None => self.graph.nodes().map(|n| n.id).collect(),
        };
        for candidate in candidates {
            let record = self.graph.node(candidate).expect("candidate exists");
            if !node_matches(record, first) {
                continue;
            }
            if let Some(introduced) = self.try_bind(first, candidate) {
                let mut used = Vec::new();
                self.walk(path_idx, 0, candidate, &mut used);
                if introduced {
                    self.env.remove(first.variable.unwrap());
                }
            }
        }
    }

    fn walk(
        &mut self,
        path_idx: usize,
        step: usize,
        current: NodeId,
        used: &mut Vec<RelationshipId>,
    ) {
        let path = &self.paths[path_idx];
        if step == path.rels.len() {
            self.solve_path(path_idx + 1);
            return;
        }
        let rel = &path.rels[step];
        let next_pattern = &path.nodes[step + 1];
        let direction = match rel.direction {
            RelDirection::Outgoing => Direction::Outgoing,
            RelDirection::Incoming => Direction::Incoming,
            RelDirection::Undirected => Direction::Both,
        };
        let hops = self
            .graph
            .neighbors(current, rel.rel_type.as_deref(), direction)
            .expect("current node exists");
        for (rid, other) in hops {
            if used.contains(&rid) {
                continue;
            }
            let record = self.graph.node(other).expect("endpoint exists");
            if !node_matches(record, next_pattern) {
                continue;
            }
            if let Some(introduced) = self.try_bind(next_pattern, other) {
                used.push(rid);
                self.walk(path_idx, step + 1, other, used);
                used.pop();
                if introduced {
                    self.env.remove(next_pattern.variable.unwrap());
                }
            }
        }
    }
}

/// Executes a parsed query against a graph with the given parameters.
pub fn execute(
    graph: &PropertyGraph,
    ast: &QueryAst,
    params: &ParamMap,
) -> Result<ResultTable, ExecError> {
    // Substitute parameters up front so missing ones fail loudly.
    let mut resolved_paths = Vec::with_capacity(ast.paths.len());
    for path in &ast.paths {
        let mut nodes = Vec::with_capacity(path.nodes.len());
        for node in &path.nodes {
            let mut constraints = Vec::with_capacity(node.constraints.len());
            for (name, value) in &node.constraints {
                constraints.push((name.as_str(), resolve(value, params)?));
            }
            nodes.push(ResolvedNode {
                variable: node.variable.as_deref(),
                label: node.label.as_deref(),
                constraints,
            });
        }
        resolved_paths.push(ResolvedPath { nodes, rels: &path.rels });
    }
    let predicates: Vec<(&Predicate, PropertyValue)> = ast
        .predicates
        .iter()
        .map(|p| Ok((p, resolve(&p.value, params)?)))
        .collect::<Result<_, ExecError>>()?;

    let mut matcher = Matcher {
        graph,
        paths: &resolved_paths,
        env: BTreeMap::new(),
        solutions: Vec::new(),
    };
    matcher.solve_path(0);

    let variables = ast.variables();

    // WHERE: predicates in declaration order with short-circuit AND; a
    // missing property is a non-match, not an error.
    let mut kept: Vec<&BTreeMap<&str, NodeId>> = Vec::new();
    'solution: for solution in &matcher.solutions {
        for (pred, rhs) in &predicates {
            let node_id = solution
                .get(pred.variable.as_str())
                .expect("predicate variable is bound");
            let node = graph.node(*node_id).expect("bound node exists");
            match node.property(&pred.property) {
                None => continue 'solution,
                Some(lhs) => {
                    if !compare(pred.comparator, lhs, rhs)? {
                        continue 'solution;
                    }
                }
            }
        }
        kept.push(solution);
    }

    // Distinct named bindings, sorted lexicographically by node ids in
    // variable declaration order.
    let mut distinct: BTreeSet<Vec<NodeId>> = BTreeSet::new();
    for solution in kept {
        distinct.insert(variables.iter().map(|v| solution[v]).collect());
    }

    let items: Vec<ReturnItem> = match &ast.returns {
        ReturnClause::All => variables
            .iter()
            .map(|v| ReturnItem { variable: v.to_string(), property: None })
            .collect(),
        ReturnClause::Items(items) => items.clone(),
    };
    let columns: Vec<String> = items.iter().map(|i| i.to_string()).collect();

    let mut rows = Vec::with_capacity(distinct.len());
    for binding in distinct {
        let lookup = |var: &str| {
            let idx = variables.iter().position(|v| *v == var).expect("bound");
            binding[idx]
        };
        let mut row = Vec::with_capacity(items.len());
        for item in &items {
            let node = graph.node(lookup(&item.variable)).expect("bound node");
            row.push(match &item.property {
                None => ResultValue::Node(node.clone()),
                Some(prop) => match node.property(prop) {
                    Some(v) => ResultValue::Value(v.clone()),
                    None => ResultValue::Null,
                },
            });
        }
        rows.push(row);
    }
    Ok(ResultTable { columns, rows })
}
