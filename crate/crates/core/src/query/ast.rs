//! Query AST and its canonical text rendering.

use crate::graph::PropertyValue;
use std::fmt;

/// A literal value or a `$name` parameter slot.
#[derive(Debug, Clone, PartialEq)]
pub enum ConstraintValue {
    Literal(PropertyValue),
    Parameter(String),
}

/// `( var? (:Label)? {k:v, ...}? )`
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NodePattern {
    pub variable: Option<String>,
    pub label: Option<String>,
    /// Property constraints in source order.
    pub constraints: Vec<(String, ConstraintValue)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelDirection {
    Outgoing,
    Incoming,
    Undirected,
}

/// `-[:TYPE]->`, `<-[:TYPE]-` or `-[:TYPE]-`; the type may be absent.
#[derive(Debug, Clone, PartialEq)]
pub struct RelPattern {
    pub rel_type: Option<String>,
    pub direction: RelDirection,
}

/// Alternating node / relationship patterns; always one more node than
/// relationships.
#[derive(Debug, Clone, PartialEq)]
pub struct PathPattern {
    pub nodes: Vec<NodePattern>,
    pub rels: Vec<RelPattern>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparator {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Comparator {
    pub fn symbol(&self) -> &'static str {
        match self {
            Comparator::Eq => "=",
            Comparator::Ne => "<>",
            Comparator::Lt => "<",
            Comparator::Le => "<=",
            Comparator::Gt => ">",
            Comparator::Ge => ">=",
        }
    }
}

/// `var.property op value`
#[derive(Debug, Clone, PartialEq)]
pub struct Predicate {
    pub variable: String,
    pub property: String,
    pub comparator: Comparator,
    pub value: ConstraintValue,
}

/// `var` or `var.property`
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnItem {
    pub variable: String,
    pub property: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReturnClause {
    /// `RETURN *`: all named variables in declaration order.
    All,
    Items(Vec<ReturnItem>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryAst {
    pub paths: Vec<PathPattern>,
    /// WHERE predicates, a conjunction in source order.
    pub predicates: Vec<Predicate>,
    pub returns: ReturnClause,
}

impl QueryAst {
    /// Named variables in order of first appearance.
    pub fn variables(&self) -> Vec<&str> {
        let mut seen = Vec::new();
        for path in &self.paths {
            for node in &path.nodes {
                if let Some(var) = &node.variable {
                    if !seen.contains(&var.as_str()) {
                        seen.push(var.as_str());
                    }
                }
            }
        }
        seen
    }
}

fn write_literal(f: &mut fmt::Formatter<'_>, value: &PropertyValue) -> fmt::Result {
    match value {
        PropertyValue::Text(s) => {
            write!(f, "\"")?;
            for c in s.chars() {
                match c {
                    '"' => write!(f, "\\\"")?,
                    '\\' => write!(f, "\\\\")?,
                    '\n' => write!(f, "\\n")?,
                    '\r' => write!(f, "\\r")?,
                    '\t' => write!(f, "\\t")?,
                    other => write!(f, "{other}")?,
                }
            }
            write!(f, "\"")
        }
        PropertyValue::Integer(i) => write!(f, "{i}"),
        PropertyValue::Real(r) => write!(f, "{r:?}"),
        PropertyValue::Boolean(b) => write!(f, "{b}"),
        // list literals are not part of the grammar; unreachable from parse()
        PropertyValue::TextList(_) => Err(fmt::Error),
    }
}

impl fmt::Display for ConstraintValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintValue::Literal(v) => write_literal(f, v),
            ConstraintValue::Parameter(name) => write!(f, "${name}"),
        }
    }
}

impl fmt::Display for NodePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        if let Some(var) = &self.variable {
            write!(f, "{var}")?;
        }
        if let Some(label) = &self.label {
            write!(f, ":{label}")?;
        }
        if !self.constraints.is_empty() {
            write!(f, "{{")?;
            for (i, (name, value)) in self.constraints.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{name}:{value}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for RelPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = match &self.rel_type {
            Some(t) => format!("[:{t}]"),
            None => "[]".to_string(),
        };
        match self.direction {
            RelDirection::Outgoing => write!(f, "-{body}->"),
            RelDirection::Incoming => write!(f, "<-{body}-"),
            RelDirection::Undirected => write!(f, "-{body}-"),
        }
    }
}

impl fmt::Display for PathPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.nodes[0])?;
        for (rel, node) in self.rels.iter().zip(self.nodes.iter().skip(1)) {
            write!(f, "{rel}{node}")?;
        }
        Ok(())
    }
}

impl fmt::Display for ReturnItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.property {
            Some(p) => write!(f, "{}.{p}", self.variable),
            None => write!(f, "{}", self.variable),
        }
    }
}

impl fmt::Display for QueryAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MATCH")?;
        for (i, path) in self.paths.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{path}")?;
        }
        if !self.predicates.is_empty() {
            write!(f, " WHERE ")?;
            for (i, pred) in self.predicates.iter().enumerate() {
                if i > 0 {
                    write!(f, " AND ")?;
                }
                write!(
                    f,
                    "{}.{} {} {}",
                    pred.variable,
                    pred.property,
                    pred.comparator.symbol(),
                    pred.value
                )?;
            }
        }
        write!(f, " RETURN ")?;
        match &self.returns {
            ReturnClause::All => write!(f, "*"),
            ReturnClause::Items(items) => {
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{item}")?;
                }
                Ok(())
            }
        }
    }
}
