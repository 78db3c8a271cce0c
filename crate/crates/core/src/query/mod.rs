//! MATCH / WHERE / RETURN pattern query subset over a property graph.
//!
//! Grammar (keywords case-insensitive, identifiers case-sensitive):
//!
//! ```text
//! query   := MATCH path ("," path)* (WHERE pred (AND pred)*)? RETURN returns
//! path    := node (rel node)*
//! node    := "(" var? (":" Label)? propmap? ")"
//! propmap := "{" name ":" value ("," name ":" value)* "}"
//! rel     := "-[" (":" TYPE)? "]->" | "<-[" (":" TYPE)? "]-" | "-[" (":" TYPE)? "]-"
//! pred    := var "." name op value        op := = | <> | < | <= | > | >=
//! returns := "*" | item ("," item)*       item := var ("." name)?
//! value   := literal | "$" name
//! literal := string | integer | real | boolean
//! ```
//!
//! Execution returns the distinct bindings of the named pattern variables,
//! ordered lexicographically by their node ids. A relationship is never
//! bound twice within one path match; node repetition is allowed.

mod ast;
mod exec;
mod parser;

pub use ast::{
    Comparator, ConstraintValue, NodePattern, PathPattern, Predicate, QueryAst, RelDirection,
    RelPattern, ReturnClause, ReturnItem,
};
pub use exec::{execute, ExecError, ParamMap, ResultTable, ResultValue};
pub use parser::{parse, ParseError};

/// Renders an AST back to canonical query text; `parse(unparse(a)) == a`.
pub fn unparse(ast: &QueryAst) -> String {
    ast.to_string()
}
