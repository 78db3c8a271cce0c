//! Natural-language search phrases bound to stored queries.
//!
//! A phrase template is a sequence of words and `$param` slots. Static
//! phrases have no slots; dynamic phrases fill each slot from a value-source
//! query run against the graph (for example all SCADA feature descriptions).
//! Matching is case-insensitive on template words and case-sensitive on slot
//! values, and a slot accepts only a known candidate value — selected by
//! greedy longest match, since values may contain spaces.

use crate::graph::{PropertyGraph, PropertyValue};
use crate::query::{self, ExecError, ParamMap, ParseError, ResultTable, ResultValue};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

/// Where a dynamic slot takes its candidate values from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueSource {
    /// Stored query returning the candidates.
    pub value_source_query: String,
    /// Result column to read, e.g. `n.description`.
    pub value_column: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchPhrase {
    pub template: String,
    pub description: String,
    pub query_text: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub param_specs: BTreeMap<String, ValueSource>,
}

#[derive(Debug, Error, PartialEq)]
pub enum RegistryError {
    #[error("duplicate template `{0}`")]
    DuplicateTemplate(String),
    #[error("template `{template}`: stored query does not parse: {error}")]
    InvalidQuery { template: String, error: String },
    #[error("template `{template}`: {detail}")]
    SlotMismatch { template: String, detail: String },
    #[error("registry document does not parse: {0}")]
    Malformed(String),
}

#[derive(Debug, Error, PartialEq)]
pub enum ResolveError {
    #[error("no phrase matches the input")]
    NoMatch,
    #[error("input matches several phrases: {0:?}")]
    AmbiguousMatch(Vec<String>),
    #[error("template `{template}`: slot ${param} is unfilled or not a known value")]
    SlotUnfilled { template: String, param: String },
    #[error("value-source query failed: {0}")]
    ValueSource(ExecError),
    #[error(transparent)]
    Exec(#[from] ExecError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Segment {
    Word(String),
    Slot(String),
}

fn segments(template: &str) -> Vec<Segment> {
    template
        .split_whitespace()
        .map(|token| match token.strip_prefix('$') {
            Some(name) => Segment::Slot(name.to_string()),
            None => Segment::Word(token.to_string()),
        })
        .collect()
}

fn slot_names(template: &str) -> Vec<String> {
    segments(template)
        .into_iter()
        .filter_map(|s| match s {
            Segment::Slot(name) => Some(name),
            Segment::Word(_) => None,
        })
        .collect()
}

/// Parameters referenced anywhere in a query AST.
fn query_params(ast: &query::QueryAst) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    let mut push = |value: &query::ConstraintValue| {
        if let query::ConstraintValue::Parameter(name) = value {
            if !out.contains(name) {
                out.push(name.clone());
            }
        }
    };
    for path in &ast.paths {
        for node in &path.nodes {
            for (_, value) in &node.constraints {
                push(value);
            }
        }
    }
    for pred in &ast.predicates {
        push(&pred.value);
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PhraseRegistry {
    phrases: Vec<SearchPhrase>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RegistryDocument {
    registry_version: u32,
    phrases: Vec<SearchPhrase>,
}

impl PhraseRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn phrases(&self) -> &[SearchPhrase] {
        &self.phrases
    }

    pub fn len(&self) -> usize {
        self.phrases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phrases.is_empty()
    }

    /// Registers a phrase after checking template uniqueness, that the
    /// stored query and all value-source queries parse, and that template
    /// slots and query parameters line up exactly.
    pub fn register(&mut self, phrase: SearchPhrase) -> Result<usize, RegistryError> {
        if self
            .phrases
            .iter()
            .any(|p| p.template.eq_ignore_ascii_case(&phrase.template))
        {
            return Err(RegistryError::DuplicateTemplate(phrase.template));
        }
        let ast = query::parse(&phrase.query_text).map_err(|e: ParseError| {
            RegistryError::InvalidQuery { template: phrase.template.clone(), error: e.to_string() }
        })?;
        let mut slots = slot_names(&phrase.template);
        slots.sort();
        let mut params = query_params(&ast);
        params.sort();
        if slots != params {
            return Err(RegistryError::SlotMismatch {
                template: phrase.template,
                detail: format!("template slots {slots:?} but query parameters {params:?}"),
            });
        }
        let mut specs: Vec<&String> = phrase.param_specs.keys().collect();
        specs.sort();
        if slots.iter().collect::<Vec<_>>() != specs {
            return Err(RegistryError::SlotMismatch {
                template: phrase.template,
                detail: format!("template slots {slots:?} but value sources for {specs:?}"),
            });
        }
        for (param, source) in &phrase.param_specs {
            query::parse(&source.value_source_query).map_err(|e| RegistryError::InvalidQuery {
                template: phrase.template.clone(),
                error: format!("value source for ${param}: {e}"),
            })?;
        }
        self.phrases.push(phrase);
        Ok(self.phrases.len() - 1)
    }

    pub fn to_json(&self) -> String {
        let doc = RegistryDocument { registry_version: 1, phrases: self.phrases.clone() };
        let mut text = serde_json::to_string_pretty(&doc).expect("registry serialization");
        text.push('\n');
        text
    }

    /// Loads and re-validates a registry document.
    pub fn from_json(text: &str) -> Result<Self, RegistryError> {
        let doc: RegistryDocument =
            serde_json::from_str(text).map_err(|e| RegistryError::Malformed(e.to_string()))?;
        let mut registry = Self::new();
        for phrase in doc.phrases {
            registry.register(phrase)?;
        }
        Ok(registry)
    }
}

/// Candidate values for a slot: the value-source query result column,
/// de-duplicated and sorted alphabetically.
fn slot_candidates(
    graph: &PropertyGraph,
    source: &ValueSource,
) -> Result<Vec<(String, PropertyValue)>, ResolveError> {
    let ast = query::parse(&source.value_source_query)
        .expect("value-source query was validated at registration");
    let table = query::execute(graph, &ast, &ParamMap::new()).map_err(ResolveError::ValueSource)?;
    let column = table.columns.iter().position(|c| *c == source.value_column);
    let mut out: Vec<(String, PropertyValue)> = Vec::new();
    if let Some(idx) = column {
        for row in &table.rows {
            if let ResultValue::Value(v) = &row[idx] {
                let display = v.to_string();
                if !out.iter().any(|(d, _)| *d == display) {
                    out.push((display, v.clone()));
                }
            }
        }
    }
    out.sort_by(|a, b| a.0.to_lowercase().cmp(&b.0.to_lowercase()).then(a.0.cmp(&b.0)));
    Ok(out)
}

enum Walk {
    /// Every segment matched and the input is exhausted.
    Matched(ParamMap),
    /// The input ran out while it was still a valid prefix of the template.
    TemplatePrefix,
    /// The input ends inside a slot; `partial` is the text typed so far.
    SlotPartial { param: String, partial: String },
    NoMatch,
}

fn walk(
    phrase: &SearchPhrase,
    graph: &PropertyGraph,
    input: &str,
) -> Result<Walk, ResolveError> {
    let segs = segments(&phrase.template);
    let mut rest = input.trim_start();
    let mut bindings = ParamMap::new();
    for (i, seg) in segs.iter().enumerate() {
        match seg {
            Segment::Word(word) => {
                if rest.is_empty() {
                    return Ok(Walk::TemplatePrefix);
                }
                let token_end = rest.find(char::is_whitespace).unwrap_or(rest.len());
                let token = &rest[..token_end];
                if token.eq_ignore_ascii_case(word) {
                    rest = rest[token_end..].trim_start();
                    continue;
                }
                let is_last_input = rest[token_end..].trim_start().is_empty();
                if is_last_input
                    && word.len() >= token.len()
                    && word[..token.len()].eq_ignore_ascii_case(token)
                {
                    return Ok(Walk::TemplatePrefix);
                }
                return Ok(Walk::NoMatch);
            }
            Segment::Slot(param) => {
                let source = phrase
                    .param_specs
                    .get(param)
                    .expect("slot has a value source (validated at registration)");
                let mut candidates = slot_candidates(graph, source)?;
                // greedy longest match, values may contain spaces
                candidates.sort_by_key(|(display, _)| std::cmp::Reverse(display.len()));
                let hit = candidates.iter().find(|(display, _)| {
                    rest.starts_with(display.as_str())
                        && rest[display.len()..]
                            .chars()
                            .next()
                            .is_none_or(char::is_whitespace)
                });
                match hit {
                    Some((display, value)) => {
                        bindings.insert(param.clone(), value.clone());
                        rest = rest[display.len()..].trim_start();
                    }
                    None if i == segs.len() - 1 => {
                        return Ok(Walk::SlotPartial {
                            param: param.clone(),
                            partial: rest.to_string(),
                        });
                    }
                    None => return Ok(Walk::NoMatch),
                }
            }
        }
    }
    if rest.is_empty() {
        Ok(Walk::Matched(bindings))
    } else {
        Ok(Walk::NoMatch)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuggestionKind {
    Phrase,
    SlotValue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Suggestion {
    /// What to show: the template text or the bare candidate value.
    pub display: String,
    /// The full input this suggestion completes to.
    pub completion: String,
    pub kind: SuggestionKind,
}

/// Type-ahead suggestions for a partial input: templates whose word prefix
/// matches, and candidate slot values once the cursor sits in a `$param`
/// slot. Both lists are alphabetical and duplicate-free.
pub fn suggest(
    registry: &PhraseRegistry,
    graph: &PropertyGraph,
    partial_input: &str,
) -> Result<Vec<Suggestion>, ResolveError> {
    let mut phrases: Vec<Suggestion> = Vec::new();
    let mut values: Vec<Suggestion> = Vec::new();
    let trimmed = partial_input.trim_start();
    for phrase in registry.phrases() {
        if trimmed.is_empty() {
            phrases.push(Suggestion {
                display: phrase.template.clone(),
                completion: phrase.template.clone(),
                kind: SuggestionKind::Phrase,
            });
            continue;
        }
        match walk(phrase, graph, partial_input)? {
            Walk::TemplatePrefix | Walk::Matched(_) => phrases.push(Suggestion {
                display: phrase.template.clone(),
                completion: phrase.template.clone(),
                kind: SuggestionKind::Phrase,
            }),
            Walk::SlotPartial { param, partial } => {
                let source = &phrase.param_specs[&param];
                let consumed = &partial_input[..partial_input.len() - partial.len()];
                let needle = partial.to_lowercase();
                for (display, _) in slot_candidates(graph, source)? {
                    if !needle.is_empty() && !display.to_lowercase().contains(&needle) {
                        continue;
                    }
                    let mut completion = consumed.to_string();
                    if !completion.is_empty() && !completion.ends_with(char::is_whitespace) {
                        completion.push(' ');
                    }
                    completion.push_str(&display);
                    values.push(Suggestion {
                        display,
                        completion,
                        kind: SuggestionKind::SlotValue,
                    });
                }
            }
            Walk::NoMatch => {}
        }
    }
    let alpha = |a: &Suggestion, b: &Suggestion| {
        a.display
            .to_lowercase()
            .cmp(&b.display.to_lowercase())
            .then_with(|| a.display.cmp(&b.display))
    };
    phrases.sort_by(alpha);
    phrases.dedup();
    values.sort_by(alpha);
    values.dedup();
    phrases.extend(values);
    Ok(phrases)
}

/// Matches the input against exactly one phrase, binds its slot values and
/// runs the stored query.
pub fn resolve_and_run(
    registry: &PhraseRegistry,
    graph: &PropertyGraph,
    phrase_input: &str,
) -> Result<ResultTable, ResolveError> {
    let mut matches: Vec<(&SearchPhrase, ParamMap)> = Vec::new();
    let mut slot_miss: Option<(String, String)> = None;
    for phrase in registry.phrases() {
        match walk(phrase, graph, phrase_input)? {
            Walk::Matched(bindings) => matches.push((phrase, bindings)),
            Walk::SlotPartial { param, .. } => {
                slot_miss.get_or_insert((phrase.template.clone(), param));
            }
            _ => {}
        }
    }
    match matches.len() {
        0 => match slot_miss {
            Some((template, param)) => Err(ResolveError::SlotUnfilled { template, param }),
            None => Err(ResolveError::NoMatch),
        },
        1 => {
            let (phrase, bindings) = matches.remove(0);
            let ast = query::parse(&phrase.query_text).expect("validated at registration");
            Ok(query::execute(graph, &ast, &bindings)?)
        }
        _ => Err(ResolveError::AmbiguousMatch(
            matches.iter().map(|(p, _)| p.template.clone()).collect(),
        )),
    }
}

/// The bundled registry: the static blades phrase, the dynamic
/// feature-description phrase, and preventive/predictive families covering
/// every subsystem.
pub fn bundled_registry() -> PhraseRegistry {
    let mut registry = PhraseRegistry::new();
    registry
        .register(SearchPhrase {
            template: "Preventive actions for blades".into(),
            description: "Preventive maintenance actions for the wind turbine's blades".into(),
            query_text: "MATCH(n:Preventive)-[:ACTION]-(p)-[]-(q:Blades) RETURN *".into(),
            param_specs: BTreeMap::new(),
        })
        .expect("bundled phrase registers");
    let mut specs = BTreeMap::new();
    specs.insert(
        "description".to_string(),
        ValueSource {
            value_source_query: "MATCH(n:Feature) RETURN n.description".into(),
            value_column: "n.description".into(),
        },
    );
    registry
        .register(SearchPhrase {
            template: "Corrective actions for abnormal $description".into(),
            description:
                "Corrective maintenance actions for [Choose feature description] abnormal \
                 important feature"
                    .into(),
            query_text: "MATCH(n:Corrective)-[:ACTION]->(p)-[:FOR]->(q)-[:RELATESTO]-(r:Feature) \
                         WHERE r.description = $description RETURN *"
                .into(),
            param_specs: specs,
        })
        .expect("bundled phrase registers");
    for subsystem in crate::ontology::bundled::bundled_manifest().subsystems {
        let lower = subsystem.name.to_lowercase();
        if lower != "blades" {
            registry
                .register(SearchPhrase {
                    template: format!("Preventive actions for {lower}"),
                    description: format!("Preventive maintenance actions for the {}", subsystem.name),
                    query_text: format!(
                        "MATCH(n:Preventive)-[:ACTION]-(p)-[]-(q:{}) RETURN *",
                        subsystem.label
                    ),
                    param_specs: BTreeMap::new(),
                })
                .expect("bundled phrase registers");
        }
        registry
            .register(SearchPhrase {
                template: format!("Predictive actions for {lower}"),
                description: format!("Predictive maintenance actions for the {}", subsystem.name),
                query_text: format!(
                    "MATCH(n:Predictive)-[:ACTION]-(p)-[]-(q:{}) RETURN *",
                    subsystem.label
                ),
                param_specs: BTreeMap::new(),
            })
            .expect("bundled phrase registers");
    }
    registry
}
