//! In-memory property-graph knowledge base with a Cypher-style query subset,
//! graph analytics, natural-language search phrases and an explainable
//! gradient-boosted anomaly classifier, aimed at wind-turbine operations &
//! maintenance decision support.
//!
//! The crate is organised around a read-mostly [`graph::PropertyGraph`]:
//! [`ontology`] builds the turbine knowledge graph from a declarative
//! manifest, [`query`] matches patterns over it, [`analytics`] ranks nodes by
//! influence, [`phrases`] maps natural-language templates to stored queries,
//! and [`xai`] + [`report`] turn anomaly predictions with Shapley feature
//! attributions into maintenance reports with provenance back to the graph.

pub mod analytics;
pub mod graph;
pub mod io;
pub mod ontology;
pub mod phrases;
pub mod query;
pub mod report;
pub mod xai;

pub(crate) mod rng;
