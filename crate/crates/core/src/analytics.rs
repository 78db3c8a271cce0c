//! Graph data-science algorithms, centered on PageRank influence analysis.

use crate::graph::{NodeId, PropertyGraph};
use std::collections::BTreeMap;
use thiserror::Error;

/// How relationships are projected before scoring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    /// Follow relationships as stored.
    #[default]
    Natural,
    /// Follow relationships end-to-start.
    Reverse,
    /// Every relationship contributes in both directions.
    Undirected,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PageRankConfig {
    pub damping: f64,
    pub max_iterations: usize,
    /// Early stop when the max per-node delta drops below this; 0 disables
    /// early stopping and runs exactly `max_iterations`.
    pub tolerance: f64,
    pub orientation: Orientation,
}

impl Default for PageRankConfig {
    fn default() -> Self {
        Self {
            damping: 0.85,
            max_iterations: 20,
            tolerance: 1e-7,
            orientation: Orientation::Natural,
        }
    }
}

/// Per-node scores plus iteration diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMap {
    pub scores: BTreeMap<NodeId, f64>,
    pub iterations_run: usize,
    pub converged: bool,
}

impl ScoreMap {
    pub fn score(&self, node: NodeId) -> Option<f64> {
        self.scores.get(&node).copied()
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum AnalyticsError {
    #[error("pagerank requires a non-empty graph")]
    EmptyGraph,
    #[error("damping factor must lie strictly between 0 and 1, got {0}")]
    InvalidDamping(f64),
}

/// Non-normalized PageRank: every node starts at 1 and is updated as
/// `p_i <- (1 - d) + d * sum over incoming j of p_j / outdeg(j)` under the
/// configured orientation. Dangling nodes contribute nothing, parallel edges
/// contribute independently, and a self-loop feeds a node's own score back.
/// Scores are therefore not a probability distribution; they sit on the
/// familiar 1-to-N influence scale.
pub fn pagerank(graph: &PropertyGraph, config: &PageRankConfig) -> Result<ScoreMap, AnalyticsError> {
    if graph.node_count() == 0 {
        return Err(AnalyticsError::EmptyGraph);
    }
    if !(config.damping > 0.0 && config.damping < 1.0) {
        return Err(AnalyticsError::InvalidDamping(config.damping));
    }

    let ids: Vec<NodeId> = graph.nodes().map(|n| n.id).collect();
    let index: BTreeMap<NodeId, usize> = ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();
    let n = ids.len();

    // Projected edge list (source index, target index).
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(graph.relationship_count());
    for rel in graph.relationships() {
        let s = index[&rel.start];
        let e = index[&rel.end];
        match config.orientation {
            Orientation::Natural => edges.push((s, e)),
            Orientation::Reverse => edges.push((e, s)),
            Orientation::Undirected => {
                edges.push((s, e));
                edges.push((e, s));
            }
        }
    }
    let mut out_degree = vec![0usize; n];
    for (s, _) in &edges {
        out_degree[*s] += 1;
    }

    let d = config.damping;
    let base = 1.0 - d;
    let mut scores = vec![1.0f64; n];
    let mut next = vec![0.0f64; n];
    let mut iterations_run = 0;
    let mut converged = false;

    for _ in 0..config.max_iterations {
        next.fill(base);
        for (s, e) in &edges {
            next[*e] += d * scores[*s] / out_degree[*s] as f64;
        }
        let mut max_delta = 0.0f64;
        for i in 0..n {
            max_delta = max_delta.max((next[i] - scores[i]).abs());
        }
        std::mem::swap(&mut scores, &mut next);
        iterations_run += 1;
        if config.tolerance > 0.0 && max_delta < config.tolerance {
            converged = true;
            break;
        }
    }

    Ok(ScoreMap {
        scores: ids.iter().zip(scores).map(|(id, s)| (*id, s)).collect(),
        iterations_run,
        converged,
    })
}

/// A node in a label-filtered ranking.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedNode {
    pub id: NodeId,
    pub label: String,
    pub score: f64,
}

/// Nodes carrying any of the given labels, sorted by descending score with
/// ties broken by ascending node id. The reported label is the first of the
/// node's labels that appears in the filter.
pub fn rank_by_label(scores: &ScoreMap, graph: &PropertyGraph, labels: &[String]) -> Vec<RankedNode> {
    let mut ranked: Vec<RankedNode> = graph
        .nodes()
        .filter_map(|node| {
            let label = node.labels.iter().find(|l| labels.contains(l))?;
            let score = scores.score(node.id)?;
            Some(RankedNode {
                id: node.id,
                label: label.clone(),
                score,
            })
        })
        .collect();
    ranked.sort_by(|a, b| {
        b.score
            .partial_cmp(&a.score)
            .expect("finite scores")
            .then(a.id.cmp(&b.id))
    });
    ranked
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PropertyMap;

    fn ring(n: usize) -> (PropertyGraph, Vec<NodeId>) {
        let mut g = PropertyGraph::new();
        let ids: Vec<NodeId> = (0..n)
            .map(|_| g.add_node(vec!["N".into()], PropertyMap::new()).unwrap())
            .collect();
        for i in 0..n {
            g.add_relationship(ids[i], "TYPE", ids[(i + 1) % n], PropertyMap::new())
                .unwrap();
        }
        (g, ids)
    }

    #[test]
    fn cycle_is_a_fixed_point_at_one() {
        let (g, ids) = ring(3);
        let scores = pagerank(&g, &PageRankConfig::default()).unwrap();
        for id in ids {
            assert!((scores.score(id).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn two_node_chain_matches_hand_computed_fixed_point() {
        let mut g = PropertyGraph::new();
        let a = g.add_node(vec!["N".into()], PropertyMap::new()).unwrap();
        let b = g.add_node(vec!["N".into()], PropertyMap::new()).unwrap();
        g.add_relationship(a, "TYPE", b, PropertyMap::new()).unwrap();
        let scores = pagerank(&g, &PageRankConfig::default()).unwrap();
        assert!((scores.score(a).unwrap() - 0.15).abs() < 1e-9);
        assert!((scores.score(b).unwrap() - 0.2775).abs() < 1e-9);
    }

    #[test]
    fn empty_graph_is_an_error() {
        let g = PropertyGraph::new();
        assert_eq!(
            pagerank(&g, &PageRankConfig::default()),
            Err(AnalyticsError::EmptyGraph)
        );
    }

    #[test]
    fn scores_stay_above_base() {
        let mut rng = crate::rng::SplitMix64::new(404);
        for _ in 0..10 {
            let mut g = PropertyGraph::new();
            let n = 2 + rng.next_bounded(20) as usize;
            let ids: Vec<NodeId> = (0..n)
                .map(|_| g.add_node(vec!["N".into()], PropertyMap::new()).unwrap())
                .collect();
            for _ in 0..rng.next_bounded(40) {
                let s = ids[rng.next_bounded(n as u64) as usize];
                let e = ids[rng.next_bounded(n as u64) as usize];
                g.add_relationship(s, "TYPE", e, PropertyMap::new()).unwrap();
            }
            let scores = pagerank(&g, &PageRankConfig::default()).unwrap();
            for (_, s) in scores.scores {
                assert!(s >= 0.15 - 1e-12);
            }
        }
    }

    #[test]
    fn reverse_orientation_equals_reversed_graph() {
        let mut rng = crate::rng::SplitMix64::new(77);
        for _ in 0..5 {
            let mut g = PropertyGraph::new();
            let mut rev = PropertyGraph::new();
            let n = 2 + rng.next_bounded(10) as usize;
            let ids: Vec<NodeId> = (0..n)
                .map(|_| g.add_node(vec!["N".into()], PropertyMap::new()).unwrap())
                .collect();
            for _ in 0..n {
                rev.add_node(vec!["N".into()], PropertyMap::new()).unwrap();
            }
            for _ in 0..rng.next_bounded(20) {
                let s = rng.next_bounded(n as u64) as usize;
                let e = rng.next_bounded(n as u64) as usize;
                g.add_relationship(ids[s], "TYPE", ids[e], PropertyMap::new()).unwrap();
                rev.add_relationship(ids[e], "TYPE", ids[s], PropertyMap::new()).unwrap();
            }
            let config = PageRankConfig {
                orientation: Orientation::Reverse,
                ..PageRankConfig::default()
            };
            let reversed = pagerank(&g, &config).unwrap();
            let natural = pagerank(&rev, &PageRankConfig::default()).unwrap();
            for (id, score) in &natural.scores {
                assert!((score - reversed.score(*id).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn scores_are_invariant_under_id_relabeling() {
        // same structure loaded under permuted identities
        let doc_a = r#"{"nodes": [
            {"identity": 0, "labels": ["N"], "properties": {}},
            {"identity": 1, "labels": ["N"], "properties": {}},
            {"identity": 2, "labels": ["N"], "properties": {}}
        ], "relationships": [
            {"identity": 0, "type": "TYPE", "start": 0, "end": 1, "properties": {}},
            {"identity": 1, "type": "TYPE", "start": 0, "end": 2, "properties": {}},
            {"identity": 2, "type": "TYPE", "start": 1, "end": 2, "properties": {}}
        ]}"#;
        let doc_b = r#"{"nodes": [
            {"identity": 30, "labels": ["N"], "properties": {}},
            {"identity": 10, "labels": ["N"], "properties": {}},
            {"identity": 20, "labels": ["N"], "properties": {}}
        ], "relationships": [
            {"identity": 7, "type": "TYPE", "start": 30, "end": 10, "properties": {}},
            {"identity": 8, "type": "TYPE", "start": 30, "end": 20, "properties": {}},
            {"identity": 9, "type": "TYPE", "start": 10, "end": 20, "properties": {}}
        ]}"#;
        let a = pagerank(&crate::io::load_graph(doc_a).unwrap(), &PageRankConfig::default()).unwrap();
        let b = pagerank(&crate::io::load_graph(doc_b).unwrap(), &PageRankConfig::default()).unwrap();
        for (x, y) in [(0u64, 30u64), (1, 10), (2, 20)] {
            assert!((a.score(NodeId(x)).unwrap() - b.score(NodeId(y)).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn undirected_orientation_symmetrises_a_chain() {
        let mut g = PropertyGraph::new();
        let a = g.add_node(vec!["N".into()], PropertyMap::new()).unwrap();
        let b = g.add_node(vec!["N".into()], PropertyMap::new()).unwrap();
        g.add_relationship(a, "TYPE", b, PropertyMap::new()).unwrap();
        let config = PageRankConfig {
            orientation: Orientation::Undirected,
            ..PageRankConfig::default()
        };
        let scores = pagerank(&g, &config).unwrap();
        assert!((scores.score(a).unwrap() - scores.score(b).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn ranking_breaks_ties_by_id() {
        let (g, ids) = ring(4);
        let scores = pagerank(&g, &PageRankConfig::default()).unwrap();
        let ranked = rank_by_label(&scores, &g, &["N".to_string()]);
        let got: Vec<NodeId> = ranked.iter().map(|r| r.id).collect();
        assert_eq!(got, ids);
        assert!(rank_by_label(&scores, &g, &["Missing".to_string()]).is_empty());
    }
}
