//! Explainable anomaly classification: a gradient-boosted decision-tree
//! ensemble for multiclass prediction over SCADA feature vectors, with exact
//! Shapley feature attributions (see [`shapley`]).

pub mod boost;
pub mod dataset;
pub mod shapley;
pub mod synth;

pub use boost::{train, HoldoutMetrics, TrainConfig, TrainError, TrainOutput};
pub use dataset::{Dataset, DatasetError};
pub use shapley::{
    export_force_plot_data, shapley, top_k_features, Attribution, ForcePlotData, RankedFeature,
    ShapError, TopFeatures,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One SCADA observation: a fixed-order feature vector plus an optional
/// class label (the functional-group number).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScadaSample {
    pub values: Vec<f64>,
    pub label: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        /// Per-class score vector; trainer-built trees are one-hot on the
        /// class the tree was fit for.
        scores: Vec<f64>,
    },
}

/// A binary decision tree; node 0 is the root, samples go left when
/// `value <= threshold`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub nodes: Vec<TreeNode>,
}

impl DecisionTree {
    pub fn leaf_scores(&self, values: &[f64]) -> &[f64] {
        let mut idx = 0;
        loop {
            match &self.nodes[idx] {
                TreeNode::Leaf { scores } => return scores,
                TreeNode::Split { feature, threshold, left, right } => {
                    idx = if values[*feature] <= *threshold { *left } else { *right };
                }
            }
        }
    }

    /// Same walk with per-feature substitution: features inside `keep_mask`
    /// read from `sample`, the rest from `background`.
    pub(crate) fn leaf_scores_hybrid(
        &self,
        sample: &[f64],
        background: &[f64],
        keep_mask: u32,
    ) -> &[f64] {
        let mut idx = 0;
        loop {
            match &self.nodes[idx] {
                TreeNode::Leaf { scores } => return scores,
                TreeNode::Split { feature, threshold, left, right } => {
                    let value = if keep_mask & (1 << *feature) != 0 {
                        sample[*feature]
                    } else {
                        background[*feature]
                    };
                    idx = if value <= *threshold { *left } else { *right };
                }
            }
        }
    }

    /// Bitmask of the feature indices appearing in split nodes.
    pub fn used_features(&self) -> u32 {
        let mut mask = 0u32;
        for node in &self.nodes {
            if let TreeNode::Split { feature, .. } = node {
                mask |= 1 << *feature;
            }
        }
        mask
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum PredictError {
    #[error("sample has {got} values but the model expects {expected}")]
    DimensionMismatch { got: usize, expected: usize },
}

/// Gradient-boosted multiclass ensemble. Trees are stored round-major: the
/// tree fit for class `k` in round `r` sits at index `r * n_classes + k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeEnsemble {
    pub feature_names: Vec<String>,
    pub n_classes: usize,
    /// Model class index -> dataset label (functional-group number).
    pub class_labels: Vec<i64>,
    pub learning_rate: f64,
    pub base_scores: Vec<f64>,
    pub trees: Vec<DecisionTree>,
}

impl TreeEnsemble {
    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn rounds(&self) -> usize {
        self.trees.len().checked_div(self.n_classes).unwrap_or(0)
    }

    pub fn trees_for_class(&self, class: usize) -> impl Iterator<Item = &DecisionTree> {
        self.trees
            .iter()
            .enumerate()
            .filter(move |(i, _)| i % self.n_classes == class)
            .map(|(_, t)| t)
    }

    pub fn label_of(&self, class: usize) -> i64 {
        self.class_labels[class]
    }

    pub fn class_of_label(&self, label: i64) -> Option<usize> {
        self.class_labels.iter().position(|l| *l == label)
    }

    fn check_dim(&self, values: &[f64]) -> Result<(), PredictError> {
        if values.len() != self.n_features() {
            return Err(PredictError::DimensionMismatch {
                got: values.len(),
                expected: self.n_features(),
            });
        }
        Ok(())
    }

    /// Pre-softmax margins: base score plus learning-rate-scaled leaf sums.
    pub fn raw_scores(&self, values: &[f64]) -> Result<Vec<f64>, PredictError> {
        self.check_dim(values)?;
        let mut raw = self.base_scores.clone();
        for tree in &self.trees {
            let scores = tree.leaf_scores(values);
            for (r, s) in raw.iter_mut().zip(scores) {
                *r += self.learning_rate * s;
            }
        }
        Ok(raw)
    }

    /// Class probabilities; the vector sums to 1.
    pub fn predict_proba(&self, values: &[f64]) -> Result<Vec<f64>, PredictError> {
        Ok(softmax(&self.raw_scores(values)?))
    }

    /// Predicted class index and the full probability vector.
    pub fn predict(&self, values: &[f64]) -> Result<(usize, Vec<f64>), PredictError> {
        let probs = self.predict_proba(values)?;
        let best = probs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap().then(b.0.cmp(&a.0)))
            .map(|(i, _)| i)
            .unwrap_or(0);
        Ok((best, probs))
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("model serialization");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

pub(crate) fn softmax(raw: &[f64]) -> Vec<f64> {
    let max = raw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = raw.iter().map(|r| (r - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.iter().map(|e| e / sum).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn leaf(scores: Vec<f64>) -> DecisionTree {
        DecisionTree { nodes: vec![TreeNode::Leaf { scores }] }
    }

    /// Depth-1 stump on one feature.
    pub(crate) fn stump(
        n_classes: usize,
        class: usize,
        feature: usize,
        threshold: f64,
        low: f64,
        high: f64,
    ) -> DecisionTree {
        let mut low_scores = vec![0.0; n_classes];
        low_scores[class] = low;
        let mut high_scores = vec![0.0; n_classes];
        high_scores[class] = high;
        DecisionTree {
            nodes: vec![
                TreeNode::Split { feature, threshold, left: 1, right: 2 },
                TreeNode::Leaf { scores: low_scores },
                TreeNode::Leaf { scores: high_scores },
            ],
        }
    }

    fn constant_model() -> TreeEnsemble {
        TreeEnsemble {
            feature_names: vec!["a".into(), "b".into()],
            n_classes: 3,
            class_labels: vec![1, 9, 13],
            learning_rate: 0.1,
            base_scores: vec![0.0; 3],
            trees: vec![],
        }
    }

    #[test]
    fn constant_model_gives_uniform_probabilities() {
        let model = constant_model();
        let probs = model.predict_proba(&[0.0, 0.0]).unwrap();
        for p in &probs {
            assert!((p - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn probabilities_sum_to_one_and_argmax_tracks_raw() {
        let mut rng = crate::rng::SplitMix64::new(12);
        for _ in 0..30 {
            let model = random_ensemble(&mut rng, 3, 4);
            let sample: Vec<f64> = (0..4).map(|_| rng.next_gaussian()).collect();
            let probs = model.predict_proba(&sample).unwrap();
            let total: f64 = probs.iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
            assert!(probs.iter().all(|p| (0.0..=1.0).contains(p)));
            let raw = model.raw_scores(&sample).unwrap();
            let (argmax, _) = model.predict(&sample).unwrap();
            let raw_best = raw
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap().then(b.0.cmp(&a.0)))
                .unwrap()
                .0;
            assert_eq!(argmax, raw_best);
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let model = constant_model();
        assert!(matches!(
            model.predict_proba(&[1.0]),
            Err(PredictError::DimensionMismatch { got: 1, expected: 2 })
        ));
    }

    pub(crate) fn random_ensemble(
        rng: &mut crate::rng::SplitMix64,
        n_classes: usize,
        n_features: usize,
    ) -> TreeEnsemble {
        let rounds = 1 + rng.next_bounded(4) as usize;
        let mut trees = Vec::new();
        for _ in 0..rounds {
            for class in 0..n_classes {
                let feature = rng.next_bounded(n_features as u64) as usize;
                let threshold = rng.next_gaussian();
                trees.push(stump(
                    n_classes,
                    class,
                    feature,
                    threshold,
                    rng.next_gaussian(),
                    rng.next_gaussian(),
                ));
            }
        }
        TreeEnsemble {
            feature_names: (0..n_features).map(|i| format!("f{i}")).collect(),
            n_classes,
            class_labels: (0..n_classes as i64).collect(),
            learning_rate: 0.1,
            base_scores: (0..n_classes).map(|_| rng.next_gaussian() * 0.1).collect(),
            trees,
        }
    }

    // Independent straight-loop evaluator: walk every tree iteratively with
    // explicit indices and no shared code with raw_scores().
    fn oracle_raw(model: &TreeEnsemble, sample: &[f64]) -> Vec<f64> {
        let mut raw = vec![0.0; model.n_classes];
        for (k, r) in raw.iter_mut().enumerate() {
            *r = model.base_scores[k];
        }
        for tree in &model.trees {
            let mut at = 0usize;
            let scores = loop {
                match &tree.nodes[at] {
                    TreeNode::Leaf { scores } => break scores,
                    TreeNode::Split { feature, threshold, left, right } => {
                        if sample[*feature] <= *threshold {
                            at = *left;
                        } else {
                            at = *right;
                        }
                    }
                }
            };
            for k in 0..model.n_classes {
                raw[k] += model.learning_rate * scores[k];
            }
        }
        raw
    }

    #[test]
    fn prediction_matches_straight_loop_oracle() {
        let mut rng = crate::rng::SplitMix64::new(99);
        for _ in 0..25 {
            let n_classes = 2 + rng.next_bounded(3) as usize;
            let model = random_ensemble(&mut rng, n_classes, 5);
            for _ in 0..10 {
                let sample: Vec<f64> = (0..5).map(|_| rng.next_gaussian()).collect();
                let raw = model.raw_scores(&sample).unwrap();
                let expect = oracle_raw(&model, &sample);
                for (a, b) in raw.iter().zip(&expect) {
                    assert!((a - b).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn model_round_trips_through_json() {
        let mut rng = crate::rng::SplitMix64::new(5);
        let model = random_ensemble(&mut rng, 3, 4);
        let reparsed = TreeEnsemble::from_json(&model.to_json()).unwrap();
        assert_eq!(reparsed, model);
    }
}
