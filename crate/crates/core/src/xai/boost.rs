//! Gradient-boosted training with a multiclass softmax objective.
//!
//! One tree per class per round, second-order (gradient + hessian) leaf
//! weights, exact greedy depth-limited splits, and early stopping on the
//! held-out log loss. Deterministic for a fixed seed.

use super::dataset::Dataset;
use super::{softmax, DecisionTree, TreeEnsemble, TreeNode};
use crate::rng::SplitMix64;
use thiserror::Error;

const LAMBDA: f64 = 1.0;
const MIN_HESSIAN: f64 = 1e-16;
const MIN_GAIN: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub n_estimators: usize,
    pub learning_rate: f64,
    pub early_stopping_rounds: usize,
    pub train_fraction: f64,
    pub max_depth: usize,
    pub rng_seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            n_estimators: 100,
            learning_rate: 0.1,
            early_stopping_rounds: 10,
            train_fraction: 0.7,
            max_depth: 3,
            rng_seed: 0,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum TrainError {
    #[error("invalid training configuration: {0}")]
    Config(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HoldoutMetrics {
    pub accuracy: f64,
    pub macro_f1: f64,
    pub holdout_size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainOutput {
    pub ensemble: TreeEnsemble,
    pub metrics: HoldoutMetrics,
    /// Single-class input: the returned model is a constant predictor.
    pub degenerate: bool,
    pub rounds_used: usize,
    /// Dataset indices of the training split, in shuffled order.
    pub train_indices: Vec<usize>,
    /// Dataset indices of the held-out split the metrics refer to.
    pub holdout_indices: Vec<usize>,
}

struct SplitCandidate {
    feature: usize,
    threshold: f64,
    gain: f64,
}

fn leaf_weight(grad_sum: f64, hess_sum: f64) -> f64 {
    -grad_sum / (hess_sum + LAMBDA)
}

fn gain_term(grad_sum: f64, hess_sum: f64) -> f64 {
    grad_sum * grad_sum / (hess_sum + LAMBDA)
}

/// Exact greedy search over all features and midpoints between distinct
/// consecutive values. Ties keep the first candidate (lowest feature index,
/// lowest threshold), so training is order-deterministic.
#[allow(clippy::needless_range_loop)]
fn best_split(
    values: &[Vec<f64>],
    grad: &[f64],
    hess: &[f64],
    indices: &[usize],
    sorted_per_feature: &mut Vec<usize>,
) -> Option<SplitCandidate> {
    let n_features = values[0].len();
    let total_grad: f64 = indices.iter().map(|&i| grad[i]).sum();
    let total_hess: f64 = indices.iter().map(|&i| hess[i]).sum();
    let parent = gain_term(total_grad, total_hess);
    let mut best: Option<SplitCandidate> = None;

    for feature in 0..n_features {
        sorted_per_feature.clear();
        sorted_per_feature.extend_from_slice(indices);
        sorted_per_feature.sort_by(|&a, &b| {
            values[a][feature].partial_cmp(&values[b][feature]).unwrap().then(a.cmp(&b))
        });
        let mut left_grad = 0.0;
        let mut left_hess = 0.0;
        for w in 0..sorted_per_feature.len() - 1 {
            let i = sorted_per_feature[w];
            left_grad += grad[i];
            left_hess += hess[i];
            let here = values[i][feature];
            let next = values[sorted_per_feature[w + 1]][feature];
            if here == next {
                continue;
            }
            let gain = 0.5
                * (gain_term(left_grad, left_hess)
                    + gain_term(total_grad - left_grad, total_hess - left_hess)
                    - parent);
            if gain > best.as_ref().map_or(MIN_GAIN, |b| b.gain) {
                best = Some(SplitCandidate {
                    feature,
                    threshold: here + (next - here) / 2.0,
                    gain,
                });
            }
        }
    }
    best
}

#[allow(clippy::too_many_arguments)]
fn build_tree(
    values: &[Vec<f64>],
    grad: &[f64],
    hess: &[f64],
    indices: &[usize],
    depth_left: usize,
    n_classes: usize,
    class: usize,
    nodes: &mut Vec<TreeNode>,
    scratch: &mut Vec<usize>,
) -> usize {
    let make_leaf = |nodes: &mut Vec<TreeNode>| {
        let g: f64 = indices.iter().map(|&i| grad[i]).sum();
        let h: f64 = indices.iter().map(|&i| hess[i]).sum();
        let mut scores = vec![0.0; n_classes];
        scores[class] = leaf_weight(g, h);
        let at = nodes.len();
        nodes.push(TreeNode::Leaf { scores });
        at
    };
    if depth_left == 0 || indices.len() < 2 {
        return make_leaf(nodes);
    }
    let Some(split) = best_split(values, grad, hess, indices, scratch) else {
        return make_leaf(nodes);
    };
    let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = indices
        .iter()
        .partition(|&&i| values[i][split.feature] <= split.threshold);
    if left_idx.is_empty() || right_idx.is_empty() {
        return make_leaf(nodes);
    }
    let at = nodes.len();
    nodes.push(TreeNode::Split {
        feature: split.feature,
        threshold: split.threshold,
        left: 0,
        right: 0,
    });
    let left = build_tree(
        values, grad, hess, &left_idx, depth_left - 1, n_classes, class, nodes, scratch,
    );
    let right = build_tree(
        values, grad, hess, &right_idx, depth_left - 1, n_classes, class, nodes, scratch,
    );
    match &mut nodes[at] {
        TreeNode::Split { left: l, right: r, .. } => {
            *l = left;
            *r = right;
        }
        TreeNode::Leaf { .. } => unreachable!(),
    }
    at
}

fn log_loss(margins: &[Vec<f64>], labels: &[usize]) -> f64 {
    let mut total = 0.0;
    for (raw, &label) in margins.iter().zip(labels) {
        let probs = softmax(raw);
        total -= probs[label].max(1e-15).ln();
    }
    total / margins.len() as f64
}

fn evaluate(ensemble: &TreeEnsemble, samples: &[Vec<f64>], labels: &[usize]) -> HoldoutMetrics {
    let k = ensemble.n_classes;
    let mut correct = 0usize;
    let mut tp = vec![0usize; k];
    let mut fp = vec![0usize; k];
    let mut fnn = vec![0usize; k];
    for (values, &label) in samples.iter().zip(labels) {
        let (predicted, _) = ensemble.predict(values).expect("dimension checked");
        if predicted == label {
            correct += 1;
            tp[label] += 1;
        } else {
            fp[predicted] += 1;
            fnn[label] += 1;
        }
    }
    let f1_sum: f64 = (0..k)
        .map(|c| {
            let denom = 2 * tp[c] + fp[c] + fnn[c];
            if denom == 0 { 0.0 } else { 2.0 * tp[c] as f64 / denom as f64 }
        })
        .sum();
    HoldoutMetrics {
        accuracy: if samples.is_empty() { 0.0 } else { correct as f64 / samples.len() as f64 },
        macro_f1: f1_sum / k as f64,
        holdout_size: samples.len(),
    }
}

/// Trains a boosted ensemble, reporting held-out accuracy and macro F1.
///
/// The dataset is split train/holdout by `train_fraction` with a seeded
/// shuffle; boosting stops once the held-out log loss has not improved for
/// `early_stopping_rounds` rounds, and the ensemble is truncated to the best
/// round. A single-class dataset yields a constant model flagged degenerate.
pub fn train(dataset: &Dataset, config: &TrainConfig) -> Result<TrainOutput, TrainError> {
    if !(config.train_fraction > 0.0 && config.train_fraction < 1.0) {
        return Err(TrainError::Config(format!(
            "train_fraction must lie in (0, 1), got {}",
            config.train_fraction
        )));
    }
    if config.n_estimators == 0 {
        return Err(TrainError::Config("n_estimators must be positive".into()));
    }
    if config.max_depth == 0 {
        return Err(TrainError::Config("max_depth must be positive".into()));
    }
    if config.learning_rate.is_nan() || config.learning_rate <= 0.0 {
        return Err(TrainError::Config("learning_rate must be positive".into()));
    }
    if dataset.samples.len() < 10 {
        return Err(TrainError::Config(format!(
            "need at least 10 samples, got {}",
            dataset.samples.len()
        )));
    }
    let n_features = dataset.feature_names.len();
    let mut labels_raw = Vec::with_capacity(dataset.samples.len());
    for (i, sample) in dataset.samples.iter().enumerate() {
        if sample.values.len() != n_features {
            return Err(TrainError::Config(format!(
                "sample {i} has {} values, expected {n_features}",
                sample.values.len()
            )));
        }
        if sample.values.iter().any(|v| !v.is_finite()) {
            return Err(TrainError::Config(format!("sample {i} has a non-finite value")));
        }
        match sample.label {
            Some(label) => labels_raw.push(label),
            None => return Err(TrainError::Config(format!("sample {i} is unlabeled"))),
        }
    }

    let mut class_labels: Vec<i64> = labels_raw.clone();
    class_labels.sort_unstable();
    class_labels.dedup();
    let n_classes = class_labels.len();

    // Seeded shuffle, then split.
    let mut order: Vec<usize> = (0..dataset.samples.len()).collect();
    let mut rng = SplitMix64::new(config.rng_seed);
    rng.shuffle(&mut order);
    let train_n = ((dataset.samples.len() as f64 * config.train_fraction).round() as usize)
        .clamp(1, dataset.samples.len() - 1);
    let class_of = |i: usize| -> usize {
        class_labels.binary_search(&labels_raw[i]).expect("label present")
    };
    let train_values: Vec<Vec<f64>> =
        order[..train_n].iter().map(|&i| dataset.samples[i].values.clone()).collect();
    let train_labels: Vec<usize> = order[..train_n].iter().map(|&i| class_of(i)).collect();
    let hold_values: Vec<Vec<f64>> =
        order[train_n..].iter().map(|&i| dataset.samples[i].values.clone()).collect();
    let hold_labels: Vec<usize> = order[train_n..].iter().map(|&i| class_of(i)).collect();

    let mut ensemble = TreeEnsemble {
        feature_names: dataset.feature_names.clone(),
        n_classes,
        class_labels,
        learning_rate: config.learning_rate,
        base_scores: vec![0.0; n_classes],
        trees: Vec::new(),
    };

    let train_indices = order[..train_n].to_vec();
    let holdout_indices = order[train_n..].to_vec();

    if n_classes == 1 {
        let metrics = evaluate(&ensemble, &hold_values, &hold_labels);
        return Ok(TrainOutput {
            ensemble,
            metrics,
            degenerate: true,
            rounds_used: 0,
            train_indices,
            holdout_indices,
        });
    }

    let mut train_margins = vec![vec![0.0f64; n_classes]; train_values.len()];
    let mut hold_margins = vec![vec![0.0f64; n_classes]; hold_values.len()];
    let all_indices: Vec<usize> = (0..train_values.len()).collect();
    let mut grad = vec![0.0f64; train_values.len()];
    let mut hess = vec![0.0f64; train_values.len()];
    let mut scratch: Vec<usize> = Vec::with_capacity(train_values.len());

    let mut best_loss = f64::INFINITY;
    let mut best_round = 0usize;
    for round in 0..config.n_estimators {
        let probs: Vec<Vec<f64>> = train_margins.iter().map(|m| softmax(m)).collect();
        for class in 0..n_classes {
            for i in 0..train_values.len() {
                let p = probs[i][class];
                let y = if train_labels[i] == class { 1.0 } else { 0.0 };
                grad[i] = p - y;
                hess[i] = (p * (1.0 - p)).max(MIN_HESSIAN);
            }
            let mut nodes = Vec::new();
            build_tree(
                &train_values,
                &grad,
                &hess,
                &all_indices,
                config.max_depth,
                n_classes,
                class,
                &mut nodes,
                &mut scratch,
            );
            let tree = DecisionTree { nodes };
            for (i, values) in train_values.iter().enumerate() {
                train_margins[i][class] +=
                    config.learning_rate * tree.leaf_scores(values)[class];
            }
            for (i, values) in hold_values.iter().enumerate() {
                hold_margins[i][class] += config.learning_rate * tree.leaf_scores(values)[class];
            }
            ensemble.trees.push(tree);
        }
        let hold_loss = log_loss(&hold_margins, &hold_labels);
        if hold_loss < best_loss - 1e-12 {
            best_loss = hold_loss;
            best_round = round + 1;
        } else if round + 1 - best_round >= config.early_stopping_rounds {
            break;
        }
    }

    ensemble.trees.truncate(best_round * n_classes);
    let metrics = evaluate(&ensemble, &hold_values, &hold_labels);
    Ok(TrainOutput {
        ensemble,
        metrics,
        degenerate: false,
        rounds_used: best_round,
        train_indices,
        holdout_indices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xai::ScadaSample;

    fn dataset_from(rows: Vec<(Vec<f64>, i64)>, names: &[&str]) -> Dataset {
        Dataset {
            feature_names: names.iter().map(|s| s.to_string()).collect(),
            samples: rows
                .into_iter()
                .map(|(values, label)| ScadaSample { values, label: Some(label) })
                .collect(),
        }
    }

    #[test]
    fn single_class_yields_degenerate_constant_model() {
        let rows = (0..20).map(|i| (vec![i as f64, 0.5], 9i64)).collect();
        let out = train(&dataset_from(rows, &["a", "b"]), &TrainConfig::default()).unwrap();
        assert!(out.degenerate);
        let probs = out.ensemble.predict_proba(&[1.0, 2.0]).unwrap();
        assert_eq!(probs, vec![1.0]);
        assert_eq!(out.ensemble.label_of(0), 9);
        assert!((out.metrics.accuracy - 1.0).abs() < 1e-12);
    }

    #[test]
    fn config_errors_are_reported() {
        let rows = (0..20).map(|i| (vec![i as f64], (i % 2) as i64)).collect();
        let data = dataset_from(rows, &["a"]);
        let bad = TrainConfig { train_fraction: 1.0, ..TrainConfig::default() };
        assert!(matches!(train(&data, &bad), Err(TrainError::Config(_))));
        let tiny = dataset_from(vec![(vec![0.0], 0), (vec![1.0], 1)], &["a"]);
        assert!(matches!(train(&tiny, &TrainConfig::default()), Err(TrainError::Config(_))));
    }

    // A pair of hand-built depth-2 trees realises XOR exactly, so a boosted
    // model with depth >= 2 can represent it; training should then separate
    // a (noisy-free) XOR grid essentially perfectly.
    #[test]
    fn depth_two_trees_can_represent_xor() {
        use crate::xai::TreeNode::*;
        let tree = DecisionTree {
            nodes: vec![
                Split { feature: 0, threshold: 0.5, left: 1, right: 2 },
                Split { feature: 1, threshold: 0.5, left: 3, right: 4 },
                Split { feature: 1, threshold: 0.5, left: 5, right: 6 },
                Leaf { scores: vec![1.0, 0.0] }, // (0,0) -> class 0
                Leaf { scores: vec![0.0, 1.0] }, // (0,1) -> class 1
                Leaf { scores: vec![0.0, 1.0] }, // (1,0) -> class 1
                Leaf { scores: vec![1.0, 0.0] }, // (1,1) -> class 0
            ],
        };
        for (a, b) in [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)] {
            let expected = ((a as i64) ^ (b as i64)) as usize;
            let scores = tree.leaf_scores(&[a, b]);
            let got = if scores[1] > scores[0] { 1 } else { 0 };
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn training_learns_xor_with_depth_two() {
        let mut rng = crate::rng::SplitMix64::new(21);
        let mut rows = Vec::new();
        for i in 0..600 {
            let bit_a = (i / 2) % 2;
            let bit_b = i % 2;
            let a = bit_a as f64 + 0.15 * rng.next_gaussian();
            let b = bit_b as f64 + 0.15 * rng.next_gaussian();
            rows.push((vec![a, b], (bit_a ^ bit_b) as i64));
        }
        let data = dataset_from(rows, &["a", "b"]);
        let config = TrainConfig { max_depth: 2, rng_seed: 7, ..TrainConfig::default() };
        let out = train(&data, &config).unwrap();
        assert!(
            out.metrics.accuracy > 0.95,
            "xor holdout accuracy {}",
            out.metrics.accuracy
        );
    }

    #[test]
    fn planted_signature_dataset_is_learnable() {
        let data = crate::xai::synth::synthesize(600, 42);
        let out = train(&data, &TrainConfig { rng_seed: 42, ..TrainConfig::default() }).unwrap();
        assert!(out.metrics.accuracy >= 0.90, "accuracy {}", out.metrics.accuracy);
        assert!(out.metrics.macro_f1 >= 0.85, "macro f1 {}", out.metrics.macro_f1);
        assert!(!out.degenerate);
    }

    #[test]
    fn training_is_deterministic_for_a_seed() {
        let data = crate::xai::synth::synthesize(200, 3);
        let config = TrainConfig { rng_seed: 11, ..TrainConfig::default() };
        let a = train(&data, &config).unwrap();
        let b = train(&data, &config).unwrap();
        assert_eq!(a.ensemble, b.ensemble);
        assert_eq!(a.ensemble.to_json(), b.ensemble.to_json());
    }

    #[test]
    fn training_loss_is_non_increasing_across_rounds() {
        let data = crate::xai::synth::synthesize(300, 8);
        let config = TrainConfig {
            n_estimators: 25,
            early_stopping_rounds: 25,
            rng_seed: 8,
            ..TrainConfig::default()
        };
        let out = train(&data, &config).unwrap();
        // replay the ensemble round by round on the training split and check
        // the cumulative training loss never goes up
        let n = data.samples.len();
        let mut order: Vec<usize> = (0..n).collect();
        let mut rng = crate::rng::SplitMix64::new(8);
        rng.shuffle(&mut order);
        let train_n = ((n as f64 * 0.7).round() as usize).clamp(1, n - 1);
        let k = out.ensemble.n_classes;
        let mut margins = vec![vec![0.0f64; k]; train_n];
        let labels: Vec<usize> = order[..train_n]
            .iter()
            .map(|&i| {
                out.ensemble
                    .class_of_label(data.samples[i].label.unwrap())
                    .unwrap()
            })
            .collect();
        let mut previous = f64::INFINITY;
        for round in 0..out.rounds_used {
            for (class, tree) in out.ensemble.trees[round * k..(round + 1) * k]
                .iter()
                .enumerate()
            {
                for (slot, &i) in order[..train_n].iter().enumerate() {
                    margins[slot][class] +=
                        0.1 * tree.leaf_scores(&data.samples[i].values)[class];
                }
            }
            let loss = log_loss(&margins, &labels);
            assert!(loss <= previous + 1e-7, "round {round}: {loss} > {previous}");
            previous = loss;
        }
    }
}
