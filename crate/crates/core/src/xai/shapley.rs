//! Exact interventional Shapley attributions by coalition enumeration.
//!
//! The value of a coalition S is the mean, over the background rows, of the
//! raw (pre-softmax) target-class score at the hybrid input that takes the
//! explained sample's values on S and the background row's values elsewhere.
//! All 2^M coalitions are enumerated, so efficiency, symmetry and dummy hold
//! exactly; per-tree tables over the tree's used-feature mask keep the
//! enumeration fast without changing any value.

use super::{ScadaSample, TreeEnsemble};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

/// Exact enumeration bound: 2^M coalitions must stay tractable.
pub const MAX_EXACT_FEATURES: usize = 20;

#[derive(Debug, Error, PartialEq)]
pub enum ShapError {
    #[error("exact enumeration supports at most {MAX_EXACT_FEATURES} features, got {0}")]
    TooManyFeatures(usize),
    #[error("background must contain at least one sample")]
    EmptyBackground,
    #[error("sample has {got} values but the model expects {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("target class {got} out of range for {classes} classes")]
    InvalidClass { got: usize, classes: usize },
}

/// Per-feature Shapley attribution of one prediction.
///
/// Efficiency holds exactly: `phi` sums to `prediction_value - base_value`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Attribution {
    pub feature_names: Vec<String>,
    pub sample_values: Vec<f64>,
    pub target_class: usize,
    pub phi: Vec<f64>,
    /// Mean raw target-class score over the background.
    pub base_value: f64,
    /// Raw target-class score at the explained sample.
    pub prediction_value: f64,
}

/// Shapley weight `|S|! (M-|S|-1)! / M!` computed as `1 / (M * C(M-1, k))`.
fn coalition_weights(n_features: usize) -> Vec<f64> {
    let m = n_features as f64;
    let mut weights = Vec::with_capacity(n_features);
    let mut binomial = 1.0f64; // C(M-1, k)
    for k in 0..n_features {
        weights.push(1.0 / (m * binomial));
        binomial = binomial * (m - 1.0 - k as f64) / (k as f64 + 1.0);
    }
    weights
}

pub fn shapley(
    ensemble: &TreeEnsemble,
    sample: &[f64],
    background: &[ScadaSample],
    target_class: usize,
) -> Result<Attribution, ShapError> {
    let m = ensemble.n_features();
    if m > MAX_EXACT_FEATURES {
        return Err(ShapError::TooManyFeatures(m));
    }
    if background.is_empty() {
        return Err(ShapError::EmptyBackground);
    }
    if sample.len() != m {
        return Err(ShapError::DimensionMismatch { got: sample.len(), expected: m });
    }
    for row in background {
        if row.values.len() != m {
            return Err(ShapError::DimensionMismatch { got: row.values.len(), expected: m });
        }
    }
    if target_class >= ensemble.n_classes {
        return Err(ShapError::InvalidClass {
            got: target_class,
            classes: ensemble.n_classes,
        });
    }

    let n_coalitions = 1usize << m;
    let inv_b = 1.0 / background.len() as f64;

    // Per tree: mean leaf value over the background for every sub-coalition
    // of the features the tree actually splits on. A coalition S then reads
    // table[S & used]; features outside `used` cannot change the walk.
    let mut v = vec![ensemble.base_scores[target_class]; n_coalitions];
    for tree in ensemble.trees_for_class(target_class) {
        let used = tree.used_features();
        let mut table: HashMap<u32, f64> = HashMap::new();
        let mut sub = used;
        loop {
            let mut total = 0.0;
            for row in background {
                total += tree.leaf_scores_hybrid(sample, &row.values, sub)[target_class];
            }
            table.insert(sub, total * inv_b * ensemble.learning_rate);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & used;
        }
        for (mask, value) in v.iter_mut().enumerate() {
            *value += table[&(mask as u32 & used)];
        }
    }

    let weights = coalition_weights(m);
    let mut phi = vec![0.0f64; m];
    for (i, phi_i) in phi.iter_mut().enumerate() {
        let bit = 1usize << i;
        for mask in 0..n_coalitions {
            if mask & bit == 0 {
                *phi_i += weights[mask.count_ones() as usize] * (v[mask | bit] - v[mask]);
            }
        }
    }

    Ok(Attribution {
        feature_names: ensemble.feature_names.clone(),
        sample_values: sample.to_vec(),
        target_class,
        phi,
        base_value: v[0],
        prediction_value: v[n_coalitions - 1],
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedFeature {
    pub name: String,
    pub phi: f64,
    pub percent: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopFeatures {
    pub entries: Vec<RankedFeature>,
    /// All-zero attribution: percents are reported as 0.
    pub degenerate: bool,
}

/// The top `k` features by |phi| (ties broken by ascending feature index),
/// with percentage contributions normalised over the selected set.
pub fn top_k_features(attribution: &Attribution, k: usize) -> TopFeatures {
    let mut order: Vec<usize> = (0..attribution.phi.len()).collect();
    order.sort_by(|&a, &b| {
        attribution.phi[b]
            .abs()
            .partial_cmp(&attribution.phi[a].abs())
            .expect("finite phi")
            .then(a.cmp(&b))
    });
    order.truncate(k.min(attribution.phi.len()));
    let denom: f64 = order.iter().map(|&i| attribution.phi[i].abs()).sum();
    let degenerate = denom == 0.0;
    let entries = order
        .into_iter()
        .map(|i| RankedFeature {
            name: attribution.feature_names[i].clone(),
            phi: attribution.phi[i],
            percent: if degenerate { 0.0 } else { 100.0 * attribution.phi[i].abs() / denom },
        })
        .collect();
    TopFeatures { entries, degenerate }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForceContribution {
    pub name: String,
    /// Feature value at the explained sample.
    pub value: f64,
    pub phi: f64,
    pub sign: String,
}

/// Everything an external plotting tool needs for a force plot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForcePlotData {
    pub base_value: f64,
    pub prediction_value: f64,
    pub contributions: Vec<ForceContribution>,
}

impl ForcePlotData {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("force-plot serialization");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Force-plot document: non-zero contributions sorted by |phi| descending.
pub fn export_force_plot_data(attribution: &Attribution) -> ForcePlotData {
    let mut order: Vec<usize> = (0..attribution.phi.len())
        .filter(|&i| attribution.phi[i] != 0.0)
        .collect();
    order.sort_by(|&a, &b| {
        attribution.phi[b]
            .abs()
            .partial_cmp(&attribution.phi[a].abs())
            .expect("finite phi")
            .then(a.cmp(&b))
    });
    ForcePlotData {
        base_value: attribution.base_value,
        prediction_value: attribution.prediction_value,
        contributions: order
            .into_iter()
            .map(|i| ForceContribution {
                name: attribution.feature_names[i].clone(),
                value: attribution.sample_values[i],
                phi: attribution.phi[i],
                sign: if attribution.phi[i] >= 0.0 { "positive" } else { "negative" }.into(),
            })
            .collect(),
    }
}
