//! Planted-signature synthetic SCADA dataset.
//!
//! Twelve features named after catalogue SCADA features so knowledge-graph
//! joins work end to end, four classes labelled by functional-group number.
//! Each anomaly class shifts the mean of two designated features over a
//! standard Gaussian baseline; normal operation is pure baseline.

use super::dataset::Dataset;
use super::ScadaSample;
use crate::ontology::bundled::DESK_FEATURES;
use crate::rng::SplitMix64;

/// One synthetic class: functional-group label plus its planted mean shifts.
#[derive(Debug, Clone, Copy)]
pub struct ClassSignature {
    pub fno: i64,
    pub name: &'static str,
    /// (feature index into [`DESK_FEATURES`], mean shift in sigmas)
    pub shifts: &'static [(usize, f64)],
}

pub const CLASS_SIGNATURES: [ClassSignature; 4] = [
    ClassSignature { fno: 13, name: "NoFault", shifts: &[] },
    ClassSignature { fno: 9, name: "Gearbox", shifts: &[(0, 3.0), (1, 2.6)] },
    ClassSignature { fno: 1, name: "Pitch", shifts: &[(3, 3.0), (4, 2.6)] },
    ClassSignature { fno: 6, name: "Yaw", shifts: &[(6, 3.0), (7, 2.6)] },
];

/// Names of the planted features for a class label, empty for NoFault and
/// unknown labels.
pub fn planted_feature_names(fno: i64) -> Vec<&'static str> {
    CLASS_SIGNATURES
        .iter()
        .find(|c| c.fno == fno)
        .map(|c| c.shifts.iter().map(|(i, _)| DESK_FEATURES[*i]).collect())
        .unwrap_or_default()
}

/// Generates `n_samples` rows, classes balanced, rows shuffled; fully
/// deterministic for a seed.
pub fn synthesize(n_samples: usize, seed: u64) -> Dataset {
    let mut rng = SplitMix64::new(seed);
    let m = DESK_FEATURES.len();
    let per_class = n_samples / CLASS_SIGNATURES.len();
    let remainder = n_samples % CLASS_SIGNATURES.len();
    let mut samples = Vec::with_capacity(n_samples);
    for (c, class) in CLASS_SIGNATURES.iter().enumerate() {
        let count = per_class + usize::from(c < remainder);
        for _ in 0..count {
            let mut values: Vec<f64> = (0..m).map(|_| rng.next_gaussian()).collect();
            for (feature, shift) in class.shifts {
                values[*feature] += shift;
            }
            samples.push(ScadaSample { values, label: Some(class.fno) });
        }
    }
    rng.shuffle(&mut samples);
    Dataset {
        feature_names: DESK_FEATURES.iter().map(|s| s.to_string()).collect(),
        samples,
    }
}
