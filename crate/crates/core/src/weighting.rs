//! Sample weighting: inverse-frequency set weights, the prior partition,
//! and the two composition strategies that turn them into per-sample
//! training weights.
//!
//! The same set-weight formula `n / (k * n_i)` serves two roles: applied to
//! class counts it corrects class imbalance, applied to the prior model's
//! well-/mis-classified partition it encodes the prior-modality constraint.

use serde::{Deserialize, Serialize};

use crate::dataset::ClassCounts;
use crate::error::{Error, Result};

/// Training-sample partition induced by the prior model: `s1` holds the
/// well-classified sample indices, `s2` the misclassified ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriorPartition {
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
    pub n: usize,
}

impl PriorPartition {
    /// Set index per sample: 0 for `s1`, 1 for `s2`.
    pub fn set_index(&self) -> Vec<usize> {
        let mut idx = vec![0usize; self.n];
        for &l in &self.s2 {
            idx[l] = 1;
        }
        idx
    }

    pub fn sizes(&self) -> [usize; 2] {
        [self.s1.len(), self.s2.len()]
    }
}

/// One weight per set. Index order follows the sizes passed to
/// [`set_weights`]: `[s1, s2]` for prior partitions, `[negative, positive]`
/// (label order) for classes.
#[derive(Debug, Clone, PartialEq)]
pub struct SetWeights {
    pub weights: Vec<f64>,
    /// True when some set was empty and neutral weights were substituted.
    pub degenerate: bool,
}

/// Inverse-frequency weight per set: `w_i = n / (k * n_i)`.
///
/// An empty set makes the formula undefined; in that case every weight is
/// 1.0 and the result is flagged `degenerate` so callers can surface a
/// warning instead of failing.
pub fn set_weights(sizes: &[usize], n: usize, k: usize) -> SetWeights {
    debug_assert_eq!(sizes.len(), k);
    debug_assert_eq!(sizes.iter().sum::<usize>(), n);
    if sizes.iter().any(|&s| s == 0) {
        return SetWeights {
            weights: vec![1.0; k],
            degenerate: true,
        };
    }
    let weights = sizes
        .iter()
        .map(|&s| n as f64 / (k as f64 * s as f64))
        .collect();
    SetWeights {
        weights,
        degenerate: false,
    }
}

impl SetWeights {
    /// Class weights in label order (index 0 = negative, 1 = positive).
    pub fn for_classes(counts: &ClassCounts) -> SetWeights {
        set_weights(&counts.by_label(), counts.total(), 2)
    }

    /// Prior weights in set order (index 0 = s1, 1 = s2).
    pub fn for_partition(partition: &PriorPartition) -> SetWeights {
        set_weights(&partition.sizes(), partition.n, 2)
    }
}

/// How class and prior weights combine into a sample weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strategy {
    /// `w = alpha * class_w + beta * prior_w` for every sample.
    Same,
    /// The prior term applies only to misclassified samples:
    /// `w = alpha * class_w` on s1, `w = alpha * class_w + beta * prior_w2` on s2.
    Stratified,
}

/// `alpha` scales the class-imbalance term, `beta` the prior-knowledge term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightingConfig {
    pub alpha: f64,
    pub beta: f64,
    pub strategy: Strategy,
}

impl WeightingConfig {
    pub fn new(alpha: f64, beta: f64, strategy: Strategy) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&beta) {
            return Err(Error::InvalidConfig(format!(
                "alpha and beta must lie in [0, 1], got ({alpha}, {beta})"
            )));
        }
        if alpha == 0.0 && beta == 0.0 {
            return Err(Error::AllZeroWeights);
        }
        Ok(Self {
            alpha,
            beta,
            strategy,
        })
    }
}

/// Per-sample training weights; finite, nonnegative, not all zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleWeights(Vec<f64>);

impl SampleWeights {
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidWeights(
                "weights must be finite and nonnegative".into(),
            ));
        }
        if !w.iter().any(|&v| v > 0.0) {
            return Err(Error::AllZeroWeights);
        }
        Ok(Self(w))
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Splits samples into well-classified (`s1`) and misclassified (`s2`)
/// under the prior model's predicted positive-class probabilities.
///
/// A probability at or above `threshold` predicts positive; the sample is
/// well-classified when prediction and label agree.
pub fn partition_by_prior(
    prior_predictions: &[f64],
    labels: &[u8],
    threshold: f64,
) -> Result<PriorPartition> {
    if prior_predictions.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: prior_predictions.len(),
            right: labels.len(),
        });
    }
    debug_assert!(threshold > 0.0 && threshold < 1.0);
    let mut s1 = Vec::new();
    let mut s2 = Vec::new();
    for (l, (&p, &y)) in prior_predictions.iter().zip(labels).enumerate() {
        let predicted_positive = p >= threshold;
        if predicted_positive == (y == 1) {
            s1.push(l);
        } else {
            s2.push(l);
        }
    }
    Ok(PriorPartition {
        s1,
        s2,
        n: labels.len(),
    })
}

/// Composes per-sample weights from class weights and prior weights under
/// the configured strategy.
///
/// `class_w` is indexed by label (0 = negative, 1 = positive); `prior_w`
/// by set (0 = s1, 1 = s2).
pub fn compose_weights(
    labels: &[u8],
    partition: &PriorPartition,
    class_w: &SetWeights,
    prior_w: &SetWeights,
    config: &WeightingConfig,
) -> Result<SampleWeights> {
    if labels.len() != partition.n {
        return Err(Error::LengthMismatch {
            left: labels.len(),
            right: partition.n,
        });
    }
    let set_of = partition.set_index();
    let w: Vec<f64> = labels
        .iter()
        .zip(&set_of)
        .map(|(&y, &i)| {
            let class_term = config.alpha * class_w.weights[y as usize];
            match config.strategy {
                Strategy::Same => class_term + config.beta * prior_w.weights[i],
                Strategy::Stratified => {
                    if i == 1 {
                        class_term + config.beta * prior_w.weights[1]
                    } else {
                        class_term
                    }
                }
            }
        })
        .collect();
    SampleWeights::new(w)
}
