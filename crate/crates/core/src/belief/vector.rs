use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lower clamp applied to belief entries before taking logs.
pub const BELIEF_FLOOR: f64 = 1e-8;

/// Tolerance on the simplex sum constraint.
pub const SIMPLEX_TOL: f64 = 1e-9;

/// A point on the probability simplex over `C` classes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BeliefVector(Vec<f64>);

impl BeliefVector {
    /// Validates non-negativity and the unit sum (within [`SIMPLEX_TOL`]).
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Empty("belief vector"));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidParameter(
                "belief entries must be finite and non-negative".into(),
            ));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::InvalidParameter(format!(
                "belief entries sum to {sum}, not 1"
            )));
        }
        Ok(Self(probs))
    }

    /// Divides non-negative weights by their sum.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if !sum.is_finite() || sum <= 0.0 || weights.iter().any(|w| *w < 0.0) {
            return Err(Error::InvalidParameter(
                "weights must be non-negative with a positive finite sum".into(),
            ));
        }
        Ok(Self(weights.into_iter().map(|w| w / sum).collect()))
    }

    pub fn uniform(num_classes: usize) -> Self {
        Self(vec![1.0 / num_classes as f64; num_classes])
    }

    /// Numerically stable softmax.
    pub fn softmax(logits: &[f64]) -> Self {
        let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let exps: Vec<f64> = logits.iter().map(|z| (z - max).exp()).collect();
        let sum: f64 = exps.iter().sum();
        Self(exps.into_iter().map(|e| e / sum).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Index of the largest entry; ties go to the lowest index.
    pub fn argmax(&self) -> usize {
        argmax(&self.0)
    }

    /// `ln(max(b_k, BELIEF_FLOOR))` for every entry.
    pub fn clamped_logs(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().map(|b| b.max(BELIEF_FLOOR).ln())
    }
}

impl AsRef<[f64]> for BeliefVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Lowest index holding the maximum value.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}
