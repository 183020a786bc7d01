//! Shift-invariant measures given by exact cylinder weights.

use crate::error::{Error, Result};
use crate::word::Symbol;

/// A shift-invariant probability measure that can evaluate `μ([w]_k)` exactly.
/// Invariance means the base coordinate `k` is irrelevant.
pub trait CylinderWeight {
    fn weight(&self, word: &[Symbol]) -> f64;

    /// `log μ([w])`, `-inf` for null cylinders.
    fn log_weight(&self, word: &[Symbol]) -> f64 {
        self.weight(word).ln()
    }
}

impl<T: CylinderWeight + ?Sized> CylinderWeight for &T {
    fn weight(&self, word: &[Symbol]) -> f64 {
        (**self).weight(word)
    }
    fn log_weight(&self, word: &[Symbol]) -> f64 {
        (**self).log_weight(word)
    }
}

/// The i.i.d. product measure with the given marginal.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliMeasure {
    probs: Vec<f64>,
}

impl BernoulliMeasure {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() || probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::InvalidParams(format!("not a probability vector: {probs:?}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParams(format!("probabilities sum to {total}")));
        }
        Ok(BernoulliMeasure { probs })
    }

    pub fn uniform(m: usize) -> Self {
        BernoulliMeasure { probs: vec![1.0 / m as f64; m] }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

impl CylinderWeight for BernoulliMeasure {
    fn weight(&self, word: &[Symbol]) -> f64 {
        word.iter().map(|s| self.probs.get(s.index()).copied().unwrap_or(0.0)).product()
    }

    fn log_weight(&self, word: &[Symbol]) -> f64 {
        word.iter().map(|s| self.probs.get(s.index()).copied().unwrap_or(0.0).ln()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Word;

    #[test]
    fn bernoulli_weights() {
        let mu = BernoulliMeasure::new(vec![0.75, 0.25]).unwrap();
        assert_eq!(mu.weight(&[]), 1.0);
        assert_eq!(mu.weight(&Word::from_indices(&[0, 1, 0])), 0.75 * 0.25 * 0.75);
        let split: f64 = (0..2).map(|s| mu.weight(&Word::from_indices(&[1, s]))).sum();
        assert!((split - mu.weight(&Word::from_indices(&[1]))).abs() < 1e-15);
        assert!(BernoulliMeasure::new(vec![0.5, 0.6]).is_err());
    }
}
