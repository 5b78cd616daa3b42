use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Binary active set over canonical edge ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeMask {
    bits: Vec<bool>,
}

impl EdgeMask {
    pub fn full(num_edges: usize) -> Self {
        EdgeMask {
            bits: vec![true; num_edges],
        }
    }

    pub fn empty(num_edges: usize) -> Self {
        EdgeMask {
            bits: vec![false; num_edges],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        EdgeMask { bits }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn get(&self, e: usize) -> bool {
        self.bits[e]
    }

    #[inline]
    pub fn set(&mut self, e: usize, on: bool) {
        self.bits[e] = on;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn active_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn pruned_count(&self) -> usize {
        self.len() - self.active_count()
    }

    pub fn active_ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(|(e, _)| e)
    }

    pub fn pruned_ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().filter(|(_, &b)| !b).map(|(e, _)| e)
    }

    /// Fraction of edges kept; 1 for an empty edge universe.
    pub fn active_fraction(&self) -> f64 {
        1.0 - graph_sparsity(self)
    }

    /// 1.0 for active edges, 0.0 for pruned ones.
    pub fn as_gates(&self) -> Vec<f64> {
        self.bits.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect()
    }
}

/// `1 - active/total`, with 0 for a graph without edges.
pub fn graph_sparsity(mask: &EdgeMask) -> f64 {
    if mask.is_empty() {
        return 0.0;
    }
    1.0 - mask.active_count() as f64 / mask.len() as f64
}

/// Number of edges removed to reach sparsity `s` on `num_edges` edges:
/// `floor(s * num_edges)`, robust to `s * n` landing just under an integer.
pub fn prune_count(sparsity: f64, num_edges: usize) -> usize {
    let raw = sparsity * num_edges as f64;
    let floor = libm::floor(raw + 1e-9);
    (floor.max(0.0) as usize).min(num_edges)
}

/// One real score per canonical edge.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeScores {
    values: Vec<f64>,
}

impl EdgeScores {
    /// Rejects non-finite entries.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(e) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                stage: alloc::format!("edge score {e}"),
            });
        }
        Ok(EdgeScores { values })
    }

    pub fn constant(num_edges: usize, value: f64) -> Self {
        EdgeScores {
            values: vec![value; num_edges],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Per-edge `score * gate` with gates from `mask`.
    pub fn gated(&self, mask: &EdgeMask) -> Result<Vec<f64>> {
        if mask.len() != self.len() {
            return Err(Error::shape("edge mask", self.len(), mask.len()));
        }
        Ok(self
            .values
            .iter()
            .zip(mask.bits())
            .map(|(&w, &b)| if b { w } else { 0.0 })
            .collect())
    }
}

impl core::ops::Index<usize> for EdgeScores {
    type Output = f64;

    fn index(&self, e: usize) -> &f64 {
        &self.values[e]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sparsity_values() {
        assert_eq!(graph_sparsity(&EdgeMask::full(10)), 0.0);
        assert_eq!(graph_sparsity(&EdgeMask::empty(10)), 1.0);
        let mut m = EdgeMask::full(10);
        for e in [1, 4, 7] {
            m.set(e, false);
        }
        assert!((graph_sparsity(&m) - 0.3).abs() < 1e-15);
        assert_eq!(graph_sparsity(&EdgeMask::full(0)), 0.0);
    }

    #[test]
    fn prune_count_is_robust_floor() {
        assert_eq!(prune_count(0.3, 1000), 300);
        assert_eq!(prune_count(0.29, 100), 29);
        assert_eq!(prune_count(0.5, 1), 0);
        assert_eq!(prune_count(0.0, 7), 0);
        assert_eq!(prune_count(0.99, 10), 9);
    }

    #[test]
    fn non_finite_scores_rejected() {
        assert!(EdgeScores::new(vec![1.0, f64::NAN]).is_err());
    }

    proptest! {
        #[test]
        fn sparsity_and_active_fraction_sum_to_one(bits in proptest::collection::vec(any::<bool>(), 0..200)) {
            let m = EdgeMask::from_bits(bits);
            prop_assert_eq!(graph_sparsity(&m) + m.active_fraction(), 1.0);
        }
    }
}
