//! Eigen-machinery for the topological edge criterion.
//!
//! The criterion works on the anchor-weighted adjacency `W = m ⊙ A`, which is
//! symmetric, so left and right eigenvectors coincide and every formula below
//! is written with a single unit eigenvector per eigenvalue.

mod lanczos;
mod operator;
mod preservation;
mod symmetric;
mod variation;

pub use lanczos::{extremal_eig, LanczosOptions};
pub use operator::{SymmetricOperator, WeightedAdjacency, WeightedLaplacian};
pub use preservation::{
    spectral_preservation_ratio, MatrixKind, PreservationReport, PreservationTerm,
};
pub use symmetric::{dense_eig_oracle, DENSE_LIMIT};
pub use variation::{
    edge_first_order_shift, eigen_variation_scores, exact_variation_oracle,
    weighted_adjacency_dense, DEFAULT_EPS_LAMBDA,
};

use crate::dense::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Top(usize),
    Bottom(usize),
    Full,
}

/// Eigenvalues in ascending order with unit eigenvectors stored as the
/// matching columns of `vectors` (`n × values.len()`).
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPairs {
    pub values: alloc::vec::Vec<f64>,
    pub vectors: Matrix,
    pub which: Which,
}

impl EigenPairs {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Component `node` of the eigenvector for `values[k]`.
    #[inline]
    pub fn component(&self, node: usize, k: usize) -> f64 {
        self.vectors[(node, k)]
    }

    /// Keeps the columns in `range`.
    pub(crate) fn slice(&self, range: core::ops::Range<usize>, which: Which) -> EigenPairs {
        let n = self.vectors.rows();
        let width = range.len();
        let vectors = Matrix::from_fn(n, width, |i, j| self.vectors[(i, range.start + j)]);
        EigenPairs {
            values: self.values[range].to_vec(),
            vectors,
            which,
        }
    }
}

/// The `k` algebraically largest and `k` smallest eigenpairs of a symmetric
/// operator on `n` nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSummary {
    pub top: EigenPairs,
    pub bottom: EigenPairs,
    pub k: usize,
    pub n: usize,
    /// Largest `‖Wv − λv‖₂` over all returned pairs.
    pub max_residual: f64,
}

impl SpectralSummary {
    /// Each eigenpair of `bottom ∪ top` once, as `(set, column)`. When
    /// `2k > n` the two ends overlap and the shared pairs are yielded from
    /// `bottom` only.
    pub fn union_pairs(&self) -> impl Iterator<Item = (&EigenPairs, usize)> + '_ {
        let overlap = (2 * self.k).saturating_sub(self.n).min(self.top.len());
        (0..self.bottom.len())
            .map(move |c| (&self.bottom, c))
            .chain((overlap..self.top.len()).map(move |c| (&self.top, c)))
    }
}
