use alloc::vec::Vec;

use super::{EdgeMask, EdgeScores, UndirectedGraph};
use crate::dense::{axpy, Matrix};
use crate::{Error, Result};

/// `D̃^{-1/2} (W + I) D̃^{-1/2}` for symmetric edge weights `W`, stored as one
/// value per canonical edge plus the diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedAdjacency {
    edges: Vec<(usize, usize)>,
    weights: Vec<f64>,
    degrees: Vec<f64>,
    edge_values: Vec<f64>,
    self_values: Vec<f64>,
}

/// Normalized operator of `g` with edge weights `w` gated by `m`.
pub fn normalized_adjacency(
    g: &UndirectedGraph,
    w: &EdgeScores,
    m: &EdgeMask,
) -> Result<NormalizedAdjacency> {
    NormalizedAdjacency::from_weights(g, w.gated(m)?)
}

impl NormalizedAdjacency {
    /// Builds the operator from already-gated, nonnegative edge weights.
    pub fn from_weights(g: &UndirectedGraph, weights: Vec<f64>) -> Result<Self> {
        if let Some((edge, &weight)) = weights.iter().enumerate().find(|(_, w)| **w < 0.0) {
            return Err(Error::NegativeWeight { edge, weight });
        }
        Self::from_signed_weights(g, weights)
    }

    /// Like [`from_weights`](Self::from_weights) but admits negative weights
    /// as long as every augmented degree stays positive. Used to take
    /// two-sided finite differences around a zero gate.
    pub fn from_signed_weights(g: &UndirectedGraph, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != g.num_edges() {
            return Err(Error::shape("edge weights", g.num_edges(), weights.len()));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::NonFinite {
                stage: "edge weights".into(),
            });
        }
        let mut degrees = alloc::vec![1.0; g.num_nodes()];
        for (&(u, v), &w) in g.edges().iter().zip(&weights) {
            degrees[u] += w;
            degrees[v] += w;
        }
        if let Some(node) = degrees.iter().position(|&d| d <= 0.0) {
            return Err(Error::invalid(alloc::format!(
                "non-positive augmented degree at node {node}"
            )));
        }
        let inv_sqrt: Vec<f64> = degrees.iter().map(|&d| 1.0 / libm::sqrt(d)).collect();
        let edge_values = g
            .edges()
            .iter()
            .zip(&weights)
            .map(|(&(u, v), &w)| w * inv_sqrt[u] * inv_sqrt[v])
            .collect();
        let self_values = degrees.iter().map(|&d| 1.0 / d).collect();
        Ok(NormalizedAdjacency {
            edges: g.edges().to_vec(),
            weights,
            degrees,
            edge_values,
            self_values,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.degrees.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Gated weights the operator was built from.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Row sums of `W + I`.
    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    /// Off-diagonal entry for each canonical edge.
    pub fn edge_values(&self) -> &[f64] {
        &self.edge_values
    }

    /// Diagonal entries `1 / d̃_i`.
    pub fn self_values(&self) -> &[f64] {
        &self.self_values
    }

    /// `Â · x`
    pub fn apply(&self, x: &Matrix) -> Result<Matrix> {
        if x.rows() != self.num_nodes() {
            return Err(Error::shape("propagation input rows", self.num_nodes(), x.rows()));
        }
        let mut out = Matrix::zeros(x.rows(), x.cols());
        for (i, &s) in self.self_values.iter().enumerate() {
            axpy(s, x.row(i), out.row_mut(i));
        }
        for (&(u, v), &a) in self.edges.iter().zip(&self.edge_values) {
            if a == 0.0 {
                continue;
            }
            axpy(a, x.row(v), out.row_mut(u));
            axpy(a, x.row(u), out.row_mut(v));
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.num_nodes(), self.num_nodes());
        for (i, &s) in self.self_values.iter().enumerate() {
            m[(i, i)] = s;
        }
        for (&(u, v), &a) in self.edges.iter().zip(&self.edge_values) {
            m[(u, v)] = a;
            m[(v, u)] = a;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::dense_eig_oracle;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn all_masked_is_identity() {
        let g = UndirectedGraph::from_pairs(3, [(0, 1), (1, 2)]).unwrap().0;
        let a = normalized_adjacency(&g, &EdgeScores::constant(2, 0.7), &EdgeMask::empty(2)).unwrap();
        assert_eq!(a.to_dense(), Matrix::identity(3));
    }

    #[test]
    fn single_edge_closed_form() {
        let g = UndirectedGraph::from_pairs(2, [(0, 1)]).unwrap().0;
        let a = normalized_adjacency(&g, &EdgeScores::constant(1, 1.0), &EdgeMask::full(1)).unwrap();
        let d = a.to_dense();
        for v in d.as_slice() {
            assert!((v - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn negative_weight_rejected() {
        let g = UndirectedGraph::from_pairs(2, [(0, 1)]).unwrap().0;
        let err = NormalizedAdjacency::from_weights(&g, vec![-0.1]).unwrap_err();
        assert!(matches!(err, Error::NegativeWeight { edge: 0, .. }));
    }

    #[test]
    fn random_graph_symmetric_degree_consistent_and_contractive() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 10;
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
            .filter(|_| rng.random_bool(0.4))
            .collect();
        let g = UndirectedGraph::from_pairs(n, pairs).unwrap().0;
        let w: Vec<f64> = (0..g.num_edges()).map(|_| rng.random_range(0.0..2.0)).collect();
        let a = NormalizedAdjacency::from_weights(&g, w.clone()).unwrap();
        let d = a.to_dense();
        assert_eq!(d.max_asymmetry(), Some(0.0));
        // dense oracle: D^{1/2} Â D^{1/2} = W + I, whose row sums are the degrees
        let mut wi = Matrix::identity(n);
        for (&(u, v), &x) in g.edges().iter().zip(&w) {
            wi[(u, v)] = x;
            wi[(v, u)] = x;
        }
        for i in 0..n {
            let row_sum: f64 = (0..n)
                .map(|j| libm::sqrt(a.degrees()[i]) * d[(i, j)] * libm::sqrt(a.degrees()[j]))
                .sum();
            let expect: f64 = wi.row(i).iter().sum();
            assert!((row_sum - expect).abs() < 1e-12);
            assert!((a.degrees()[i] - expect).abs() < 1e-12);
        }
        let eig = dense_eig_oracle(&d).unwrap();
        assert!(eig.values.iter().all(|l| l.abs() <= 1.0 + 1e-12));
        // apply matches dense product
        let x = Matrix::from_fn(n, 3, |i, j| (i as f64 - j as f64) * 0.3);
        let lhs = a.apply(&x).unwrap();
        let rhs = d.matmul(&x).unwrap();
        for (p, q) in lhs.as_slice().iter().zip(rhs.as_slice()) {
            assert!((p - q).abs() < 1e-12);
        }
    }
}
