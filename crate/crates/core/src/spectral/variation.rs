use alloc::vec::Vec;

use super::{dense_eig_oracle, SpectralSummary};
use crate::dense::Matrix;
use crate::graph::{EdgeId, EdgeScores, UndirectedGraph};
use crate::{Error, Result};

/// Floor applied to `|λ|` in relative-variation denominators.
pub const DEFAULT_EPS_LAMBDA: f64 = 1e-8;

/// Dense symmetric adjacency with `W[u,v] = W[v,u] = weights[e]`.
pub fn weighted_adjacency_dense(g: &UndirectedGraph, weights: &[f64]) -> Matrix {
    let mut m = Matrix::zeros(g.num_nodes(), g.num_nodes());
    for (&(u, v), &w) in g.edges().iter().zip(weights) {
        m[(u, v)] = w;
        m[(v, u)] = w;
    }
    m
}

/// First-order change of an eigenvalue with unit eigenvector `vector` when
/// the edge `(u, v)` of weight `weight` is deleted from a symmetric matrix:
/// `vᵀ ΔW v` with `ΔW[u,v] = ΔW[v,u] = −weight`.
#[inline]
pub fn edge_first_order_shift(weight: f64, u: usize, v: usize, vector: &[f64]) -> f64 {
    -2.0 * weight * vector[u] * vector[v]
}

/// Topological edge importance from the anchor spectrum.
///
/// For each edge `e = (u, v)` sums, over the extremal eigenpairs in `spec`,
/// the predicted relative eigenvalue change on removing `e`:
/// `|m_e (v_u v_v + v_v v_u)| / max(|λ_k|, eps_lambda)`. `spec` must come
/// from the matrix `m ⊙ A` built from `anchor_w`.
pub fn eigen_variation_scores(
    anchor_w: &EdgeScores,
    g: &UndirectedGraph,
    spec: &SpectralSummary,
    eps_lambda: f64,
) -> Result<EdgeScores> {
    if spec.n != g.num_nodes() {
        return Err(Error::shape("spectrum node count", g.num_nodes(), spec.n));
    }
    if anchor_w.len() != g.num_edges() {
        return Err(Error::shape("anchor edge scores", g.num_edges(), anchor_w.len()));
    }
    if eps_lambda <= 0.0 {
        return Err(Error::invalid("eps_lambda must be positive"));
    }
    let pairs: Vec<_> = spec.union_pairs().collect();
    let scores = g
        .edges()
        .iter()
        .zip(anchor_w.values())
        .map(|(&(u, v), &w)| {
            pairs
                .iter()
                .map(|&(set, c)| {
                    let prod = set.component(u, c) * set.component(v, c);
                    (2.0 * w * prod).abs() / set.values[c].abs().max(eps_lambda)
                })
                .sum::<f64>()
        })
        .collect();
    EdgeScores::new(scores)
}

/// Exact relative eigenvalue variation from deleting edge `e`, restricted to
/// the `k` smallest and `k` largest eigenvalues (each counted once). Pairs
/// eigenvalues by ascending order. Test oracle: two full dense solves.
pub fn exact_variation_oracle(
    w: &EdgeScores,
    g: &UndirectedGraph,
    e: EdgeId,
    k: usize,
    eps_lambda: f64,
) -> Result<f64> {
    if w.len() != g.num_edges() {
        return Err(Error::shape("edge weights", g.num_edges(), w.len()));
    }
    if w[e] == 0.0 {
        return Ok(0.0);
    }
    let full = weighted_adjacency_dense(g, w.values());
    let before = dense_eig_oracle(&full)?.values;
    let mut removed = full;
    let (u, v) = g.edge(e);
    removed[(u, v)] = 0.0;
    removed[(v, u)] = 0.0;
    let after = dense_eig_oracle(&removed)?.values;
    Ok(restricted_indices(g.num_nodes(), k)
        .map(|i| (before[i] - after[i]).abs() / before[i].abs().max(eps_lambda))
        .sum())
}

/// Ascending indices of the `k` lowest and `k` highest of `n` eigenvalues.
fn restricted_indices(n: usize, k: usize) -> impl Iterator<Item = usize> {
    let k = k.min(n);
    let low_end = k;
    let high_start = (n - k).max(low_end);
    (0..low_end).chain(high_start..n)
}
