use alloc::vec;
use alloc::vec::Vec;

use super::GcnParams;
use crate::dense::{dot, Matrix};
use crate::graph::NormalizedAdjacency;
use crate::{Error, Result};

/// Intermediates of a GCN forward pass.
#[derive(Debug, Clone, PartialEq)]
pub struct GcnTape {
    pub adj: NormalizedAdjacency,
    /// `X W1`
    pub projected: Matrix,
    /// `Â X W1`
    pub hidden_pre: Matrix,
    /// `relu(Â X W1)`
    pub hidden: Matrix,
    /// `relu(Â X W1) W2`
    pub output_pre: Matrix,
    /// `Â relu(Â X W1) W2`
    pub logits: Matrix,
}

fn finite(m: &Matrix, layer: usize) -> Result<()> {
    if m.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite {
            stage: alloc::format!("gcn layer {layer}"),
        })
    }
}

/// `Z = Â · relu(Â X W1) · W2`
pub fn gcn_forward(
    theta: &GcnParams,
    adj: &NormalizedAdjacency,
    x: &Matrix,
) -> Result<(Matrix, GcnTape)> {
    if x.cols() != theta.w1.rows() {
        return Err(Error::shape("feature width", theta.w1.rows(), x.cols()));
    }
    if theta.w2.rows() != theta.w1.cols() {
        return Err(Error::shape("hidden width", theta.w1.cols(), theta.w2.rows()));
    }
    let projected = x.matmul(&theta.w1)?;
    let hidden_pre = adj.apply(&projected)?;
    finite(&hidden_pre, 1)?;
    let mut hidden = hidden_pre.clone();
    hidden.as_mut_slice().iter_mut().for_each(|v| *v = v.max(0.0));
    let output_pre = hidden.matmul(&theta.w2)?;
    let logits = adj.apply(&output_pre)?;
    finite(&logits, 2)?;
    let tape = GcnTape {
        adj: adj.clone(),
        projected,
        hidden_pre,
        hidden,
        output_pre,
        logits: logits.clone(),
    };
    Ok((logits, tape))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GcnGrads {
    pub w1: Matrix,
    pub w2: Matrix,
    /// `∂loss/∂w_e` for the (gated) weight of every canonical edge, through
    /// both the off-diagonal entries and the degree normalization.
    pub edge_weights: Vec<f64>,
}

/// Reverse pass of [`gcn_forward`] for a loss with gradient `grad_logits`.
pub fn gcn_backward(
    theta: &GcnParams,
    tape: &GcnTape,
    x: &Matrix,
    grad_logits: &Matrix,
) -> Result<GcnGrads> {
    let n = tape.adj.num_nodes();
    if x.rows() != n
        || x.cols() != theta.w1.rows()
        || tape.projected.cols() != theta.w1.cols()
        || tape.logits.cols() != theta.w2.cols()
    {
        return Err(Error::StaleTape("gcn"));
    }
    if grad_logits.rows() != tape.logits.rows() || grad_logits.cols() != tape.logits.cols() {
        return Err(Error::shape("logit gradient", tape.logits.rows(), grad_logits.rows()));
    }
    let adj = &tape.adj;
    // Â is symmetric, so Âᵀ G = Â G
    let g_out_pre = adj.apply(grad_logits)?;
    let w2 = tape.hidden.t_matmul(&g_out_pre)?;
    let mut g_hidden_pre = g_out_pre.matmul_t(&theta.w2)?;
    for (g, &z) in g_hidden_pre
        .as_mut_slice()
        .iter_mut()
        .zip(tape.hidden_pre.as_slice())
    {
        if z <= 0.0 {
            *g = 0.0;
        }
    }
    let g_projected = adj.apply(&g_hidden_pre)?;
    let w1 = x.t_matmul(&g_projected)?;

    // ∂loss/∂Â[i,j] = G_Z[i]·Q[j] + G_H[i]·P[j], needed on the sparsity pattern
    let entry = |i: usize, j: usize| {
        dot(grad_logits.row(i), tape.output_pre.row(j))
            + dot(g_hidden_pre.row(i), tape.projected.row(j))
    };
    let degrees = adj.degrees();
    let inv_sqrt: Vec<f64> = degrees.iter().map(|&d| 1.0 / libm::sqrt(d)).collect();
    // s[i] = Σ_j (G_ij Â_ij + G_ji Â_ji) over row and column i
    let mut s = vec![0.0; n];
    for i in 0..n {
        s[i] = 2.0 * entry(i, i) * adj.self_values()[i];
    }
    let mut sym = Vec::with_capacity(adj.num_edges());
    for (&(u, v), &a) in adj.edges().iter().zip(adj.edge_values()) {
        let g = entry(u, v) + entry(v, u);
        s[u] += g * a;
        s[v] += g * a;
        sym.push(g);
    }
    // Â_ij ∝ d_i^{-1/2}, Â_ii = d_i^{-1}: ∂loss/∂d_i = -s_i / (2 d_i)
    let g_degree: Vec<f64> = s.iter().zip(degrees).map(|(&si, &d)| -si / (2.0 * d)).collect();
    let edge_weights = adj
        .edges()
        .iter()
        .zip(&sym)
        .map(|(&(u, v), &g)| g * inv_sqrt[u] * inv_sqrt[v] + g_degree[u] + g_degree[v])
        .collect();
    Ok(GcnGrads {
        w1,
        w2,
        edge_weights,
    })
}
