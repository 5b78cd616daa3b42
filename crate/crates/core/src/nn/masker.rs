use alloc::vec;
use alloc::vec::Vec;

use super::MaskerParams;
use crate::dense::{axpy, Matrix};
use crate::graph::{EdgeScores, UndirectedGraph};
use crate::{Error, Result};

/// Intermediates of [`masker_forward`]: hidden pre-activations for both
/// directions of every edge, and the output scores.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskerTape {
    hidden: usize,
    /// `[edge][direction][hidden]`, direction 0 is `u → v`.
    pre: Vec<f64>,
    scores: Vec<f64>,
}

impl MaskerTape {
    pub fn scores(&self) -> &[f64] {
        &self.scores
    }
}

#[inline]
fn sigmoid(t: f64) -> f64 {
    1.0 / (1.0 + libm::exp(-t))
}

fn check_shapes(psi: &MaskerParams, x: &Matrix, g: &UndirectedGraph) -> Result<()> {
    if psi.m1.rows() != 2 * x.cols() {
        return Err(Error::shape("masker input width", 2 * x.cols(), psi.m1.rows()));
    }
    if psi.m2.rows() != psi.m1.cols() || psi.m2.cols() != 1 {
        return Err(Error::shape("masker output layer", psi.m1.cols(), psi.m2.rows()));
    }
    if x.rows() != g.num_nodes() {
        return Err(Error::shape("feature rows", g.num_nodes(), x.rows()));
    }
    Ok(())
}

/// Splits `m1` into the blocks multiplying the first and second endpoint.
fn node_projections(psi: &MaskerParams, x: &Matrix) -> Result<(Matrix, Matrix)> {
    let d = x.cols();
    let h = psi.m1.cols();
    let top = Matrix::from_fn(d, h, |i, j| psi.m1[(i, j)]);
    let bottom = Matrix::from_fn(d, h, |i, j| psi.m1[(d + i, j)]);
    Ok((x.matmul(&top)?, x.matmul(&bottom)?))
}

/// Edge score `σ((mlp([x_u‖x_v]) + mlp([x_v‖x_u])) / 2)` for every edge,
/// with `mlp(c) = relu(c·m1)·m2`.
pub fn masker_forward(
    psi: &MaskerParams,
    x: &Matrix,
    g: &UndirectedGraph,
) -> Result<(EdgeScores, MaskerTape)> {
    check_shapes(psi, x, g)?;
    let hidden = psi.m1.cols();
    let (first, second) = node_projections(psi, x)?;
    let out_w = psi.m2.as_slice();
    let mut pre = vec![0.0; g.num_edges() * 2 * hidden];
    let mut scores = Vec::with_capacity(g.num_edges());
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let mut logit = 0.0;
        for (dir, (a, b)) in [(u, v), (v, u)].into_iter().enumerate() {
            let slot = &mut pre[(2 * e + dir) * hidden..(2 * e + dir + 1) * hidden];
            for ((s, p), q) in slot.iter_mut().zip(first.row(a)).zip(second.row(b)) {
                *s = p + q;
            }
            logit += slot
                .iter()
                .zip(out_w)
                .map(|(&z, &w)| z.max(0.0) * w)
                .sum::<f64>();
        }
        scores.push(sigmoid(0.5 * logit));
    }
    let tape = MaskerTape {
        hidden,
        pre,
        scores: scores.clone(),
    };
    Ok((EdgeScores::new(scores)?, tape))
}

pub fn masker_scores(psi: &MaskerParams, x: &Matrix, g: &UndirectedGraph) -> Result<EdgeScores> {
    masker_forward(psi, x, g).map(|(s, _)| s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaskerGrads {
    pub m1: Matrix,
    pub m2: Matrix,
}

/// Gradients of a loss w.r.t. the masker weights given `∂loss/∂score`.
pub fn masker_backward(
    psi: &MaskerParams,
    tape: &MaskerTape,
    x: &Matrix,
    g: &UndirectedGraph,
    grad_scores: &[f64],
) -> Result<MaskerGrads> {
    check_shapes(psi, x, g)?;
    if tape.scores.len() != g.num_edges() || tape.hidden != psi.m1.cols() {
        return Err(Error::StaleTape("masker"));
    }
    if grad_scores.len() != g.num_edges() {
        return Err(Error::shape("score gradient", g.num_edges(), grad_scores.len()));
    }
    let hidden = tape.hidden;
    let out_w = psi.m2.as_slice();
    let mut g_m2 = vec![0.0; hidden];
    let mut g_first = Matrix::zeros(x.rows(), hidden);
    let mut g_second = Matrix::zeros(x.rows(), hidden);
    let mut g_pre = vec![0.0; hidden];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let s = tape.scores[e];
        // d score / d (o_uv) = s (1 - s) / 2, same for o_vu
        let g_out = grad_scores[e] * s * (1.0 - s) * 0.5;
        if g_out == 0.0 {
            continue;
        }
        for (dir, (a, b)) in [(u, v), (v, u)].into_iter().enumerate() {
            let pre = &tape.pre[(2 * e + dir) * hidden..(2 * e + dir + 1) * hidden];
            for j in 0..hidden {
                if pre[j] > 0.0 {
                    g_m2[j] += g_out * pre[j];
                    g_pre[j] = g_out * out_w[j];
                } else {
                    g_pre[j] = 0.0;
                }
            }
            axpy(1.0, &g_pre, g_first.row_mut(a));
            axpy(1.0, &g_pre, g_second.row_mut(b));
        }
    }
    let top = x.t_matmul(&g_first)?;
    let bottom = x.t_matmul(&g_second)?;
    let d = x.cols();
    let m1 = Matrix::from_fn(2 * d, hidden, |i, j| {
        if i < d {
            top[(i, j)]
        } else {
            bottom[(i - d, j)]
        }
    });
    Ok(MaskerGrads {
        m1,
        m2: Matrix::from_vec(hidden, 1, g_m2)?,
    })
}

/// Direct per-edge evaluation, no shared projections. Test oracle.
#[cfg(test)]
pub(crate) fn masker_score_naive(psi: &MaskerParams, x: &Matrix, u: usize, v: usize) -> f64 {
    use crate::dense::dot;
    let mlp = |a: usize, b: usize| {
        let mut c = x.row(a).to_vec();
        c.extend_from_slice(x.row(b));
        let h: Vec<f64> = (0..psi.m1.cols())
            .map(|j| dot(&c, &psi.m1.column(j)).max(0.0))
            .collect();
        dot(&h, psi.m2.as_slice())
    };
    sigmoid(0.5 * (mlp(u, v) + mlp(v, u)))
}
