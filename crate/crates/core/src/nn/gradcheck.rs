//! Central finite-difference check of [`backward`] for both training
//! objectives.

use alloc::vec::Vec;

use super::{backward, cross_entropy_on, forward, gcn_forward, kl_output_divergence, Model};
use crate::dense::Matrix;
use crate::graph::{NormalizedAdjacency, UndirectedGraph};
use crate::Result;

/// Scalar objective of the logits.
#[derive(Debug, Clone, Copy)]
pub enum Objective<'a> {
    /// Mean cross-entropy over `nodes`.
    CrossEntropy { labels: &'a [usize], nodes: &'a [usize] },
    /// Mean `KL(softmax(anchor) ‖ softmax(Z))` over all nodes.
    Kl { anchor: &'a Matrix },
}

impl Objective<'_> {
    fn eval(&self, z: &Matrix) -> Result<(f64, Matrix)> {
        let l = match *self {
            Objective::CrossEntropy { labels, nodes } => cross_entropy_on(z, labels, nodes)?,
            Objective::Kl { anchor } => kl_output_divergence(anchor, z, None)?,
        };
        Ok((l.value, l.grad))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradCheck {
    /// Largest `|analytic − numeric| / max(|analytic|, |numeric|, floor)`.
    pub max_rel_error: f64,
    /// Number of scalar partials compared.
    pub checked: usize,
}

/// Compares every partial w.r.t. the four parameter tensors and the edge
/// weights `γ` against central differences with step `h`. Edge-weight
/// perturbations go through the signed normalization, so gated-off edges
/// (`γ = 0`) are covered too.
pub fn gradient_check(
    model: &Model,
    x: &Matrix,
    g: &UndirectedGraph,
    gates: &[f64],
    objective: Objective<'_>,
    h: f64,
    floor: f64,
) -> Result<GradCheck> {
    let (z, tape) = forward(model, x, g, gates)?;
    let (_, grad_z) = objective.eval(&z)?;
    let grads = backward(model, &tape, x, g, &grad_z)?;

    let mut worst = 0.0f64;
    let mut checked = 0;
    let mut compare = |an: f64, fd: f64| {
        let denom = an.abs().max(fd.abs()).max(floor);
        worst = worst.max((an - fd).abs() / denom);
        checked += 1;
    };

    let loss_at = |m: &Model| -> Result<f64> { Ok(objective.eval(&forward(m, x, g, gates)?.0)?.0) };
    let mut probe = model.clone();
    for t in 0..4 {
        for i in 0..model.tensors()[t].len() {
            let orig = model.tensors()[t][i];
            probe.tensors_mut()[t][i] = orig + h;
            let plus = loss_at(&probe)?;
            probe.tensors_mut()[t][i] = orig - h;
            let minus = loss_at(&probe)?;
            probe.tensors_mut()[t][i] = orig;
            compare(grads.tensors()[t][i], (plus - minus) / (2.0 * h));
        }
    }

    let gamma: Vec<f64> = tape.edge_weights().to_vec();
    let loss_w = |w: Vec<f64>| -> Result<f64> {
        let adj = NormalizedAdjacency::from_signed_weights(g, w)?;
        Ok(objective.eval(&gcn_forward(&model.gcn, &adj, x)?.0)?.0)
    };
    for e in 0..gamma.len() {
        let mut w = gamma.clone();
        w[e] += h;
        let plus = loss_w(w.clone())?;
        w[e] -= 2.0 * h;
        let minus = loss_w(w)?;
        compare(grads.edge_weights[e], (plus - minus) / (2.0 * h));
    }
    Ok(GradCheck {
        max_rel_error: worst,
        checked,
    })
}
