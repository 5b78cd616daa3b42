use alloc::vec::Vec;

use super::{gcn_backward, gcn_forward, masker_backward, masker_forward, GcnTape, MaskerTape, Model};
use crate::dense::Matrix;
use crate::graph::{NormalizedAdjacency, UndirectedGraph};
use crate::{Error, Result};

/// Everything [`backward`] needs from a [`forward`] call.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardTape {
    pub masker: MaskerTape,
    /// Multiplicative edge gates (1/0 for an edge mask).
    pub gates: Vec<f64>,
    pub gcn: GcnTape,
}

impl ForwardTape {
    pub fn logits(&self) -> &Matrix {
        &self.gcn.logits
    }

    /// Masker output per edge, before gating.
    pub fn edge_scores(&self) -> &[f64] {
        self.masker.scores()
    }

    /// `score · gate`, the weights entering the adjacency.
    pub fn edge_weights(&self) -> &[f64] {
        self.gcn.adj.weights()
    }
}

/// Masker scores, gated by `gates`, normalized into `Â`, fed to the GCN.
pub fn forward(
    model: &Model,
    x: &Matrix,
    g: &UndirectedGraph,
    gates: &[f64],
) -> Result<(Matrix, ForwardTape)> {
    if gates.len() != g.num_edges() {
        return Err(Error::shape("edge gates", g.num_edges(), gates.len()));
    }
    let (scores, masker) = masker_forward(&model.masker, x, g)?;
    let weights = scores.values().iter().zip(gates).map(|(s, m)| s * m).collect();
    let adj = NormalizedAdjacency::from_weights(g, weights)?;
    let (logits, gcn) = gcn_forward(&model.gcn, &adj, x)?;
    Ok((
        logits,
        ForwardTape {
            masker,
            gates: gates.to_vec(),
            gcn,
        },
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub w1: Matrix,
    pub w2: Matrix,
    pub m1: Matrix,
    pub m2: Matrix,
    /// `∂loss/∂γ_e` where `γ_e = score_e · gate_e` is the weight edge `e`
    /// contributes to the adjacency. Defined for gated-off edges too.
    pub edge_weights: Vec<f64>,
}

impl Gradients {
    /// Same order as [`Model::tensors`].
    pub fn tensors(&self) -> [&[f64]; 4] {
        [
            self.w1.as_slice(),
            self.w2.as_slice(),
            self.m1.as_slice(),
            self.m2.as_slice(),
        ]
    }
}

pub fn backward(
    model: &Model,
    tape: &ForwardTape,
    x: &Matrix,
    g: &UndirectedGraph,
    grad_logits: &Matrix,
) -> Result<Gradients> {
    if tape.gates.len() != g.num_edges() || tape.gcn.adj.num_edges() != g.num_edges() {
        return Err(Error::StaleTape("edge count"));
    }
    let gcn = gcn_backward(&model.gcn, &tape.gcn, x, grad_logits)?;
    let grad_scores: Vec<f64> = gcn
        .edge_weights
        .iter()
        .zip(&tape.gates)
        .map(|(gw, m)| gw * m)
        .collect();
    let masker = masker_backward(&model.masker, &tape.masker, x, g, &grad_scores)?;
    Ok(Gradients {
        w1: gcn.w1,
        w2: gcn.w2,
        m1: masker.m1,
        m2: masker.m2,
        edge_weights: gcn.edge_weights,
    })
}
