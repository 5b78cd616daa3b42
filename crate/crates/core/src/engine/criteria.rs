use alloc::vec::Vec;

use super::config::CriterionNorm;
use crate::dense::Matrix;
use crate::graph::{Dataset, EdgeMask, EdgeScores, NodeSubset};
use crate::nn::{backward, forward, kl_output_divergence, KlNodeSet, Model};
use crate::stats::{average_ranks, mean, std_dev};
use crate::{Error, Result};

/// `|∂S/∂γ_e|` for every edge, where `S` is the output KL divergence from
/// the anchor logits to the current model on the masked graph and `γ_e` is
/// the weight edge `e` contributes before normalization (score times mask
/// bit). Pruned edges sit at `γ_e = 0` and still receive a gradient.
pub fn semantic_scores(
    anchor_logits: &Matrix,
    model: &Model,
    data: &Dataset,
    mask: &EdgeMask,
    nodes: KlNodeSet,
) -> Result<EdgeScores> {
    if mask.len() != data.num_edges() {
        return Err(Error::shape("edge mask", data.num_edges(), mask.len()));
    }
    let gates = mask.as_gates();
    let (logits, tape) = forward(model, &data.features, &data.graph, &gates)?;
    let train;
    let selection = match nodes {
        KlNodeSet::All => None,
        KlNodeSet::Labeled => {
            train = data.split.nodes(NodeSubset::Train);
            Some(train.as_slice())
        }
    };
    let kl = kl_output_divergence(anchor_logits, &logits, selection)?;
    let grads = backward(model, &tape, &data.features, &data.graph, &kl.grad)?;
    let abs: Vec<f64> = grads.edge_weights.iter().map(|g| g.abs()).collect();
    EdgeScores::new(abs).map_err(|_| Error::NonFinite {
        stage: "semantic criterion".into(),
    })
}

fn normalize(v: &[f64], norm: CriterionNorm) -> Vec<f64> {
    match norm {
        CriterionNorm::None => v.to_vec(),
        CriterionNorm::ZScore => {
            let (m, s) = (mean(v), std_dev(v));
            if s == 0.0 {
                alloc::vec![0.0; v.len()]
            } else {
                v.iter().map(|x| (x - m) / s).collect()
            }
        }
        CriterionNorm::Rank => {
            let top = v.len().saturating_sub(1).max(1) as f64;
            average_ranks(v).into_iter().map(|r| r / top).collect()
        }
    }
}

/// `β_s·ŝ + β_t·t̂` with both inputs rescaled by `norm`.
pub fn combine_criteria(
    semantic: &EdgeScores,
    topo: &EdgeScores,
    beta_semantic: f64,
    beta_topo: f64,
    norm: CriterionNorm,
) -> Result<EdgeScores> {
    if semantic.len() != topo.len() {
        return Err(Error::shape("criterion lengths", semantic.len(), topo.len()));
    }
    let s = normalize(semantic.values(), norm);
    let t = normalize(topo.values(), norm);
    EdgeScores::new(
        s.iter()
            .zip(&t)
            .map(|(a, b)| beta_semantic * a + beta_topo * b)
            .collect(),
    )
}
