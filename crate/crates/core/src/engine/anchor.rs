use alloc::vec::Vec;

use super::config::GstConfig;
use super::train::{epoch, EpochRecord, ModelState, Phase};
use crate::dense::Matrix;
use crate::graph::{Dataset, EdgeMask, EdgeScores};
use crate::nn::{GcnParams, MaskerParams};
use crate::spectral::{
    eigen_variation_scores, extremal_eig, LanczosOptions, SpectralSummary, WeightedAdjacency,
};
use crate::Result;

/// Frozen snapshot of the best-validation epoch of full-graph training.
#[derive(Debug, Clone, PartialEq)]
pub struct AnchorGraph {
    /// Masker output `m^A` on every edge.
    pub scores: EdgeScores,
    pub logits: Matrix,
    pub theta: GcnParams,
    pub masker: MaskerParams,
    /// Extremal eigenpairs of `m^A ⊙ A`; `None` for graphs under two nodes.
    pub spectrum: Option<SpectralSummary>,
    pub topo_scores: EdgeScores,
    pub val_score: f64,
    pub test_score: f64,
    /// 1-based anchor-phase epoch the snapshot comes from.
    pub epoch: usize,
}

/// Everything the anchor phase produces. The sparse phase resumes from
/// `state`, the model after the last anchor epoch.
#[derive(Debug, Clone, PartialEq)]
pub struct AnchorPhase {
    pub anchor: AnchorGraph,
    pub state: ModelState,
    pub history: Vec<EpochRecord>,
}

pub fn train_anchor(data: &Dataset, cfg: &GstConfig) -> Result<AnchorPhase> {
    cfg.validate()?;
    let full = EdgeMask::full(data.num_edges());
    let mut state = ModelState::init(data, cfg);
    let mut history = Vec::with_capacity(cfg.anchor_epochs);
    let mut best: Option<(usize, ModelState, super::train::Evaluation)> = None;
    for i in 1..=cfg.anchor_epochs {
        let (rec, eval) = epoch(&mut state, data, &full, cfg.lr, Phase::Anchor, i)?;
        if best.as_ref().is_none_or(|b| eval.val_acc > b.2.val_acc) {
            best = Some((i, state.clone(), eval));
        }
        history.push(rec);
    }
    let (epoch, snap, eval) = best.expect("anchor_epochs >= 1");
    let scores = EdgeScores::new(eval.edge_scores)?;
    let (spectrum, topo_scores) = anchor_spectrum(data, &scores, cfg)?;
    log::info!(
        "anchor frozen at epoch {epoch} (val {:.4}, test {:.4})",
        eval.val_acc,
        eval.test_acc
    );
    Ok(AnchorPhase {
        anchor: AnchorGraph {
            scores,
            logits: eval.logits,
            theta: snap.model.gcn,
            masker: snap.model.masker,
            spectrum,
            topo_scores,
            val_score: eval.val_acc,
            test_score: eval.test_acc,
            epoch,
        },
        state,
        history,
    })
}

/// Spectrum of the anchor-weighted adjacency and the topological criterion.
/// `spectral_k` is capped at `n/2` per end.
pub fn anchor_spectrum(
    data: &Dataset,
    scores: &EdgeScores,
    cfg: &GstConfig,
) -> Result<(Option<SpectralSummary>, EdgeScores)> {
    let n = data.num_nodes();
    let k = cfg.spectral_k.min(n / 2);
    if k == 0 {
        return Ok((None, EdgeScores::constant(data.num_edges(), 0.0)));
    }
    if k < cfg.spectral_k {
        log::warn!("spectral_k {} capped to {k} for {n} nodes", cfg.spectral_k);
    }
    let op = WeightedAdjacency::new(&data.graph, scores.values());
    let spec = extremal_eig(&op, k, &LanczosOptions::default())?;
    let topo = eigen_variation_scores(scores, &data.graph, &spec, cfg.eps_lambda)?;
    Ok((Some(spec), topo))
}
