use alloc::format;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::GstConfig;
use crate::dense::Matrix;
use crate::graph::{graph_sparsity, Dataset, EdgeMask, NodeSubset};
use crate::nn::{accuracy, adam_step, backward, cross_entropy, forward, AdamState, Model};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Anchor,
    Sparse,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Anchor => "anchor",
            Phase::Sparse => "sparse",
        }
    }
}

/// One training epoch. Accuracies come from a forward pass after the
/// parameter update; `loss` is the training loss before it.
#[derive(Debug, Clone, PartialEq)]
pub struct EpochRecord {
    pub phase: Phase,
    /// 1-based within the phase.
    pub epoch: usize,
    /// Schedule interval `⌈epoch/ΔT⌉` in the sparse phase, 0 otherwise.
    pub interval: usize,
    pub train_acc: f64,
    pub val_acc: f64,
    pub test_acc: f64,
    pub loss: f64,
    pub sparsity: f64,
    pub active_edges: usize,
    /// Edges exchanged right after this epoch.
    pub swap_count: usize,
}

/// Model parameters with their optimizer moments.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelState {
    pub model: Model,
    pub adam: AdamState,
}

impl ModelState {
    /// Glorot-initialized model seeded from `cfg.seed`.
    pub fn init(data: &Dataset, cfg: &GstConfig) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let model = Model::init(
            &mut rng,
            data.features.cols(),
            cfg.hidden,
            data.split.num_classes(),
            cfg.masker_hidden,
        );
        let sizes: Vec<usize> = model.tensors().iter().map(|t| t.len()).collect();
        ModelState {
            model,
            adam: AdamState::new(&sizes),
        }
    }
}

/// Post-update view of the model on a masked graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub logits: Matrix,
    pub edge_scores: Vec<f64>,
    pub train_acc: f64,
    pub val_acc: f64,
    pub test_acc: f64,
}

pub fn evaluate(model: &Model, data: &Dataset, mask: &EdgeMask) -> Result<Evaluation> {
    let (logits, tape) = forward(model, &data.features, &data.graph, &mask.as_gates())?;
    let acc = |s| accuracy(&logits, &data.split, s);
    Ok(Evaluation {
        train_acc: acc(NodeSubset::Train),
        val_acc: acc(NodeSubset::Val),
        test_acc: acc(NodeSubset::Test),
        edge_scores: tape.edge_scores().to_vec(),
        logits,
    })
}

/// One Adam step on the training cross-entropy; returns the loss.
pub fn train_step(state: &mut ModelState, data: &Dataset, mask: &EdgeMask, lr: f64) -> Result<f64> {
    let (logits, tape) = forward(&state.model, &data.features, &data.graph, &mask.as_gates())?;
    let loss = cross_entropy(&logits, &data.split, NodeSubset::Train)?;
    if !loss.value.is_finite() {
        return Err(Error::NonFinite { stage: "training loss".into() });
    }
    let grads = backward(&state.model, &tape, &data.features, &data.graph, &loss.grad)?;
    adam_step(&mut state.adam, &mut state.model.tensors_mut(), &grads.tensors(), lr)?;
    if !state.model.is_finite() {
        return Err(Error::NonFinite { stage: "parameters".into() });
    }
    Ok(loss.value)
}

/// `train_step` + `evaluate` with the epoch number attached to failures.
pub(crate) fn epoch(
    state: &mut ModelState,
    data: &Dataset,
    mask: &EdgeMask,
    lr: f64,
    phase: Phase,
    index: usize,
) -> Result<(EpochRecord, Evaluation)> {
    let tag = |e: Error| match e {
        Error::NonFinite { stage } => Error::NonFinite {
            stage: format!("{stage} ({} epoch {index})", phase.as_str()),
        },
        other => other,
    };
    let loss = train_step(state, data, mask, lr).map_err(tag)?;
    let eval = evaluate(&state.model, data, mask).map_err(tag)?;
    Ok((
        EpochRecord {
            phase,
            epoch: index,
            interval: 0,
            train_acc: eval.train_acc,
            val_acc: eval.val_acc,
            test_acc: eval.test_acc,
            loss,
            sparsity: graph_sparsity(mask),
            active_edges: mask.active_count(),
            swap_count: 0,
        },
        eval,
    ))
}

/// Result of training on a mask that never changes.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedMaskRun {
    pub history: Vec<EpochRecord>,
    /// Model at the best-validation epoch (earliest on ties).
    pub model: Model,
    pub best_epoch: usize,
    pub val_acc: f64,
    pub test_acc: f64,
}

/// Trains a freshly initialized model for `epochs` epochs on `mask`; used
/// for the dense reference and the baseline sparsifiers.
pub fn train_fixed_mask(
    data: &Dataset,
    mask: &EdgeMask,
    cfg: &GstConfig,
    epochs: usize,
    phase: Phase,
) -> Result<FixedMaskRun> {
    cfg.validate()?;
    if mask.len() != data.num_edges() {
        return Err(Error::shape("edge mask", data.num_edges(), mask.len()));
    }
    if epochs == 0 {
        return Err(Error::invalid("epochs must be at least 1"));
    }
    let mut state = ModelState::init(data, cfg);
    let mut history = Vec::with_capacity(epochs);
    let mut best: Option<(usize, f64, f64, Model)> = None;
    for i in 1..=epochs {
        let (rec, eval) = epoch(&mut state, data, mask, cfg.lr, phase, i)?;
        if best.as_ref().is_none_or(|b| eval.val_acc > b.1) {
            best = Some((i, eval.val_acc, eval.test_acc, state.model.clone()));
        }
        history.push(rec);
    }
    let (best_epoch, val_acc, test_acc, model) = best.expect("epochs >= 1");
    Ok(FixedMaskRun {
        history,
        model,
        best_epoch,
        val_acc,
        test_acc,
    })
}
