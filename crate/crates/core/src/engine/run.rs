use alloc::vec::Vec;

use super::anchor::{train_anchor, AnchorPhase};
use super::config::GstConfig;
use super::criteria::{combine_criteria, semantic_scores};
use super::prune::{one_shot_prune, update_mask};
use super::scheduler::scheduler_upsilon;
use super::train::{epoch, train_fixed_mask, EpochRecord, Phase};
use crate::graph::{Dataset, EdgeMask, EdgeScores};
use crate::nn::Model;
use crate::{Error, Result};

/// One drop/regrow update of the sparse phase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskUpdate {
    /// Sparse-phase epoch after which the update ran.
    pub epoch: usize,
    pub interval: usize,
    /// Scheduler output before clamping to the pool sizes.
    pub scheduled: usize,
    pub pruned: Vec<usize>,
    pub regrown: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparseOutcome {
    pub one_shot: EdgeMask,
    /// Mask of the best-validation sparse epoch (earliest on ties).
    pub mask: EdgeMask,
    pub model: Model,
    pub best_epoch: usize,
    pub val_acc: f64,
    pub test_acc: f64,
    /// Mask after the final epoch and update.
    pub final_mask: EdgeMask,
    pub history: Vec<EpochRecord>,
    pub updates: Vec<MaskUpdate>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GstOutcome {
    pub anchor: AnchorPhase,
    pub sparse: SparseOutcome,
}

impl GstOutcome {
    /// Anchor rows followed by sparse rows.
    pub fn history(&self) -> impl Iterator<Item = &EpochRecord> {
        self.anchor.history.iter().chain(&self.sparse.history)
    }
}

/// Anchor phase, one-shot prune, then `D` epochs of sparse training with a
/// drop/regrow update after every `ΔT`-th epoch.
pub fn run_gst(data: &Dataset, cfg: &GstConfig) -> Result<GstOutcome> {
    let anchor = train_anchor(data, cfg)?;
    let sparse = run_sparse_phase(data, &anchor, cfg)?;
    Ok(GstOutcome { anchor, sparse })
}

/// The sparse phase alone, resuming from `anchor.state`. `anchor` is only
/// read, so one anchor can serve several sparsity levels.
pub fn run_sparse_phase(data: &Dataset, anchor: &AnchorPhase, cfg: &GstConfig) -> Result<SparseOutcome> {
    cfg.validate()?;
    let a = &anchor.anchor;
    if a.scores.len() != data.num_edges() {
        return Err(Error::shape("anchor scores", data.num_edges(), a.scores.len()));
    }
    let one_shot = one_shot_prune(&a.scores, cfg.sparsity)?;
    let horizon = cfg.num_intervals();
    let mut state = anchor.state.clone();
    let mut mask = one_shot.clone();
    let mut history = Vec::with_capacity(cfg.sparse_epochs);
    let mut updates = Vec::new();
    let mut best: Option<(usize, f64, f64, EdgeMask, Model)> = None;

    for d in 1..=cfg.sparse_epochs {
        let (mut rec, eval) = epoch(&mut state, data, &mask, cfg.lr, Phase::Sparse, d)?;
        rec.interval = d.div_ceil(cfg.update_interval);
        if best.as_ref().is_none_or(|b| eval.val_acc > b.1) {
            best = Some((d, eval.val_acc, eval.test_acc, mask.clone(), state.model.clone()));
        }
        if d % cfg.update_interval == 0 {
            let mu = d / cfg.update_interval;
            let r = scheduler_upsilon(mu, horizon, cfg.swap_ratio, cfg.swap_decay, mask.active_count());
            let phi = edge_criterion(data, anchor, &state.model, &mask, cfg)?;
            let (next, report) = update_mask(&mask, &phi, r)?;
            log::debug!("epoch {d}: interval {mu} swapped {} of {r}", report.applied);
            rec.swap_count = report.applied;
            updates.push(MaskUpdate {
                epoch: d,
                interval: mu,
                scheduled: r,
                pruned: report.pruned,
                regrown: report.regrown,
            });
            mask = next;
        }
        history.push(rec);
    }
    let (best_epoch, val_acc, test_acc, best_mask, model) = best.expect("sparse_epochs >= 1");
    Ok(SparseOutcome {
        one_shot,
        mask: best_mask,
        model,
        best_epoch,
        val_acc,
        test_acc,
        final_mask: mask,
        history,
        updates,
    })
}

/// Combined drop/regrow criterion for the current model and mask.
pub fn edge_criterion(
    data: &Dataset,
    anchor: &AnchorPhase,
    model: &Model,
    mask: &EdgeMask,
    cfg: &GstConfig,
) -> Result<EdgeScores> {
    let a = &anchor.anchor;
    let sema = semantic_scores(&a.logits, model, data, mask, cfg.kl_node_set)?;
    combine_criteria(&sema, &a.topo_scores, cfg.beta_semantic, cfg.beta_topo, cfg.criterion_norm)
}

/// Largest grid sparsity whose accuracy stays within `eps` of `dense_acc`,
/// or 0 when none does. `accuracy_at` is evaluated once per grid point.
pub fn select_extreme_sparsity<F>(grid: &[f64], dense_acc: f64, eps: f64, mut accuracy_at: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) || grid.iter().any(|s| !(*s > 0.0 && *s < 1.0)) {
        return Err(Error::invalid("sparsity grid must be strictly ascending inside (0, 1)"));
    }
    let mut chosen = 0.0;
    for &s in grid {
        if accuracy_at(s)? >= dense_acc - eps {
            chosen = s;
        }
    }
    Ok(chosen)
}

/// Per-point result of [`find_extreme_sparsity`].
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub sparsity: f64,
    pub test_acc: f64,
    pub val_acc: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub extreme_sparsity: f64,
    /// Test accuracy of a dense model trained for `E + D` epochs.
    pub dense_test_acc: f64,
    pub points: Vec<SweepPoint>,
}

/// Runs the sparse phase at every grid sparsity from one shared anchor and
/// returns the largest one whose test accuracy is within `eps` of dense.
pub fn find_extreme_sparsity(data: &Dataset, cfg: &GstConfig, eps: f64, grid: &[f64]) -> Result<SweepOutcome> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let dense = train_fixed_mask(
        data,
        &EdgeMask::full(data.num_edges()),
        cfg,
        cfg.anchor_epochs + cfg.sparse_epochs,
        Phase::Anchor,
    )?;
    let anchor = train_anchor(data, cfg)?;
    let mut points = Vec::with_capacity(grid.len());
    let extreme = select_extreme_sparsity(grid, dense.test_acc, eps, |s| {
        let point_cfg = GstConfig {
            sparsity: s,
            ..cfg.clone()
        };
        let out = run_sparse_phase(data, &anchor, &point_cfg)?;
        points.push(SweepPoint {
            sparsity: s,
            test_acc: out.test_acc,
            val_acc: out.val_acc,
        });
        Ok(out.test_acc)
    })?;
    Ok(SweepOutcome {
        extreme_sparsity: extreme,
        dense_test_acc: dense.test_acc,
        points,
    })
}
