//! The sparse training pipeline: anchor phase, one-shot pruning, and the
//! drop/regrow loop.

mod anchor;
mod config;
pub mod criteria;
mod prune;
mod run;
mod scheduler;
mod train;

pub use anchor::{anchor_spectrum, train_anchor, AnchorGraph, AnchorPhase};
pub use config::{CriterionNorm, GstConfig};
pub use criteria::{combine_criteria, semantic_scores};
pub use prune::{one_shot_prune, update_mask, SwapReport};
pub use run::{
    edge_criterion, find_extreme_sparsity, run_gst, run_sparse_phase, select_extreme_sparsity,
    GstOutcome, MaskUpdate, SparseOutcome, SweepOutcome, SweepPoint,
};
pub use scheduler::scheduler_upsilon;
pub use train::{
    evaluate, train_fixed_mask, train_step, EpochRecord, Evaluation, FixedMaskRun, ModelState,
    Phase,
};

#[cfg(test)]
mod tests;
