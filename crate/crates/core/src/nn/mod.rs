//! Two-layer GCN, edge masker MLP, losses and Adam, with hand-derived reverse
//! passes. Every gradient here, including the one flowing into each edge
//! weight through the degree normalization, is checked against central
//! finite differences in the tests.

mod adam;
mod gcn;
mod gradcheck;
mod loss;
mod masker;
mod model;
mod params;

pub use adam::{adam_step, AdamState};
pub use gcn::{gcn_backward, gcn_forward, GcnGrads, GcnTape};
pub use gradcheck::{gradient_check, GradCheck, Objective};
pub use loss::{
    accuracy, cross_entropy, cross_entropy_on, kl_output_divergence, softmax_rows, KlNodeSet,
    Loss,
};
pub use masker::{masker_backward, masker_forward, masker_scores, MaskerGrads, MaskerTape};
pub use model::{backward, forward, ForwardTape, Gradients};
pub use params::{GcnParams, MaskerParams, Model};
