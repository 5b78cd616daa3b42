//! Multiply-accumulate count of one GCN inference on a (sparsified) graph.

use crate::graph::EdgeMask;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MacsEstimate {
    /// Neighbourhood aggregation: every stored entry of `Â` (both directions
    /// of each active edge plus one self-loop per node) times the width of
    /// the layer's input.
    pub aggregation: u64,
    /// Dense feature transforms.
    pub update: u64,
    pub total: u64,
}

/// MACs for an `layers`-layer GCN with input width `feat_dim`, hidden width
/// `hidden` and `classes` outputs over `num_nodes` nodes and the active
/// edges of `mask`.
pub fn macs_estimate(
    num_nodes: usize,
    mask: &EdgeMask,
    layers: usize,
    feat_dim: usize,
    hidden: usize,
    classes: usize,
) -> MacsEstimate {
    let n = num_nodes as u64;
    let entries = 2 * mask.active_count() as u64 + n;
    let layer_inputs = (0..layers).map(|l| if l == 0 { feat_dim } else { hidden } as u64);
    let aggregation = layer_inputs.map(|d| entries * d).sum();
    let update = match layers {
        0 => 0,
        1 => n * (feat_dim * classes) as u64,
        _ => {
            n * (feat_dim as u64 * hidden as u64
                + (layers as u64 - 2) * (hidden * hidden) as u64
                + (hidden * classes) as u64)
        }
    };
    MacsEstimate {
        aggregation,
        update,
        total: aggregation + update,
    }
}
