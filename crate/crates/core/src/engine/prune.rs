use alloc::vec::Vec;

use crate::graph::{prune_count, EdgeMask, EdgeScores};
use crate::{Error, Result};

/// Clears the `⌊s·|E|⌋` lowest scores; ties go to the lower edge id.
pub fn one_shot_prune(scores: &EdgeScores, sparsity: f64) -> Result<EdgeMask> {
    if !(0.0..1.0).contains(&sparsity) {
        return Err(Error::invalid(alloc::format!("sparsity must lie in [0, 1), got {sparsity}")));
    }
    let v = scores.values();
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[a].total_cmp(&v[b]).then(a.cmp(&b)));
    let mut mask = EdgeMask::full(v.len());
    for &e in &order[..prune_count(sparsity, v.len())] {
        mask.set(e, false);
    }
    Ok(mask)
}

/// Edges exchanged by one [`update_mask`] call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapReport {
    pub requested: usize,
    /// `min(requested, active, pruned)`.
    pub applied: usize,
    pub pruned: Vec<usize>,
    pub regrown: Vec<usize>,
}

/// Drops the `r` lowest-`phi` active edges and regrows the `r` highest-`phi`
/// pruned ones. `r` larger than either pool is clamped with a warning.
pub fn update_mask(mask: &EdgeMask, phi: &EdgeScores, r: usize) -> Result<(EdgeMask, SwapReport)> {
    if phi.len() != mask.len() {
        return Err(Error::shape("criterion scores", mask.len(), phi.len()));
    }
    let limit = mask.active_count().min(mask.pruned_count());
    if r > limit {
        log::warn!("swap count {r} exceeds pool size {limit}; clamping");
    }
    let applied = r.min(limit);
    let v = phi.values();
    let mut active: Vec<usize> = mask.active_ids().collect();
    active.sort_by(|&a, &b| v[a].total_cmp(&v[b]).then(a.cmp(&b)));
    let mut pruned: Vec<usize> = mask.pruned_ids().collect();
    pruned.sort_by(|&a, &b| v[b].total_cmp(&v[a]).then(a.cmp(&b)));
    active.truncate(applied);
    pruned.truncate(applied);

    let mut next = mask.clone();
    for &e in &active {
        next.set(e, false);
    }
    for &e in &pruned {
        next.set(e, true);
    }
    Ok((
        next,
        SwapReport {
            requested: r,
            applied,
            pruned: active,
            regrown: pruned,
        },
    ))
}
