use super::*;
use crate::graph::{generate_sbm, Dataset, EdgeMask, SbmParams};
use alloc::vec;
use alloc::vec::Vec;

fn small() -> Dataset {
    generate_sbm(&SbmParams {
        nodes_per_block: 20,
        p_in: 0.3,
        p_out: 0.05,
        feat_dim: 4,
        ..Default::default()
    })
    .unwrap()
}

fn quick(data: &Dataset) -> GstConfig {
    let _ = data;
    GstConfig {
        anchor_epochs: 5,
        sparse_epochs: 12,
        update_interval: 3,
        lr: 0.01,
        spectral_k: 4,
        ..Default::default()
    }
}

#[test]
fn single_anchor_epoch_is_the_anchor() {
    let data = small();
    let cfg = GstConfig {
        anchor_epochs: 1,
        ..quick(&data)
    };
    let a = train_anchor(&data, &cfg).unwrap();
    assert_eq!(a.anchor.epoch, 1);
    assert_eq!(a.history.len(), 1);
    assert_eq!(a.anchor.theta, a.state.model.gcn);
    assert!(a.anchor.topo_scores.values().iter().all(|&t| t >= 0.0));
}

#[test]
fn deterministic_pipeline() {
    let data = small();
    let cfg = quick(&data);
    let a = run_gst(&data, &cfg).unwrap();
    let b = run_gst(&data, &cfg).unwrap();
    assert_eq!(a, b);
}

#[test]
fn sparse_phase_invariants() {
    let data = small();
    let cfg = quick(&data);
    let out = run_gst(&data, &cfg).unwrap();
    let s = &out.sparse;
    let kept = data.num_edges() - crate::graph::prune_count(cfg.sparsity, data.num_edges());
    assert_eq!(s.one_shot.active_count(), kept);
    assert_eq!(s.final_mask.active_count(), kept);
    assert_eq!(s.mask.active_count(), kept);
    assert_eq!(s.updates.len(), 4);
    for (i, u) in s.updates.iter().enumerate() {
        assert_eq!(u.interval, i + 1);
        assert_eq!(u.scheduled, scheduler_upsilon(u.interval, 4, 0.3, 1.0, kept));
        assert_eq!(u.pruned.len(), u.regrown.len());
        assert_eq!(s.history[u.epoch - 1].swap_count, u.pruned.len());
    }
    assert_eq!(s.updates.last().unwrap().scheduled, 0);
    assert!(s.history.iter().all(|r| r.active_edges == kept));
    let intervals: Vec<usize> = s.history.iter().map(|r| r.interval).collect();
    assert_eq!(intervals, vec![1, 1, 1, 2, 2, 2, 3, 3, 3, 4, 4, 4]);
}

#[test]
fn anchor_untouched_by_sparse_phase() {
    let data = small();
    let cfg = quick(&data);
    let anchor = train_anchor(&data, &cfg).unwrap();
    let before = anchor.clone();
    run_sparse_phase(&data, &anchor, &cfg).unwrap();
    assert_eq!(anchor, before);
}

#[test]
fn zero_sparsity_never_swaps() {
    let data = small();
    let cfg = GstConfig {
        sparsity: 0.0,
        ..quick(&data)
    };
    let out = run_gst(&data, &cfg).unwrap();
    assert_eq!(out.sparse.final_mask, EdgeMask::full(data.num_edges()));
    assert!(out.sparse.history.iter().all(|r| r.swap_count == 0 && r.sparsity == 0.0));
}

#[test]
fn interval_beyond_phase_keeps_one_shot() {
    let data = small();
    let cfg = GstConfig {
        update_interval: 50,
        ..quick(&data)
    };
    let out = run_gst(&data, &cfg).unwrap();
    assert!(out.sparse.updates.is_empty());
    assert_eq!(out.sparse.final_mask, out.sparse.one_shot);
}

#[test]
fn extreme_sparsity_selection() {
    let grid = [0.1, 0.2, 0.3, 0.4];
    assert_eq!(select_extreme_sparsity(&grid, 0.9, 1.0, |_| Ok(0.0)).unwrap(), 0.4);
    // every pruned level loses accuracy
    assert_eq!(select_extreme_sparsity(&grid, 1.0, 0.0, |_| Ok(0.5)).unwrap(), 0.0);
    let accs = |s: f64| Ok(if s < 0.25 || s > 0.35 { 0.8 } else { 0.7 });
    assert_eq!(select_extreme_sparsity(&grid, 0.8, 0.0, accs).unwrap(), 0.4);
    assert_eq!(select_extreme_sparsity(&[], 0.8, 0.0, accs), Err(crate::Error::EmptyGrid));
    assert!(select_extreme_sparsity(&[0.3, 0.2], 0.8, 0.0, accs).is_err());
}

#[test]
fn sweep_with_vacuous_tolerance() {
    let data = small();
    let cfg = quick(&data);
    let out = find_extreme_sparsity(&data, &cfg, 1.0, &[0.1, 0.2, 0.5]).unwrap();
    assert_eq!(out.extreme_sparsity, 0.5);
    assert_eq!(out.points.len(), 3);
}

#[test]
fn sbm_anchor_is_accurate() {
    let data = generate_sbm(&SbmParams::default()).unwrap();
    let cfg = GstConfig {
        anchor_epochs: 100,
        ..Default::default()
    };
    let a = train_anchor(&data, &cfg).unwrap();
    assert!(a.anchor.val_score >= 0.9, "val {}", a.anchor.val_score);
}
