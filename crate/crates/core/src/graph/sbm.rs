use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{Dataset, LabeledSplit, UndirectedGraph};
use crate::dense::Matrix;
use crate::{Error, Result};

/// Planted-partition synthetic node classification task.
#[derive(Debug, Clone, PartialEq)]
pub struct SbmParams {
    pub seed: u64,
    pub num_blocks: usize,
    pub nodes_per_block: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub feat_dim: usize,
    /// Mean offset added to coordinate `block` of each node's features.
    pub feat_shift: f64,
}

impl Default for SbmParams {
    fn default() -> Self {
        SbmParams {
            seed: 0,
            num_blocks: 2,
            nodes_per_block: 100,
            p_in: 0.1,
            p_out: 0.01,
            feat_dim: 16,
            feat_shift: 1.0,
        }
    }
}

/// Samples a stochastic block model graph with Gaussian features and a
/// 60/20/20 train/val/test split. Node `i` belongs to block
/// `i / nodes_per_block`; its label is that block.
pub fn generate_sbm(params: &SbmParams) -> Result<Dataset> {
    let n = params.num_blocks * params.nodes_per_block;
    if n == 0 {
        return Err(Error::invalid("stochastic block model needs at least one node"));
    }
    for (name, p) in [("p_in", params.p_in), ("p_out", params.p_out)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid(alloc::format!("{name}={p} is not a probability")));
        }
    }
    if params.feat_shift != 0.0 && params.feat_dim < params.num_blocks {
        return Err(Error::invalid(alloc::format!(
            "feat_dim {} < num_blocks {} with a nonzero feature shift",
            params.feat_dim, params.num_blocks
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let block = |i: usize| i / params.nodes_per_block;

    let mut pairs = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let p = if block(u) == block(v) {
                params.p_in
            } else {
                params.p_out
            };
            if rng.random_bool(p) {
                pairs.push((u, v));
            }
        }
    }
    let (graph, _) = UndirectedGraph::from_pairs(n, pairs)?;

    let mut features = Matrix::zeros(n, params.feat_dim);
    for i in 0..n {
        for j in 0..params.feat_dim {
            features[(i, j)] = rng.sample(StandardNormal);
        }
        if params.feat_shift != 0.0 {
            features[(i, block(i))] += params.feat_shift;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let n_train = (n * 6) / 10;
    let n_val = (n * 2) / 10;
    let mut train = alloc::vec![false; n];
    let mut val = alloc::vec![false; n];
    let mut test = alloc::vec![false; n];
    for (rank, &node) in order.iter().enumerate() {
        if rank < n_train {
            train[node] = true;
        } else if rank < n_train + n_val {
            val[node] = true;
        } else {
            test[node] = true;
        }
    }
    let labels = (0..n).map(block).collect();
    let split = LabeledSplit::new(labels, params.num_blocks, train, val, test)?;
    Dataset::new(graph, features, split)
}
