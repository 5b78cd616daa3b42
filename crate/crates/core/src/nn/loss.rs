use alloc::vec::Vec;

use crate::dense::Matrix;
use crate::graph::{LabeledSplit, NodeSubset};
use crate::{Error, Result};

/// Scalar loss with its gradient w.r.t. the logits.
#[derive(Debug, Clone, PartialEq)]
pub struct Loss {
    pub value: f64,
    pub grad: Matrix,
}

/// Nodes the anchor-vs-current KL divergence is averaged over.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum KlNodeSet {
    #[default]
    All,
    /// Training nodes only.
    Labeled,
}

fn log_softmax(row: &[f64]) -> Vec<f64> {
    let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lse = max + libm::log(row.iter().map(|z| libm::exp(z - max)).sum::<f64>());
    row.iter().map(|z| z - lse).collect()
}

pub fn softmax_rows(z: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(z.rows(), z.cols());
    for i in 0..z.rows() {
        for (o, l) in out.row_mut(i).iter_mut().zip(log_softmax(z.row(i))) {
            *o = libm::exp(l);
        }
    }
    out
}

/// Mean negative log-likelihood of `split`'s labels over `subset`.
pub fn cross_entropy(z: &Matrix, split: &LabeledSplit, subset: NodeSubset) -> Result<Loss> {
    cross_entropy_on(z, split.labels(), &split.nodes(subset))
}

pub fn cross_entropy_on(z: &Matrix, labels: &[usize], nodes: &[usize]) -> Result<Loss> {
    if nodes.is_empty() {
        return Err(Error::EmptySelection);
    }
    if labels.len() != z.rows() {
        return Err(Error::shape("labels", z.rows(), labels.len()));
    }
    let scale = 1.0 / nodes.len() as f64;
    let mut grad = Matrix::zeros(z.rows(), z.cols());
    let mut value = 0.0;
    for &i in nodes {
        let y = labels[i];
        if y >= z.cols() {
            return Err(Error::shape("label vs classes", z.cols(), y + 1));
        }
        let ls = log_softmax(z.row(i));
        value -= ls[y];
        for (c, g) in grad.row_mut(i).iter_mut().enumerate() {
            *g = scale * (libm::exp(ls[c]) - if c == y { 1.0 } else { 0.0 });
        }
    }
    Ok(Loss {
        value: value * scale,
        grad,
    })
}

const Q_FLOOR: f64 = 1e-12;

/// Mean over `nodes` (all rows when `None`) of `KL(softmax(anchor_i) ‖
/// softmax(current_i))`, with the current distribution clamped below at
/// 1e-12. The gradient is w.r.t. `current`.
pub fn kl_output_divergence(
    anchor: &Matrix,
    current: &Matrix,
    nodes: Option<&[usize]>,
) -> Result<Loss> {
    if anchor.rows() != current.rows() || anchor.cols() != current.cols() {
        return Err(Error::shape(
            "anchor vs current logits",
            anchor.rows() * anchor.cols(),
            current.rows() * current.cols(),
        ));
    }
    let all: Vec<usize>;
    let nodes = match nodes {
        Some(n) => n,
        None => {
            all = (0..current.rows()).collect();
            &all
        }
    };
    if nodes.is_empty() {
        return Err(Error::EmptySelection);
    }
    let scale = 1.0 / nodes.len() as f64;
    let log_floor = libm::log(Q_FLOOR);
    let mut grad = Matrix::zeros(current.rows(), current.cols());
    let mut value = 0.0;
    for &i in nodes {
        let lp = log_softmax(anchor.row(i));
        let lq = log_softmax(current.row(i));
        let q: Vec<f64> = lq.iter().map(|&l| libm::exp(l)).collect();
        let mut unclamped_mass = 0.0;
        for c in 0..lp.len() {
            let p = libm::exp(lp[c]);
            if p == 0.0 {
                continue;
            }
            let clamped = lq[c] < log_floor;
            value += p * (lp[c] - lq[c].max(log_floor));
            if !clamped {
                unclamped_mass += p;
                grad[(i, c)] -= scale * p;
            }
        }
        for (c, g) in grad.row_mut(i).iter_mut().enumerate() {
            *g += scale * q[c] * unclamped_mass;
        }
    }
    Ok(Loss {
        value: value * scale,
        grad,
    })
}

/// Fraction of `subset` whose argmax logit (lowest class on ties) equals the label.
pub fn accuracy(z: &Matrix, split: &LabeledSplit, subset: NodeSubset) -> f64 {
    let nodes = split.nodes(subset);
    if nodes.is_empty() {
        return 0.0;
    }
    let correct = nodes
        .iter()
        .filter(|&&i| {
            let row = z.row(i);
            let mut best = 0;
            for c in 1..row.len() {
                if row[c] > row[best] {
                    best = c;
                }
            }
            best == split.labels()[i]
        })
        .count();
    correct as f64 / nodes.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_logits(n: usize, c: usize, seed: u64) -> Matrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Matrix::from_fn(n, c, |_, _| rng.random_range(-3.0..3.0))
    }

    #[test]
    fn uniform_logits_give_ln_c() {
        let z = Matrix::zeros(4, 5);
        let l = cross_entropy_on(&z, &[0, 1, 2, 3], &[0, 1, 2, 3]).unwrap();
        assert!((l.value - libm::log(5.0)).abs() < 1e-15);
    }

    #[test]
    fn saturated_margin_is_near_zero() {
        let z = Matrix::from_vec(1, 3, vec![1e3, 0.0, 0.0]).unwrap();
        let l = cross_entropy_on(&z, &[0], &[0]).unwrap();
        assert!(l.value.abs() < 1e-6);
    }

    #[test]
    fn cross_entropy_matches_scalar_oracle() {
        let z = random_logits(6, 3, 1);
        let labels = [0, 2, 1, 1, 0, 2];
        let nodes = [0, 2, 5];
        let l = cross_entropy_on(&z, &labels, &nodes).unwrap();
        let mut oracle = 0.0;
        for &i in &nodes {
            let denom: f64 = (0..3).map(|c| z[(i, c)].exp()).sum();
            oracle += -(z[(i, labels[i])].exp() / denom).ln();
        }
        assert!((l.value - oracle / 3.0).abs() < 1e-12);
    }

    #[test]
    fn empty_selection_errors() {
        let z = Matrix::zeros(2, 2);
        assert_eq!(cross_entropy_on(&z, &[0, 0], &[]).unwrap_err(), Error::EmptySelection);
    }

    #[test]
    fn kl_identities() {
        let z = random_logits(5, 4, 2);
        let l = kl_output_divergence(&z, &z, None).unwrap();
        assert_eq!(l.value, 0.0);
        assert!(l.grad.as_slice().iter().all(|g| g.abs() < 1e-15));
        // p = (1, 0) via a huge margin, q = (0.5, 0.5)
        let p = Matrix::from_vec(2, 2, vec![800.0, 0.0, 800.0, 0.0]).unwrap();
        let q = Matrix::zeros(2, 2);
        let l = kl_output_divergence(&p, &q, None).unwrap();
        assert!((l.value - core::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn kl_matches_scalar_oracle_and_is_nonnegative() {
        let a = random_logits(7, 3, 3);
        let b = random_logits(7, 3, 4);
        let l = kl_output_divergence(&a, &b, Some(&[1, 3, 4])).unwrap();
        let mut oracle = 0.0;
        for i in [1, 3, 4] {
            let za: f64 = (0..3).map(|c| a[(i, c)].exp()).sum();
            let zb: f64 = (0..3).map(|c| b[(i, c)].exp()).sum();
            for c in 0..3 {
                let p = a[(i, c)].exp() / za;
                let q = b[(i, c)].exp() / zb;
                oracle += p * (p / q).ln();
            }
        }
        assert!(l.value >= 0.0);
        assert!((l.value - oracle / 3.0).abs() < 1e-12);
    }

    #[test]
    fn loss_gradients_match_finite_differences() {
        let a = random_logits(4, 3, 5);
        let mut b = random_logits(4, 3, 6);
        b[(2, 1)] = -40.0; // pushes q below the clamp floor
        let labels = [2, 0, 1, 1];
        let h = 1e-6;
        for i in 0..4 {
            for c in 0..3 {
                let mut plus = b.clone();
                plus[(i, c)] += h;
                let mut minus = b.clone();
                minus[(i, c)] -= h;
                let kl = |z: &Matrix| kl_output_divergence(&a, z, None).unwrap().value;
                let fd = (kl(&plus) - kl(&minus)) / (2.0 * h);
                let an = kl_output_divergence(&a, &b, None).unwrap().grad[(i, c)];
                assert!((fd - an).abs() < 1e-7, "kl ({i},{c}): {fd} vs {an}");
                let ce = |z: &Matrix| cross_entropy_on(z, &labels, &[0, 1, 3]).unwrap().value;
                let fd = (ce(&plus) - ce(&minus)) / (2.0 * h);
                let an = cross_entropy_on(&b, &labels, &[0, 1, 3]).unwrap().grad[(i, c)];
                assert!((fd - an).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn softmax_rows_sum_to_one() {
        let z = random_logits(20, 7, 8);
        let s = softmax_rows(&z);
        for i in 0..20 {
            assert!((s.row(i).iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
