use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::symmetric::{dense_eig_oracle, tridiagonal_eig};
use super::{EigenPairs, SpectralSummary, SymmetricOperator, Which};
use crate::dense::{axpy, dot, norm2, Matrix};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LanczosOptions {
    /// Relative residual target: `‖Wv − λv‖ ≤ tol · ‖W‖`.
    pub tol: f64,
    /// Krylov dimension cap; `None` means the operator dimension.
    pub max_iter: Option<usize>,
    /// Operators up to this size are decomposed densely instead.
    pub dense_fallback_max: usize,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions {
            tol: 1e-10,
            max_iter: None,
            dense_fallback_max: 256,
            seed: 0x5eed,
        }
    }
}

/// The `k` largest and `k` smallest eigenpairs of `op`.
///
/// Small operators go through the dense solver. Larger ones run Lanczos with
/// full reorthogonalization; on breakdown (an invariant subspace was found)
/// the iteration restarts from a fresh random vector orthogonal to the basis,
/// so repeated eigenvalues are eventually picked up as the basis grows.
pub fn extremal_eig<O: SymmetricOperator + ?Sized>(
    op: &O,
    k: usize,
    opts: &LanczosOptions,
) -> Result<SpectralSummary> {
    let n = op.dim();
    if k == 0 || 2 * k > n {
        return Err(Error::invalid(alloc::format!(
            "need 1 <= k <= n/2 for extremal eigenpairs (k={k}, n={n})"
        )));
    }
    if n <= opts.dense_fallback_max {
        let full = dense_eig_oracle(&op.to_dense())?;
        let summary = SpectralSummary {
            top: full.slice(n - k..n, Which::Top(k)),
            bottom: full.slice(0..k, Which::Bottom(k)),
            k,
            n,
            max_residual: 0.0,
        };
        let max_residual = worst_residual(op, &summary);
        return Ok(SpectralSummary {
            max_residual,
            ..summary
        });
    }
    lanczos(op, k, opts)
}

fn lanczos<O: SymmetricOperator + ?Sized>(
    op: &O,
    k: usize,
    opts: &LanczosOptions,
) -> Result<SpectralSummary> {
    let n = op.dim();
    let max_dim = opts.max_iter.unwrap_or(n).clamp(2 * k, n);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(max_dim);
    let mut alpha: Vec<f64> = Vec::with_capacity(max_dim);
    let mut beta: Vec<f64> = Vec::with_capacity(max_dim);
    let mut q = random_unit(&mut rng, n, &basis).expect("n > 0");
    let mut w = vec![0.0; n];
    let mut anorm = 0.0f64;

    loop {
        op.apply(&q, &mut w);
        let a = dot(&q, &w);
        axpy(-a, &q, &mut w);
        if let (Some(prev), Some(&b)) = (basis.last(), beta.last()) {
            axpy(-b, prev, &mut w);
        }
        basis.push(q.clone());
        alpha.push(a);
        // two passes of classical Gram-Schmidt against the whole basis
        for _ in 0..2 {
            for v in &basis {
                let c = dot(v, &w);
                axpy(-c, v, &mut w);
            }
        }
        let b = norm2(&w);
        anorm = anorm.max(a.abs() + b + beta.last().copied().unwrap_or(0.0));
        let m = basis.len();
        let breakdown = b <= 1e-12 * anorm.max(f64::MIN_POSITIVE);
        let at_limit = m >= max_dim;

        let check = m >= 2 * k && (m % 5 == 0 || breakdown || at_limit);
        if check {
            let (theta, y) = tridiagonal_eig(&alpha, &beta)?;
            let coupling = if breakdown { 0.0 } else { b };
            let wanted = (0..k).chain(m - k..m);
            let worst = wanted
                .map(|i| (coupling * y[(m - 1, i)]).abs())
                .fold(0.0f64, f64::max);
            let scale = theta.iter().fold(0.0f64, |s, t| s.max(t.abs())).max(f64::MIN_POSITIVE);
            if worst <= opts.tol * scale || m == n {
                return Ok(ritz_summary(op, k, &basis, &theta, &y));
            }
            if at_limit {
                return Err(Error::NoConvergence {
                    iterations: m,
                    worst_residual: worst / scale,
                });
            }
        }
        if breakdown {
            match random_unit(&mut rng, n, &basis) {
                Some(fresh) => {
                    beta.push(0.0);
                    q = fresh;
                }
                None => {
                    let (theta, y) = tridiagonal_eig(&alpha, &beta)?;
                    return Ok(ritz_summary(op, k, &basis, &theta, &y));
                }
            }
        } else {
            beta.push(b);
            q = w.iter().map(|x| x / b).collect();
        }
    }
}

/// Random unit vector orthogonal to `basis`, or `None` if it spans everything.
fn random_unit(rng: &mut ChaCha8Rng, n: usize, basis: &[Vec<f64>]) -> Option<Vec<f64>> {
    if basis.len() >= n {
        return None;
    }
    for _ in 0..8 {
        let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        for _ in 0..2 {
            for b in basis {
                let c = dot(b, &v);
                axpy(-c, b, &mut v);
            }
        }
        let nrm = norm2(&v);
        if nrm > 1e-8 {
            v.iter_mut().for_each(|x| *x /= nrm);
            return Some(v);
        }
    }
    None
}

fn ritz_summary<O: SymmetricOperator + ?Sized>(
    op: &O,
    k: usize,
    basis: &[Vec<f64>],
    theta: &[f64],
    y: &Matrix,
) -> SpectralSummary {
    let n = op.dim();
    let m = basis.len();
    let build = |cols: core::ops::Range<usize>, which: Which| {
        let width = cols.len();
        let mut vectors = Matrix::zeros(n, width);
        for (out, c) in cols.clone().enumerate() {
            let mut v = vec![0.0; n];
            for (j, qj) in basis.iter().enumerate() {
                axpy(y[(j, c)], qj, &mut v);
            }
            let nrm = norm2(&v);
            for i in 0..n {
                vectors[(i, out)] = v[i] / nrm;
            }
        }
        EigenPairs {
            values: theta[cols].to_vec(),
            vectors,
            which,
        }
    };
    let summary = SpectralSummary {
        top: build(m - k..m, Which::Top(k)),
        bottom: build(0..k, Which::Bottom(k)),
        k,
        n,
        max_residual: 0.0,
    };
    let max_residual = worst_residual(op, &summary);
    SpectralSummary {
        max_residual,
        ..summary
    }
}

fn worst_residual<O: SymmetricOperator + ?Sized>(op: &O, s: &SpectralSummary) -> f64 {
    let n = op.dim();
    let mut y = vec![0.0; n];
    let mut worst = 0.0f64;
    for pairs in [&s.top, &s.bottom] {
        for c in 0..pairs.len() {
            let v = pairs.vectors.column(c);
            op.apply(&v, &mut y);
            let r: f64 = y
                .iter()
                .zip(&v)
                .map(|(a, b)| {
                    let r = a - pairs.values[c] * b;
                    r * r
                })
                .sum();
            worst = worst.max(libm::sqrt(r));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_sbm, SbmParams, UndirectedGraph};
    use crate::spectral::WeightedAdjacency;

    #[test]
    fn path_graph_p3() {
        let g = UndirectedGraph::from_pairs(3, [(0, 1), (1, 2)]).unwrap().0;
        let w = [1.0, 1.0];
        let op = WeightedAdjacency::new(&g, &w);
        let s = extremal_eig(&op, 1, &LanczosOptions::default()).unwrap();
        let r2 = core::f64::consts::SQRT_2;
        assert!((s.top.values[0] - r2).abs() < 1e-12);
        assert!((s.bottom.values[0] + r2).abs() < 1e-12);
    }

    #[test]
    fn rejects_k_too_large() {
        let m = Matrix::identity(3);
        assert!(extremal_eig(&m, 2, &LanczosOptions::default()).is_err());
        assert!(extremal_eig(&m, 0, &LanczosOptions::default()).is_err());
    }

    #[test]
    fn half_spectrum_equals_dense_partition() {
        let mut m = Matrix::zeros(6, 6);
        for i in 0..6 {
            for j in 0..6 {
                m[(i, j)] = ((i * 7 + j * 7) % 5) as f64 - 2.0 + if i == j { i as f64 } else { 0.0 };
            }
        }
        let dense = dense_eig_oracle(&m).unwrap();
        let forced = LanczosOptions {
            dense_fallback_max: 0,
            ..Default::default()
        };
        let s = extremal_eig(&m, 3, &forced).unwrap();
        for i in 0..3 {
            assert!((s.bottom.values[i] - dense.values[i]).abs() < 1e-9);
            assert!((s.top.values[i] - dense.values[3 + i]).abs() < 1e-9);
        }
    }

    #[test]
    fn lanczos_matches_dense_on_sbm() {
        let d = generate_sbm(&SbmParams::default()).unwrap();
        let w: Vec<f64> = (0..d.num_edges()).map(|e| 0.2 + 0.8 * ((e * 37 % 101) as f64 / 101.0)).collect();
        let op = WeightedAdjacency::new(&d.graph, &w);
        let forced = LanczosOptions {
            dense_fallback_max: 0,
            ..Default::default()
        };
        let s = extremal_eig(&op, 20, &forced).unwrap();
        let dense = dense_eig_oracle(&op.to_dense()).unwrap();
        let n = dense.values.len();
        for i in 0..20 {
            assert!((s.bottom.values[i] - dense.values[i]).abs() < 1e-6);
            assert!((s.top.values[i] - dense.values[n - 20 + i]).abs() < 1e-6);
        }
        let norm = dense.values.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        assert!(s.max_residual <= 1e-6 * norm, "residual {}", s.max_residual);
        for c in 0..20 {
            let nrm = norm2(&s.top.vectors.column(c));
            assert!((nrm - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn breakdown_restart_recovers_disconnected_spectrum() {
        // 300 isolated edges: adjacency eigenvalues are ±1 each 300 times
        let pairs: Vec<(usize, usize)> = (0..300).map(|i| (2 * i, 2 * i + 1)).collect();
        let g = UndirectedGraph::from_pairs(600, pairs).unwrap().0;
        let w = vec![1.0; 300];
        let op = WeightedAdjacency::new(&g, &w);
        let s = extremal_eig(&op, 3, &LanczosOptions::default()).unwrap();
        for i in 0..3 {
            assert!((s.top.values[i] - 1.0).abs() < 1e-9);
            assert!((s.bottom.values[i] + 1.0).abs() < 1e-9);
        }
    }
}
