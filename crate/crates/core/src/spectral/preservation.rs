use alloc::vec::Vec;

use super::{
    dense_eig_oracle, extremal_eig, LanczosOptions, SymmetricOperator, WeightedAdjacency,
    WeightedLaplacian, DENSE_LIMIT,
};
use crate::graph::{EdgeMask, EdgeScores, UndirectedGraph};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    Adjacency,
    /// Combinatorial `L = D − W`.
    Laplacian,
}

impl MatrixKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MatrixKind::Adjacency => "adjacency",
            MatrixKind::Laplacian => "laplacian",
        }
    }
}

impl core::str::FromStr for MatrixKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adjacency" => Ok(MatrixKind::Adjacency),
            "laplacian" => Ok(MatrixKind::Laplacian),
            other => Err(Error::invalid(alloc::format!("unknown matrix kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreservationTerm {
    pub full: f64,
    pub sparse: f64,
    pub relative_error: f64,
    /// The denominator `|full|` was below `eps_lambda` and got clamped.
    pub clamped: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreservationReport {
    pub ratio: f64,
    pub requested_k: usize,
    /// `min(requested_k, n)`.
    pub k: usize,
    pub matrix_kind: MatrixKind,
    pub terms: Vec<PreservationTerm>,
}

impl PreservationReport {
    pub fn k_was_clamped(&self) -> bool {
        self.k < self.requested_k
    }

    pub fn clamped_terms(&self) -> usize {
        self.terms.iter().filter(|t| t.clamped).count()
    }
}

/// Summed relative error of the `k` largest-magnitude eigenvalues of the
/// full graph against the sparse one, paired by descending magnitude. Both
/// graphs are `g` with their own edge weights and gates.
pub fn spectral_preservation_ratio(
    g: &UndirectedGraph,
    full: (&EdgeScores, &EdgeMask),
    sparse: (&EdgeScores, &EdgeMask),
    k: usize,
    kind: MatrixKind,
    eps_lambda: f64,
) -> Result<PreservationReport> {
    let full_w = full.0.gated(full.1)?;
    let sparse_w = sparse.0.gated(sparse.1)?;
    for (what, w) in [("full graph weights", &full_w), ("sparse graph weights", &sparse_w)] {
        if w.len() != g.num_edges() {
            return Err(Error::shape(what, g.num_edges(), w.len()));
        }
    }
    let n = g.num_nodes();
    let k_used = k.min(n);
    let lam_full = largest_magnitude(g, &full_w, k_used, kind)?;
    let lam_sparse = if full_w == sparse_w {
        lam_full.clone()
    } else {
        largest_magnitude(g, &sparse_w, k_used, kind)?
    };
    let terms: Vec<PreservationTerm> = lam_full
        .iter()
        .zip(&lam_sparse)
        .map(|(&a, &b)| {
            let clamped = a.abs() < eps_lambda;
            PreservationTerm {
                full: a,
                sparse: b,
                relative_error: (a - b).abs() / a.abs().max(eps_lambda),
                clamped,
            }
        })
        .collect();
    Ok(PreservationReport {
        ratio: terms.iter().map(|t| t.relative_error).sum(),
        requested_k: k,
        k: k_used,
        matrix_kind: kind,
        terms,
    })
}

/// `k` eigenvalues of largest magnitude, sorted by descending magnitude
/// (ties: larger algebraic value first).
fn largest_magnitude(
    g: &UndirectedGraph,
    weights: &[f64],
    k: usize,
    kind: MatrixKind,
) -> Result<Vec<f64>> {
    let n = g.num_nodes();
    let adjacency;
    let laplacian;
    let op: &dyn SymmetricOperator = match kind {
        MatrixKind::Adjacency => {
            adjacency = WeightedAdjacency::new(g, weights);
            &adjacency
        }
        MatrixKind::Laplacian => {
            laplacian = WeightedLaplacian::new(g, weights);
            &laplacian
        }
    };
    let mut values = if n <= DENSE_LIMIT {
        dense_eig_oracle(&op.to_dense())?.values
    } else {
        let per_end = k.min(n / 2).max(1);
        let s = extremal_eig(op, per_end, &LanczosOptions::default())?;
        let mut v = s.bottom.values;
        v.extend(s.top.values);
        v
    };
    values.sort_by(|a, b| b.abs().total_cmp(&a.abs()).then(b.total_cmp(a)));
    values.truncate(k);
    Ok(values)
}
