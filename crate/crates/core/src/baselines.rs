//! Reference sparsifiers and the endpoint-relocation perturbation.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{prune_count, EdgeMask, UndirectedGraph};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineKind {
    Random,
    LocalSimilarity,
}

impl BaselineKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BaselineKind::Random => "random",
            BaselineKind::LocalSimilarity => "local_similarity",
        }
    }

    /// Mask with `⌊sparsity·|E|⌋` edges removed.
    pub fn sparsify(self, g: &UndirectedGraph, sparsity: f64, seed: u64) -> Result<EdgeMask> {
        match self {
            BaselineKind::Random => random_sparsify(g, sparsity, seed),
            BaselineKind::LocalSimilarity => local_similarity_sparsify(g, sparsity),
        }
    }
}

impl core::str::FromStr for BaselineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(BaselineKind::Random),
            "local_similarity" => Ok(BaselineKind::LocalSimilarity),
            other => Err(Error::invalid(alloc::format!("unknown baseline `{other}`"))),
        }
    }
}

fn check_sparsity(s: f64) -> Result<()> {
    if !(0.0..1.0).contains(&s) {
        return Err(Error::invalid(alloc::format!("sparsity must lie in [0, 1), got {s}")));
    }
    Ok(())
}

pub fn random_sparsify(g: &UndirectedGraph, sparsity: f64, seed: u64) -> Result<EdgeMask> {
    check_sparsity(sparsity)?;
    let m = g.num_edges();
    let mut ids: Vec<usize> = (0..m).collect();
    ids.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut mask = EdgeMask::full(m);
    for &e in &ids[..prune_count(sparsity, m)] {
        mask.set(e, false);
    }
    Ok(mask)
}

/// Per-edge local-similarity score; lower means more important.
///
/// Each node ranks its incident edges by descending Jaccard similarity
/// (rank 1 is the most similar, ties go to the lower edge id). An edge scores
/// the larger of `ln(1 + rank) / ln(1 + deg)` over its two endpoints.
pub fn local_similarity_scores(g: &UndirectedGraph) -> Vec<f64> {
    let jaccard: Vec<f64> = (0..g.num_edges()).map(|e| g.jaccard_edge_similarity(e)).collect();
    let mut score = alloc::vec![0.0f64; g.num_edges()];
    for v in 0..g.num_nodes() {
        let mut inc: Vec<usize> = g.incident_edges(v).to_vec();
        if inc.is_empty() {
            continue;
        }
        inc.sort_by(|&a, &b| jaccard[b].total_cmp(&jaccard[a]).then(a.cmp(&b)));
        let denom = libm::log(1.0 + inc.len() as f64);
        for (i, &e) in inc.iter().enumerate() {
            let s = libm::log(2.0 + i as f64) / denom;
            score[e] = score[e].max(s);
        }
    }
    score
}

pub fn local_similarity_sparsify(g: &UndirectedGraph, sparsity: f64) -> Result<EdgeMask> {
    check_sparsity(sparsity)?;
    let score = local_similarity_scores(g);
    let mut order: Vec<usize> = (0..g.num_edges()).collect();
    order.sort_by(|&a, &b| score[a].total_cmp(&score[b]).then(a.cmp(&b)));
    let keep = g.num_edges() - prune_count(sparsity, g.num_edges());
    let mut mask = EdgeMask::empty(g.num_edges());
    for &e in &order[..keep] {
        mask.set(e, true);
    }
    Ok(mask)
}

/// Relocates one endpoint of `⌊fraction·|E|⌋` random edges.
///
/// The moved endpoint is chosen by a coin flip and its new node uniformly at
/// random; candidates that would form a self-loop or duplicate are redrawn up
/// to 100 times, after which the edge stays where it was.
pub fn perturb_edges(g: &UndirectedGraph, fraction: f64, seed: u64) -> Result<UndirectedGraph> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::invalid(alloc::format!(
            "perturbation fraction must lie in [0, 1], got {fraction}"
        )));
    }
    let n = g.num_nodes();
    let m = g.num_edges();
    let count = prune_count(fraction, m);
    if count == 0 {
        return Ok(g.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ids: Vec<usize> = (0..m).collect();
    ids.shuffle(&mut rng);
    let mut edges: Vec<(usize, usize)> = g.edges().to_vec();
    let mut present: BTreeSet<(usize, usize)> = edges.iter().copied().collect();
    for &e in &ids[..count] {
        let (u, v) = edges[e];
        let anchor = if rng.random_bool(0.5) { u } else { v };
        for _ in 0..100 {
            let w = rng.random_range(0..n);
            let cand = (anchor.min(w), anchor.max(w));
            if w == anchor || present.contains(&cand) {
                continue;
            }
            present.remove(&(u, v));
            present.insert(cand);
            edges[e] = cand;
            break;
        }
    }
    let (out, _) = UndirectedGraph::from_pairs(n, edges)?;
    Ok(out)
}

/// Newman modularity of a node partition on an unweighted graph.
pub fn modularity(g: &UndirectedGraph, community: &[usize]) -> f64 {
    let m = g.num_edges() as f64;
    if m == 0.0 {
        return 0.0;
    }
    let k = community.iter().copied().max().map_or(0, |c| c + 1);
    let mut inside = alloc::vec![0.0; k];
    let mut degree = alloc::vec![0.0; k];
    for &(u, v) in g.edges() {
        if community[u] == community[v] {
            inside[community[u]] += 1.0;
        }
    }
    for v in 0..g.num_nodes() {
        degree[community[v]] += g.degree(v) as f64;
    }
    inside
        .iter()
        .zip(&degree)
        .map(|(l, d)| l / m - (d / (2.0 * m)) * (d / (2.0 * m)))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_sbm, SbmParams};

    fn cleared(mask: &EdgeMask) -> Vec<usize> {
        mask.pruned_ids().collect()
    }

    #[test]
    fn random_cardinality_and_determinism() {
        let pairs: Vec<(usize, usize)> = (0..1000).map(|i| (i, i + 1)).collect();
        let g = UndirectedGraph::from_pairs(1001, pairs).unwrap().0;
        let a = random_sparsify(&g, 0.5, 3).unwrap();
        assert_eq!(a.active_count(), 500);
        assert_eq!(a, random_sparsify(&g, 0.5, 3).unwrap());
        assert_ne!(a, random_sparsify(&g, 0.5, 4).unwrap());
        assert_eq!(random_sparsify(&g, 0.0, 3).unwrap(), EdgeMask::full(1000));
        assert!(random_sparsify(&g, 1.0, 3).is_err());
    }

    #[test]
    fn triangle_with_pendant_drops_pendant() {
        let g = UndirectedGraph::from_pairs(4, [(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap().0;
        let mask = local_similarity_sparsify(&g, 0.25).unwrap();
        assert_eq!(cleared(&mask), vec![g.edge_index_of(2, 3).unwrap()]);
        assert_eq!(local_similarity_sparsify(&g, 0.0).unwrap(), EdgeMask::full(4));
    }

    #[test]
    fn star_uses_tie_order() {
        let g = UndirectedGraph::from_pairs(6, (1..6).map(|v| (0, v))).unwrap().0;
        let scores = local_similarity_scores(&g);
        // hub ranks its leaves 1..5 by id; leaves contribute ln2/ln2 = 1
        for e in 0..5 {
            let hub = libm::log(2.0 + e as f64) / libm::log(6.0);
            assert!((scores[e] - hub.max(1.0)).abs() < 1e-15);
        }
        let mask = local_similarity_sparsify(&g, 0.4).unwrap();
        assert_eq!(cleared(&mask), vec![3, 4]);
        assert_eq!(mask, local_similarity_sparsify(&g, 0.4).unwrap());
    }

    #[test]
    fn perturbation_preserves_counts() {
        let d = generate_sbm(&SbmParams::default()).unwrap();
        assert_eq!(perturb_edges(&d.graph, 0.0, 1).unwrap(), d.graph);
        for seed in 0..3 {
            let p = perturb_edges(&d.graph, 0.3, seed).unwrap();
            assert_eq!(p.num_edges(), d.num_edges());
            assert_eq!(p.num_nodes(), d.num_nodes());
            assert_ne!(p, d.graph);
        }
        assert!(perturb_edges(&d.graph, 1.5, 0).is_err());
    }

    #[test]
    fn perturbation_lowers_planted_modularity() {
        let d = generate_sbm(&SbmParams::default()).unwrap();
        let blocks = d.split.labels();
        let before = modularity(&d.graph, blocks);
        let after: f64 = (0..10)
            .map(|s| modularity(&perturb_edges(&d.graph, 0.3, s).unwrap(), blocks))
            .sum::<f64>()
            / 10.0;
        assert!(after < before, "{after} vs {before}");
    }

    #[test]
    fn modularity_of_two_triangles() {
        let g = UndirectedGraph::from_pairs(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
            .unwrap()
            .0;
        // two components, each with half the edges: 2 · (1/2 − 1/4)
        assert!((modularity(&g, &[0, 0, 0, 1, 1, 1]) - 0.5).abs() < 1e-15);
    }
}
