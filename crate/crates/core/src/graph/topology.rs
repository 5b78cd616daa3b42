use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Index into the canonical edge list of an [`UndirectedGraph`].
pub type EdgeId = usize;

/// What canonicalization dropped while building a graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CanonicalReport {
    pub duplicates: usize,
    pub self_loops: usize,
}

/// Simple undirected graph with a sorted canonical edge list and a CSR view
/// holding both directions of every edge.
///
/// Edge `e` is the pair `edges()[e] = (u, v)` with `u < v`; the list is
/// sorted lexicographically, so lookups are binary searches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    num_nodes: usize,
    edges: Vec<(usize, usize)>,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    csr_edge: Vec<EdgeId>,
}

impl UndirectedGraph {
    /// Builds a graph from arbitrary (possibly directed, duplicated or
    /// self-looped) pairs. Self-loops and repeated unordered pairs are dropped
    /// and counted in the report.
    pub fn from_pairs<I>(num_nodes: usize, pairs: I) -> Result<(Self, CanonicalReport)>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut report = CanonicalReport::default();
        let mut edges = Vec::new();
        for (a, b) in pairs {
            for node in [a, b] {
                if node >= num_nodes {
                    return Err(Error::NodeOutOfRange { node, num_nodes });
                }
            }
            if a == b {
                report.self_loops += 1;
                continue;
            }
            edges.push((a.min(b), a.max(b)));
        }
        edges.sort_unstable();
        let before = edges.len();
        edges.dedup();
        report.duplicates = before - edges.len();
        Ok((Self::from_canonical(num_nodes, edges), report))
    }

    /// `edges` must already be sorted, deduplicated and free of self-loops.
    fn from_canonical(num_nodes: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut degree = vec![0usize; num_nodes];
        for &(u, v) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut row_ptr = Vec::with_capacity(num_nodes + 1);
        row_ptr.push(0);
        for d in &degree {
            row_ptr.push(row_ptr.last().unwrap() + d);
        }
        let nnz = *row_ptr.last().unwrap();
        let mut col_idx = vec![0usize; nnz];
        let mut csr_edge = vec![0usize; nnz];
        let mut fill = row_ptr[..num_nodes].to_vec();
        for (e, &(u, v)) in edges.iter().enumerate() {
            col_idx[fill[u]] = v;
            csr_edge[fill[u]] = e;
            fill[u] += 1;
            col_idx[fill[v]] = u;
            csr_edge[fill[v]] = e;
            fill[v] += 1;
        }
        // neighbour lists must come out sorted
        for node in 0..num_nodes {
            let span = row_ptr[node]..row_ptr[node + 1];
            let mut row: Vec<(usize, usize)> = col_idx[span.clone()]
                .iter()
                .copied()
                .zip(csr_edge[span.clone()].iter().copied())
                .collect();
            row.sort_unstable();
            for (slot, (c, e)) in span.zip(row) {
                col_idx[slot] = c;
                csr_edge[slot] = e;
            }
        }
        UndirectedGraph {
            num_nodes,
            edges,
            row_ptr,
            col_idx,
            csr_edge,
        }
    }

    /// Graph with no edges.
    pub fn empty(num_nodes: usize) -> Self {
        Self::from_canonical(num_nodes, Vec::new())
    }

    #[inline]
    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    #[inline]
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, e: EdgeId) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edge_index_of(&self, u: usize, v: usize) -> Option<EdgeId> {
        if u == v {
            return None;
        }
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.row_ptr[v + 1] - self.row_ptr[v]
    }

    /// Sorted neighbour ids of `v`.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.col_idx[self.row_ptr[v]..self.row_ptr[v + 1]]
    }

    /// Edge ids aligned with [`neighbors`](Self::neighbors).
    #[inline]
    pub fn incident_edges(&self, v: usize) -> &[EdgeId] {
        &self.csr_edge[self.row_ptr[v]..self.row_ptr[v + 1]]
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    /// Subgraph on the same node set keeping the edges whose bit is set.
    pub fn subgraph(&self, keep: &[bool]) -> Self {
        let edges = self
            .edges
            .iter()
            .zip(keep)
            .filter(|(_, &k)| k)
            .map(|(&e, _)| e)
            .collect();
        Self::from_canonical(self.num_nodes, edges)
    }

    /// Jaccard similarity of the open neighbourhoods of the endpoints of `e`,
    /// each excluding the other endpoint. Zero when both are empty.
    pub fn jaccard_edge_similarity(&self, e: EdgeId) -> f64 {
        let (u, v) = self.edges[e];
        let nu = self.neighbors(u);
        let nv = self.neighbors(v);
        let (mut i, mut j) = (0, 0);
        let (mut inter, mut union) = (0usize, 0usize);
        loop {
            // skip the endpoints themselves
            while i < nu.len() && nu[i] == v {
                i += 1;
            }
            while j < nv.len() && nv[j] == u {
                j += 1;
            }
            match (nu.get(i), nv.get(j)) {
                (None, None) => break,
                (Some(_), None) => {
                    union += 1;
                    i += 1;
                }
                (None, Some(_)) => {
                    union += 1;
                    j += 1;
                }
                (Some(a), Some(b)) => {
                    union += 1;
                    if a == b {
                        inter += 1;
                        i += 1;
                        j += 1;
                    } else if a < b {
                        i += 1;
                    } else {
                        j += 1;
                    }
                }
            }
        }
        if union == 0 {
            0.0
        } else {
            inter as f64 / union as f64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> UndirectedGraph {
        let pairs = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v)));
        UndirectedGraph::from_pairs(n, pairs).unwrap().0
    }

    #[test]
    fn canonicalization_drops_duplicates_and_loops() {
        let (g, rep) = UndirectedGraph::from_pairs(3, [(0, 1), (1, 0), (2, 2)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
        assert_eq!(rep, CanonicalReport { duplicates: 1, self_loops: 1 });
    }

    #[test]
    fn out_of_range_node() {
        let err = UndirectedGraph::from_pairs(2, [(0, 2)]).unwrap_err();
        assert_eq!(err, Error::NodeOutOfRange { node: 2, num_nodes: 2 });
    }

    #[test]
    fn empty_graph_is_valid() {
        let (g, _) = UndirectedGraph::from_pairs(4, core::iter::empty()).unwrap();
        assert_eq!(g.num_edges(), 0);
        assert!((0..4).all(|v| g.degree(v) == 0));
    }

    #[test]
    fn csr_is_consistent() {
        let g = UndirectedGraph::from_pairs(5, [(3, 1), (0, 4), (1, 0), (4, 3), (2, 1)])
            .unwrap()
            .0;
        for v in 0..5 {
            assert_eq!(g.degree(v), g.neighbors(v).len());
            assert!(g.neighbors(v).windows(2).all(|w| w[0] < w[1]));
            for (&w, &e) in g.neighbors(v).iter().zip(g.incident_edges(v)) {
                assert_eq!(g.edge_index_of(v, w), Some(e));
                let (a, b) = g.edge(e);
                assert!((a, b) == (v.min(w), v.max(w)));
            }
        }
        assert_eq!(g.row_ptr()[5], 2 * g.num_edges());
    }

    #[test]
    fn jaccard_closed_forms() {
        let k3 = complete(3);
        assert_eq!(k3.jaccard_edge_similarity(0), 1.0);
        let k4 = complete(4);
        for e in 0..k4.num_edges() {
            assert_eq!(k4.jaccard_edge_similarity(e), 1.0);
        }
        // two stars (0: 1,2,3) and (4: 5,6,7) bridged by 0-4
        let g = UndirectedGraph::from_pairs(
            8,
            [(0, 1), (0, 2), (0, 3), (4, 5), (4, 6), (4, 7), (0, 4)],
        )
        .unwrap()
        .0;
        let bridge = g.edge_index_of(0, 4).unwrap();
        assert_eq!(g.jaccard_edge_similarity(bridge), 0.0);
        // isolated edge: both open neighbourhoods empty
        let single = UndirectedGraph::from_pairs(2, [(0, 1)]).unwrap().0;
        assert_eq!(single.jaccard_edge_similarity(0), 0.0);
    }
}
