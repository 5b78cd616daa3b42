use alloc::vec::Vec;

use crate::dense::Matrix;
use crate::graph::UndirectedGraph;

/// A real symmetric linear map, applied matrix-free.
pub trait SymmetricOperator {
    fn dim(&self) -> usize;

    /// `y = W x`
    fn apply(&self, x: &[f64], y: &mut [f64]);

    fn to_dense(&self) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        let mut unit = alloc::vec![0.0; n];
        let mut col = alloc::vec![0.0; n];
        for j in 0..n {
            unit[j] = 1.0;
            self.apply(&unit, &mut col);
            for i in 0..n {
                m[(i, j)] = col[i];
            }
            unit[j] = 0.0;
        }
        m
    }
}

impl SymmetricOperator for Matrix {
    fn dim(&self) -> usize {
        self.rows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.matvec(x, y);
    }
}

/// Adjacency with `W[u,v] = W[v,u] = weights[e]` for each canonical edge.
pub struct WeightedAdjacency<'a> {
    graph: &'a UndirectedGraph,
    weights: &'a [f64],
}

impl<'a> WeightedAdjacency<'a> {
    pub fn new(graph: &'a UndirectedGraph, weights: &'a [f64]) -> Self {
        assert_eq!(graph.num_edges(), weights.len(), "one weight per edge");
        WeightedAdjacency { graph, weights }
    }
}

impl SymmetricOperator for WeightedAdjacency<'_> {
    fn dim(&self) -> usize {
        self.graph.num_nodes()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for (&(u, v), &w) in self.graph.edges().iter().zip(self.weights) {
            y[u] += w * x[v];
            y[v] += w * x[u];
        }
    }
}

/// Combinatorial Laplacian `D − W` of a weighted graph.
pub struct WeightedLaplacian<'a> {
    adjacency: WeightedAdjacency<'a>,
    degrees: Vec<f64>,
}

impl<'a> WeightedLaplacian<'a> {
    pub fn new(graph: &'a UndirectedGraph, weights: &'a [f64]) -> Self {
        let mut degrees = alloc::vec![0.0; graph.num_nodes()];
        for (&(u, v), &w) in graph.edges().iter().zip(weights) {
            degrees[u] += w;
            degrees[v] += w;
        }
        WeightedLaplacian {
            adjacency: WeightedAdjacency::new(graph, weights),
            degrees,
        }
    }
}

impl SymmetricOperator for WeightedLaplacian<'_> {
    fn dim(&self) -> usize {
        self.degrees.len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.adjacency.apply(x, y);
        for ((yi, &xi), &d) in y.iter_mut().zip(x).zip(&self.degrees) {
            *yi = d * xi - *yi;
        }
    }
}
