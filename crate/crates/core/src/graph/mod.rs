//! Graphs, node features, labels, edge masks and the GCN propagation operator.

mod mask;
mod normalize;
mod sbm;
mod split;
mod topology;

pub use mask::{graph_sparsity, prune_count, EdgeMask, EdgeScores};
pub use normalize::{normalized_adjacency, NormalizedAdjacency};
pub use sbm::{generate_sbm, SbmParams};
pub use split::{LabeledSplit, NodeSubset};
pub use topology::{CanonicalReport, EdgeId, UndirectedGraph};

use crate::dense::Matrix;
use crate::{Error, Result};

/// Node feature matrix, one row per node.
pub type FeatureMatrix = Matrix;

/// A graph with its node features and labelled split, cross-validated.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub graph: UndirectedGraph,
    pub features: FeatureMatrix,
    pub split: LabeledSplit,
}

impl Dataset {
    pub fn new(graph: UndirectedGraph, features: FeatureMatrix, split: LabeledSplit) -> Result<Self> {
        let n = graph.num_nodes();
        if features.rows() != n {
            return Err(Error::shape("feature rows", n, features.rows()));
        }
        if split.num_nodes() != n {
            return Err(Error::shape("label count", n, split.num_nodes()));
        }
        if !features.is_finite() {
            return Err(Error::NonFinite {
                stage: "features".into(),
            });
        }
        Ok(Dataset {
            graph,
            features,
            split,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.graph.num_nodes()
    }

    pub fn num_edges(&self) -> usize {
        self.graph.num_edges()
    }

    /// Same dataset on a different topology over the same nodes.
    pub fn with_graph(&self, graph: UndirectedGraph) -> Result<Self> {
        Dataset::new(graph, self.features.clone(), self.split.clone())
    }
}
