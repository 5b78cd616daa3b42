use alloc::vec::Vec;

use crate::{Error, Result};

/// Which nodes a loss or metric is computed over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeSubset {
    Train,
    Val,
    Test,
    All,
}

/// Node labels plus disjoint train/validation/test masks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledSplit {
    labels: Vec<usize>,
    num_classes: usize,
    train: Vec<bool>,
    val: Vec<bool>,
    test: Vec<bool>,
}

impl LabeledSplit {
    pub fn new(
        labels: Vec<usize>,
        num_classes: usize,
        train: Vec<bool>,
        val: Vec<bool>,
        test: Vec<bool>,
    ) -> Result<Self> {
        let n = labels.len();
        for (what, m) in [("train mask", &train), ("val mask", &val), ("test mask", &test)] {
            if m.len() != n {
                return Err(Error::shape(what, n, m.len()));
            }
        }
        for i in 0..n {
            let memberships = [train[i], val[i], test[i]].iter().filter(|&&b| b).count();
            if memberships > 1 {
                return Err(Error::invalid(alloc::format!(
                    "node {i} belongs to more than one split"
                )));
            }
            if labels[i] >= num_classes {
                return Err(Error::invalid(alloc::format!(
                    "node {i} has label {} outside [0, {num_classes})",
                    labels[i]
                )));
            }
        }
        Ok(LabeledSplit {
            labels,
            num_classes,
            train,
            val,
            test,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.labels.len()
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn mask(&self, subset: NodeSubset) -> Option<&[bool]> {
        match subset {
            NodeSubset::Train => Some(&self.train),
            NodeSubset::Val => Some(&self.val),
            NodeSubset::Test => Some(&self.test),
            NodeSubset::All => None,
        }
    }

    /// Ascending node ids in `subset`.
    pub fn nodes(&self, subset: NodeSubset) -> Vec<usize> {
        match self.mask(subset) {
            Some(m) => m.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect(),
            None => (0..self.num_nodes()).collect(),
        }
    }

    /// Split with nodes relabelled by `perm` (new id of old node `i` is `perm[i]`).
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.num_nodes();
        let mut labels = alloc::vec![0; n];
        let mut train = alloc::vec![false; n];
        let mut val = alloc::vec![false; n];
        let mut test = alloc::vec![false; n];
        for i in 0..n {
            labels[perm[i]] = self.labels[i];
            train[perm[i]] = self.train[i];
            val[perm[i]] = self.val[i];
            test[perm[i]] = self.test[i];
        }
        LabeledSplit {
            labels,
            num_classes: self.num_classes,
            train,
            val,
            test,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rejects_overlap_and_bad_labels() {
        let t = vec![true, false];
        assert!(LabeledSplit::new(vec![0, 1], 2, t.clone(), t.clone(), vec![false; 2]).is_err());
        assert!(LabeledSplit::new(vec![0, 2], 2, t, vec![false; 2], vec![false; 2]).is_err());
        let ok = LabeledSplit::new(vec![0, 1], 2, vec![true, false], vec![false, true], vec![false; 2])
            .unwrap();
        assert_eq!(ok.nodes(NodeSubset::Val), vec![1]);
        assert_eq!(ok.nodes(NodeSubset::All), vec![0, 1]);
    }
}
