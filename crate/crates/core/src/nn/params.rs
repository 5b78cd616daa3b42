use rand::Rng;

use crate::dense::Matrix;

/// GCN weights: `w1` is `features × hidden`, `w2` is `hidden × classes`.
#[derive(Debug, Clone, PartialEq)]
pub struct GcnParams {
    pub w1: Matrix,
    pub w2: Matrix,
}

/// Edge masker MLP over `[x_u ‖ x_v]`: `m1` is `2·features × hidden`, `m2`
/// is `hidden × 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskerParams {
    pub m1: Matrix,
    pub m2: Matrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub gcn: GcnParams,
    pub masker: MaskerParams,
}

fn glorot<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    let limit = libm::sqrt(6.0 / (rows + cols) as f64);
    Matrix::from_fn(rows, cols, |_, _| rng.random_range(-limit..limit))
}

impl GcnParams {
    pub fn init<R: Rng>(rng: &mut R, features: usize, hidden: usize, classes: usize) -> Self {
        GcnParams {
            w1: glorot(rng, features, hidden),
            w2: glorot(rng, hidden, classes),
        }
    }

    pub fn features(&self) -> usize {
        self.w1.rows()
    }

    pub fn hidden(&self) -> usize {
        self.w1.cols()
    }

    pub fn classes(&self) -> usize {
        self.w2.cols()
    }
}

impl MaskerParams {
    pub fn init<R: Rng>(rng: &mut R, features: usize, hidden: usize) -> Self {
        MaskerParams {
            m1: glorot(rng, 2 * features, hidden),
            m2: glorot(rng, hidden, 1),
        }
    }

    pub fn zeros(features: usize, hidden: usize) -> Self {
        MaskerParams {
            m1: Matrix::zeros(2 * features, hidden),
            m2: Matrix::zeros(hidden, 1),
        }
    }

    pub fn features(&self) -> usize {
        self.m1.rows() / 2
    }

    pub fn hidden(&self) -> usize {
        self.m1.cols()
    }
}

impl Model {
    pub fn init<R: Rng>(
        rng: &mut R,
        features: usize,
        hidden: usize,
        classes: usize,
        masker_hidden: usize,
    ) -> Self {
        let gcn = GcnParams::init(rng, features, hidden, classes);
        let masker = MaskerParams::init(rng, features, masker_hidden);
        Model { gcn, masker }
    }

    /// Parameter tensors in a fixed order: `w1, w2, m1, m2`.
    pub fn tensors(&self) -> [&[f64]; 4] {
        [
            self.gcn.w1.as_slice(),
            self.gcn.w2.as_slice(),
            self.masker.m1.as_slice(),
            self.masker.m2.as_slice(),
        ]
    }

    pub fn tensors_mut(&mut self) -> [&mut [f64]; 4] {
        [
            self.gcn.w1.as_mut_slice(),
            self.gcn.w2.as_mut_slice(),
            self.masker.m1.as_mut_slice(),
            self.masker.m2.as_mut_slice(),
        ]
    }

    pub fn is_finite(&self) -> bool {
        self.tensors().iter().all(|t| t.iter().all(|x| x.is_finite()))
    }
}
