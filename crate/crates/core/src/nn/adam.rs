use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Bias-corrected Adam moments for a fixed list of parameter tensors.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    step: u64,
    first: Vec<Vec<f64>>,
    second: Vec<Vec<f64>>,
}

impl AdamState {
    pub fn new(sizes: &[usize]) -> Self {
        AdamState {
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            step: 0,
            first: sizes.iter().map(|&n| vec![0.0; n]).collect(),
            second: sizes.iter().map(|&n| vec![0.0; n]).collect(),
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    pub fn first_moments(&self) -> &[Vec<f64>] {
        &self.first
    }

    pub fn second_moments(&self) -> &[Vec<f64>] {
        &self.second
    }
}

/// One Adam update of every tensor in `params` with the matching `grads`.
pub fn adam_step(
    state: &mut AdamState,
    params: &mut [&mut [f64]],
    grads: &[&[f64]],
    lr: f64,
) -> Result<()> {
    if params.len() != state.first.len() || grads.len() != params.len() {
        return Err(Error::shape("adam tensor count", state.first.len(), params.len()));
    }
    for (i, (p, g)) in params.iter().zip(grads).enumerate() {
        if p.len() != state.first[i].len() || g.len() != p.len() {
            return Err(Error::shape("adam tensor length", state.first[i].len(), g.len()));
        }
    }
    state.step += 1;
    let t = state.step as i32;
    let bc1 = 1.0 - libm::pow(state.beta1, t as f64);
    let bc2 = 1.0 - libm::pow(state.beta2, t as f64);
    let (b1, b2, eps) = (state.beta1, state.beta2, state.eps);
    for (i, (p, g)) in params.iter_mut().zip(grads).enumerate() {
        let m = &mut state.first[i];
        let v = &mut state.second[i];
        for j in 0..p.len() {
            m[j] = b1 * m[j] + (1.0 - b1) * g[j];
            v[j] = b2 * v[j] + (1.0 - b2) * g[j] * g[j];
            let m_hat = m[j] / bc1;
            let v_hat = v[j] / bc2;
            p[j] -= lr * m_hat / (libm::sqrt(v_hat) + eps);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_leaves_params() {
        let mut st = AdamState::new(&[3]);
        let mut p = vec![1.0, -2.0, 0.5];
        let before = p.clone();
        adam_step(&mut st, &mut [&mut p], &[&[0.0; 3]], 0.1).unwrap();
        assert_eq!(p, before);
        assert_eq!(st.step_count(), 1);
    }

    #[test]
    fn single_scalar_first_step() {
        // Δ = -lr * m̂ / (sqrt(v̂) + ε) with m̂ = 1, v̂ = 1
        let mut st = AdamState::new(&[1]);
        let mut p = vec![0.0];
        adam_step(&mut st, &mut [&mut p], &[&[1.0]], 0.1).unwrap();
        let expected = -0.1 / (1.0 + 1e-8);
        assert!((p[0] - expected).abs() < 1e-15);
    }

    #[test]
    fn constant_gradient_moves_monotonically() {
        let mut st = AdamState::new(&[2]);
        let mut p = vec![0.0, 0.0];
        let mut last = p.clone();
        for _ in 0..50 {
            adam_step(&mut st, &mut [&mut p], &[&[2.0, -0.5]], 0.01).unwrap();
            assert!(p[0] < last[0] && p[1] > last[1]);
            last = p.clone();
        }
    }

    #[test]
    fn shape_mismatch() {
        let mut st = AdamState::new(&[2]);
        let mut p = vec![0.0; 3];
        assert!(adam_step(&mut st, &mut [&mut p], &[&[0.0; 3]], 0.1).is_err());
    }
}
