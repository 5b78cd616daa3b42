use crate::nn::KlNodeSet;
use crate::{Error, Result};

/// How each criterion vector is rescaled before the weighted sum.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum CriterionNorm {
    /// Zero mean, unit population variance; constant vectors map to zeros.
    #[default]
    ZScore,
    /// Average rank divided by `len − 1`, so values lie in `[0, 1]`.
    Rank,
    None,
}

impl CriterionNorm {
    pub fn as_str(self) -> &'static str {
        match self {
            CriterionNorm::ZScore => "zscore",
            CriterionNorm::Rank => "rank",
            CriterionNorm::None => "none",
        }
    }
}

impl core::str::FromStr for CriterionNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zscore" => Ok(CriterionNorm::ZScore),
            "rank" => Ok(CriterionNorm::Rank),
            "none" => Ok(CriterionNorm::None),
            other => Err(Error::invalid(alloc::format!("unknown criterion_norm `{other}`"))),
        }
    }
}

/// Run hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub struct GstConfig {
    /// `E`: full-graph epochs that produce the anchor.
    pub anchor_epochs: usize,
    /// `D`: sparse-phase epochs.
    pub sparse_epochs: usize,
    /// `ΔT`: epochs between mask updates.
    pub update_interval: usize,
    /// `s_g`: fraction of edges removed.
    pub sparsity: f64,
    /// `τ`: swap ratio at interval 0.
    pub swap_ratio: f64,
    /// `κ`: decay exponent of the swap schedule.
    pub swap_decay: f64,
    /// Eigenpairs taken from each end of the anchor spectrum.
    pub spectral_k: usize,
    pub beta_semantic: f64,
    pub beta_topo: f64,
    pub lr: f64,
    pub seed: u64,
    pub criterion_norm: CriterionNorm,
    pub kl_node_set: KlNodeSet,
    pub hidden: usize,
    pub masker_hidden: usize,
    pub eps_lambda: f64,
}

impl Default for GstConfig {
    fn default() -> Self {
        GstConfig {
            anchor_epochs: 100,
            sparse_epochs: 400,
            update_interval: 20,
            sparsity: 0.3,
            swap_ratio: 0.3,
            swap_decay: 1.0,
            spectral_k: 20,
            beta_semantic: 1.0,
            beta_topo: 1.0,
            lr: 0.001,
            seed: 0,
            criterion_norm: CriterionNorm::ZScore,
            kl_node_set: KlNodeSet::All,
            hidden: 16,
            masker_hidden: 16,
            eps_lambda: crate::spectral::DEFAULT_EPS_LAMBDA,
        }
    }
}

impl GstConfig {
    /// `M = ⌈D / ΔT⌉`, the schedule horizon.
    pub fn num_intervals(&self) -> usize {
        self.sparse_epochs.div_ceil(self.update_interval.max(1))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::invalid(msg));
        if self.anchor_epochs == 0 {
            return bad("anchor_epochs must be at least 1");
        }
        if self.sparse_epochs == 0 {
            return bad("sparse_epochs must be at least 1");
        }
        if self.update_interval == 0 {
            return bad("update_interval must be at least 1");
        }
        if !(0.0..1.0).contains(&self.sparsity) {
            return bad("sparsity must lie in [0, 1)");
        }
        if !(self.swap_ratio > 0.0 && self.swap_ratio <= 1.0) {
            return bad("swap_ratio must lie in (0, 1]");
        }
        if !(self.swap_decay >= 0.0 && self.swap_decay.is_finite()) {
            return bad("swap_decay must be finite and nonnegative");
        }
        if self.spectral_k == 0 {
            return bad("spectral_k must be at least 1");
        }
        if !(self.beta_semantic.is_finite() && self.beta_topo.is_finite()) {
            return bad("criterion weights must be finite");
        }
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return bad("lr must be positive");
        }
        if self.hidden == 0 || self.masker_hidden == 0 {
            return bad("hidden widths must be positive");
        }
        if !(self.eps_lambda > 0.0) {
            return bad("eps_lambda must be positive");
        }
        Ok(())
    }
}
