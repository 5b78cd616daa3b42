//! `key = value` run configuration.
//!
//! One setting per line; `#` starts a comment; blank lines are ignored.
//! Unknown keys and malformed values are errors carrying the line number.
//! See `fixtures/example.conf` for every key with its default.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use gst_core::baselines::BaselineKind;
use gst_core::engine::{CriterionNorm, GstConfig};
use gst_core::graph::SbmParams;
use gst_core::nn::KlNodeSet;
use gst_core::spectral::MatrixKind;

use crate::error::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pipeline {
    Gst,
    Dense,
    Baseline,
}

impl Pipeline {
    pub fn as_str(self) -> &'static str {
        match self {
            Pipeline::Gst => "gst",
            Pipeline::Dense => "dense",
            Pipeline::Baseline => "baseline",
        }
    }
}

impl FromStr for Pipeline {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "gst" => Ok(Pipeline::Gst),
            "dense" => Ok(Pipeline::Dense),
            "baseline" => Ok(Pipeline::Baseline),
            other => Err(format!("unknown pipeline `{other}`")),
        }
    }
}

/// Whether edge perturbation happens before training or on the trained
/// sparse graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbStage {
    Pre,
    Post,
}

impl PerturbStage {
    pub fn as_str(self) -> &'static str {
        match self {
            PerturbStage::Pre => "pre",
            PerturbStage::Post => "post",
        }
    }
}

impl FromStr for PerturbStage {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "pre" => Ok(PerturbStage::Pre),
            "post" => Ok(PerturbStage::Post),
            other => Err(format!("unknown perturb stage `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DatasetSource {
    Dir(PathBuf),
    Sbm(SbmParams),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub gst: GstConfig,
    pub pipeline: Pipeline,
    pub baseline: BaselineKind,
    pub dataset: DatasetSource,
    pub perturb_fraction: f64,
    pub perturb_stage: PerturbStage,
    pub perturb_seed: u64,
    /// Spectral preservation eval row at the end of `train`.
    pub eval_spectral: bool,
    pub eval_k: usize,
    pub eval_matrix: MatrixKind,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            gst: GstConfig::default(),
            pipeline: Pipeline::Gst,
            baseline: BaselineKind::Random,
            dataset: DatasetSource::Sbm(SbmParams::default()),
            perturb_fraction: 0.0,
            perturb_stage: PerturbStage::Pre,
            perturb_seed: 0,
            eval_spectral: true,
            eval_k: 200,
            eval_matrix: MatrixKind::Laplacian,
        }
    }
}

fn parse<T: FromStr>(value: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value.parse::<T>().map_err(|e| format!("`{value}`: {e}"))
}

fn parse_bool(value: &str) -> Result<bool, String> {
    match value {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(format!("`{other}` is not a boolean")),
    }
}

impl RunConfig {
    /// Applies one setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let g = &mut self.gst;
        match key {
            "anchor_epochs" => g.anchor_epochs = parse(value)?,
            "sparse_epochs" => g.sparse_epochs = parse(value)?,
            "update_interval" => g.update_interval = parse(value)?,
            "sparsity" => g.sparsity = parse(value)?,
            "swap_ratio" => g.swap_ratio = parse(value)?,
            "swap_decay" => g.swap_decay = parse(value)?,
            "spectral_k" => g.spectral_k = parse(value)?,
            "beta_semantic" => g.beta_semantic = parse(value)?,
            "beta_topo" => g.beta_topo = parse(value)?,
            "lr" => g.lr = parse(value)?,
            "seed" => g.seed = parse(value)?,
            "criterion_norm" => {
                g.criterion_norm = value.parse::<CriterionNorm>().map_err(|e| e.to_string())?
            }
            "kl_node_set" => {
                g.kl_node_set = match value {
                    "all" => KlNodeSet::All,
                    "labeled" => KlNodeSet::Labeled,
                    other => return Err(format!("unknown kl_node_set `{other}`")),
                }
            }
            "hidden" => g.hidden = parse(value)?,
            "masker_hidden" => g.masker_hidden = parse(value)?,
            "eps_lambda" => g.eps_lambda = parse(value)?,
            "pipeline" => self.pipeline = value.parse()?,
            "baseline" => {
                self.baseline = value.parse::<BaselineKind>().map_err(|e| e.to_string())?
            }
            "dataset" => {
                self.dataset = match value {
                    "sbm" => DatasetSource::Sbm(SbmParams::default()),
                    path => DatasetSource::Dir(PathBuf::from(path)),
                }
            }
            "perturb.fraction" => self.perturb_fraction = parse(value)?,
            "perturb.stage" => self.perturb_stage = value.parse()?,
            "perturb.seed" => self.perturb_seed = parse(value)?,
            "eval.spectral" => self.eval_spectral = parse_bool(value)?,
            "eval.k" => self.eval_k = parse(value)?,
            "eval.matrix_kind" => {
                self.eval_matrix = value.parse::<MatrixKind>().map_err(|e| e.to_string())?
            }
            sbm if sbm.starts_with("sbm.") => {
                let DatasetSource::Sbm(p) = &mut self.dataset else {
                    return Err(format!("`{sbm}` needs `dataset = sbm`"));
                };
                match &sbm[4..] {
                    "seed" => p.seed = parse(value)?,
                    "num_blocks" => p.num_blocks = parse(value)?,
                    "nodes_per_block" => p.nodes_per_block = parse(value)?,
                    "p_in" => p.p_in = parse(value)?,
                    "p_out" => p.p_out = parse(value)?,
                    "feat_dim" => p.feat_dim = parse(value)?,
                    "feat_shift" => p.feat_shift = parse(value)?,
                    _ => return Err(format!("unknown key `{sbm}`")),
                }
            }
            other => return Err(format!("unknown key `{other}`")),
        }
        Ok(())
    }

    /// Parses a config file body; later lines override earlier ones.
    pub fn parse_str(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Line {
                line: i + 1,
                message: format!("expected `key = value`, found `{line}`"),
            })?;
            cfg.set(key.trim(), value.trim())
                .map_err(|message| ConfigError::Line { line: i + 1, message })?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read {
            path: path.to_owned(),
            source: e,
        })?;
        RunConfig::parse_str(&text)
    }

    /// Applies `key=value` overrides (from the command line).
    pub fn apply_overrides<S: AsRef<str>>(&mut self, items: &[S]) -> Result<(), ConfigError> {
        for item in items {
            let item = item.as_ref();
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| ConfigError::Override(format!("expected key=value, found `{item}`")))?;
            self.set(k.trim(), v.trim())
                .map_err(|m| ConfigError::Override(format!("{item}: {m}")))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.gst
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if !(0.0..=1.0).contains(&self.perturb_fraction) {
            return Err(ConfigError::Invalid("perturb.fraction must lie in [0, 1]".into()));
        }
        if self.eval_k == 0 {
            return Err(ConfigError::Invalid("eval.k must be at least 1".into()));
        }
        Ok(())
    }

    /// Every setting in canonical form. Feeding these back through
    /// [`RunConfig::set`] reproduces `self`.
    pub fn to_pairs(&self) -> BTreeMap<String, String> {
        let g = &self.gst;
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            m.insert(k.to_owned(), v);
        };
        put("anchor_epochs", g.anchor_epochs.to_string());
        put("sparse_epochs", g.sparse_epochs.to_string());
        put("update_interval", g.update_interval.to_string());
        put("sparsity", g.sparsity.to_string());
        put("swap_ratio", g.swap_ratio.to_string());
        put("swap_decay", g.swap_decay.to_string());
        put("spectral_k", g.spectral_k.to_string());
        put("beta_semantic", g.beta_semantic.to_string());
        put("beta_topo", g.beta_topo.to_string());
        put("lr", g.lr.to_string());
        put("seed", g.seed.to_string());
        put("criterion_norm", g.criterion_norm.as_str().into());
        put(
            "kl_node_set",
            match g.kl_node_set {
                KlNodeSet::All => "all",
                KlNodeSet::Labeled => "labeled",
            }
            .into(),
        );
        put("hidden", g.hidden.to_string());
        put("masker_hidden", g.masker_hidden.to_string());
        put("eps_lambda", g.eps_lambda.to_string());
        put("pipeline", self.pipeline.as_str().into());
        put("baseline", self.baseline.as_str().into());
        match &self.dataset {
            DatasetSource::Dir(p) => put("dataset", p.display().to_string()),
            DatasetSource::Sbm(p) => {
                put("dataset", "sbm".into());
                put("sbm.seed", p.seed.to_string());
                put("sbm.num_blocks", p.num_blocks.to_string());
                put("sbm.nodes_per_block", p.nodes_per_block.to_string());
                put("sbm.p_in", p.p_in.to_string());
                put("sbm.p_out", p.p_out.to_string());
                put("sbm.feat_dim", p.feat_dim.to_string());
                put("sbm.feat_shift", p.feat_shift.to_string());
            }
        }
        put("perturb.fraction", self.perturb_fraction.to_string());
        put("perturb.stage", self.perturb_stage.as_str().into());
        put("perturb.seed", self.perturb_seed.to_string());
        put("eval.spectral", self.eval_spectral.to_string());
        put("eval.k", self.eval_k.to_string());
        put("eval.matrix_kind", self.eval_matrix.as_str().into());
        m
    }

    /// Rebuilds a config from [`RunConfig::to_pairs`] output.
    pub fn from_pairs(pairs: &BTreeMap<String, String>) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        // the dataset key resets sbm parameters, so it must come first
        if let Some(d) = pairs.get("dataset") {
            cfg.set("dataset", d).map_err(ConfigError::Invalid)?;
        }
        for (k, v) in pairs.iter().filter(|(k, _)| *k != "dataset") {
            cfg.set(k, v).map_err(|m| ConfigError::Invalid(format!("{k}: {m}")))?;
        }
        Ok(cfg)
    }

    /// Short name of the dataset for manifests.
    pub fn dataset_id(&self) -> String {
        match &self.dataset {
            DatasetSource::Dir(p) => p
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string()),
            DatasetSource::Sbm(p) => format!(
                "sbm-{}x{}-seed{}",
                p.num_blocks, p.nodes_per_block, p.seed
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_overrides() {
        let cfg = RunConfig::parse_str(
            "# header\nsparsity = 0.5  # trailing\n\nsbm.p_in=0.2\npipeline = dense\n",
        )
        .unwrap();
        assert_eq!(cfg.gst.sparsity, 0.5);
        assert_eq!(cfg.pipeline, Pipeline::Dense);
        let DatasetSource::Sbm(p) = &cfg.dataset else { panic!() };
        assert_eq!(p.p_in, 0.2);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = RunConfig::parse_str("seed = 1\n\nlr = fast\n").unwrap_err();
        assert!(matches!(err, ConfigError::Line { line: 3, .. }), "{err}");
        let err = RunConfig::parse_str("bogus = 1").unwrap_err();
        assert!(matches!(err, ConfigError::Line { line: 1, .. }));
        let err = RunConfig::parse_str("no equals sign").unwrap_err();
        assert!(matches!(err, ConfigError::Line { line: 1, .. }));
        let err = RunConfig::parse_str("dataset = data/cora\nsbm.p_in = 0.1").unwrap_err();
        assert!(matches!(err, ConfigError::Line { line: 2, .. }));
    }

    #[test]
    fn pairs_round_trip() {
        let mut cfg = RunConfig::default();
        cfg.apply_overrides(&["lr=0.0125", "criterion_norm=rank", "sbm.feat_shift=0.7", "kl_node_set=labeled"])
            .unwrap();
        assert_eq!(RunConfig::from_pairs(&cfg.to_pairs()).unwrap(), cfg);
        let mut dir = RunConfig::default();
        dir.set("dataset", "/tmp/cora").unwrap();
        assert_eq!(RunConfig::from_pairs(&dir.to_pairs()).unwrap(), dir);
        assert_eq!(dir.dataset_id(), "cora");
    }

    #[test]
    fn example_file_matches_defaults() {
        let text = include_str!("../fixtures/example.conf");
        assert_eq!(RunConfig::parse_str(text).unwrap(), RunConfig::default());
    }
}
