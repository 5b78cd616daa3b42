//! Pipelines behind the `train`, `sweep` and `eval-spectral` commands.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use gst_core::baselines::perturb_edges;
use gst_core::engine::{
    evaluate, find_extreme_sparsity, run_gst, train_fixed_mask, Phase, SweepOutcome,
};
use gst_core::graph::{generate_sbm, graph_sparsity, Dataset, EdgeMask, EdgeScores};
use gst_core::macs::macs_estimate;
use gst_core::nn::Model;
use gst_core::spectral::{spectral_preservation_ratio, MatrixKind, PreservationReport};

use crate::checkpoint::{load_model, save_model};
use crate::config::{DatasetSource, PerturbStage, Pipeline, RunConfig};
use crate::error::{ConfigError, DatasetError, RunError};
use crate::io::load_dataset;
use crate::manifest::{git_describe, unix_now, RunManifest, RunSummary, MANIFEST_FILE};
use crate::metrics::{self, MetricsRow, RowPhase};

pub const METRICS_FILE: &str = "metrics.csv";
pub const MASK_FILE: &str = "final_mask.txt";
pub const SIDECAR_FILE: &str = "spectral_terms.csv";
pub const ANCHOR_CKPT: &str = "anchor.ckpt";
pub const FINAL_CKPT: &str = "final.ckpt";

/// The dataset a config names, with `pre` perturbation applied.
pub fn load_source(cfg: &RunConfig) -> Result<Dataset, RunError> {
    let data = match &cfg.dataset {
        DatasetSource::Dir(dir) => load_dataset(dir)?.0,
        DatasetSource::Sbm(p) => {
            generate_sbm(p).map_err(|e| ConfigError::Invalid(format!("sbm parameters: {e}")))?
        }
    };
    if cfg.perturb_stage == PerturbStage::Pre && cfg.perturb_fraction > 0.0 {
        let g = perturb_edges(&data.graph, cfg.perturb_fraction, cfg.perturb_seed)?;
        return Ok(data.with_graph(g)?);
    }
    Ok(data)
}

fn macs(data: &Dataset, mask: &EdgeMask, hidden: usize) -> u64 {
    macs_estimate(
        data.num_nodes(),
        mask,
        2,
        data.features.cols(),
        hidden,
        data.split.num_classes(),
    )
    .total
}

/// Preservation of the full graph's spectrum by `mask`, on unit weights.
pub fn preservation(
    data: &Dataset,
    mask: &EdgeMask,
    k: usize,
    kind: MatrixKind,
    eps: f64,
) -> Result<PreservationReport, RunError> {
    let ones = EdgeScores::constant(data.num_edges(), 1.0);
    let full = EdgeMask::full(data.num_edges());
    let report = spectral_preservation_ratio(&data.graph, (&ones, &full), (&ones, mask), k, kind, eps)?;
    if report.k_was_clamped() {
        log::warn!("eval.k {} clamped to {} nodes", report.requested_k, report.k);
    }
    Ok(report)
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), RunError> {
    std::fs::write(path, contents).map_err(RunError::output(path))
}

pub fn render_mask(mask: &EdgeMask) -> String {
    let mut s = String::with_capacity(2 * mask.len());
    for &b in mask.bits() {
        s.push(if b { '1' } else { '0' });
        s.push('\n');
    }
    s
}

pub fn read_mask(path: &Path, num_edges: usize) -> Result<EdgeMask, RunError> {
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => DatasetError::Missing(path.to_owned()),
        _ => DatasetError::Io(e),
    })?;
    let bits = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .enumerate()
        .map(|(i, l)| match l {
            "1" => Ok(true),
            "0" => Ok(false),
            other => Err(DatasetError::Parse {
                file: path.to_owned(),
                line: i + 1,
                message: format!("mask bit `{other}`"),
            }),
        })
        .collect::<Result<Vec<bool>, _>>()?;
    if bits.len() != num_edges {
        return Err(DatasetError::Inconsistent(format!(
            "mask has {} bits for {num_edges} edges",
            bits.len()
        ))
        .into());
    }
    Ok(EdgeMask::from_bits(bits))
}

/// Final accuracies for the eval row. With `post` perturbation the model is
/// evaluated on the perturbed active subgraph instead of `mask`.
fn eval_accuracies(
    cfg: &RunConfig,
    data: &Dataset,
    model: &Model,
    mask: &EdgeMask,
) -> Result<(f64, f64, f64), RunError> {
    let e = if cfg.perturb_stage == PerturbStage::Post && cfg.perturb_fraction > 0.0 {
        let sparse = data.graph.subgraph(mask.bits());
        let moved = perturb_edges(&sparse, cfg.perturb_fraction, cfg.perturb_seed)?;
        let perturbed = data.with_graph(moved)?;
        evaluate(model, &perturbed, &EdgeMask::full(perturbed.num_edges()))?
    } else {
        evaluate(model, data, mask)?
    };
    Ok((e.train_acc, e.val_acc, e.test_acc))
}

/// Runs the configured pipeline and writes `metrics.csv`, `manifest.json`,
/// `final_mask.txt`, checkpoints and the spectral sidecar into `out`.
pub fn run_experiment(cfg: &RunConfig, out: &Path) -> Result<RunManifest, RunError> {
    cfg.validate()?;
    let started = unix_now();
    std::fs::create_dir_all(out).map_err(RunError::output(out))?;
    let data = load_source(cfg)?;
    let g = &cfg.gst;
    let hidden = g.hidden;
    let mut rows: Vec<MetricsRow> = Vec::new();
    let mut outputs = BTreeMap::new();

    let (mask, model, best_epoch, val_acc) = match cfg.pipeline {
        Pipeline::Gst => {
            let run = run_gst(&data, g)?;
            let dense_macs = macs(&data, &EdgeMask::full(data.num_edges()), hidden);
            // the active edge count is constant in the sparse phase
            let sparse_macs = macs(&data, &run.sparse.one_shot, hidden);
            for r in run.history() {
                let m = if r.phase == Phase::Anchor { dense_macs } else { sparse_macs };
                rows.push(MetricsRow::from_epoch(r, m));
            }
            let a = &run.anchor.anchor;
            let anchor_model = Model {
                gcn: a.theta.clone(),
                masker: a.masker.clone(),
            };
            let path = out.join(ANCHOR_CKPT);
            save_model(&path, &anchor_model)?;
            outputs.insert("anchor_checkpoint".into(), ANCHOR_CKPT.into());
            let s = run.sparse;
            (s.mask, s.model, s.best_epoch, s.val_acc)
        }
        Pipeline::Dense | Pipeline::Baseline => {
            let (mask, phase) = if cfg.pipeline == Pipeline::Dense {
                (EdgeMask::full(data.num_edges()), Phase::Anchor)
            } else {
                (cfg.baseline.sparsify(&data.graph, g.sparsity, g.seed)?, Phase::Sparse)
            };
            let run = train_fixed_mask(&data, &mask, g, g.anchor_epochs + g.sparse_epochs, phase)?;
            let m = macs(&data, &mask, hidden);
            rows.extend(run.history.iter().map(|r| MetricsRow::from_epoch(r, m)));
            (mask, run.model, run.best_epoch, run.val_acc)
        }
    };

    let final_path = out.join(FINAL_CKPT);
    save_model(&final_path, &model)?;
    outputs.insert("final_checkpoint".into(), FINAL_CKPT.into());
    write_file(&out.join(MASK_FILE), render_mask(&mask))?;
    outputs.insert("final_mask".into(), MASK_FILE.into());

    let (train_acc, eval_val, test_acc) = eval_accuracies(cfg, &data, &model, &mask)?;
    let mut ratio = None;
    if cfg.eval_spectral {
        let report = preservation(&data, &mask, cfg.eval_k, cfg.eval_matrix, g.eps_lambda)?;
        write_file(&out.join(SIDECAR_FILE), metrics::render_sidecar(&report))?;
        outputs.insert("spectral_sidecar".into(), SIDECAR_FILE.into());
        ratio = Some(report.ratio);
    }
    rows.push(MetricsRow {
        phase: RowPhase::Eval,
        epoch: best_epoch,
        interval: 0,
        train_acc,
        val_acc: eval_val,
        test_acc,
        loss: None,
        sparsity: graph_sparsity(&mask),
        swap_count: 0,
        spectral_preservation: ratio,
        macs_estimate: macs(&data, &mask, hidden),
    });
    let metrics_path = out.join(METRICS_FILE);
    metrics::write_metrics(&metrics_path, &rows).map_err(RunError::output(&metrics_path))?;
    outputs.insert("metrics".into(), METRICS_FILE.into());
    outputs.insert("manifest".into(), MANIFEST_FILE.into());

    let manifest = RunManifest {
        config: cfg.to_pairs(),
        dataset_id: cfg.dataset_id(),
        git_describe: git_describe(),
        seed: g.seed,
        started_unix: started,
        finished_unix: unix_now(),
        outputs,
        summary: RunSummary {
            pipeline: cfg.pipeline.as_str().into(),
            best_epoch,
            val_acc,
            test_acc,
            sparsity: graph_sparsity(&mask),
            active_edges: mask.active_count(),
            num_edges: data.num_edges(),
            spectral_preservation: ratio,
            spectral_matrix: cfg.eval_matrix.as_str().into(),
        },
    };
    manifest.save(&out.join(MANIFEST_FILE))?;
    Ok(manifest)
}

/// Options of [`eval_spectral`]; unset fields fall back to the run's config.
#[derive(Debug, Clone, Default)]
pub struct EvalSpectralOptions {
    pub mask: Option<PathBuf>,
    pub k: Option<usize>,
    pub matrix_kind: Option<MatrixKind>,
}

/// Compares a mask of a finished run against its full graph, appends an
/// eval row to the run's `metrics.csv` and rewrites the sidecar.
pub fn eval_spectral(run_dir: &Path, opts: &EvalSpectralOptions) -> Result<MetricsRow, RunError> {
    let manifest = RunManifest::load(&run_dir.join(MANIFEST_FILE))?;
    let cfg = manifest.run_config()?;
    let data = load_source(&cfg)?;
    let mask_path = opts.mask.clone().unwrap_or_else(|| run_dir.join(MASK_FILE));
    let mask = read_mask(&mask_path, data.num_edges())?;
    let k = opts.k.unwrap_or(cfg.eval_k);
    let kind = opts.matrix_kind.unwrap_or(cfg.eval_matrix);
    let report = preservation(&data, &mask, k, kind, cfg.gst.eps_lambda)?;
    write_file(&run_dir.join(SIDECAR_FILE), metrics::render_sidecar(&report))?;
    let model = load_model(&run_dir.join(FINAL_CKPT))?;
    let (train_acc, val_acc, test_acc) = eval_accuracies(&cfg, &data, &model, &mask)?;
    let row = MetricsRow {
        phase: RowPhase::Eval,
        epoch: manifest.summary.best_epoch,
        interval: 0,
        train_acc,
        val_acc,
        test_acc,
        loss: None,
        sparsity: graph_sparsity(&mask),
        swap_count: 0,
        spectral_preservation: Some(report.ratio),
        macs_estimate: macs(&data, &mask, cfg.gst.hidden),
    };
    let path = run_dir.join(METRICS_FILE);
    metrics::append_row(&path, &row).map_err(RunError::output(&path))?;
    Ok(row)
}

/// Extreme-sparsity search; writes `sweep.csv` and `sweep.json` into `out`.
pub fn run_sweep(cfg: &RunConfig, grid: &[f64], eps: f64, out: &Path) -> Result<SweepOutcome, RunError> {
    cfg.validate()?;
    std::fs::create_dir_all(out).map_err(RunError::output(out))?;
    let data = load_source(cfg)?;
    let result = find_extreme_sparsity(&data, &cfg.gst, eps, grid)?;
    let mut csv = String::from("sparsity,test_acc,val_acc\n");
    for p in &result.points {
        writeln!(csv, "{},{},{}", p.sparsity, p.test_acc, p.val_acc).unwrap();
    }
    write_file(&out.join("sweep.csv"), csv)?;
    let json = serde_json::json!({
        "extreme_sparsity": result.extreme_sparsity,
        "dense_test_acc": result.dense_test_acc,
        "eps": eps,
        "grid": grid,
        "config": cfg.to_pairs(),
        "dataset_id": cfg.dataset_id(),
        "git_describe": git_describe(),
    });
    write_file(
        &out.join("sweep.json"),
        serde_json::to_string_pretty(&json).expect("json") + "\n",
    )?;
    Ok(result)
}
