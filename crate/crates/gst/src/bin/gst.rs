use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gst::config::{DatasetSource, RunConfig};
use gst::error::{ConfigError, DatasetError, RunError};
use gst::experiment::{eval_spectral, run_experiment, run_sweep, EvalSpectralOptions};
use gst::io::{load_dataset, save_dataset};
use gst::manifest::RunManifest;
use gst_core::baselines::perturb_edges;
use gst_core::spectral::MatrixKind;

#[derive(Parser)]
#[command(name = "gst", version, about = "Graph sparse training experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct ConfigArgs {
    /// key = value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Rerun the configuration recorded in a manifest.json.
    #[arg(long, conflicts_with = "config")]
    manifest: Option<PathBuf>,
    /// Override one configuration key (repeatable), e.g. `--set sparsity=0.5`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<RunConfig, RunError> {
        let mut cfg = match (&self.config, &self.manifest) {
            (Some(path), _) => RunConfig::load(path)?,
            (None, Some(path)) => RunManifest::load(path)?.run_config()?,
            (None, None) => RunConfig::default(),
        };
        cfg.apply_overrides(&self.overrides)?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write a stochastic-block-model dataset directory.
    GenSynth {
        #[arg(long)]
        out: PathBuf,
        /// `sbm.*` overrides, e.g. `--set sbm.p_in=0.2`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Run one pipeline (gst, dense or baseline).
    Train {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Largest sparsity on a grid whose test accuracy stays near dense.
    Sweep {
        #[command(flatten)]
        config: ConfigArgs,
        /// Comma-separated ascending sparsities in (0, 1).
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.3,0.4,0.5,0.6")]
        grid: Vec<f64>,
        /// Accuracy tolerance against the dense model.
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Spectral preservation of a run's mask; appends an eval row.
    EvalSpectral {
        /// Run directory written by `train`.
        #[arg(long)]
        run: PathBuf,
        /// Mask file (default: the run's final_mask.txt).
        #[arg(long)]
        mask: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
        /// adjacency or laplacian.
        #[arg(long)]
        matrix_kind: Option<String>,
    },
    /// Relocate edge endpoints of a dataset directory.
    Perturb {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        fraction: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), RunError> {
    match cli.command {
        Command::GenSynth { out, overrides } => {
            let mut cfg = RunConfig::default();
            cfg.apply_overrides(&overrides)?;
            let DatasetSource::Sbm(params) = &cfg.dataset else {
                return Err(ConfigError::Invalid("gen-synth only takes sbm.* keys".into()).into());
            };
            let data = gst_core::graph::generate_sbm(params)
                .map_err(|e| ConfigError::Invalid(e.to_string()))?;
            save_dataset(&out, &data).map_err(DatasetError::Io)?;
            println!("{} nodes, {} edges -> {}", data.num_nodes(), data.num_edges(), out.display());
        }
        Command::Train { config, out } => {
            let cfg = config.resolve()?;
            let m = run_experiment(&cfg, &out)?;
            let s = &m.summary;
            println!(
                "{}: best epoch {}, val {:.4}, test {:.4}, sparsity {:.4}{}",
                s.pipeline,
                s.best_epoch,
                s.val_acc,
                s.test_acc,
                s.sparsity,
                s.spectral_preservation
                    .map(|r| format!(", spectral preservation {r:.6}"))
                    .unwrap_or_default()
            );
        }
        Command::Sweep { config, grid, eps, out } => {
            let cfg = config.resolve()?;
            let r = run_sweep(&cfg, &grid, eps, &out)?;
            for p in &r.points {
                println!("s_g={} test={:.4}", p.sparsity, p.test_acc);
            }
            println!("dense test {:.4}; extreme sparsity {}", r.dense_test_acc, r.extreme_sparsity);
        }
        Command::EvalSpectral { run, mask, k, matrix_kind } => {
            let matrix_kind = matrix_kind
                .map(|s| s.parse::<MatrixKind>())
                .transpose()
                .map_err(|e| ConfigError::Invalid(e.to_string()))?;
            let row = eval_spectral(&run, &EvalSpectralOptions { mask, k, matrix_kind })?;
            println!("spectral preservation {}", row.spectral_preservation.unwrap_or(0.0));
        }
        Command::Perturb { dataset, fraction, seed, out } => {
            let (data, _) = load_dataset(&dataset)?;
            let g = perturb_edges(&data.graph, fraction, seed)
                .map_err(|e| ConfigError::Invalid(e.to_string()))?;
            save_dataset(&out, &data.with_graph(g)?).map_err(DatasetError::Io)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
