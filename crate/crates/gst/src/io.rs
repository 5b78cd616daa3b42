//! Dataset directories: `graph.edges`, `features.csv`, `labels.csv`,
//! `splits.csv`.
//!
//! * `graph.edges`: one edge per line, two node ids separated by a tab or
//!   spaces. Pairs are canonicalized on load.
//! * `features.csv`: one row of comma-separated reals per node.
//! * `labels.csv`: one class id per line.
//! * `splits.csv`: `train,val,test` flags (0 or 1) per node.
//!
//! The node count is the number of feature rows.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use gst_core::dense::Matrix;
use gst_core::graph::{CanonicalReport, Dataset, LabeledSplit, UndirectedGraph};

use crate::error::DatasetError;

pub const EDGES_FILE: &str = "graph.edges";
pub const FEATURES_FILE: &str = "features.csv";
pub const LABELS_FILE: &str = "labels.csv";
pub const SPLITS_FILE: &str = "splits.csv";

fn read(dir: &Path, name: &str) -> Result<(PathBuf, String), DatasetError> {
    let path = dir.join(name);
    match fs::read_to_string(&path) {
        Ok(text) => Ok((path, text)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Err(DatasetError::Missing(path)),
        Err(e) => Err(e.into()),
    }
}

/// Non-blank lines with their 1-based numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn token<T: std::str::FromStr>(file: &Path, line: usize, tok: &str) -> Result<T, DatasetError> {
    tok.trim().parse().map_err(|_| DatasetError::Parse {
        file: file.to_owned(),
        line,
        message: format!("`{tok}` is not a valid number"),
    })
}

/// Reads a dataset directory. The report counts dropped duplicate pairs and
/// self-loops.
pub fn load_dataset(dir: &Path) -> Result<(Dataset, CanonicalReport), DatasetError> {
    let (fpath, ftext) = read(dir, FEATURES_FILE)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (ln, l) in lines(&ftext) {
        let row = l
            .split(',')
            .map(|t| token::<f64>(&fpath, ln, t))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(DatasetError::Parse {
                    file: fpath,
                    line: ln,
                    message: format!("expected {} columns, found {}", first.len(), row.len()),
                });
            }
        }
        rows.push(row);
    }
    let n = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    let features = Matrix::from_vec(n, cols, rows.concat()).expect("rectangular rows");

    let (lpath, ltext) = read(dir, LABELS_FILE)?;
    let labels = lines(&ltext)
        .map(|(ln, l)| token::<usize>(&lpath, ln, l))
        .collect::<Result<Vec<_>, _>>()?;

    let (spath, stext) = read(dir, SPLITS_FILE)?;
    let mut masks: [Vec<bool>; 3] = Default::default();
    for (ln, l) in lines(&stext) {
        let flags: Vec<&str> = l.split(',').collect();
        if flags.len() != 3 {
            return Err(DatasetError::Parse {
                file: spath,
                line: ln,
                message: "expected three flags `train,val,test`".into(),
            });
        }
        for (mask, f) in masks.iter_mut().zip(&flags) {
            mask.push(token::<u8>(&spath, ln, f)? != 0);
        }
    }

    let (epath, etext) = read(dir, EDGES_FILE)?;
    let mut pairs = Vec::new();
    for (ln, l) in lines(&etext) {
        let ends: Vec<&str> = l.split_whitespace().collect();
        if ends.len() != 2 {
            return Err(DatasetError::Parse {
                file: epath,
                line: ln,
                message: "expected two node ids".into(),
            });
        }
        let u: usize = token(&epath, ln, ends[0])?;
        let v: usize = token(&epath, ln, ends[1])?;
        for w in [u, v] {
            if w >= n {
                return Err(DatasetError::Parse {
                    file: epath,
                    line: ln,
                    message: format!("node id {w} out of range for {n} nodes"),
                });
            }
        }
        pairs.push((u, v));
    }
    let (graph, report) =
        UndirectedGraph::from_pairs(n, pairs).map_err(|e| DatasetError::Inconsistent(e.to_string()))?;
    if report.duplicates + report.self_loops > 0 {
        log::warn!(
            "{}: dropped {} duplicate pairs and {} self-loops",
            epath.display(),
            report.duplicates,
            report.self_loops
        );
    }

    if labels.len() != n || masks[0].len() != n {
        return Err(DatasetError::Inconsistent(format!(
            "{n} feature rows but {} labels and {} split rows",
            labels.len(),
            masks[0].len()
        )));
    }
    let num_classes = labels.iter().max().map_or(0, |m| m + 1);
    let [train, val, test] = masks;
    let split = LabeledSplit::new(labels, num_classes, train, val, test)
        .map_err(|e| DatasetError::Inconsistent(e.to_string()))?;
    let data = Dataset::new(graph, features, split).map_err(|e| DatasetError::Inconsistent(e.to_string()))?;
    Ok((data, report))
}

/// Writes `data` in the format [`load_dataset`] reads. Reals use the
/// shortest round-tripping representation, so a reload is exact.
pub fn save_dataset(dir: &Path, data: &Dataset) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let mut edges = String::new();
    for &(u, v) in data.graph.edges() {
        writeln!(edges, "{u}\t{v}").unwrap();
    }
    fs::write(dir.join(EDGES_FILE), edges)?;

    let mut feats = String::new();
    for i in 0..data.num_nodes() {
        let row: Vec<String> = data.features.row(i).iter().map(f64::to_string).collect();
        writeln!(feats, "{}", row.join(",")).unwrap();
    }
    fs::write(dir.join(FEATURES_FILE), feats)?;

    let mut labels = String::new();
    for l in data.split.labels() {
        writeln!(labels, "{l}").unwrap();
    }
    fs::write(dir.join(LABELS_FILE), labels)?;

    let mut splits = String::new();
    let subsets = [
        gst_core::graph::NodeSubset::Train,
        gst_core::graph::NodeSubset::Val,
        gst_core::graph::NodeSubset::Test,
    ];
    let masks: Vec<&[bool]> = subsets
        .iter()
        .map(|&s| data.split.mask(s).expect("train/val/test masks exist"))
        .collect();
    for i in 0..data.num_nodes() {
        let f = |m: &[bool]| if m[i] { '1' } else { '0' };
        writeln!(splits, "{},{},{}", f(masks[0]), f(masks[1]), f(masks[2])).unwrap();
    }
    fs::write(dir.join(SPLITS_FILE), splits)
}
