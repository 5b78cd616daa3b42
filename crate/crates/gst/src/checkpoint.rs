//! Parameter checkpoints: an 8-byte magic, the JSON header length as a
//! little-endian `u64`, a JSON header listing tensor names and shapes, then
//! every tensor as row-major little-endian `f64`.

use std::io::{Read, Write};
use std::path::Path;

use gst_core::dense::Matrix;
use gst_core::nn::{GcnParams, MaskerParams, Model};
use serde::{Deserialize, Serialize};

use crate::error::CheckpointError;

const MAGIC: &[u8; 8] = b"GSTCKPT1";

#[derive(Debug, Serialize, Deserialize)]
struct TensorHeader {
    name: String,
    rows: usize,
    cols: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    tensors: Vec<TensorHeader>,
}

pub fn write_tensors<W: Write>(mut out: W, tensors: &[(&str, &Matrix)]) -> Result<(), CheckpointError> {
    let header = Header {
        tensors: tensors
            .iter()
            .map(|(name, m)| TensorHeader {
                name: (*name).to_owned(),
                rows: m.rows(),
                cols: m.cols(),
            })
            .collect(),
    };
    let json = serde_json::to_vec(&header)?;
    out.write_all(MAGIC)?;
    out.write_all(&(json.len() as u64).to_le_bytes())?;
    out.write_all(&json)?;
    for (_, m) in tensors {
        for x in m.as_slice() {
            out.write_all(&x.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_tensors<R: Read>(mut input: R) -> Result<Vec<(String, Matrix)>, CheckpointError> {
    let mut magic = [0u8; 8];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(CheckpointError::BadMagic);
    }
    let mut len = [0u8; 8];
    input.read_exact(&mut len)?;
    let mut json = vec![0u8; u64::from_le_bytes(len) as usize];
    input.read_exact(&mut json)?;
    let header: Header = serde_json::from_slice(&json)?;
    let mut blob = Vec::new();
    input.read_to_end(&mut blob)?;
    let expected: usize = header.tensors.iter().map(|t| t.rows * t.cols * 8).sum();
    if blob.len() != expected {
        return Err(CheckpointError::Truncated {
            expected,
            found: blob.len(),
        });
    }
    let mut values = blob
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")));
    Ok(header
        .tensors
        .into_iter()
        .map(|t| {
            let data: Vec<f64> = values.by_ref().take(t.rows * t.cols).collect();
            let m = Matrix::from_vec(t.rows, t.cols, data).expect("length checked above");
            (t.name, m)
        })
        .collect())
}

pub fn save_model(path: &Path, model: &Model) -> Result<(), CheckpointError> {
    let file = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_tensors(
        file,
        &[
            ("gcn.w1", &model.gcn.w1),
            ("gcn.w2", &model.gcn.w2),
            ("masker.m1", &model.masker.m1),
            ("masker.m2", &model.masker.m2),
        ],
    )
}

pub fn load_model(path: &Path) -> Result<Model, CheckpointError> {
    let mut tensors = read_tensors(std::io::BufReader::new(std::fs::File::open(path)?))?;
    let mut take = |name: &str| {
        tensors
            .iter()
            .position(|(n, _)| n == name)
            .map(|i| tensors.swap_remove(i).1)
            .ok_or_else(|| CheckpointError::MissingTensor(name.to_owned()))
    };
    Ok(Model {
        gcn: GcnParams {
            w1: take("gcn.w1")?,
            w2: take("gcn.w2")?,
        },
        masker: MaskerParams {
            m1: take("masker.m1")?,
            m2: take("masker.m2")?,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn round_trip_is_bit_exact() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let model = Model::init(&mut rng, 7, 5, 3, 4);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.ckpt");
        save_model(&path, &model).unwrap();
        assert_eq!(load_model(&path).unwrap(), model);
    }

    #[test]
    fn layout_is_documented_format() {
        let m = Matrix::from_vec(1, 2, vec![1.5, -2.0]).unwrap();
        let mut buf = Vec::new();
        write_tensors(&mut buf, &[("a", &m)]).unwrap();
        assert_eq!(&buf[..8], MAGIC);
        let hlen = u64::from_le_bytes(buf[8..16].try_into().unwrap()) as usize;
        let header: serde_json::Value = serde_json::from_slice(&buf[16..16 + hlen]).unwrap();
        assert_eq!(header["tensors"][0]["rows"], 1);
        assert_eq!(&buf[16 + hlen..16 + hlen + 8], &1.5f64.to_le_bytes());
        assert_eq!(buf.len(), 16 + hlen + 16);
    }

    #[test]
    fn rejects_corruption() {
        let m = Matrix::zeros(2, 2);
        let mut buf = Vec::new();
        write_tensors(&mut buf, &[("a", &m)]).unwrap();
        buf.pop();
        assert!(matches!(read_tensors(&buf[..]), Err(CheckpointError::Truncated { .. })));
        buf[0] = b'X';
        assert!(matches!(read_tensors(&buf[..]), Err(CheckpointError::BadMagic)));
    }
}
