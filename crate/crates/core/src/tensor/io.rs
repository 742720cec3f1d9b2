//! Tensor serialization.
//!
//! Two forms are supported:
//!
//! * a binary pair: a JSON header `{row_dims, col_dims, dtype: "c128"}` and a
//!   payload of little-endian `f64` values, interleaved `(re, im)`, in the
//!   row-major storage order of [`DenseTensor`];
//! * a pure JSON form `{row_dims, col_dims, entries}` where `entries` is a
//!   nested array over all modes and each leaf is `[re, im]` (a bare number
//!   is read as a real entry).

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use super::dense::DenseTensor;
use super::shape::Shape;
use crate::error::{Error, Result};

pub const DTYPE_C128: &str = "c128";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorHeader {
    pub row_dims: Vec<usize>,
    pub col_dims: Vec<usize>,
    pub dtype: String,
}

impl DenseTensor {
    pub fn header(&self) -> TensorHeader {
        TensorHeader {
            row_dims: self.shape().row_dims().to_vec(),
            col_dims: self.shape().col_dims().to_vec(),
            dtype: DTYPE_C128.to_string(),
        }
    }

    pub fn to_payload(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.data().len() * 16);
        for z in self.data() {
            out.extend_from_slice(&z.re.to_le_bytes());
            out.extend_from_slice(&z.im.to_le_bytes());
        }
        out
    }

    pub fn from_header_payload(header: &TensorHeader, payload: &[u8]) -> Result<Self> {
        if header.dtype != DTYPE_C128 {
            return Err(Error::Config(format!("unsupported dtype `{}`", header.dtype)));
        }
        let shape = Shape::new(header.row_dims.clone(), header.col_dims.clone())?;
        if payload.len() != shape.len() * 16 {
            return Err(Error::Config(format!(
                "payload has {} bytes, shape {shape} needs {}",
                payload.len(),
                shape.len() * 16
            )));
        }
        let data = payload
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[..8].try_into().unwrap());
                let im = f64::from_le_bytes(c[8..].try_into().unwrap());
                Complex64::new(re, im)
            })
            .collect();
        DenseTensor::new(shape, data)
    }

    /// Writes `<stem>.json` and `<stem>.bin`.
    pub fn write_pair(&self, stem: &Path) -> Result<()> {
        let (json_path, bin_path) = pair_paths(stem);
        std::fs::write(json_path, serde_json::to_vec_pretty(&self.header())?)?;
        std::fs::write(bin_path, self.to_payload())?;
        Ok(())
    }

    pub fn read_pair(stem: &Path) -> Result<Self> {
        let (json_path, bin_path) = pair_paths(stem);
        let header: TensorHeader = serde_json::from_slice(&std::fs::read(json_path)?)?;
        DenseTensor::from_header_payload(&header, &std::fs::read(bin_path)?)
    }

    /// Pure JSON form with nested `entries`.
    pub fn to_json_value(&self) -> Value {
        let dims = self.shape().all_dims();
        let mut flat = self.data().iter();
        let entries = nest(&dims, &mut flat);
        json!({
            "row_dims": self.shape().row_dims(),
            "col_dims": self.shape().col_dims(),
            "entries": entries,
        })
    }

    pub fn from_json_value(value: &Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            row_dims: Vec<usize>,
            col_dims: Vec<usize>,
            entries: Value,
        }
        let raw: Raw = serde_json::from_value(value.clone())?;
        let shape = Shape::new(raw.row_dims, raw.col_dims)?;
        let mut data = Vec::with_capacity(shape.len());
        flatten(&shape.all_dims(), &raw.entries, &mut data)?;
        DenseTensor::new(shape, data)
    }
}

fn pair_paths(stem: &Path) -> (PathBuf, PathBuf) {
    (stem.with_extension("json"), stem.with_extension("bin"))
}

fn nest<'a>(dims: &[usize], flat: &mut impl Iterator<Item = &'a Complex64>) -> Value {
    match dims.split_first() {
        None => {
            let z = flat.next().expect("entry count matches shape");
            json!([z.re, z.im])
        }
        Some((&d, rest)) => Value::Array((0..d).map(|_| nest(rest, flat)).collect()),
    }
}

fn flatten(dims: &[usize], value: &Value, out: &mut Vec<Complex64>) -> Result<()> {
    match dims.split_first() {
        None => {
            let z = match value {
                Value::Number(n) => Complex64::new(n.as_f64().unwrap_or(f64::NAN), 0.0),
                Value::Array(pair) if pair.len() == 2 => {
                    let re = pair[0].as_f64();
                    let im = pair[1].as_f64();
                    match (re, im) {
                        (Some(re), Some(im)) => Complex64::new(re, im),
                        _ => return Err(Error::Config("entry must be [re, im] numbers".into())),
                    }
                }
                other => return Err(Error::Config(format!("bad tensor entry {other}"))),
            };
            out.push(z);
            Ok(())
        }
        Some((&d, rest)) => {
            let arr = value
                .as_array()
                .filter(|a| a.len() == d)
                .ok_or_else(|| Error::Config(format!("expected nested array of length {d}")))?;
            arr.iter().try_for_each(|v| flatten(rest, v, out))
        }
    }
}

impl Serialize for DenseTensor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_value().serialize(s)
    }
}

impl<'de> Deserialize<'de> for DenseTensor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        DenseTensor::from_json_value(&v).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> DenseTensor {
        let shape = Shape::new(vec![2], vec![1, 3]).unwrap();
        DenseTensor::from_fn(shape, |r, c| Complex64::new(r[0] as f64 - 0.5, c[1] as f64 * 0.25)).unwrap()
    }

    #[test]
    fn payload_layout_is_interleaved_le() {
        let t = sample();
        let p = t.to_payload();
        assert_eq!(p.len(), 6 * 16);
        assert_eq!(f64::from_le_bytes(p[0..8].try_into().unwrap()), -0.5);
        assert_eq!(f64::from_le_bytes(p[24..32].try_into().unwrap()), 0.25);
        assert_eq!(DenseTensor::from_header_payload(&t.header(), &p).unwrap(), t);
    }

    #[test]
    fn header_json_fields() {
        let v = serde_json::to_value(sample().header()).unwrap();
        assert_eq!(v, json!({"row_dims": [2], "col_dims": [1, 3], "dtype": "c128"}));
    }

    #[test]
    fn nested_json_accepts_real_leaves() {
        let v = json!({"row_dims": [2], "col_dims": [2], "entries": [[1.0, [0.0, 1.0]], [[0.0, -1.0], 2]]});
        let t = DenseTensor::from_json_value(&v).unwrap();
        assert_eq!(t.get(&[0], &[1]), Complex64::new(0.0, 1.0));
        assert_eq!(t.get(&[1], &[1]), Complex64::new(2.0, 0.0));
        let bad = json!({"row_dims": [2], "col_dims": [2], "entries": [[1.0]]});
        assert!(DenseTensor::from_json_value(&bad).is_err());
    }

    #[test]
    fn pair_files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let stem = dir.path().join("t");
        let t = sample();
        t.write_pair(&stem).unwrap();
        assert_eq!(DenseTensor::read_pair(&stem).unwrap(), t);
    }
}
