//! Model persistence.
//!
//! Byte layout (all integers and floats little-endian):
//!
//! ```text
//! magic    6 bytes   "APVNET"
//! version  u32       currently 1
//! n_dims   u32       number of layer dims D (>= 2)
//! dims     D x u32   layer widths, input first
//! per layer l in 0..D-1, in order:
//!   weights  dims[l+1] * dims[l] x f64   row-major, row = output unit
//!   biases   dims[l+1] x f64
//! ```
//!
//! No padding, no trailing bytes. `load(save(m))` reproduces `m` bit for bit.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{MlpModel, NnError};
use crate::linalg::Matrix;

pub const MODEL_MAGIC: &[u8; 6] = b"APVNET";
pub const MODEL_VERSION: u32 = 1;

impl MlpModel {
    pub fn save<W: Write>(&self, mut writer: W) -> io::Result<()> {
        writer.write_all(MODEL_MAGIC)?;
        writer.write_all(&MODEL_VERSION.to_le_bytes())?;
        writer.write_all(&(self.layer_dims.len() as u32).to_le_bytes())?;
        for &dim in &self.layer_dims {
            writer.write_all(&(dim as u32).to_le_bytes())?;
        }
        for (w, b) in self.weights.iter().zip(self.biases.iter()) {
            for &value in w.as_slice() {
                writer.write_all(&value.to_le_bytes())?;
            }
            for &value in b {
                writer.write_all(&value.to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn save_to_path<P: AsRef<Path>>(&self, path: P) -> io::Result<()> {
        let mut writer = BufWriter::new(File::create(path)?);
        self.save(&mut writer)?;
        writer.flush()
    }

    pub fn load<R: Read>(mut reader: R) -> Result<Self, NnError> {
        let malformed = |msg: &str| NnError::MalformedModelFile(msg.to_string());

        let mut magic = [0u8; 6];
        read_exact(&mut reader, &mut magic)?;
        if &magic != MODEL_MAGIC {
            return Err(malformed("bad magic"));
        }
        let version = read_u32(&mut reader)?;
        if version != MODEL_VERSION {
            return Err(NnError::UnsupportedVersion(version));
        }
        let n_dims = read_u32(&mut reader)? as usize;
        if n_dims < 2 {
            return Err(malformed("fewer than two layer dims"));
        }
        let mut layer_dims = Vec::with_capacity(n_dims);
        for _ in 0..n_dims {
            let dim = read_u32(&mut reader)? as usize;
            if dim == 0 {
                return Err(malformed("zero layer width"));
            }
            layer_dims.push(dim);
        }
        if *layer_dims.last().unwrap() != 1 {
            return Err(malformed("output layer width must be 1"));
        }

        let mut weights = Vec::with_capacity(n_dims - 1);
        let mut biases = Vec::with_capacity(n_dims - 1);
        for pair in layer_dims.windows(2) {
            let (fan_in, fan_out) = (pair[0], pair[1]);
            let mut w = vec![0.0f64; fan_out * fan_in];
            for value in w.iter_mut() {
                *value = read_f64(&mut reader)?;
            }
            let mut b = vec![0.0f64; fan_out];
            for value in b.iter_mut() {
                *value = read_f64(&mut reader)?;
            }
            if w.iter().chain(b.iter()).any(|v| !v.is_finite()) {
                return Err(malformed("non-finite parameter"));
            }
            weights.push(Matrix::from_vec(fan_out, fan_in, w));
            biases.push(b);
        }

        let mut probe = [0u8; 1];
        match reader.read(&mut probe) {
            Ok(0) => {}
            Ok(_) => return Err(malformed("trailing bytes after parameters")),
            Err(e) => return Err(NnError::MalformedModelFile(e.to_string())),
        }

        Ok(Self {
            layer_dims,
            weights,
            biases,
        })
    }

    pub fn load_from_path<P: AsRef<Path>>(path: P) -> Result<Self, NnError> {
        let file = File::open(path)
            .map_err(|e| NnError::MalformedModelFile(format!("cannot open model file: {e}")))?;
        Self::load(BufReader::new(file))
    }
}

fn read_exact<R: Read>(reader: &mut R, buf: &mut [u8]) -> Result<(), NnError> {
    reader
        .read_exact(buf)
        .map_err(|_| NnError::MalformedModelFile("unexpected end of stream".into()))
}

fn read_u32<R: Read>(reader: &mut R) -> Result<u32, NnError> {
    let mut buf = [0u8; 4];
    read_exact(reader, &mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

fn read_f64<R: Read>(reader: &mut R) -> Result<f64, NnError> {
    let mut buf = [0u8; 8];
    read_exact(reader, &mut buf)?;
    Ok(f64::from_le_bytes(buf))
}
