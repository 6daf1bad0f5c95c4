//! The SAFT tensor container: a minimal bit-exact binary format.
//!
//! Layout, all little-endian:
//!
//! ```text
//! offset  size          field
//! 0       4             magic "SAFT"
//! 4       1             version (currently 1)
//! 5       1             dtype code (1=f32, 2=f64, 3=complex64, 4=u8, 5=i32)
//! 6       1             ndim (1..=4)
//! 7       4 * ndim      shape, u32 each
//! ...     prod * width  payload, row-major scalars
//! ```
//!
//! complex64 scalars are stored as interleaved (re, im) f32 pairs, so the
//! payload width is 8 bytes per element.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use ndarray::{ArrayD, IxDyn};
use num_complex::Complex32;

use crate::error::{Result, SafeError};

pub const MAGIC: [u8; 4] = *b"SAFT";
pub const VERSION: u8 = 1;

/// Element type codes of the container format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dtype {
    F32 = 1,
    F64 = 2,
    C64 = 3,
    U8 = 4,
    I32 = 5,
}

impl Dtype {
    pub fn from_code(code: u8) -> Result<Self> {
        match code {
            1 => Ok(Dtype::F32),
            2 => Ok(Dtype::F64),
            3 => Ok(Dtype::C64),
            4 => Ok(Dtype::U8),
            5 => Ok(Dtype::I32),
            other => Err(SafeError::UnknownDtype(other)),
        }
    }

    pub fn byte_width(self) -> usize {
        match self {
            Dtype::F32 => 4,
            Dtype::F64 => 8,
            Dtype::C64 => 8,
            Dtype::U8 => 1,
            Dtype::I32 => 4,
        }
    }
}

/// A dynamically typed dense tensor, the unit of file exchange.
#[derive(Debug, Clone, PartialEq)]
pub enum Tensor {
    F32(ArrayD<f32>),
    F64(ArrayD<f64>),
    C64(ArrayD<Complex32>),
    U8(ArrayD<u8>),
    I32(ArrayD<i32>),
}

impl Tensor {
    pub fn dtype(&self) -> Dtype {
        match self {
            Tensor::F32(_) => Dtype::F32,
            Tensor::F64(_) => Dtype::F64,
            Tensor::C64(_) => Dtype::C64,
            Tensor::U8(_) => Dtype::U8,
            Tensor::I32(_) => Dtype::I32,
        }
    }

    pub fn shape(&self) -> &[usize] {
        match self {
            Tensor::F32(a) => a.shape(),
            Tensor::F64(a) => a.shape(),
            Tensor::C64(a) => a.shape(),
            Tensor::U8(a) => a.shape(),
            Tensor::I32(a) => a.shape(),
        }
    }

    pub fn as_f32(&self) -> Result<&ArrayD<f32>> {
        match self {
            Tensor::F32(a) => Ok(a),
            other => Err(SafeError::Shape(format!(
                "expected f32 tensor, found {:?}",
                other.dtype()
            ))),
        }
    }

    pub fn as_c64(&self) -> Result<&ArrayD<Complex32>> {
        match self {
            Tensor::C64(a) => Ok(a),
            other => Err(SafeError::Shape(format!(
                "expected complex64 tensor, found {:?}",
                other.dtype()
            ))),
        }
    }

    pub fn as_u8(&self) -> Result<&ArrayD<u8>> {
        match self {
            Tensor::U8(a) => Ok(a),
            other => Err(SafeError::Shape(format!(
                "expected u8 tensor, found {:?}",
                other.dtype()
            ))),
        }
    }
}

fn check_rank(ndim: usize) -> Result<()> {
    if !(1..=4).contains(&ndim) {
        return Err(SafeError::BadRank(ndim as u8));
    }
    Ok(())
}

fn payload_bytes(t: &Tensor) -> Vec<u8> {
    // Row-major little-endian scalars. Arrays are forced to standard layout
    // so the element order matches the logical shape.
    match t {
        Tensor::F32(a) => a
            .as_standard_layout()
            .iter()
            .flat_map(|v| v.to_le_bytes())
            .collect(),
        Tensor::F64(a) => a
            .as_standard_layout()
            .iter()
            .flat_map(|v| v.to_le_bytes())
            .collect(),
        Tensor::C64(a) => a
            .as_standard_layout()
            .iter()
            .flat_map(|v| {
                let mut b = [0u8; 8];
                b[..4].copy_from_slice(&v.re.to_le_bytes());
                b[4..].copy_from_slice(&v.im.to_le_bytes());
                b
            })
            .collect(),
        Tensor::U8(a) => a.as_standard_layout().iter().copied().collect(),
        Tensor::I32(a) => a
            .as_standard_layout()
            .iter()
            .flat_map(|v| v.to_le_bytes())
            .collect(),
    }
}

/// Write `data` to `path` in the SAFT container format.
pub fn write_tensor(path: impl AsRef<Path>, data: &Tensor) -> Result<()> {
    let path = path.as_ref();
    check_rank(data.shape().len())?;
    let file = File::create(path).map_err(|e| SafeError::io(path, e))?;
    let mut w = BufWriter::new(file);
    let mut header = Vec::with_capacity(7 + 4 * data.shape().len());
    header.extend_from_slice(&MAGIC);
    header.push(VERSION);
    header.push(data.dtype() as u8);
    header.push(data.shape().len() as u8);
    for &dim in data.shape() {
        header.extend_from_slice(&(dim as u32).to_le_bytes());
    }
    w.write_all(&header).map_err(|e| SafeError::io(path, e))?;
    w.write_all(&payload_bytes(data))
        .map_err(|e| SafeError::io(path, e))?;
    w.flush().map_err(|e| SafeError::io(path, e))?;
    Ok(())
}

/// Read a SAFT container back into a [`Tensor`].
///
/// Distinguishes bad magic, unknown dtype codes, bad rank, and truncated
/// payloads as separate error kinds.
pub fn read_tensor(path: impl AsRef<Path>) -> Result<Tensor> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| SafeError::io(path, e))?;
    let mut r = BufReader::new(file);

    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)
        .map_err(|e| SafeError::io(path, e))?;
    if magic != MAGIC {
        return Err(SafeError::BadMagic { found: magic });
    }
    let mut meta = [0u8; 3];
    r.read_exact(&mut meta).map_err(|e| SafeError::io(path, e))?;
    let (version, dtype_code, ndim) = (meta[0], meta[1], meta[2]);
    if version != VERSION {
        return Err(SafeError::BadVersion(version));
    }
    let dtype = Dtype::from_code(dtype_code)?;
    check_rank(ndim as usize)?;

    let mut shape = Vec::with_capacity(ndim as usize);
    for _ in 0..ndim {
        let mut b = [0u8; 4];
        r.read_exact(&mut b).map_err(|e| SafeError::io(path, e))?;
        shape.push(u32::from_le_bytes(b) as usize);
    }
    let count: usize = shape.iter().product();
    let expected = count * dtype.byte_width();
    let mut payload = Vec::with_capacity(expected);
    r.read_to_end(&mut payload)
        .map_err(|e| SafeError::io(path, e))?;
    if payload.len() != expected {
        return Err(SafeError::Truncated {
            expected,
            found: payload.len(),
        });
    }

    let dyn_shape = IxDyn(&shape);
    let tensor = match dtype {
        Dtype::F32 => {
            let v: Vec<f32> = payload
                .chunks_exact(4)
                .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
                .collect();
            Tensor::F32(ArrayD::from_shape_vec(dyn_shape, v).unwrap())
        }
        Dtype::F64 => {
            let v: Vec<f64> = payload
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
                .collect();
            Tensor::F64(ArrayD::from_shape_vec(dyn_shape, v).unwrap())
        }
        Dtype::C64 => {
            let v: Vec<Complex32> = payload
                .chunks_exact(8)
                .map(|c| {
                    Complex32::new(
                        f32::from_le_bytes(c[..4].try_into().unwrap()),
                        f32::from_le_bytes(c[4..].try_into().unwrap()),
                    )
                })
                .collect();
            Tensor::C64(ArrayD::from_shape_vec(dyn_shape, v).unwrap())
        }
        Dtype::U8 => Tensor::U8(ArrayD::from_shape_vec(dyn_shape, payload).unwrap()),
        Dtype::I32 => {
            let v: Vec<i32> = payload
                .chunks_exact(4)
                .map(|c| i32::from_le_bytes(c.try_into().unwrap()))
                .collect();
            Tensor::I32(ArrayD::from_shape_vec(dyn_shape, v).unwrap())
        }
    };
    Ok(tensor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;
    use rand::Rng;

    fn tmp() -> tempfile::TempDir {
        tempfile::tempdir().unwrap()
    }

    #[test]
    fn zeros_layout_is_exact() {
        let dir = tmp();
        let p = dir.path().join("z.saft");
        let t = Tensor::F32(Array2::<f32>::zeros((2, 2)).into_dyn());
        write_tensor(&p, &t).unwrap();
        let bytes = std::fs::read(&p).unwrap();
        let mut expected = Vec::new();
        expected.extend_from_slice(b"SAFT");
        expected.extend_from_slice(&[1, 1, 2]);
        expected.extend_from_slice(&2u32.to_le_bytes());
        expected.extend_from_slice(&2u32.to_le_bytes());
        expected.extend_from_slice(&[0u8; 16]);
        assert_eq!(bytes, expected);
        assert_eq!(read_tensor(&p).unwrap(), t);
    }

    #[test]
    fn complex_payload_is_interleaved_le_pairs() {
        let dir = tmp();
        let p = dir.path().join("c.saft");
        let t = Tensor::C64(
            ArrayD::from_shape_vec(IxDyn(&[1, 1]), vec![Complex32::new(1.0, -1.0)]).unwrap(),
        );
        write_tensor(&p, &t).unwrap();
        let bytes = std::fs::read(&p).unwrap();
        let payload = &bytes[bytes.len() - 8..];
        let mut expected = Vec::new();
        expected.extend_from_slice(&1.0f32.to_le_bytes());
        expected.extend_from_slice(&(-1.0f32).to_le_bytes());
        assert_eq!(payload, &expected[..]);
    }

    #[test]
    fn bad_magic_is_its_own_error() {
        let dir = tmp();
        let p = dir.path().join("bad.saft");
        std::fs::write(&p, b"XXXX\x01\x01\x01\x02\x00\x00\x00\x00\x00\x00\x00\x00").unwrap();
        match read_tensor(&p) {
            Err(SafeError::BadMagic { found }) => assert_eq!(&found, b"XXXX"),
            other => panic!("expected BadMagic, got {other:?}"),
        }
    }

    #[test]
    fn truncated_payload_is_detected() {
        let dir = tmp();
        let p = dir.path().join("t.saft");
        let t = Tensor::F32(Array2::<f32>::zeros((2, 2)).into_dyn());
        write_tensor(&p, &t).unwrap();
        let bytes = std::fs::read(&p).unwrap();
        std::fs::write(&p, &bytes[..bytes.len() - 3]).unwrap();
        match read_tensor(&p) {
            Err(SafeError::Truncated { expected, found }) => {
                assert_eq!(expected, 16);
                assert_eq!(found, 13);
            }
            other => panic!("expected Truncated, got {other:?}"),
        }
    }

    #[test]
    fn unknown_dtype_is_detected() {
        let dir = tmp();
        let p = dir.path().join("d.saft");
        let mut bytes = Vec::new();
        bytes.extend_from_slice(b"SAFT");
        bytes.extend_from_slice(&[1, 9, 1]);
        bytes.extend_from_slice(&1u32.to_le_bytes());
        bytes.extend_from_slice(&[0u8; 4]);
        std::fs::write(&p, &bytes).unwrap();
        match read_tensor(&p) {
            Err(SafeError::UnknownDtype(9)) => {}
            other => panic!("expected UnknownDtype(9), got {other:?}"),
        }
    }

    #[test]
    fn random_f64_roundtrip_is_bit_exact() {
        // Round-trip oracle over seeded random tensors.
        let dir = tmp();
        let mut rng = crate::io::SeedStream::new(7).rng();
        for i in 0..100 {
            let v: Vec<f64> = (0..3 * 4 * 5).map(|_| rng.random::<f64>()).collect();
            let t = Tensor::F64(ArrayD::from_shape_vec(IxDyn(&[3, 4, 5]), v).unwrap());
            let p = dir.path().join(format!("r{i}.saft"));
            write_tensor(&p, &t).unwrap();
            assert_eq!(read_tensor(&p).unwrap(), t);
        }
    }
}
