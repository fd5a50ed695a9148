//! Bit-exact binary snapshots of a distribution field.
//!
//! Layout (little-endian throughout):
//!
//! | bytes | field                                  |
//! |-------|----------------------------------------|
//! | 8     | magic `b"KINCHK01"`                    |
//! | 4     | format version (u32, currently 1)      |
//! | 8x4   | epsilon, r, q, nu0 (f64)               |
//! | 4     | spatial modes per axis M (u32)         |
//! | 4     | velocity nodes per axis N (u32)        |
//! | 8 x M^2 x N^3 | field values, row-major in the spatial index |
//!
//! Values are written as raw f64 bits, so a round-trip reproduces the
//! field exactly.

use std::io::{Read, Write};
use std::path::Path;

use ndarray::Array2;

use crate::error::CheckpointError;
use crate::solver::DistributionField;

const MAGIC: &[u8; 8] = b"KINCHK01";
const VERSION: u32 = 1;

/// A distribution snapshot together with the scaling parameters it was
/// produced under.
#[derive(Clone, Debug, PartialEq)]
pub struct Checkpoint {
    pub epsilon: f64,
    pub r: f64,
    pub q: f64,
    pub nu0: f64,
    /// Spatial modes per axis.
    pub spatial_modes: u32,
    /// Velocity nodes per axis.
    pub velocity_nodes: u32,
    pub field: DistributionField<f64>,
}

impl Checkpoint {
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<(), CheckpointError> {
        let m = self.spatial_modes as usize;
        let n = self.velocity_nodes as usize;
        let expect = (m * m, n * n * n);
        if self.field.values.dim() != expect {
            return Err(CheckpointError::Io(std::io::Error::new(
                std::io::ErrorKind::InvalidInput,
                format!(
                    "field shape {:?} does not match header dims {:?}",
                    self.field.values.dim(),
                    expect
                ),
            )));
        }
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        for v in [self.epsilon, self.r, self.q, self.nu0] {
            w.write_all(&v.to_le_bytes())?;
        }
        w.write_all(&self.spatial_modes.to_le_bytes())?;
        w.write_all(&self.velocity_nodes.to_le_bytes())?;
        for v in self.field.values.iter() {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self, CheckpointError> {
        let mut magic = [0u8; 8];
        read_exact(&mut r, &mut magic)?;
        if &magic != MAGIC {
            return Err(CheckpointError::BadMagic);
        }
        let version = read_u32(&mut r)?;
        if version != VERSION {
            return Err(CheckpointError::BadVersion(version));
        }
        let epsilon = read_f64(&mut r)?;
        let rr = read_f64(&mut r)?;
        let q = read_f64(&mut r)?;
        let nu0 = read_f64(&mut r)?;
        let spatial_modes = read_u32(&mut r)?;
        let velocity_nodes = read_u32(&mut r)?;
        let m = spatial_modes as usize;
        let n = velocity_nodes as usize;
        let count = m * m * n * n * n;
        let mut values = Vec::with_capacity(count);
        for _ in 0..count {
            values.push(read_f64(&mut r)?);
        }
        let values = Array2::from_shape_vec((m * m, n * n * n), values)
            .map_err(|e| CheckpointError::Truncated(e.to_string()))?;
        Ok(Self {
            epsilon,
            r: rr,
            q,
            nu0,
            spatial_modes,
            velocity_nodes,
            field: DistributionField { values },
        })
    }

    pub fn save(&self, path: &Path) -> Result<(), CheckpointError> {
        let file = std::fs::File::create(path)?;
        self.write_to(std::io::BufWriter::new(file))
    }

    pub fn load(path: &Path) -> Result<Self, CheckpointError> {
        let file = std::fs::File::open(path)?;
        Self::read_from(std::io::BufReader::new(file))
    }
}

fn read_exact<R: Read>(r: &mut R, buf: &mut [u8]) -> Result<(), CheckpointError> {
    r.read_exact(buf).map_err(|e| {
        if e.kind() == std::io::ErrorKind::UnexpectedEof {
            CheckpointError::Truncated("unexpected end of file".into())
        } else {
            CheckpointError::Io(e)
        }
    })
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32, CheckpointError> {
    let mut b = [0u8; 4];
    read_exact(r, &mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64, CheckpointError> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b)?;
    Ok(f64::from_le_bytes(b))
}
