//! Versioned JSON interchange format for density matrices.
//!
//! ```json
//! {
//!   "format": 1,
//!   "dim": 2,
//!   "matrix": [[[0.5, 0.0], ...], ...]
//! }
//! ```
//!
//! `dim` is the local dimension d; `matrix` is the d²×d² composite matrix,
//! row-major, each entry encoded as `[re, im]`. Values survive a
//! write-then-read round trip bit-exactly.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use fef_core::bloch::{validate_density, DensityMatrix, DEFAULT_TOL};

use crate::error::{CliError, ErrorCode, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MatrixFile {
    pub format: u32,
    pub dim: usize,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl MatrixFile {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let side = rho.side();
        let m = rho.matrix();
        let matrix = (0..side)
            .map(|i| (0..side).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect();
        MatrixFile {
            format: FORMAT_VERSION,
            dim: rho.dim(),
            matrix,
        }
    }

    /// Decode and validate as a density matrix.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        if self.format != FORMAT_VERSION {
            return Err(CliError::new(
                ErrorCode::Parse,
                format!("unsupported matrix file format {}, expected {FORMAT_VERSION}", self.format),
            ));
        }
        let side = self.dim * self.dim;
        if self.dim < 2 || self.matrix.len() != side {
            return Err(CliError::new(
                ErrorCode::Parse,
                format!(
                    "matrix has {} rows, expected dim² = {side} (dim = {})",
                    self.matrix.len(),
                    self.dim
                ),
            ));
        }
        for (i, row) in self.matrix.iter().enumerate() {
            if row.len() != side {
                return Err(CliError::new(
                    ErrorCode::Parse,
                    format!("row {i} has {} entries, expected {side}", row.len()),
                ));
            }
        }
        let m = DMatrix::from_fn(side, side, |i, j| {
            Complex64::new(self.matrix[i][j][0], self.matrix[i][j][1])
        });
        Ok(validate_density(&m, DEFAULT_TOL)?)
    }
}

pub fn read_matrix_file(path: &Path) -> Result<DensityMatrix> {
    let file = File::open(path)
        .map_err(|e| CliError::new(ErrorCode::Io, format!("{}: {e}", path.display())))?;
    let parsed: MatrixFile = serde_json::from_reader(BufReader::new(file))?;
    parsed.to_density()
}

pub fn write_matrix_file(path: &Path, rho: &DensityMatrix) -> Result<()> {
    let file = File::create(path)
        .map_err(|e| CliError::new(ErrorCode::Io, format!("{}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, &MatrixFile::from_density(rho))?;
    writeln!(w)?;
    Ok(())
}
