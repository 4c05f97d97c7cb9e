//! `{"dim": n, "rows": [[[re, im], ...], ...]}` matrix documents.

use std::path::Path;

use gatedist::{Complex64, ComplexMatrix, DensityMatrix, Gate};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dim: usize,
    pub rows: Vec<Vec<[f64; 2]>>,
}

/// A list of gates for `discriminate`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateSetFile {
    pub gates: Vec<MatrixFile>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            dim: m.rows(),
            rows: (0..m.rows()).map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect()).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix, CliError> {
        if self.rows.len() != self.dim {
            return Err(CliError::Input(format!("{} rows for dim {}", self.rows.len(), self.dim)));
        }
        if let Some((i, r)) = self.rows.iter().enumerate().find(|(_, r)| r.len() != self.dim) {
            return Err(CliError::Input(format!("row {i} has {} entries for dim {}", r.len(), self.dim)));
        }
        let rows: Vec<Vec<Complex64>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
            .collect();
        Ok(ComplexMatrix::from_rows(&rows)?)
    }

    pub fn to_gate(&self, tol: f64) -> Result<Gate, CliError> {
        Ok(Gate::with_tolerance(self.to_matrix()?, tol)?)
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::Input(format!(
            "malformed JSON in {} at line {} column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

pub fn read_matrix(path: &Path) -> Result<MatrixFile, CliError> {
    read_json(path)
}

pub fn read_gate(path: &Path, tol: f64) -> Result<Gate, CliError> {
    read_matrix(path)?.to_gate(tol)
}

pub fn read_density(path: &Path) -> Result<DensityMatrix, CliError> {
    Ok(DensityMatrix::new(read_matrix(path)?.to_matrix()?)?)
}

pub fn read_gate_set(path: &Path, tol: f64) -> Result<Vec<Gate>, CliError> {
    let set: GateSetFile = read_json(path)?;
    set.gates.iter().map(|m| m.to_gate(tol)).collect()
}
