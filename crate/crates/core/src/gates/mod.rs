//! Distinguishability of unitary operations.
//!
//! Two gates `U₁`, `U₂` are compared through the relative gate `U = U₁†U₂`.
//! Applying the unknown gate to one half of a probe `|ψ⟩ ∈ C^d ⊗ C^d` and
//! measuring gives the overlap `|⟨ψ|U ⊗ 1|ψ⟩|² = |Σ_k λ_k e^{iφ_k}|²`, where
//! `φ_k` are the eigenphases of `U` and `λ_k` the weights the reduced probe
//! state puts on its eigenvectors. Minimizing over the simplex of weights gives
//! the gate fidelity: `cos² δ` when the eigenphases fit in an arc of half-width
//! `δ < π/2`, and zero otherwise.
//!
//! The same picture applied to `U^{⊗N}`, whose eigenphases are the `N`-fold
//! sums, explains why `N = ⌈π/(2δ)⌉` parallel copies always suffice for
//! perfect discrimination.

mod arc;
mod oracle;
mod params;
mod probe;

use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

use num_complex::Complex64;

pub use arc::{convex_min_overlap, minimal_covering_arc, tensor_power_phase_set, ArcResult};
pub(crate) use oracle::gaussian_state;
pub use oracle::{oracle_min_overlap, oracle_report, OracleReport};
pub use params::{su2_from_params, su3_example_gate, GateSU2Params};
pub use probe::{
    ncopy_probe_weight, optimal_probe_ncopies, optimal_probe_single, probe_overlap, probe_overlap_spectral,
    ProbeRepr, ProbeState, ProductTerm,
};

use crate::error::{Error, Result};
use crate::numkit::{
    self, eig_unitary, kron_power, validate_unitary, ComplexMatrix, UnitaryEigen, DEFAULT_SIZE_CAP, STRUCTURE_TOL,
};

/// Tolerance on `|det U − 1|` for special-unitary gates.
pub const DET_TOL: f64 = 1e-8;

/// Distances at or below this are treated as identical gates.
pub const IDENTICAL_TOL: f64 = 1e-12;

/// Relative slack when deciding that `π/(2d)` is an exact integer.
const EXACT_INT_TOL: f64 = 1e-12;

/// A validated unitary with a lazily computed spectral decomposition.
#[derive(Debug, Clone)]
pub struct Gate {
    matrix: ComplexMatrix,
    spectral: OnceLock<UnitaryEigen>,
}

impl PartialEq for Gate {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl Gate {
    /// Accepts `matrix` if it is unitary within `1e-10`.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, STRUCTURE_TOL)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        if !validate_unitary(&matrix, tol)? {
            return Err(Error::invalid(format!("matrix is not unitary within {tol:e}")));
        }
        Ok(Self {
            matrix,
            spectral: OnceLock::new(),
        })
    }

    /// Like [`Gate::new`] but additionally requires `|det − 1| ≤ 1e-8`.
    pub fn special(matrix: ComplexMatrix) -> Result<Self> {
        let g = Self::new(matrix)?;
        if !g.is_special_unitary() {
            return Err(Error::invalid("determinant is not 1"));
        }
        Ok(g)
    }

    pub fn identity(d: usize) -> Self {
        Self::trusted(ComplexMatrix::identity(d))
    }

    /// `diag(e^{iφ_1}, …, e^{iφ_d})`.
    pub fn from_phases(phases: &[f64]) -> Result<Self> {
        if phases.is_empty() {
            return Err(Error::invalid("need at least one phase"));
        }
        Ok(Self::trusted(ComplexMatrix::from_phases(phases)))
    }

    /// `iσ_x`.
    pub fn i_sigma_x() -> Self {
        let (o, i) = (Complex64::new(0.0, 0.0), Complex64::i());
        Self::trusted(ComplexMatrix::from_rows(&[vec![o, i], vec![i, o]]).expect("2x2"))
    }

    /// `iσ_y`.
    pub fn i_sigma_y() -> Self {
        let (o, one) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        Self::trusted(ComplexMatrix::from_rows(&[vec![o, one], vec![-one, o]]).expect("2x2"))
    }

    /// `iσ_z`.
    pub fn i_sigma_z() -> Self {
        let (o, i) = (Complex64::new(0.0, 0.0), Complex64::i());
        Self::trusted(ComplexMatrix::from_rows(&[vec![i, o], vec![o, -i]]).expect("2x2"))
    }

    fn trusted(matrix: ComplexMatrix) -> Self {
        debug_assert!(validate_unitary(&matrix, STRUCTURE_TOL).unwrap_or(false));
        Self {
            matrix,
            spectral: OnceLock::new(),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_special_unitary(&self) -> bool {
        self.matrix
            .determinant()
            .map(|det| (det - Complex64::new(1.0, 0.0)).norm() <= DET_TOL)
            .unwrap_or(false)
    }

    /// Cached spectral decomposition.
    pub fn spectral(&self) -> Result<&UnitaryEigen> {
        if let Some(e) = self.spectral.get() {
            return Ok(e);
        }
        let e = eig_unitary(&self.matrix)?;
        Ok(self.spectral.get_or_init(|| e))
    }

    /// Installs a caller-provided spectral decomposition, e.g. one with a
    /// different basis choice inside degenerate eigenspaces. The decomposition
    /// must reproduce the matrix to `1e-10`.
    pub fn with_spectral(self, eig: UnitaryEigen) -> Result<Self> {
        if eig.phases.len() != self.dim() || eig.vectors.len() != self.dim() {
            return Err(Error::dim("spectral decomposition has the wrong size"));
        }
        let residual = eig.max_residual(&self.matrix)?;
        if residual > STRUCTURE_TOL || eig.orthonormality_error() > STRUCTURE_TOL {
            return Err(Error::invalid(format!(
                "spectral decomposition does not match the gate (residual {residual:e})"
            )));
        }
        let cell = OnceLock::new();
        let _ = cell.set(eig);
        Ok(Self {
            matrix: self.matrix,
            spectral: cell,
        })
    }

    pub fn adjoint(&self) -> Self {
        Self::trusted(self.matrix.adjoint())
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &Gate) -> Result<Self> {
        Self::new(self.matrix.matmul(&other.matrix)?)
    }

    /// `U^{⊗n}` with the default size cap of `2^12`.
    pub fn tensor_power(&self, n: usize) -> Result<Self> {
        self.tensor_power_capped(n, DEFAULT_SIZE_CAP)
    }

    pub fn tensor_power_capped(&self, n: usize, cap: usize) -> Result<Self> {
        Self::new(kron_power(&self.matrix, n, cap)?)
    }
}

pub(crate) fn check_same_dim(u1: &Gate, u2: &Gate) -> Result<()> {
    if u1.dim() != u2.dim() {
        return Err(Error::dim(format!("gates of dimension {} and {}", u1.dim(), u2.dim())));
    }
    Ok(())
}

pub(crate) fn check_qubit(u: &Gate) -> Result<()> {
    if u.dim() != 2 {
        return Err(Error::dim(format!("expected a one-qubit gate, got dimension {}", u.dim())));
    }
    Ok(())
}

/// `U₁†U₂`. When `U₁` is exactly the identity, `U₂` is returned as is, keeping
/// any spectral decomposition already attached to it.
pub fn relative_gate(u1: &Gate, u2: &Gate) -> Result<Gate> {
    check_same_dim(u1, u2)?;
    if u1.matrix == ComplexMatrix::identity(u1.dim()) {
        return Ok(u2.clone());
    }
    Gate::new(u1.matrix.adjoint().matmul(&u2.matrix)?)
}

/// `tr(U₁†U₂)` without forming the product.
fn trace_overlap(u1: &Gate, u2: &Gate) -> Complex64 {
    u1.matrix
        .as_slice()
        .iter()
        .zip(u2.matrix.as_slice())
        .map(|(a, &b)| a.conj() * b)
        .sum()
}

/// One-qubit gate fidelity `|tr(U₁†U₂)|² / 4`.
pub fn gate_fidelity_su2(u1: &Gate, u2: &Gate) -> Result<f64> {
    check_qubit(u1)?;
    check_qubit(u2)?;
    Ok((trace_overlap(u1, u2).norm_sqr() / 4.0).clamp(0.0, 1.0))
}

/// Covering arc of the eigenphases of `U₁†U₂`.
pub fn relative_arc(u1: &Gate, u2: &Gate) -> Result<ArcResult> {
    let rel = relative_gate(u1, u2)?;
    minimal_covering_arc(&rel.spectral()?.phases)
}

/// Statistical distance `min(δ, π/2)`, with `2δ` the shortest arc holding
/// every eigenphase of `U₁†U₂`. For qubits this is `arccos(|tr(U₁†U₂)|/2)`.
pub fn gate_distance(u1: &Gate, u2: &Gate) -> Result<f64> {
    Ok(relative_arc(u1, u2)?.delta.min(FRAC_PI_2))
}

/// Gate fidelity `cos² d(U₁, U₂)` in any dimension.
pub fn gate_fidelity_sud(u1: &Gate, u2: &Gate) -> Result<f64> {
    let d = gate_distance(u1, u2)?;
    if d >= FRAC_PI_2 {
        return Ok(0.0);
    }
    Ok(d.cos().powi(2))
}

/// Smallest `N` with `N·distance ≥ π/2`.
pub fn min_copies_from_distance(distance: f64) -> Result<usize> {
    if distance.is_nan() || distance <= IDENTICAL_TOL {
        return Err(Error::IdenticalGates(distance));
    }
    let ratio = FRAC_PI_2 / distance.min(FRAC_PI_2);
    let nearest = ratio.round();
    let n = if (ratio - nearest).abs() <= EXACT_INT_TOL * ratio.max(1.0) {
        nearest
    } else {
        ratio.ceil()
    };
    if n > usize::MAX as f64 {
        return Err(Error::Domain(format!("copy count {n:e} is not representable")));
    }
    Ok((n as usize).max(1))
}

/// Minimal number of parallel copies that makes `U₁^{⊗N}` and `U₂^{⊗N}`
/// perfectly distinguishable.
pub fn min_copies(u1: &Gate, u2: &Gate) -> Result<usize> {
    min_copies_from_distance(gate_distance(u1, u2)?)
}

pub(crate) fn size_cap_dim(d: usize, n: usize) -> Result<usize> {
    numkit::checked_power_dim(d, n, DEFAULT_SIZE_CAP)
}
