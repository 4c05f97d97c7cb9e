//! Fidelity and statistical distance between quantum states.
//!
//! All fidelities use the squared-overlap convention: `F = |⟨ψ₁|ψ₂⟩|²` for
//! pure states and `F = (tr √(√ρ₁ ρ₂ √ρ₁))²` for mixed ones, so both agree on
//! rank-one inputs.

use num_complex::Complex64;

use crate::classical::ProbDist;
use crate::error::{Error, Result};
use crate::numkit::{hermitian_eigen, psd_roots, sqrt_psd, ComplexMatrix, ComplexVector, STRUCTURE_TOL};

const POVM_SUM_TOL: f64 = 1e-9;

/// A validated density operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        matrix.square_dim()?;
        let herm = matrix.hermitian_residual()?;
        if herm > STRUCTURE_TOL {
            return Err(Error::invalid(format!("density matrix not Hermitian (residual {herm:e})")));
        }
        let tr = matrix.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > STRUCTURE_TOL {
            return Err(Error::invalid(format!("density matrix trace {tr} is not 1")));
        }
        let min = hermitian_eigen(&matrix)?.values[0];
        if min < -STRUCTURE_TOL {
            return Err(Error::invalid(format!("density matrix has eigenvalue {min:e}")));
        }
        Ok(Self { matrix })
    }

    /// `|ψ⟩⟨ψ|` for a normalized `ψ`.
    pub fn pure(psi: &ComplexVector) -> Result<Self> {
        check_normalized(psi)?;
        Self::new(ComplexMatrix::outer(psi, psi))
    }

    /// `1/d`.
    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(d).scale(Complex64::new(1.0 / d as f64, 0.0)),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Self> {
        let m = u.matmul(&self.matrix)?.matmul(&u.adjoint())?;
        Self::new(m.hermitian_part()?)
    }
}

/// A positive operator-valued measure `{M_i}` with `Σ M_i = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    elements: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn new(elements: Vec<ComplexMatrix>) -> Result<Self> {
        let first = elements.first().ok_or_else(|| Error::invalid("POVM needs at least one element"))?;
        let d = first.square_dim()?;
        let mut sum = ComplexMatrix::zeros(d, d);
        for (i, e) in elements.iter().enumerate() {
            if e.square_dim()? != d {
                return Err(Error::dim(format!("POVM element {i} is not {d}x{d}")));
            }
            if e.hermitian_residual()? > STRUCTURE_TOL {
                return Err(Error::invalid(format!("POVM element {i} is not Hermitian")));
            }
            let min = hermitian_eigen(e)?.values[0];
            if min < -STRUCTURE_TOL {
                return Err(Error::invalid(format!("POVM element {i} has eigenvalue {min:e}")));
            }
            sum = sum.add(e)?;
        }
        let dev = sum.max_abs_diff(&ComplexMatrix::identity(d))?;
        if dev > POVM_SUM_TOL {
            return Err(Error::invalid(format!("POVM elements sum to identity only within {dev:e}")));
        }
        Ok(Self { elements })
    }

    /// Projective measurement onto an orthonormal basis.
    pub fn from_basis(basis: &[ComplexVector]) -> Result<Self> {
        Self::new(basis.iter().map(|b| ComplexMatrix::outer(b, b)).collect())
    }

    /// Two-outcome projective measurement `{|φ⟩⟨φ|, 1 − |φ⟩⟨φ|}`.
    pub fn binary_projective(phi: &ComplexVector) -> Result<Self> {
        check_normalized(phi)?;
        let p = ComplexMatrix::outer(phi, phi);
        let q = ComplexMatrix::identity(phi.dim()).sub(&p)?;
        Self::new(vec![p, q.hermitian_part()?])
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.elements[0].rows()
    }
}

fn check_normalized(psi: &ComplexVector) -> Result<()> {
    let n = psi.norm();
    if (n - 1.0).abs() > STRUCTURE_TOL {
        return Err(Error::invalid(format!("state has norm {n}, expected 1")));
    }
    Ok(())
}

fn check_same_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::dim(format!("dimensions {a} and {b}")));
    }
    Ok(())
}

/// Born-rule statistics `p_i = tr(M_i ρ)`.
pub fn povm_probabilities(rho: &DensityMatrix, m: &Povm) -> Result<ProbDist> {
    check_same_dim(rho.dim(), m.dim())?;
    let raw: Vec<f64> = m
        .elements
        .iter()
        .map(|e| Ok(e.matmul(&rho.matrix)?.trace().re.max(0.0)))
        .collect::<Result<_>>()?;
    let sum: f64 = raw.iter().sum();
    if (sum - 1.0).abs() > POVM_SUM_TOL {
        return Err(Error::Internal(format!("POVM probabilities sum to {sum}")));
    }
    ProbDist::from_unnormalized(raw)
}

/// `|⟨ψ₁|ψ₂⟩|²`.
pub fn pure_fidelity(psi1: &ComplexVector, psi2: &ComplexVector) -> Result<f64> {
    check_same_dim(psi1.dim(), psi2.dim())?;
    check_normalized(psi1)?;
    check_normalized(psi2)?;
    Ok(psi1.inner(psi2)?.norm_sqr().clamp(0.0, 1.0))
}

/// `(tr √(√ρ₁ ρ₂ √ρ₁))²`.
pub fn mixed_fidelity(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho1.dim(), rho2.dim())?;
    let s = sqrt_psd(&rho1.matrix)?;
    let inner = s.matmul(&rho2.matrix)?.matmul(&s)?.hermitian_part()?;
    let eig = hermitian_eigen(&inner)?;
    let root_trace: f64 = psd_roots(&eig.values)?.iter().sum();
    Ok((root_trace * root_trace).clamp(0.0, 1.0))
}

/// `arccos √F`, in `[0, π/2]`.
pub fn state_distance(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    let f = mixed_fidelity(rho1, rho2)?;
    Ok(f.sqrt().clamp(0.0, 1.0).acos())
}

/// Fubini–Study line element `⟨dψ|dψ⟩ − |⟨dψ|ψ⟩|²`.
pub fn fubini_study_form(psi: &ComplexVector, dpsi: &ComplexVector) -> Result<f64> {
    check_same_dim(psi.dim(), dpsi.dim())?;
    check_normalized(psi)?;
    let along = dpsi.inner(psi)?.norm_sqr();
    Ok((dpsi.norm_sqr() - along).max(0.0))
}
