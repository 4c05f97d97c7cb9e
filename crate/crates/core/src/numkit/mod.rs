//! Dense complex linear algebra for small matrices.
//!
//! Everything here works on explicit row-major arrays. Dimensions stay small
//! (a few thousand at most, see [`DEFAULT_SIZE_CAP`]), so the algorithms favour
//! accuracy over asymptotic speed: cyclic Jacobi for Hermitian matrices and a
//! reduction of the unitary eigenproblem to it.

mod eigen;
mod matrix;

use num_complex::Complex64;

pub use eigen::{eig_unitary, hermitian_eigen, wrap_phase, HermitianEigen, UnitaryEigen};
pub use matrix::{ComplexMatrix, ComplexVector};

use crate::error::{Error, Result};

/// Largest dimension `d^N` an explicit tensor power may reach.
pub const DEFAULT_SIZE_CAP: usize = 1 << 12;

/// Tolerance for structural checks (unitarity, hermiticity, normalization).
pub const STRUCTURE_TOL: f64 = 1e-10;

/// Eigenvalues of a PSD input above this (negative) threshold are treated as zero.
pub const PSD_CLAMP: f64 = -1e-8;

/// True iff `‖M†M − 1‖_max ≤ tol`.
pub fn validate_unitary(m: &ComplexMatrix, tol: f64) -> Result<bool> {
    let n = m.square_dim()?;
    let gram = m.adjoint().matmul(m)?;
    Ok(gram.max_abs_diff(&ComplexMatrix::identity(n))? <= tol)
}

/// Hermitian positive square root of a PSD matrix.
///
/// Eigenvalues in `[-1e-8, 0)` are clamped to zero, as are positive ones at the
/// level of the eigensolver's rounding (`≤ 64 ε ‖M‖`), so that rank-deficient
/// inputs keep their exact rank.
pub fn sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = m.square_dim()?;
    let herm = m.hermitian_residual()?;
    if herm > STRUCTURE_TOL * m.max_abs().max(1.0) {
        return Err(Error::Domain(format!("matrix is not Hermitian (residual {herm:e})")));
    }
    let eig = hermitian_eigen(m)?;
    let roots = psd_roots(&eig.values)?;
    let mut s = ComplexMatrix::zeros(n, n);
    for (r, v) in roots.iter().zip(&eig.vectors) {
        if *r == 0.0 {
            continue;
        }
        for i in 0..n {
            for j in 0..n {
                s[(i, j)] += v[i] * v[j].conj() * *r;
            }
        }
    }
    Ok(s)
}

/// Square roots of PSD eigenvalues, with the clamping rules of [`sqrt_psd`].
pub(crate) fn psd_roots(values: &[f64]) -> Result<Vec<f64>> {
    let top = values.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let noise = 64.0 * f64::EPSILON * top.max(f64::MIN_POSITIVE);
    values
        .iter()
        .map(|&lam| {
            if lam < PSD_CLAMP {
                Err(Error::Domain(format!("negative eigenvalue {lam:e}")))
            } else if lam <= noise {
                Ok(0.0)
            } else {
                Ok(lam.sqrt())
            }
        })
        .collect()
}

/// `d^n` with overflow and cap checks.
pub fn checked_power_dim(d: usize, n: usize, cap: usize) -> Result<usize> {
    let mut dim: usize = 1;
    for _ in 0..n {
        dim = dim
            .checked_mul(d)
            .filter(|&x| x <= cap)
            .ok_or(Error::SizeCap {
                dim: d.saturating_pow(n as u32),
                cap,
            })?;
    }
    Ok(dim)
}

/// Explicit `M^{⊗n}` as a dense matrix of side `d^n ≤ cap`.
pub fn kron_power(m: &ComplexMatrix, n: usize, cap: usize) -> Result<ComplexMatrix> {
    let d = m.square_dim()?;
    if n == 0 {
        return Err(Error::invalid("tensor power needs at least one copy"));
    }
    checked_power_dim(d, n, cap)?;
    let mut out = m.clone();
    for _ in 1..n {
        out = out.kron(m);
    }
    Ok(out)
}

/// Applies `M^{⊗copies} ⊗ 1_trailing` to a state vector without forming the
/// big operator. Copy 0 is the most significant tensor factor.
pub fn apply_tensor_power(
    m: &ComplexMatrix,
    copies: usize,
    trailing: usize,
    v: &ComplexVector,
) -> Result<ComplexVector> {
    let d = m.square_dim()?;
    let total = d
        .checked_pow(copies as u32)
        .and_then(|x| x.checked_mul(trailing))
        .ok_or_else(|| Error::dim("tensor power dimension overflows"))?;
    if v.dim() != total {
        return Err(Error::dim(format!(
            "state of length {} does not match {d}^{copies}·{trailing}",
            v.dim()
        )));
    }
    let mut data = v.clone().into_vec();
    let mut scratch = vec![Complex64::new(0.0, 0.0); d];
    for site in 0..copies {
        let post = d.pow((copies - 1 - site) as u32) * trailing;
        let pre = total / (post * d);
        for a in 0..pre {
            for b in 0..post {
                let base = a * d * post + b;
                for (i, s) in scratch.iter_mut().enumerate() {
                    *s = (0..d).map(|j| m[(i, j)] * data[base + j * post]).sum();
                }
                for (i, s) in scratch.iter().enumerate() {
                    data[base + i * post] = *s;
                }
            }
        }
    }
    Ok(ComplexVector::from_entries(data))
}

/// Reduced state `tr_B |ψ⟩⟨ψ|` of a vector on `C^{dim_a} ⊗ C^{dim_b}`.
pub fn partial_trace_b(psi: &ComplexVector, dim_a: usize) -> Result<ComplexMatrix> {
    if dim_a == 0 || !psi.dim().is_multiple_of(dim_a) {
        return Err(Error::dim(format!(
            "length {} is not a multiple of subsystem dimension {dim_a}",
            psi.dim()
        )));
    }
    let dim_b = psi.dim() / dim_a;
    let mut rho = ComplexMatrix::zeros(dim_a, dim_a);
    for i in 0..dim_a {
        for j in 0..dim_a {
            rho[(i, j)] = (0..dim_b)
                .map(|k| psi[i * dim_b + k] * psi[j * dim_b + k].conj())
                .sum();
        }
    }
    Ok(rho)
}

/// Reduced state of a bipartite vector on `C^D ⊗ C^D`.
pub fn partial_trace_b_square(psi: &ComplexVector) -> Result<ComplexMatrix> {
    let d = (psi.dim() as f64).sqrt().round() as usize;
    if d * d != psi.dim() {
        return Err(Error::dim(format!(
            "length {} is not a square D·D",
            psi.dim()
        )));
    }
    partial_trace_b(psi, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn validate_unitary_examples() {
        assert!(validate_unitary(&ComplexMatrix::identity(2), 1e-12).unwrap());
        let m = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 2.0]]).unwrap();
        assert!(!validate_unitary(&m, 1e-12).unwrap());
        assert!(matches!(
            validate_unitary(&ComplexMatrix::zeros(2, 3), 1e-12),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn eig_identity_and_diagonal() {
        let e = eig_unitary(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(e.phases, vec![0.0, 0.0, 0.0]);
        let a = std::f64::consts::FRAC_PI_3;
        let u = ComplexMatrix::from_phases(&[a, -a]);
        let e = eig_unitary(&u).unwrap();
        assert!((e.phases[0] + a).abs() < 1e-15);
        assert!((e.phases[1] - a).abs() < 1e-15);
        assert_eq!(e.vectors[0], ComplexVector::basis(2, 1));
        assert_eq!(e.vectors[1], ComplexVector::basis(2, 0));
    }

    #[test]
    fn eig_rejects_non_square() {
        assert!(matches!(
            eig_unitary(&ComplexMatrix::zeros(2, 3)),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn sqrt_psd_examples() {
        let s = sqrt_psd(&ComplexMatrix::identity(3)).unwrap();
        assert!(s.max_abs_diff(&ComplexMatrix::identity(3)).unwrap() < 1e-15);
        let m = ComplexMatrix::from_real_rows(&[vec![4.0, 0.0], vec![0.0, 9.0]]).unwrap();
        let expect = ComplexMatrix::from_real_rows(&[vec![2.0, 0.0], vec![0.0, 3.0]]).unwrap();
        assert!(sqrt_psd(&m).unwrap().max_abs_diff(&expect).unwrap() < 1e-14);
    }

    #[test]
    fn sqrt_psd_clamps_and_rejects() {
        let tiny = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, -1e-9]]).unwrap();
        let s = sqrt_psd(&tiny).unwrap();
        assert_eq!(s[(1, 1)], c(0.0, 0.0));
        let neg = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, -1e-6]]).unwrap();
        assert!(matches!(sqrt_psd(&neg), Err(Error::Domain(_))));
        let skew = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.0, 1.0)], vec![c(0.0, 1.0), c(1.0, 0.0)]])
            .unwrap();
        assert!(matches!(sqrt_psd(&skew), Err(Error::Domain(_))));
    }

    #[test]
    fn kron_power_cap_and_identity() {
        let u = ComplexMatrix::from_phases(&[0.4, -0.4]);
        assert_eq!(kron_power(&u, 1, DEFAULT_SIZE_CAP).unwrap(), u);
        assert!(matches!(
            kron_power(&u, 13, DEFAULT_SIZE_CAP),
            Err(Error::SizeCap { .. })
        ));
        assert!(kron_power(&u, 12, DEFAULT_SIZE_CAP).is_ok());
        assert!(kron_power(&u, 0, DEFAULT_SIZE_CAP).is_err());
    }

    #[test]
    fn apply_tensor_power_matches_explicit_kron() {
        let u = ComplexMatrix::from_rows(&[
            vec![c(0.6, 0.0), c(0.0, 0.8)],
            vec![c(0.0, 0.8), c(0.6, 0.0)],
        ])
        .unwrap();
        let v = ComplexVector::new((0..16).map(|k| c(k as f64, 1.0 - k as f64)).collect()).unwrap();
        let big = kron_power(&u, 3, 64).unwrap().kron(&ComplexMatrix::identity(2));
        let expect = big.mul_vec(&v).unwrap();
        let got = apply_tensor_power(&u, 3, 2, &v).unwrap();
        assert!(got.sub(&expect).unwrap().norm() < 1e-12);
    }

    #[test]
    fn partial_trace_examples() {
        let r = partial_trace_b_square(&ComplexVector::basis(4, 0)).unwrap();
        assert_eq!(r, ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap());

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = ComplexVector::from_real(&[h, 0.0, 0.0, h]).unwrap();
        let r = partial_trace_b_square(&bell).unwrap();
        let half = ComplexMatrix::identity(2).scale(c(0.5, 0.0));
        assert!(r.max_abs_diff(&half).unwrap() < 1e-15);

        let w = std::f64::consts::FRAC_PI_6;
        let schmidt = ComplexVector::from_real(&[w.cos(), 0.0, 0.0, w.sin()]).unwrap();
        let r = partial_trace_b_square(&schmidt).unwrap();
        let expect = ComplexMatrix::from_real_rows(&[vec![0.75, 0.0], vec![0.0, 0.25]]).unwrap();
        assert!(r.max_abs_diff(&expect).unwrap() < 1e-15);

        assert!(matches!(
            partial_trace_b_square(&ComplexVector::zeros(3)),
            Err(Error::Dimension(_))
        ));
    }
}
