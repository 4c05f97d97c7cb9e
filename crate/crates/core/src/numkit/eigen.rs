use std::f64::consts::PI;

use num_complex::Complex64;

use super::{ComplexMatrix, ComplexVector};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Real-weight mixing coefficient used to fold the two commuting Hermitian
/// parts of a unitary into one Hermitian matrix. Any irrational-looking value
/// works; accidental collisions are resolved cluster by cluster.
const MIXING: f64 = 0.618_033_988_749_894_9;

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, `vectors[k]` belongs to `values[k]`.
    pub vectors: Vec<ComplexVector>,
}

/// Cyclic complex Jacobi iteration for a Hermitian matrix.
///
/// The input is Hermitized first; callers are responsible for checking how far
/// from Hermitian it was.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let n = m.square_dim()?;
    let mut a = m.hermitian_part()?;
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    let off_norm = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                s += a[(i, j)].norm_sqr();
            }
        }
        (2.0 * s).sqrt()
    };

    let mut converged = scale == 0.0 || off_norm(&a) <= f64::EPSILON * scale;
    let mut sweep = 0;
    while !converged && sweep < MAX_SWEEPS {
        sweep += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= 1e-300 || mag <= f64::EPSILON * 1e-3 * scale {
                    a[(p, q)] = Complex64::new(0.0, 0.0);
                    a[(q, p)] = Complex64::new(0.0, 0.0);
                    continue;
                }
                let phase = apq / mag;
                let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // G = D R with D = diag(1, conj(phase)) on (p, q).
                let g_pp = Complex64::new(c, 0.0);
                let g_pq = Complex64::new(s, 0.0);
                let g_qp = phase.conj() * (-s);
                let g_qq = phase.conj() * c;

                // A <- A G
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * g_pp + akq * g_qp;
                    a[(k, q)] = akp * g_pq + akq * g_qq;
                }
                // A <- G† A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                // V <- V G
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * g_pp + vkq * g_qp;
                    v[(k, q)] = vkp * g_pq + vkq * g_qq;
                }
            }
        }
        converged = off_norm(&a) <= f64::EPSILON * scale;
    }
    if !converged {
        return Err(Error::Convergence(format!(
            "Jacobi iteration left off-diagonal norm {:e} after {MAX_SWEEPS} sweeps",
            off_norm(&a)
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(x, x)].re.total_cmp(&a[(y, y)].re));
    Ok(HermitianEigen {
        values: order.iter().map(|&k| a[(k, k)].re).collect(),
        vectors: order.iter().map(|&k| v.column(k)).collect(),
    })
}

/// Spectral decomposition of a unitary, `U = Σ_k e^{iφ_k} |v_k⟩⟨v_k|`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryEigen {
    /// Eigenphases in `(-π, π]`, sorted ascending.
    pub phases: Vec<f64>,
    /// Orthonormal eigenvectors matching `phases`.
    pub vectors: Vec<ComplexVector>,
}

impl UnitaryEigen {
    /// `Σ_k e^{iφ_k} v_k v_k†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.vectors[0].dim();
        let mut out = ComplexMatrix::zeros(n, n);
        for (phi, v) in self.phases.iter().zip(&self.vectors) {
            let e = Complex64::from_polar(1.0, *phi);
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] += e * v[i] * v[j].conj();
                }
            }
        }
        out
    }

    /// Largest `‖U v_k − e^{iφ_k} v_k‖` over the decomposition.
    pub fn max_residual(&self, u: &ComplexMatrix) -> Result<f64> {
        let mut worst = 0.0f64;
        for (phi, v) in self.phases.iter().zip(&self.vectors) {
            let uv = u.mul_vec(v)?;
            let r = uv.sub(&v.scale(Complex64::from_polar(1.0, *phi)))?.norm();
            worst = worst.max(r);
        }
        Ok(worst)
    }

    /// Largest deviation of the eigenvector Gram matrix from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate() {
                let g = a.inner(b).expect("equal lengths");
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    /// Groups of indices whose phases agree within `tol` (circularly).
    pub fn degenerate_clusters(&self, tol: f64) -> Vec<Vec<usize>> {
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for (k, &phi) in self.phases.iter().enumerate() {
            let home = clusters.iter_mut().find(|c| {
                let d = wrap_phase(self.phases[c[0]] - phi).abs();
                d <= tol
            });
            match home {
                Some(c) => c.push(k),
                None => clusters.push(vec![k]),
            }
        }
        clusters
    }

    /// Replaces each eigenvector block of a degenerate eigenspace by `block · W`,
    /// where `mixer(k)` supplies a `k×k` unitary `W` for a block of size `k`.
    pub fn remix_degenerate(
        &self,
        tol: f64,
        mut mixer: impl FnMut(usize) -> ComplexMatrix,
    ) -> Result<Self> {
        let mut out = self.clone();
        for cluster in self.degenerate_clusters(tol) {
            if cluster.len() < 2 {
                continue;
            }
            let w = mixer(cluster.len());
            if w.rows() != cluster.len() || w.cols() != cluster.len() {
                return Err(Error::dim("mixer size does not match eigenspace"));
            }
            for (col, &dst) in cluster.iter().enumerate() {
                let mut acc = ComplexVector::zeros(self.vectors[0].dim());
                for (row, &src) in cluster.iter().enumerate() {
                    acc = acc.add(&self.vectors[src].scale(w[(row, col)]))?;
                }
                out.vectors[dst] = acc;
            }
        }
        Ok(out)
    }
}

/// Principal value of a phase in `(-π, π]`.
pub fn wrap_phase(phi: f64) -> f64 {
    let mut p = phi.rem_euclid(2.0 * PI);
    if p > PI {
        p -= 2.0 * PI;
    }
    if p <= -PI {
        p += 2.0 * PI;
    }
    p
}

fn cluster_sorted(values: &[f64], tol: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..=values.len() {
        if k == values.len() || values[k] - values[k - 1] > tol {
            out.push(start..k);
            start = k;
        }
    }
    out
}

fn compress(m: &ComplexMatrix, basis: &[ComplexVector]) -> Result<ComplexMatrix> {
    let k = basis.len();
    let images: Vec<ComplexVector> = basis.iter().map(|b| m.mul_vec(b)).collect::<Result<_>>()?;
    let mut c = ComplexMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            c[(i, j)] = basis[i].inner(&images[j])?;
        }
    }
    Ok(c)
}

fn rotate(basis: &[ComplexVector], w: &[ComplexVector]) -> Result<Vec<ComplexVector>> {
    w.iter()
        .map(|coeffs| {
            let mut acc = ComplexVector::zeros(basis[0].dim());
            for (b, &c) in basis.iter().zip(coeffs.as_slice()) {
                acc = acc.add(&b.scale(c))?;
            }
            Ok(acc)
        })
        .collect()
}

/// Eigendecomposition of a unitary matrix through its Hermitian parts.
///
/// `H₁ = (U+U†)/2` and `H₂ = (U−U†)/(2i)` commute, so `H₁ + γH₂` shares
/// eigenvectors with `U`. Eigenvalue clusters of the mixture are split again by
/// diagonalizing `H₂` on the cluster, then phases come from Rayleigh quotients.
pub fn eig_unitary(u: &ComplexMatrix) -> Result<UnitaryEigen> {
    let n = u.square_dim()?;
    let h1 = u.hermitian_part()?;
    let h2 = u.antihermitian_part()?;
    let mix = h1.add(&h2.scale(Complex64::new(MIXING, 0.0)))?;
    let first = hermitian_eigen(&mix)?;

    let cluster_tol = 1e-9;
    let mut vectors = Vec::with_capacity(n);
    for range in cluster_sorted(&first.values, cluster_tol) {
        let block = &first.vectors[range];
        if block.len() == 1 {
            vectors.push(block[0].clone());
            continue;
        }
        let sub = hermitian_eigen(&compress(&h2, block)?)?;
        vectors.extend(rotate(block, &sub.vectors)?);
    }

    let mut pairs: Vec<(f64, ComplexVector)> = vectors
        .into_iter()
        .map(|v| {
            let rq = v.inner(&u.mul_vec(&v)?)?;
            Ok((wrap_phase(rq.arg()), v.fix_phase()))
        })
        .collect::<Result<_>>()?;
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let eig = UnitaryEigen {
        phases: pairs.iter().map(|p| p.0).collect(),
        vectors: pairs.into_iter().map(|p| p.1).collect(),
    };

    let residual = eig.max_residual(u)?;
    if residual > 1e-10 {
        return Err(Error::Convergence(format!(
            "unitary eigendecomposition residual {residual:e} exceeds 1e-10"
        )));
    }
    Ok(eig)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_on_real_symmetric() {
        let m = ComplexMatrix::from_real_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let e = hermitian_eigen(&m).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn jacobi_on_complex_hermitian() {
        let i = Complex64::i();
        let one = Complex64::new(1.0, 0.0);
        // Pauli Y has eigenvalues ±1.
        let y = ComplexMatrix::from_rows(&[vec![0.0 * one, -i], vec![i, 0.0 * one]]).unwrap();
        let e = hermitian_eigen(&y).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        for (lam, v) in e.values.iter().zip(&e.vectors) {
            let r = y.mul_vec(v).unwrap().sub(&v.scale(Complex64::new(*lam, 0.0))).unwrap();
            assert!(r.norm() < 1e-14);
        }
    }

    #[test]
    fn wrap_phase_convention() {
        assert_eq!(wrap_phase(PI), PI);
        assert_eq!(wrap_phase(-PI), PI);
        assert!((wrap_phase(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert!(wrap_phase(0.0).abs() < 1e-16);
    }

    #[test]
    fn collision_in_mixed_spectrum_is_split() {
        // cos φ + γ sin φ takes the same value at φ and at the reflected
        // phase 2·atan(γ) − φ; feed that pair in directly.
        let phi = 0.3;
        let other = 2.0 * MIXING.atan() - phi;
        let u = ComplexMatrix::from_phases(&[phi, other, -1.0]);
        let e = eig_unitary(&u).unwrap();
        let mut expect = vec![phi, other, -1.0];
        expect.sort_by(f64::total_cmp);
        for (a, b) in e.phases.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        assert!(e.max_residual(&u).unwrap() < 1e-12);
    }
}
