use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use super::{check_same_dim, relative_gate, Gate};
use crate::error::{Error, Result};
use crate::numkit::{apply_tensor_power, eig_unitary, kron_power, ComplexVector, DEFAULT_SIZE_CAP};

const MAX_ITERS: usize = 10_000;
const GRAD_MAP_TOL: f64 = 1e-10;
const ARMIJO: f64 = 0.5;

/// Random probes beating the simplex optimum by more than this signal a bug.
const BAND_TOL: f64 = 1e-6;

/// Details of one oracle run.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    /// Best value of `|Σ λ_k e^{iφ_k}|²` found over the simplex.
    pub simplex_min: f64,
    /// Best overlap among random bipartite probes.
    pub random_probe_min: f64,
    /// Smaller of the two.
    pub value: f64,
    /// Eigenphases of `(U₁†U₂)^{⊗N}` the simplex search ran on.
    pub phases: Vec<f64>,
    /// Largest iteration count over the restarts.
    pub max_iterations: usize,
}

/// Brute-force `min_Ψ |⟨Ψ|(U₁†U₂)^{⊗N} ⊗ 1|Ψ⟩|²`.
pub fn oracle_min_overlap(u1: &Gate, u2: &Gate, copies: usize, budget: usize, seed: u64) -> Result<f64> {
    Ok(oracle_report(u1, u2, copies, budget, seed)?.value)
}

/// Runs the oracle and returns both search branches.
///
/// The phases come from an eigendecomposition of the explicit matrix
/// `(U₁†U₂)^{⊗N}`. Each of the `budget` restarts runs projected gradient
/// descent from a Dirichlet(1) point; restart `r` draws from stream `r` of a
/// generator seeded with `seed`, so results do not depend on evaluation order.
/// The same number of Gaussian random probes on `C^D ⊗ C^D` give an upper band.
pub fn oracle_report(u1: &Gate, u2: &Gate, copies: usize, budget: usize, seed: u64) -> Result<OracleReport> {
    check_same_dim(u1, u2)?;
    if budget == 0 {
        return Err(Error::invalid("oracle budget must be positive"));
    }
    if copies == 0 {
        return Err(Error::invalid("copy count must be positive"));
    }
    let rel = relative_gate(u1, u2)?;
    let big = kron_power(rel.matrix(), copies, DEFAULT_SIZE_CAP)?;
    let phases = eig_unitary(&big)?.phases;
    let points: Vec<Complex64> = phases.iter().map(|&p| Complex64::from_polar(1.0, p)).collect();

    let mut simplex_min = f64::INFINITY;
    let mut max_iterations = 0;
    for r in 0..budget {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(r as u64);
        let start = dirichlet_point(&mut rng, points.len());
        let (value, iters) = projected_gradient(&points, start);
        simplex_min = simplex_min.min(value);
        max_iterations = max_iterations.max(iters);
    }

    let dim = big.rows();
    let mut random_probe_min = f64::INFINITY;
    for r in 0..budget {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream((budget + r) as u64);
        let probe = gaussian_state(&mut rng, dim * dim);
        let moved = apply_tensor_power(&big, 1, dim, &probe)?;
        random_probe_min = random_probe_min.min(probe.inner(&moved)?.norm_sqr());
    }

    if random_probe_min < simplex_min - BAND_TOL {
        return Err(Error::Internal(format!(
            "random probe overlap {random_probe_min} undercuts simplex minimum {simplex_min}"
        )));
    }
    Ok(OracleReport {
        simplex_min,
        random_probe_min,
        value: simplex_min.min(random_probe_min),
        phases,
        max_iterations,
    })
}

fn dirichlet_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let s: f64 = w.iter().sum();
    if s > 0.0 {
        w.iter_mut().for_each(|x| *x /= s);
    } else {
        w.iter_mut().for_each(|x| *x = 1.0 / n as f64);
    }
    w
}

pub(crate) fn gaussian_state(rng: &mut impl Rng, n: usize) -> ComplexVector {
    let entries: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let v = ComplexVector::from_entries(entries);
    v.normalized().unwrap_or_else(|_| ComplexVector::basis(n, 0))
}

fn objective(points: &[Complex64], w: &[f64]) -> (f64, Complex64) {
    let s: Complex64 = points.iter().zip(w).map(|(z, &l)| z * l).sum();
    (s.norm_sqr(), s)
}

/// Euclidean projection onto the probability simplex.
fn project_simplex(y: &[f64]) -> Vec<f64> {
    let mut u = y.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut tau = 0.0;
    for (k, &uk) in u.iter().enumerate() {
        cum += uk;
        let t = (cum - 1.0) / (k + 1) as f64;
        if uk - t > 0.0 {
            tau = t;
        }
    }
    y.iter().map(|&x| (x - tau).max(0.0)).collect()
}

/// Minimizes `|Σ λ_k z_k|²` over the simplex; returns the value and iteration count.
fn projected_gradient(points: &[Complex64], mut w: Vec<f64>) -> (f64, usize) {
    let n = points.len();
    // gradient 2 Re(z̄_k s) is 2n-Lipschitz
    let mut step = 1.0 / (2.0 * n as f64);
    let (mut f, mut s) = objective(points, &w);
    for it in 0..MAX_ITERS {
        let grad: Vec<f64> = points.iter().map(|z| 2.0 * (z.conj() * s).re).collect();
        loop {
            let trial: Vec<f64> = w.iter().zip(&grad).map(|(x, g)| x - step * g).collect();
            let next = project_simplex(&trial);
            let (f_next, s_next) = objective(points, &next);
            let diff: Vec<f64> = next.iter().zip(&w).map(|(a, b)| a - b).collect();
            let lin: f64 = diff.iter().zip(&grad).map(|(d, g)| d * g).sum();
            let sq: f64 = diff.iter().map(|d| d * d).sum();
            if f_next <= f + lin + sq / (2.0 * step) + 1e-18 || step < 1e-12 {
                let mapping = sq.sqrt() / step;
                w = next;
                f = f_next;
                s = s_next;
                if mapping <= GRAD_MAP_TOL {
                    return (f, it + 1);
                }
                break;
            }
            step *= ARMIJO;
        }
    }
    (f, MAX_ITERS)
}
