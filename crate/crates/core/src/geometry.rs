//! Geometry of SU(2): the metric induced by the gate distance, the
//! three-sphere picture, Haar sampling and average fidelity.
//!
//! In the coordinates of [`GateSU2Params`] the line element is
//! `ds² = dθ₁² + cos²θ₁ dθ₂² + sin²θ₁ dθ₃²`, which is the Euclidean metric of
//! the unit three-sphere traced out by the top row `(α, β)` of the matrix.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gates::{check_qubit, check_same_dim, gate_fidelity_su2, gaussian_state, relative_gate, Gate, GateSU2Params};
use crate::numkit::ComplexMatrix;

const TWO_PI: f64 = 2.0 * PI;

/// Coordinate increments `(dθ₁, dθ₂, dθ₃)` at a point of SU(2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentIncrement {
    pub d_theta1: f64,
    pub d_theta2: f64,
    pub d_theta3: f64,
}

impl TangentIncrement {
    pub fn new(d_theta1: f64, d_theta2: f64, d_theta3: f64) -> Result<Self> {
        if ![d_theta1, d_theta2, d_theta3].iter().all(|x| x.is_finite()) {
            return Err(Error::invalid("tangent increment must be finite"));
        }
        Ok(Self {
            d_theta1,
            d_theta2,
            d_theta3,
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            d_theta1: self.d_theta1 * s,
            d_theta2: self.d_theta2 * s,
            d_theta3: self.d_theta3 * s,
        }
    }
}

/// Point `(Re α, Im α, Re β, Im β)` of the unit three-sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereCoords {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
}

impl SphereCoords {
    pub fn to_array(&self) -> [f64; 4] {
        [self.alpha1, self.alpha2, self.beta1, self.beta2]
    }

    pub fn norm(&self) -> f64 {
        self.to_array().iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Monte-Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

/// `‖U†dU + (U†dU)†‖_max / ‖dU‖_max`: zero for exact tangent vectors.
pub fn tangent_residual(u: &Gate, du: &ComplexMatrix) -> Result<f64> {
    let x = u.matrix().adjoint().matmul(du)?;
    let scale = du.max_abs();
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok(x.add(&x.adjoint())?.max_abs() / scale)
}

/// `(1/4)(2 tr(dU dU†) − |tr(U† dU)|²)`.
///
/// `dU` is not required to be an exact tangent vector, so finite differences
/// can be passed in; [`tangent_residual`] reports how far off it is.
pub fn metric_form_matrix(u: &Gate, du: &ComplexMatrix) -> Result<f64> {
    check_qubit(u)?;
    if du.rows() != 2 || du.cols() != 2 {
        return Err(Error::dim(format!("increment is {}x{}, expected 2x2", du.rows(), du.cols())));
    }
    let frob = du.frobenius_norm().powi(2);
    let t = u.matrix().adjoint().matmul(du)?.trace();
    Ok((0.25 * (2.0 * frob - t.norm_sqr())).max(0.0))
}

/// `dθ₁² + cos²θ₁ dθ₂² + sin²θ₁ dθ₃²`.
pub fn metric_form_coords(p: &GateSU2Params, t: &TangentIncrement) -> f64 {
    let (s, c) = p.theta1.sin_cos();
    t.d_theta1.powi(2) + (c * t.d_theta2).powi(2) + (s * t.d_theta3).powi(2)
}

/// Derivative of the parameterized matrix along `t`.
pub fn su2_directional_derivative(p: &GateSU2Params, t: &TangentIncrement) -> ComplexMatrix {
    let (s, c) = p.theta1.sin_cos();
    let da = Complex64::new(-s * t.d_theta1, c * t.d_theta2) * Complex64::from_polar(1.0, p.theta2);
    let db = Complex64::new(c * t.d_theta1, s * t.d_theta3) * Complex64::from_polar(1.0, p.theta3);
    ComplexMatrix::from_rows(&[vec![da, db], vec![-db.conj(), da.conj()]]).expect("2x2")
}

/// Top row `(α, β)` of a special-unitary qubit gate as a point of the three-sphere.
pub fn sphere_embed(u: &Gate) -> Result<SphereCoords> {
    check_qubit(u)?;
    if !u.is_special_unitary() {
        return Err(Error::invalid("sphere embedding needs a special-unitary gate"));
    }
    let (a, b) = (u.matrix()[(0, 0)], u.matrix()[(0, 1)]);
    Ok(SphereCoords {
        alpha1: a.re,
        alpha2: a.im,
        beta1: b.re,
        beta2: b.im,
    })
}

/// `n` Haar-distributed SU(2) elements in coordinates: `θ₁ = arcsin √u` has
/// density `sin 2θ₁` on `[0, π/2]`, and `θ₂, θ₃` are uniform.
pub fn haar_sample_su2(seed: u64, n: usize) -> Result<Vec<GateSU2Params>> {
    if n == 0 {
        return Err(Error::invalid("sample count must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let uniform_angle = |rng: &mut ChaCha8Rng| {
        let x = TWO_PI * rng.random::<f64>();
        if x >= TWO_PI {
            0.0
        } else {
            x
        }
    };
    (0..n)
        .map(|_| {
            let theta1 = rng.random::<f64>().sqrt().asin();
            let theta2 = uniform_angle(&mut rng);
            let theta3 = uniform_angle(&mut rng);
            GateSU2Params::new(theta1, theta2, theta3)
        })
        .collect()
}

/// Average of `|⟨ψ|U₁†U₂|ψ⟩|²` over uniformly random pure states, sampled as
/// normalized complex Gaussian vectors.
pub fn avg_fidelity_mc(u1: &Gate, u2: &Gate, samples: usize, seed: u64) -> Result<McEstimate> {
    check_same_dim(u1, u2)?;
    if samples == 0 {
        return Err(Error::invalid("sample count must be positive"));
    }
    let rel = relative_gate(u1, u2)?;
    let d = rel.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..samples {
        let psi = gaussian_state(&mut rng, d);
        let x = psi.inner(&rel.matrix().mul_vec(&psi)?)?.norm_sqr().min(1.0);
        sum += x;
        sum_sq += x * x;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = if samples > 1 {
        ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(McEstimate {
        mean,
        std_error: (var / n).sqrt(),
        samples,
    })
}

/// `1/3 + (2/3) F(U₁, U₂)` for qubit gates; never below `1/3`.
pub fn avg_fidelity_su2_closed(u1: &Gate, u2: &Gate) -> Result<f64> {
    Ok(1.0 / 3.0 + 2.0 / 3.0 * gate_fidelity_su2(u1, u2)?)
}
