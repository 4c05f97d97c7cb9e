use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::Gate;
use crate::error::{Error, Result};
use crate::numkit::ComplexMatrix;

const TWO_PI: f64 = 2.0 * PI;

/// Euler-type coordinates of an SU(2) element,
/// `U = [[cos θ₁ e^{iθ₂}, sin θ₁ e^{iθ₃}], [−sin θ₁ e^{−iθ₃}, cos θ₁ e^{−iθ₂}]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateSU2Params {
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
}

impl GateSU2Params {
    /// `θ₁ ∈ [0, π/2]`, `θ₂, θ₃ ∈ [0, 2π)`.
    pub fn new(theta1: f64, theta2: f64, theta3: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&theta1) {
            return Err(Error::invalid(format!("theta1 = {theta1} outside [0, pi/2]")));
        }
        for (name, t) in [("theta2", theta2), ("theta3", theta3)] {
            if !(0.0..TWO_PI).contains(&t) {
                return Err(Error::invalid(format!("{name} = {t} outside [0, 2pi)")));
            }
        }
        Ok(Self { theta1, theta2, theta3 })
    }

    /// Builds the matrix for arbitrary real angles, skipping the range check.
    /// Useful for finite differences that step across a range boundary.
    pub fn matrix_unchecked(theta1: f64, theta2: f64, theta3: f64) -> ComplexMatrix {
        let (s, c) = theta1.sin_cos();
        let a = Complex64::from_polar(c, theta2);
        let b = Complex64::from_polar(s, theta3);
        ComplexMatrix::from_rows(&[vec![a, b], vec![-b.conj(), a.conj()]]).expect("2x2")
    }
}

/// SU(2) gate for the given coordinates.
pub fn su2_from_params(p: &GateSU2Params) -> Result<Gate> {
    let p = GateSU2Params::new(p.theta1, p.theta2, p.theta3)?;
    Gate::special(GateSU2Params::matrix_unchecked(p.theta1, p.theta2, p.theta3))
}

/// Member of the SU(3) family with a vanishing `(1,1)` entry, which the
/// product probe `e₁` separates perfectly from the identity.
///
/// `γ₁, γ₂ ∈ [0, π/2]`, `φ₁..φ₅ ∈ [0, 2π)`. The first phase does not appear in
/// the matrix; it is accepted so the family keeps its five-phase signature.
pub fn su3_example_gate(gamma1: f64, gamma2: f64, phi: &[f64; 5]) -> Result<Gate> {
    for (name, g) in [("gamma1", gamma1), ("gamma2", gamma2)] {
        if !(0.0..=FRAC_PI_2).contains(&g) {
            return Err(Error::invalid(format!("{name} = {g} outside [0, pi/2]")));
        }
    }
    if let Some(bad) = phi.iter().find(|p| !(0.0..TWO_PI).contains(*p)) {
        return Err(Error::invalid(format!("phase {bad} outside [0, 2pi)")));
    }
    let [_, p2, p3, p4, p5] = *phi;
    let (s1, c1) = gamma1.sin_cos();
    let (s2, c2) = gamma2.sin_cos();
    let e = |r: f64, t: f64| Complex64::from_polar(r, t);
    let zero = Complex64::new(0.0, 0.0);
    let rows = [
        vec![zero, e(s1, p3), e(c1, p4)],
        // (2,1) phase is φ₂−2φ₅. With −(φ₄+φ₅) rows 2 and 3 are orthogonal
        // only on the slice φ₅ = φ₂ + φ₄, where the two phases coincide.
        vec![e(s2, p2 - 2.0 * p5), e(c1 * c2, p2), -e(s1 * c2, p2 - p3 + p4)],
        vec![-e(c2, -p5), e(c1 * s2, p5), -e(s1 * s2, -(p3 - p4 - p5))],
    ];
    Gate::new(ComplexMatrix::from_rows(&rows)?)
}
