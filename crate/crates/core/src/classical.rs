//! Distinguishability of finite probability distributions.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

const SUM_TOL: f64 = 1e-12;

/// A probability vector `(p_1, …, p_M)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbDist {
    weights: Vec<f64>,
}

impl ProbDist {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("empty distribution"));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::invalid(format!("weight {w} is not a probability")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::invalid(format!("weights sum to {sum}, not 1")));
        }
        Ok(Self { weights })
    }

    /// Normalizes non-negative weights to unit sum.
    pub fn from_unnormalized(weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if !(sum > 0.0 && sum.is_finite()) {
            return Err(Error::invalid("weights must have a positive finite sum"));
        }
        Self::new(weights.into_iter().map(|w| w / sum).collect())
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

fn check_lengths(p: &ProbDist, q: &ProbDist) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::dim(format!(
            "distributions of length {} and {}",
            p.len(),
            q.len()
        )));
    }
    Ok(())
}

/// Overlap `F = (Σ √(p_i q_i))²`.
pub fn classical_fidelity(p: &ProbDist, q: &ProbDist) -> Result<f64> {
    check_lengths(p, q)?;
    let bc: f64 = p
        .weights
        .iter()
        .zip(&q.weights)
        .map(|(a, b)| (a * b).sqrt())
        .sum();
    Ok((bc * bc).clamp(0.0, 1.0))
}

/// Statistical distance `arccos √F`, in `[0, π/2]`.
///
/// Evaluated as `2 asin(H/2)` with `H² = Σ(√p_i − √q_i)²`, which equals
/// `arccos √F` for normalized inputs but keeps full relative precision for
/// nearby distributions.
pub fn classical_distance(p: &ProbDist, q: &ProbDist) -> Result<f64> {
    check_lengths(p, q)?;
    let h2: f64 = p
        .weights
        .iter()
        .zip(&q.weights)
        .map(|(a, b)| (a.sqrt() - b.sqrt()).powi(2))
        .sum();
    Ok((2.0 * (h2.sqrt() / 2.0).min(1.0).asin()).min(FRAC_PI_2))
}

/// Generalized relative entropy `Σ p_i g(p_i / q_i)`.
///
/// Terms with `p_i = 0` contribute nothing. If some `p_i > 0` meets `q_i = 0`
/// the result is `+∞`. The caller supplies a convex `g` with `g(1) = 0`; only
/// the latter is checked.
pub fn relative_entropy(p: &ProbDist, q: &ProbDist, g: impl Fn(f64) -> f64) -> Result<f64> {
    check_lengths(p, q)?;
    if g(1.0).abs() > 1e-12 {
        return Err(Error::invalid(format!("g(1) = {} must vanish", g(1.0))));
    }
    let mut total = 0.0;
    for (&a, &b) in p.weights.iter().zip(&q.weights) {
        if a == 0.0 {
            continue;
        }
        if b == 0.0 {
            return Ok(f64::INFINITY);
        }
        total += a * g(a / b);
    }
    Ok(total)
}

/// Kullback information, `relative_entropy` with `g = ln`.
pub fn kullback_leibler(p: &ProbDist, q: &ProbDist) -> Result<f64> {
    relative_entropy(p, q, f64::ln)
}

/// Fisher line element `Σ dp_i² / p_i` at an interior point.
pub fn fisher_form(p: &ProbDist, dp: &[f64]) -> Result<f64> {
    if dp.len() != p.len() {
        return Err(Error::dim("tangent length differs from distribution length"));
    }
    if p.weights.contains(&0.0) {
        return Err(Error::Domain("Fisher form needs an interior point".into()));
    }
    Ok(p.weights.iter().zip(dp).map(|(w, d)| d * d / w).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, LN_2};

    fn pd(w: &[f64]) -> ProbDist {
        ProbDist::new(w.to_vec()).unwrap()
    }

    #[test]
    fn distance_matches_arccos_form() {
        let cases = [
            (vec![0.2, 0.3, 0.5], vec![0.6, 0.1, 0.3]),
            (vec![1.0, 0.0], vec![0.0, 1.0]),
            (vec![0.5, 0.5], vec![0.9, 0.1]),
        ];
        for (a, b) in cases {
            let (p, q) = (pd(&a), pd(&b));
            let direct = classical_fidelity(&p, &q).unwrap().sqrt().acos();
            assert!((classical_distance(&p, &q).unwrap() - direct).abs() < 1e-14);
        }
        // √q rotated by t away from √p: the distance is exactly t
        let t = 1e-9;
        let a = FRAC_PI_4 + t;
        let q = ProbDist::from_unnormalized(vec![a.cos().powi(2), a.sin().powi(2)]).unwrap();
        let d = classical_distance(&pd(&[0.5, 0.5]), &q).unwrap();
        assert!((d / t - 1.0).abs() < 1e-6, "{d:e}");
    }

    #[test]
    fn validation() {
        assert!(ProbDist::new(vec![0.5, 0.6]).is_err());
        assert!(ProbDist::new(vec![1.5, -0.5]).is_err());
        assert!(ProbDist::new(vec![]).is_err());
        assert!(classical_fidelity(&pd(&[1.0]), &pd(&[0.5, 0.5])).is_err());
    }

    #[test]
    fn fidelity_examples() {
        assert!((classical_fidelity(&pd(&[0.5, 0.5]), &pd(&[0.5, 0.5])).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(classical_fidelity(&pd(&[1.0, 0.0]), &pd(&[0.0, 1.0])).unwrap(), 0.0);
        assert!((classical_fidelity(&pd(&[0.5, 0.5]), &pd(&[1.0, 0.0])).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn distance_examples() {
        let p = pd(&[0.2, 0.3, 0.5]);
        assert_eq!(classical_distance(&p, &p).unwrap(), 0.0);
        assert!((classical_distance(&pd(&[1.0, 0.0]), &pd(&[0.0, 1.0])).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((classical_distance(&pd(&[0.5, 0.5]), &pd(&[1.0, 0.0])).unwrap() - FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn relative_entropy_examples() {
        let p = pd(&[0.5, 0.5]);
        assert_eq!(kullback_leibler(&p, &p).unwrap(), 0.0);
        // direct summation
        let expect = 0.5 * LN_2 + 0.5 * (2.0f64 / 3.0).ln();
        let got = kullback_leibler(&p, &pd(&[0.25, 0.75])).unwrap();
        assert!((got - expect).abs() < 1e-15);
        assert!((got - 0.143_841).abs() < 1e-6);
        assert_eq!(
            kullback_leibler(&pd(&[1.0, 0.0]), &pd(&[0.0, 1.0])).unwrap(),
            f64::INFINITY
        );
        assert!(relative_entropy(&p, &p, |t| t).is_err());
    }
}
