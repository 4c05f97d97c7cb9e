#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

use gatedist::gates::{su2_from_params, GateSU2Params};
use gatedist::{Complex64, ComplexMatrix, ComplexVector, Gate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random SU(2) element with uniformly drawn coordinates.
pub fn random_su2(rng: &mut ChaCha8Rng) -> Gate {
    let p = GateSU2Params::new(
        rng.random::<f64>() * FRAC_PI_2,
        rng.random::<f64>() * 2.0 * PI * (1.0 - 1e-12),
        rng.random::<f64>() * 2.0 * PI * (1.0 - 1e-12),
    )
    .unwrap();
    su2_from_params(&p).unwrap()
}

pub fn gaussian_vector(rng: &mut ChaCha8Rng, n: usize) -> ComplexVector {
    let v: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    ComplexVector::new(v).unwrap().normalized().unwrap()
}

/// Haar-ish random unitary from Gram–Schmidt on Gaussian columns.
pub fn random_unitary(rng: &mut ChaCha8Rng, d: usize) -> Gate {
    let mut cols: Vec<ComplexVector> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v = gaussian_vector(rng, d);
        for c in &cols {
            let proj = c.inner(&v).unwrap();
            v = v.sub(&c.scale(proj)).unwrap();
        }
        if v.norm() > 1e-6 {
            cols.push(v.normalized().unwrap());
        }
    }
    Gate::new(ComplexMatrix::from_columns(&cols).unwrap()).unwrap()
}
