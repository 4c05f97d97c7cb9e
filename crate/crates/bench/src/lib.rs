//! Fixed inputs shared by the benchmarks.

use gatedist::gates::{su2_from_params, GateSU2Params};
use gatedist::Gate;

/// A generic pair of qubit gates.
pub fn qubit_pair() -> (Gate, Gate) {
    let u1 = su2_from_params(&GateSU2Params::new(0.3, 1.1, 2.0).expect("in range")).expect("special unitary");
    let u2 = su2_from_params(&GateSU2Params::new(1.2, 4.0, 0.5).expect("in range")).expect("special unitary");
    (u1, u2)
}

/// `diag(e^{iα}, e^{-iα})`, which needs `⌈π/(2α)⌉` copies against the identity.
pub fn rotation(alpha: f64) -> Gate {
    Gate::from_phases(&[alpha, -alpha]).expect("nonempty")
}
