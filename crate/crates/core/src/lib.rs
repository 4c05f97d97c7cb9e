//! Statistical distinguishability between unitary operations.
//!
//! Given two gates `U1`, `U2`, the library answers how well a single run of
//! the unknown gate can tell them apart (the gate fidelity and the associated
//! statistical distance), how many parallel copies `U^{⊗N}` are needed before
//! the two become perfectly distinguishable, and which probe state achieves
//! it. Every closed form is paired with a brute-force oracle.
//!
//! Modules:
//!
//! - [`numkit`]: dense complex matrices, Hermitian and unitary
//!   eigendecomposition, PSD square roots, tensor powers, partial traces.
//! - [`classical`]: fidelity, statistical distance and generalized relative
//!   entropies of finite probability distributions.
//! - [`states`]: POVM statistics, pure and mixed state fidelity, the
//!   Fubini–Study form.
//! - [`gates`]: gate fidelity (SU(2) trace form and SU(d) covering-arc form),
//!   minimal copy counts, optimal probes and the simplex oracle.
//! - [`geometry`]: the SU(2) metric, three-sphere embedding, Haar sampling and
//!   average fidelity.
//! - [`protocol`]: greedy sequential elimination among `k` candidate gates.

pub mod classical;
pub mod error;
pub mod gates;
pub mod geometry;
pub mod numkit;
pub mod protocol;
pub mod states;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use classical::ProbDist;
pub use gates::{ArcResult, Gate, GateSU2Params, ProbeState};
pub use numkit::{ComplexMatrix, ComplexVector, UnitaryEigen};
pub use protocol::{HypothesisSet, SimResult, TestPlan};
pub use states::{DensityMatrix, Povm};
