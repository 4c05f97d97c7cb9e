//! Sequential elimination among `k` candidate gates.
//!
//! Each test takes two surviving candidates `(i, j)`, runs the unknown gate on
//! `N = min_copies(U_i, U_j)` copies of an orthogonalizing probe and measures
//! the projector onto `U_i^{⊗N}|probe⟩`. A click on that projector rules out
//! `j`, whose image is orthogonal to it; no click rules out `i`. After `k − 1`
//! tests one candidate is left. The most distant pair is tested first since it
//! needs the fewest copies.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gates::{gate_distance, min_copies_from_distance, optimal_probe_ncopies, Gate, ProbeState, IDENTICAL_TOL};
use crate::states::Povm;

/// Probabilities within this of 0 or 1 are snapped; the probes are orthogonal
/// to that level by construction.
const SNAP_TOL: f64 = 1e-8;

/// Distances closer than this count as ties when choosing the next pair.
const TIE_TOL: f64 = 1e-12;

/// Candidate gates, pairwise distinguishable.
#[derive(Debug, Clone)]
pub struct HypothesisSet {
    gates: Vec<Gate>,
    distances: Vec<Vec<f64>>,
}

impl HypothesisSet {
    pub fn new(gates: Vec<Gate>) -> Result<Self> {
        if gates.len() < 2 {
            return Err(Error::invalid("need at least two hypotheses"));
        }
        let d = gates[0].dim();
        if let Some(g) = gates.iter().find(|g| g.dim() != d) {
            return Err(Error::dim(format!("hypotheses of dimension {d} and {}", g.dim())));
        }
        let k = gates.len();
        let mut distances = vec![vec![0.0; k]; k];
        for i in 0..k {
            for j in i + 1..k {
                let dist = gate_distance(&gates[i], &gates[j])?;
                if dist <= IDENTICAL_TOL {
                    return Err(Error::invalid(format!(
                        "hypotheses {i} and {j} are indistinguishable (distance {dist:e})"
                    )));
                }
                distances[i][j] = dist;
                distances[j][i] = dist;
            }
        }
        Ok(Self { gates, distances })
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.distances[i][j]
    }

    /// Most distant pair among `alive`, ties going to the lexicographically
    /// smallest pair.
    fn farthest_pair(&self, alive: &[usize]) -> (usize, usize) {
        let mut best: Option<((usize, usize), f64)> = None;
        for (a, &i) in alive.iter().enumerate() {
            for &j in &alive[a + 1..] {
                let d = self.distances[i][j];
                if best.is_none_or(|(_, b)| d > b + TIE_TOL) {
                    best = Some(((i, j), d));
                }
            }
        }
        best.expect("at least two survivors").0
    }
}

/// Two-outcome projective measurement `{P, 1 − P}` with `P = |φ⟩⟨φ|`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryMeasurement {
    target: ProbeState,
}

impl BinaryMeasurement {
    pub fn new(target: ProbeState) -> Self {
        Self { target }
    }

    /// The state `|φ⟩` spanning `P`.
    pub fn target(&self) -> &ProbeState {
        &self.target
    }

    /// Born probability of the `P` outcome on `state`.
    pub fn p_probability(&self, state: &ProbeState) -> Result<f64> {
        Ok(self.target.inner(state)?.norm_sqr().clamp(0.0, 1.0))
    }

    /// Explicit POVM on the system copies; only for dimensions within the size cap.
    pub fn to_povm(&self) -> Result<Povm> {
        crate::gates::size_cap_dim(self.target.site_dim(), self.target.copies())?;
        Povm::binary_projective(&self.target.system_vector()?)
    }
}

/// One scheduled test between hypotheses `pair = (i, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairTest {
    pub pair: (usize, usize),
    pub copies: usize,
    pub probe: ProbeState,
    /// Projector onto `U_i^{⊗N}|probe⟩`.
    pub measurement: BinaryMeasurement,
}

impl PairTest {
    fn build(h: &HypothesisSet, i: usize, j: usize) -> Result<Self> {
        let (ui, uj) = (&h.gates[i], &h.gates[j]);
        let copies = min_copies_from_distance(h.distances[i][j])?;
        let probe = optimal_probe_ncopies(ui, uj)?;
        if probe.copies() != copies {
            return Err(Error::Internal(format!(
                "probe uses {} copies, distance asks for {copies}",
                probe.copies()
            )));
        }
        let measurement = BinaryMeasurement::new(probe.evolve(ui.matrix())?);
        Ok(Self {
            pair: (i, j),
            copies,
            probe,
            measurement,
        })
    }
}

/// Schedule of `k − 1` pairwise tests.
#[derive(Debug, Clone, PartialEq)]
pub struct TestPlan {
    pub tests: Vec<PairTest>,
}

impl TestPlan {
    /// Sum of copy counts over the schedule.
    pub fn planned_runs(&self) -> usize {
        self.tests.iter().map(|t| t.copies).sum()
    }
}

/// Which projector fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// `P`: consistent with the first gate of the pair.
    First,
    /// `1 − P`: consistent with the second.
    Second,
}

/// One executed test.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub pair: (usize, usize),
    pub copies: usize,
    pub outcome: Outcome,
    pub discarded: usize,
}

/// Outcome of a simulated elimination run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub identified_index: usize,
    /// Gate uses over all executed tests.
    pub total_runs: usize,
    pub trace: Vec<TraceEntry>,
    /// False when the simulated gate was not one of the hypotheses, in which
    /// case the identification carries no guarantee.
    pub verified: bool,
}

/// Greedy schedule: repeatedly test the most distant surviving pair. The plan
/// is fixed in advance by assuming every test discards the second gate of its
/// pair; simulation re-plans when the other outcome occurs.
pub fn plan_elimination(h: &HypothesisSet) -> Result<TestPlan> {
    let mut alive: Vec<usize> = (0..h.len()).collect();
    let mut tests = Vec::with_capacity(h.len() - 1);
    while alive.len() > 1 {
        let (i, j) = h.farthest_pair(&alive);
        tests.push(PairTest::build(h, i, j)?);
        alive.retain(|&x| x != j);
    }
    Ok(TestPlan { tests })
}

/// Runs the elimination against hypothesis `true_index`.
pub fn simulate_elimination(plan: &TestPlan, h: &HypothesisSet, true_index: usize, seed: u64) -> Result<SimResult> {
    let gate = h
        .gates
        .get(true_index)
        .ok_or_else(|| Error::invalid(format!("true index {true_index} outside 0..{}", h.len())))?;
    run(plan, h, gate, true, seed)
}

/// Runs the elimination against an arbitrary gate of the right dimension.
/// Some survivor is always returned; `verified` records whether the gate is a
/// member of the set.
pub fn simulate_with_gate(plan: &TestPlan, h: &HypothesisSet, gate: &Gate, seed: u64) -> Result<SimResult> {
    if gate.dim() != h.gates[0].dim() {
        return Err(Error::dim(format!(
            "gate of dimension {} for hypotheses of dimension {}",
            gate.dim(),
            h.gates[0].dim()
        )));
    }
    let member = h.gates.iter().any(|g| g == gate);
    run(plan, h, gate, member, seed)
}

fn run(plan: &TestPlan, h: &HypothesisSet, gate: &Gate, verified: bool, seed: u64) -> Result<SimResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut alive: Vec<usize> = (0..h.len()).collect();
    let mut trace = Vec::with_capacity(h.len() - 1);
    let mut total_runs = 0;
    while alive.len() > 1 {
        let (i, j) = h.farthest_pair(&alive);
        let built;
        let test = match plan.tests.iter().find(|t| t.pair == (i, j)) {
            Some(t) => t,
            None => {
                built = PairTest::build(h, i, j)?;
                &built
            }
        };
        let state = test.probe.evolve(gate.matrix())?;
        let mut p = test.measurement.p_probability(&state)?;
        if p < SNAP_TOL {
            p = 0.0;
        } else if p > 1.0 - SNAP_TOL {
            p = 1.0;
        }
        let draw: f64 = rng.random();
        let (outcome, discarded) = if draw < p { (Outcome::First, j) } else { (Outcome::Second, i) };
        alive.retain(|&x| x != discarded);
        total_runs += test.copies;
        trace.push(TraceEntry {
            pair: (i, j),
            copies: test.copies,
            outcome,
            discarded,
        });
    }
    Ok(SimResult {
        identified_index: alive[0],
        total_runs,
        trace,
        verified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn pauli_set() -> HypothesisSet {
        HypothesisSet::new(vec![Gate::identity(2), Gate::i_sigma_x(), Gate::i_sigma_z()]).unwrap()
    }

    #[test]
    fn set_validation() {
        assert!(HypothesisSet::new(vec![Gate::identity(2)]).is_err());
        assert!(HypothesisSet::new(vec![Gate::identity(2), Gate::identity(2)]).is_err());
        assert!(matches!(
            HypothesisSet::new(vec![Gate::identity(2), Gate::identity(3)]),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn pauli_plan() {
        let plan = plan_elimination(&pauli_set()).unwrap();
        assert_eq!(plan.tests.len(), 2);
        assert!(plan.tests.iter().all(|t| t.copies == 1));
        assert_eq!(plan.planned_runs(), 2);
        assert_eq!(plan.tests[0].pair, (0, 1));
    }

    #[test]
    fn pauli_set_takes_two_runs() {
        let h = pauli_set();
        let plan = plan_elimination(&h).unwrap();
        for truth in 0..3 {
            for seed in 0..20 {
                let r = simulate_elimination(&plan, &h, truth, seed).unwrap();
                assert_eq!(r.identified_index, truth);
                assert_eq!(r.total_runs, 2);
                assert!(r.verified);
            }
        }
    }

    #[test]
    fn two_hypotheses_single_test() {
        let g = Gate::from_phases(&[PI / 5.0, -PI / 5.0]).unwrap();
        let h = HypothesisSet::new(vec![Gate::identity(2), g]).unwrap();
        let plan = plan_elimination(&h).unwrap();
        assert_eq!(plan.tests.len(), 1);
        assert_eq!(plan.tests[0].copies, 3);
        for truth in 0..2 {
            let r = simulate_elimination(&plan, &h, truth, 11).unwrap();
            assert_eq!((r.identified_index, r.total_runs), (truth, 3));
        }
    }

    #[test]
    fn far_pair_goes_first() {
        let close = Gate::from_phases(&[PI / 5.0, -PI / 5.0]).unwrap();
        let h = HypothesisSet::new(vec![Gate::identity(2), close, Gate::i_sigma_x()]).unwrap();
        let plan = plan_elimination(&h).unwrap();
        assert_eq!(plan.tests[0].copies, 1);
        assert_ne!(plan.tests[0].pair, (0, 1));
    }

    #[test]
    fn binary_measurement_povm() {
        let plan = plan_elimination(&pauli_set()).unwrap();
        let povm = plan.tests[0].measurement.to_povm().unwrap();
        assert_eq!(povm.elements().len(), 2);
    }

    #[test]
    fn out_of_set_gate_is_flagged() {
        let h = pauli_set();
        let plan = plan_elimination(&h).unwrap();
        let stranger = Gate::i_sigma_y();
        let r = simulate_with_gate(&plan, &h, &stranger, 3).unwrap();
        assert!(!r.verified);
        assert!(r.identified_index < 3);
        assert_eq!(r.total_runs, r.trace.iter().map(|t| t.copies).sum::<usize>());
        assert!(simulate_elimination(&plan, &h, 3, 0).is_err());
    }
}
