//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::process::ExitCode;

use gatedist::classical::{classical_distance, fisher_form, relative_entropy, ProbDist};
use gatedist::gates::{
    convex_min_overlap, gate_distance, gate_fidelity_su2, gate_fidelity_sud, min_copies, optimal_probe_ncopies,
    optimal_probe_single, oracle_min_overlap, probe_overlap, relative_gate, su3_example_gate, tensor_power_phase_set,
    GateSU2Params,
};
use gatedist::geometry::{
    avg_fidelity_mc, avg_fidelity_su2_closed, haar_sample_su2, metric_form_coords, metric_form_matrix, sphere_embed,
    su2_directional_derivative, TangentIncrement,
};
use gatedist::numkit::ComplexMatrix;
use gatedist::protocol::{plan_elimination, simulate_elimination, HypothesisSet};
use gatedist::states::{mixed_fidelity, pure_fidelity, DensityMatrix};
use gatedist::{ComplexVector, Gate, ProbeState};
use rand::Rng;

use common::{gaussian_vector, random_su2, rng};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
type Convex = (&'static str, fn(f64) -> f64);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn su2_fidelity_vs_oracle() -> Outcome {
    let mut r = rng(101);
    let mut worst = 0.0f64;
    for k in 0..100 {
        let (u1, u2) = (random_su2(&mut r), random_su2(&mut r));
        let f = gate_fidelity_su2(&u1, &u2).map_err(|e| e.to_string())?;
        let o = oracle_min_overlap(&u1, &u2, 1, 32, k).map_err(|e| e.to_string())?;
        worst = worst.max((f - o).abs());
    }
    check(worst <= 1e-6, format!("max |F - oracle| = {worst:.2e} (tol 1e-6)"))
}

fn entangled_and_separable_probes() -> Outcome {
    let mut r = rng(102);
    let bell = ProbeState::maximally_entangled(2).map_err(|e| e.to_string())?;
    let (mut worst_bell, mut worst_sep, mut worst_weight) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let (u1, u2) = (random_su2(&mut r), random_su2(&mut r));
        let f = gate_fidelity_su2(&u1, &u2).unwrap();
        worst_bell = worst_bell.max((probe_overlap(&u1, &u2, &bell, 1).unwrap() - f).abs());
        let sep = optimal_probe_single(&u1, &u2, false).unwrap();
        worst_sep = worst_sep.max((probe_overlap(&u1, &u2, &sep, 1).unwrap() - f).abs());
        // weight of the reduced probe on each eigenvector of U1†U2
        let rho = sep.reduced_state().unwrap();
        let rel = relative_gate(&u1, &u2).unwrap();
        for v in &rel.spectral().unwrap().vectors {
            let w = v.inner(&rho.mul_vec(v).unwrap()).unwrap().re;
            worst_weight = worst_weight.max((w - 0.5).abs());
        }
    }
    check(
        worst_bell <= 1e-10 && worst_sep <= 1e-10 && worst_weight <= 1e-10,
        format!("max err entangled {worst_bell:.2e}, separable {worst_sep:.2e}, |rho_uu - 1/2| {worst_weight:.2e} (tol 1e-10)"),
    )
}

fn ncopy_discrimination() -> Outcome {
    let mut r = rng(103);
    let (mut pairs, mut worst_overlap, mut min_below) = (0, 0.0f64, f64::INFINITY);
    let mut max_n = 0;
    let mut below_failures = Vec::new();
    while pairs < 100 {
        let (u1, u2) = (random_su2(&mut r), random_su2(&mut r));
        let delta = gate_distance(&u1, &u2).unwrap();
        if !(0.05..FRAC_PI_2).contains(&delta) {
            continue;
        }
        pairs += 1;
        let n = min_copies(&u1, &u2).unwrap();
        max_n = max_n.max(n);
        let probe = optimal_probe_ncopies(&u1, &u2).map_err(|e| e.to_string())?;
        worst_overlap = worst_overlap.max(probe_overlap(&u1, &u2, &probe, n).unwrap());
        if n >= 2 {
            let phases = &relative_gate(&u1, &u2).unwrap().spectral().unwrap().phases.clone();
            let below = convex_min_overlap(&tensor_power_phase_set(phases, n - 1).unwrap()).unwrap();
            if below <= 1e-6 {
                below_failures.push((delta, n));
            }
            min_below = min_below.min(below);
        }
    }
    check(
        worst_overlap <= 1e-16 && below_failures.is_empty(),
        format!(
            "max overlap at N_min {worst_overlap:.2e} (tol 1e-16), min overlap floor at N_min-1 {min_below:.2e} (> 1e-6), N up to {max_n}{}",
            if below_failures.is_empty() {
                String::new()
            } else {
                format!(", not sharp at {below_failures:?}")
            }
        ),
    )
}

fn su3_example() -> Outcome {
    let mut r = rng(104);
    let (mut worst_unitary, mut worst_entry, mut worst_fid) = (0.0f64, 0.0f64, 0.0f64);
    let id = Gate::identity(3);
    for _ in 0..50 {
        let g1 = r.random::<f64>() * FRAC_PI_2;
        let g2 = r.random::<f64>() * FRAC_PI_2;
        let phi: [f64; 5] = std::array::from_fn(|_| r.random::<f64>() * 2.0 * PI * (1.0 - 1e-12));
        let u = su3_example_gate(g1, g2, &phi).map_err(|e| e.to_string())?;
        let gram = u.matrix().adjoint().matmul(u.matrix()).unwrap();
        worst_unitary = worst_unitary.max(gram.max_abs_diff(&ComplexMatrix::identity(3)).unwrap());
        let e1 = ComplexVector::basis(3, 0);
        worst_entry = worst_entry.max(e1.inner(&u.matrix().mul_vec(&e1).unwrap()).unwrap().norm());
        worst_fid = worst_fid.max(gate_fidelity_sud(&id, &u).unwrap());
    }
    check(
        worst_unitary <= 1e-10 && worst_entry <= 1e-12 && worst_fid <= 1e-12,
        format!("unitarity {worst_unitary:.2e}, |<e1|U|e1>| {worst_entry:.2e}, F_sud {worst_fid:.2e}"),
    )
}

fn average_fidelity() -> Outcome {
    let mut r = rng(105);
    let mut worst_z = 0.0f64;
    for k in 0..20 {
        let (u1, u2) = (random_su2(&mut r), random_su2(&mut r));
        let est = avg_fidelity_mc(&u1, &u2, 100_000, 500 + k).unwrap();
        let exact = avg_fidelity_su2_closed(&u1, &u2).unwrap();
        worst_z = worst_z.max((est.mean - exact).abs() / est.std_error);
    }
    let zero = avg_fidelity_mc(&Gate::identity(2), &Gate::i_sigma_x(), 100_000, 7).unwrap();
    let off = (zero.mean - 1.0 / 3.0).abs();
    check(
        worst_z <= 3.0 && off <= 0.005,
        format!("max deviation {worst_z:.2} SE (<= 3), F=0 pair off 1/3 by {off:.2e} (<= 5e-3)"),
    )
}

fn params_at(p: &GateSU2Params, t: &TangentIncrement, s: f64) -> Gate {
    let m = GateSU2Params::matrix_unchecked(
        p.theta1 + s * t.d_theta1,
        p.theta2 + s * t.d_theta2,
        p.theta3 + s * t.d_theta3,
    );
    Gate::special(m).unwrap()
}

fn random_point(r: &mut impl Rng) -> (GateSU2Params, TangentIncrement) {
    // keep away from the coordinate singularities at θ₁ ∈ {0, π/2}
    let p = GateSU2Params::new(
        0.05 + r.random::<f64>() * (FRAC_PI_2 - 0.1),
        r.random::<f64>() * TAU * (1.0 - 1e-12),
        r.random::<f64>() * TAU * (1.0 - 1e-12),
    )
    .unwrap();
    let t = TangentIncrement::new(
        r.random::<f64>() * 2.0 - 1.0,
        r.random::<f64>() * 2.0 - 1.0,
        r.random::<f64>() * 2.0 - 1.0,
    )
    .unwrap();
    (p, t)
}

fn metric_identity() -> Outcome {
    let mut r = rng(106);
    let (mut worst_form, mut worst_ratio_3, mut worst_ratio_4, mut worst_embed) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let (p, t) = random_point(&mut r);
        let g = metric_form_coords(&p, &t);
        let u = params_at(&p, &t, 0.0);
        let du = su2_directional_derivative(&p, &t);
        let m = metric_form_matrix(&u, &du).unwrap();
        worst_form = worst_form.max((m - g).abs() / g);

        for (eps, worst) in [(1e-3, &mut worst_ratio_3), (1e-4, &mut worst_ratio_4)] {
            let d = gate_distance(&u, &params_at(&p, &t, eps)).unwrap();
            *worst = worst.max((d * d / (eps * eps * g) - 1.0).abs());
        }

        let h = 1e-3;
        let x = |s: f64| sphere_embed(&params_at(&p, &t, s)).unwrap().to_array();
        let (xm2, xm1, xp1, xp2) = (x(-2.0 * h), x(-h), x(h), x(2.0 * h));
        let deriv_sq: f64 = (0..4)
            .map(|k| ((xm2[k] - 8.0 * xm1[k] + 8.0 * xp1[k] - xp2[k]) / (12.0 * h)).powi(2))
            .sum();
        worst_embed = worst_embed.max((deriv_sq - g).abs() / g);
    }
    check(
        worst_form <= 1e-9 && worst_ratio_4 <= 1e-3 && worst_embed <= 1e-9,
        format!(
            "matrix vs coords rel {worst_form:.2e}, distance ratio err {worst_ratio_3:.2e} at 1e-3 / {worst_ratio_4:.2e} at 1e-4, embedding rel {worst_embed:.2e}"
        ),
    )
}

/// Composite Simpson rule on `[a, b]` with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n)
        .map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    (f(a) + f(b) + inner) * h / 3.0
}

fn haar_sampler() -> Outcome {
    let n = 100_000;
    let samples = haar_sample_su2(107, n).map_err(|e| e.to_string())?;
    let mut theta: Vec<f64> = samples.iter().map(|p| p.theta1).collect();
    theta.sort_by(f64::total_cmp);
    let ks = theta
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let cdf = t.sin().powi(2);
            (cdf - i as f64 / n as f64).abs().max(((i + 1) as f64 / n as f64 - cdf).abs())
        })
        .fold(0.0, f64::max);
    // |tr U|² = 4 cos²θ₁ cos²θ₂
    let mean: f64 = samples
        .iter()
        .map(|p| 4.0 * (p.theta1.cos() * p.theta2.cos()).powi(2))
        .sum::<f64>()
        / n as f64;
    let reference = simpson(
        |t1| {
            simpson(
                |t2| 4.0 * (t1.cos() * t2.cos()).powi(2) * (2.0 * t1).sin() / (2.0 * PI),
                0.0,
                2.0 * PI,
                2000,
            )
        },
        0.0,
        FRAC_PI_2,
        2000,
    );
    check(
        ks <= 0.01 && (mean - reference).abs() <= 0.02 && (reference - 1.0).abs() <= 0.02,
        format!("KS {ks:.4} (<= 0.01), mean |tr U|^2 {mean:.4} vs quadrature {reference:.6}"),
    )
}

fn state_fidelity_reduction() -> Outcome {
    let mut r = rng(108);
    let mut worst = 0.0f64;
    for k in 0..100 {
        let d = 2 + k % 3;
        let (a, b) = (gaussian_vector(&mut r, d), gaussian_vector(&mut r, d));
        let pure = pure_fidelity(&a, &b).unwrap();
        let mixed = mixed_fidelity(&DensityMatrix::pure(&a).unwrap(), &DensityMatrix::pure(&b).unwrap()).unwrap();
        worst = worst.max((pure - mixed).abs());
    }
    let zero = DensityMatrix::pure(&ComplexVector::basis(2, 0)).unwrap();
    let half = mixed_fidelity(&DensityMatrix::maximally_mixed(2), &zero).unwrap();
    check(
        worst <= 1e-10 && (half - 0.5).abs() <= 1e-12,
        format!("rank-1 max err {worst:.2e} (tol 1e-10), F(I/2, |0><0|) - 0.5 = {:.2e}", half - 0.5),
    )
}

fn protocol_soundness() -> Outcome {
    let mut r = rng(109);
    let (mut failures, mut run_mismatch, mut max_runs) = (0, 0, 0);
    for trial in 0..1000u64 {
        let k = r.random_range(2..=5);
        let gates: Vec<Gate> = (0..k).map(|_| random_su2(&mut r)).collect();
        let h = match HypothesisSet::new(gates) {
            Ok(h) => h,
            Err(e) => return Err(format!("trial {trial}: {e}")),
        };
        let plan = plan_elimination(&h).map_err(|e| e.to_string())?;
        let truth = r.random_range(0..k);
        let res = simulate_elimination(&plan, &h, truth, trial).map_err(|e| e.to_string())?;
        if res.identified_index != truth {
            failures += 1;
        }
        let expected: usize = res
            .trace
            .iter()
            .map(|t| min_copies(&h.gates()[t.pair.0], &h.gates()[t.pair.1]).unwrap())
            .sum();
        if expected != res.total_runs {
            run_mismatch += 1;
        }
        max_runs = max_runs.max(res.total_runs);
    }
    let pauli = HypothesisSet::new(vec![Gate::identity(2), Gate::i_sigma_x(), Gate::i_sigma_z()]).unwrap();
    let plan = plan_elimination(&pauli).unwrap();
    let mut pauli_bad = 0;
    for truth in 0..3 {
        for seed in 0..100 {
            let res = simulate_elimination(&plan, &pauli, truth, seed).unwrap();
            if res.identified_index != truth || res.total_runs != 2 {
                pauli_bad += 1;
            }
        }
    }
    check(
        failures == 0 && run_mismatch == 0 && pauli_bad == 0,
        format!(
            "{failures} misidentified / 1000, {run_mismatch} run-count mismatches, {pauli_bad} bad Pauli-set runs (largest total {max_runs})"
        ),
    )
}

fn random_interior(r: &mut impl Rng, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| 0.05 + r.random::<f64>()).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

fn classical_module() -> Outcome {
    let mut r = rng(110);
    // the ratio error is first order in eps, so it must shrink with eps
    let mut worst = [0.0f64; 2];
    for _ in 0..100 {
        let n = r.random_range(2..=6);
        let p = random_interior(&mut r, n);
        let mut v: Vec<f64> = (0..n).map(|_| r.random::<f64>() - 0.5).collect();
        let mean = v.iter().sum::<f64>() / n as f64;
        v.iter_mut().for_each(|x| *x -= mean);
        let pd = ProbDist::new(p.clone()).unwrap();
        let form = fisher_form(&pd, &v).unwrap();
        for (k, eps) in [1e-4, 1e-5].into_iter().enumerate() {
            let q: Vec<f64> = p.iter().zip(&v).map(|(a, b)| a + eps * b).collect();
            let dist = classical_distance(&pd, &ProbDist::from_unnormalized(q).unwrap()).unwrap();
            worst[k] = worst[k].max((dist * dist / (eps * eps * form / 4.0) - 1.0).abs());
        }
    }
    let gs: [Convex; 3] = [
        ("ln", f64::ln),
        ("t-1", |t| t - 1.0),
        ("(sqrt t-1)^2", |t| (t.sqrt() - 1.0).powi(2)),
    ];
    let mut negatives = Vec::new();
    for _ in 0..1000 {
        let n = r.random_range(2..=6);
        let p = ProbDist::new(random_interior(&mut r, n)).unwrap();
        let q = ProbDist::new(random_interior(&mut r, n)).unwrap();
        for (name, g) in gs {
            let h = relative_entropy(&p, &q, g).unwrap();
            if h < -1e-15 {
                negatives.push((name, h));
            }
        }
    }
    check(
        worst[1] <= 1e-3 && worst[1] * 5.0 <= worst[0] && negatives.is_empty(),
        format!(
            "Fisher ratio err {:.2e} at eps 1e-4, {:.2e} at eps 1e-5 (tol 1e-3, must shrink), {} negative entropies",
            worst[0],
            worst[1],
            negatives.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("su2 fidelity closed form vs oracle", su2_fidelity_vs_oracle),
        ("entangled and separable single-copy probes", entangled_and_separable_probes),
        ("N-copy perfect discrimination and sharpness", ncopy_discrimination),
        ("SU(3) example gate", su3_example),
        ("average fidelity", average_fidelity),
        ("metric identity", metric_identity),
        ("Haar sampler", haar_sampler),
        ("state fidelity reduction", state_fidelity_reduction),
        ("protocol soundness", protocol_soundness),
        ("classical module", classical_module),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
