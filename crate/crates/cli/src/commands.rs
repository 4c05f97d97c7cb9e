use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};

use clap::Args;
use gatedist::classical::{self, ProbDist};
use gatedist::gates::{
    convex_min_overlap, gate_distance, gate_fidelity_su2, gate_fidelity_sud, min_copies, minimal_covering_arc,
    ncopy_probe_weight, optimal_probe_ncopies, optimal_probe_single, oracle_report, probe_overlap, relative_gate,
    su2_from_params, su3_example_gate, tensor_power_phase_set, GateSU2Params, ProbeRepr, ProbeState,
};
use gatedist::geometry::{
    avg_fidelity_mc, avg_fidelity_su2_closed, haar_sample_su2, metric_form_coords, metric_form_matrix, sphere_embed,
    su2_directional_derivative, TangentIncrement,
};
use gatedist::protocol::{plan_elimination, simulate_elimination, simulate_with_gate, HypothesisSet, Outcome};
use gatedist::states::mixed_fidelity;
use gatedist::{Complex64, ComplexVector, Gate};
use serde_json::{json, Value};

use crate::matrix_file::{read_density, read_gate, read_gate_set, MatrixFile};
use crate::output::write_csv;
use crate::{CliError, GatePair, Global};

type Doc = Result<Value, CliError>;

fn doc(command: &str, inputs: Value, result: Value) -> Doc {
    Ok(json!({"command": command, "inputs": inputs, "result": result}))
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn pair_inputs(a: &GatePair) -> Value {
    json!({"u1": path_str(&a.u1), "u2": path_str(&a.u2)})
}

fn read_pair(g: &Global, a: &GatePair) -> Result<(Gate, Gate), CliError> {
    Ok((read_gate(&a.u1, g.tol)?, read_gate(&a.u2, g.tol)?))
}

fn no_plot(g: &Global, command: &str) -> Result<(), CliError> {
    if g.emit_plot.is_some() {
        return Err(CliError::Input(format!("--emit-plot has no series for {command}")));
    }
    Ok(())
}

fn plot(g: &Global, series: &[(f64, f64)]) -> Result<(), CliError> {
    if let Some(path) = &g.emit_plot {
        write_csv(path, series).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn vector(v: &ComplexVector) -> Value {
    Value::Array(v.as_slice().iter().map(|z| complex(*z)).collect())
}

fn parse_list(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Input(format!("cannot parse {x:?} as a number: {e}")))
        })
        .collect()
}

pub fn fidelity(g: &Global, a: &GatePair) -> Doc {
    no_plot(g, "fidelity")?;
    let (u1, u2) = read_pair(g, a)?;
    let f = if u1.dim() == 2 {
        gate_fidelity_su2(&u1, &u2)?
    } else {
        gate_fidelity_sud(&u1, &u2)?
    };
    doc("fidelity", pair_inputs(a), json!(f))
}

pub fn distance(g: &Global, a: &GatePair) -> Doc {
    no_plot(g, "distance")?;
    let (u1, u2) = read_pair(g, a)?;
    doc("distance", pair_inputs(a), json!(gate_distance(&u1, &u2)?))
}

pub fn ncopies(g: &Global, a: &GatePair) -> Doc {
    no_plot(g, "ncopies")?;
    let (u1, u2) = read_pair(g, a)?;
    doc("ncopies", pair_inputs(a), json!(min_copies(&u1, &u2)?))
}

#[derive(Debug, Args, Clone)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub pair: GatePair,
    /// Single-use qubit probe instead of the N-copy construction.
    #[arg(long)]
    pub single: bool,
    /// With --single, use the maximally entangled probe.
    #[arg(long, requires = "single")]
    pub entangled: bool,
}

fn probe_json(p: &ProbeState) -> Value {
    match p.repr() {
        ProbeRepr::Dense { vector: v, ancilla } => json!({"dense": vector(v), "ancilla": ancilla}),
        ProbeRepr::Product(terms) => Value::Array(
            terms
                .iter()
                .map(|t| {
                    json!({
                        "amplitude": complex(t.amplitude),
                        "runs": t.runs.iter().map(|(v, n)| json!({"vector": vector(v), "count": n})).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        ),
    }
}

pub fn probe(g: &Global, a: &ProbeArgs) -> Doc {
    no_plot(g, "probe")?;
    let (u1, u2) = read_pair(g, &a.pair)?;
    let inputs = json!({"u1": path_str(&a.pair.u1), "u2": path_str(&a.pair.u2), "single": a.single, "entangled": a.entangled});
    let (p, weight) = if a.single {
        (optimal_probe_single(&u1, &u2, a.entangled)?, Value::Null)
    } else {
        let p = optimal_probe_ncopies(&u1, &u2)?;
        let w = ncopy_probe_weight(gate_distance(&u1, &u2)?, p.copies())?;
        (p, json!(w))
    };
    let overlap = probe_overlap(&u1, &u2, &p, p.copies())?;
    let result = json!({
        "copies": p.copies(),
        "separable": p.is_separable(),
        "weight": weight,
        "overlap": overlap,
        "state": probe_json(&p),
    });
    doc("probe", inputs, result)
}

#[derive(Debug, Args, Clone)]
pub struct ArcArgs {
    #[arg(long, value_name = "FILE", requires = "u2", conflicts_with = "phases")]
    pub u1: Option<PathBuf>,
    #[arg(long, value_name = "FILE", requires = "u1")]
    pub u2: Option<PathBuf>,
    /// Comma-separated phases in radians.
    #[arg(long, allow_hyphen_values = true)]
    pub phases: Option<String>,
    /// Take the arc of the N-fold sums.
    #[arg(long, default_value_t = 1)]
    pub copies: usize,
}

pub fn arc(g: &Global, a: &ArcArgs) -> Doc {
    no_plot(g, "arc")?;
    let (phases, inputs) = match (&a.u1, &a.u2, &a.phases) {
        (Some(p1), Some(p2), None) => {
            let rel = relative_gate(&read_gate(p1, g.tol)?, &read_gate(p2, g.tol)?)?;
            let phases = rel.spectral()?.phases.clone();
            (phases, json!({"u1": path_str(p1), "u2": path_str(p2), "copies": a.copies}))
        }
        (None, None, Some(list)) => (parse_list(list)?, json!({"phases": list, "copies": a.copies})),
        _ => return Err(CliError::Input("give either --u1/--u2 or --phases".into())),
    };
    let phases = tensor_power_phase_set(&phases, a.copies)?;
    let arc = minimal_covering_arc(&phases)?;
    let result = json!({
        "delta": arc.delta,
        "center": arc.center,
        "extremes": [arc.extremes.0, arc.extremes.1],
        "convex_min_overlap": convex_min_overlap(&phases)?,
        "phases": phases,
    });
    doc("arc", inputs, result)
}

#[derive(Debug, Args, Clone)]
pub struct OracleArgs {
    #[command(flatten)]
    pub pair: GatePair,
    #[arg(long, default_value_t = 1)]
    pub copies: usize,
}

pub fn oracle(g: &Global, a: &OracleArgs) -> Doc {
    no_plot(g, "oracle")?;
    let (u1, u2) = read_pair(g, &a.pair)?;
    let r = oracle_report(&u1, &u2, a.copies, g.budget, g.seed)?;
    let closed = convex_min_overlap(&r.phases)?;
    let inputs = json!({
        "u1": path_str(&a.pair.u1), "u2": path_str(&a.pair.u2),
        "copies": a.copies, "budget": g.budget, "seed": g.seed,
    });
    let result = json!({
        "value": r.value,
        "simplex_min": r.simplex_min,
        "random_probe_min": r.random_probe_min,
        "closed_form": closed,
        "max_iterations": r.max_iterations,
    });
    doc("oracle", inputs, result)
}

#[derive(Debug, Args, Clone)]
pub struct StateArgs {
    #[arg(long, value_name = "FILE")]
    pub rho1: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub rho2: PathBuf,
}

pub fn state_fidelity(g: &Global, a: &StateArgs) -> Doc {
    no_plot(g, "state-fidelity")?;
    let (r1, r2) = (read_density(&a.rho1)?, read_density(&a.rho2)?);
    let inputs = json!({"rho1": path_str(&a.rho1), "rho2": path_str(&a.rho2)});
    doc("state-fidelity", inputs, json!(mixed_fidelity(&r1, &r2)?))
}

#[derive(Debug, Args, Clone)]
pub struct ClassicalArgs {
    /// Comma-separated probabilities.
    #[arg(long)]
    pub p: String,
    #[arg(long)]
    pub q: String,
}

pub fn classical_distance(g: &Global, a: &ClassicalArgs) -> Doc {
    no_plot(g, "classical-distance")?;
    let p = ProbDist::new(parse_list(&a.p)?)?;
    let q = ProbDist::new(parse_list(&a.q)?)?;
    let result = json!({
        "fidelity": classical::classical_fidelity(&p, &q)?,
        "distance": classical::classical_distance(&p, &q)?,
    });
    doc("classical-distance", json!({"p": a.p, "q": a.q}), result)
}

pub fn avg_fidelity(g: &Global, a: &GatePair) -> Doc {
    let (u1, u2) = read_pair(g, a)?;
    let est = avg_fidelity_mc(&u1, &u2, g.samples, g.seed)?;
    let closed = if u1.dim() == 2 {
        json!(avg_fidelity_su2_closed(&u1, &u2)?)
    } else {
        Value::Null
    };
    if g.emit_plot.is_some() {
        // estimate against sample count on a decade grid
        let mut series = Vec::new();
        let mut n = 10;
        while n < g.samples {
            series.push((n as f64, avg_fidelity_mc(&u1, &u2, n, g.seed)?.mean));
            n *= 10;
        }
        series.push((g.samples as f64, est.mean));
        plot(g, &series)?;
    }
    let inputs = json!({"u1": path_str(&a.u1), "u2": path_str(&a.u2), "samples": g.samples, "seed": g.seed});
    let result = json!({"mean": est.mean, "std_error": est.std_error, "closed_form": closed});
    doc("avg-fidelity", inputs, result)
}

#[derive(Debug, Args, Clone)]
pub struct HaarArgs {
    /// Number of samples; defaults to --samples.
    #[arg(long)]
    pub count: Option<usize>,
    /// Histogram bins for --emit-plot.
    #[arg(long, default_value_t = 50)]
    pub bins: usize,
    /// Include every sample in the output.
    #[arg(long)]
    pub list: bool,
}

pub fn haar_sample(g: &Global, a: &HaarArgs) -> Doc {
    let n = a.count.unwrap_or(g.samples);
    let samples = haar_sample_su2(g.seed, n)?;
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
    let mean_trace_sq =
        samples.iter().map(|p| 4.0 * (p.theta1.cos() * p.theta2.cos()).powi(2)).sum::<f64>() / n as f64;
    if g.emit_plot.is_some() {
        if a.bins == 0 {
            return Err(CliError::Input("--bins must be positive".into()));
        }
        // empirical density of θ₁
        let width = FRAC_PI_2 / a.bins as f64;
        let mut counts = vec![0usize; a.bins];
        for t in &theta {
            counts[((t / width) as usize).min(a.bins - 1)] += 1;
        }
        let series: Vec<(f64, f64)> = counts
            .iter()
            .enumerate()
            .map(|(k, c)| ((k as f64 + 0.5) * width, *c as f64 / (n as f64 * width)))
            .collect();
        plot(g, &series)?;
    }
    let mut result = json!({"count": n, "theta1_ks": ks, "mean_trace_sq": mean_trace_sq});
    if a.list {
        result["samples"] = samples.iter().map(|p| json!([p.theta1, p.theta2, p.theta3])).collect();
    }
    doc("haar-sample", json!({"count": n, "seed": g.seed}), result)
}

#[derive(Debug, Args, Clone)]
pub struct MetricArgs {
    #[arg(long)]
    pub theta1: f64,
    #[arg(long)]
    pub theta2: f64,
    #[arg(long)]
    pub theta3: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub d1: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub d2: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub d3: f64,
    /// Step for the distance ratio.
    #[arg(long, default_value_t = 1e-4)]
    pub eps: f64,
}

fn gate_at(p: &GateSU2Params, t: &TangentIncrement, s: f64) -> Result<Gate, CliError> {
    let m = GateSU2Params::matrix_unchecked(p.theta1 + s * t.d_theta1, p.theta2 + s * t.d_theta2, p.theta3 + s * t.d_theta3);
    Ok(Gate::special(m)?)
}

fn distance_ratio(p: &GateSU2Params, t: &TangentIncrement, eps: f64) -> Result<f64, CliError> {
    let d = gate_distance(&gate_at(p, t, 0.0)?, &gate_at(p, t, eps)?)?;
    Ok(d * d / (eps * eps * metric_form_coords(p, t)))
}

pub fn metric_check(g: &Global, a: &MetricArgs) -> Doc {
    let p = GateSU2Params::new(a.theta1, a.theta2, a.theta3)?;
    let t = TangentIncrement::new(a.d1, a.d2, a.d3)?;
    if a.eps.is_nan() || a.eps <= 0.0 {
        return Err(CliError::Input("--eps must be positive".into()));
    }
    let u = su2_from_params(&p)?;
    let coords = metric_form_coords(&p, &t);
    let matrix = metric_form_matrix(&u, &su2_directional_derivative(&p, &t))?;
    let h = 1e-3;
    let x = |s: f64| -> Result<[f64; 4], CliError> { Ok(sphere_embed(&gate_at(&p, &t, s)?)?.to_array()) };
    let (xm2, xm1, xp1, xp2) = (x(-2.0 * h)?, x(-h)?, x(h)?, x(2.0 * h)?);
    let embedding: f64 = (0..4)
        .map(|k| ((xm2[k] - 8.0 * xm1[k] + 8.0 * xp1[k] - xp2[k]) / (12.0 * h)).powi(2))
        .sum();
    let ratio = if coords > 0.0 { json!(distance_ratio(&p, &t, a.eps)?) } else { Value::Null };
    if g.emit_plot.is_some() && coords > 0.0 {
        let series = (1..=6)
            .map(|k| {
                let eps = 10f64.powi(-k);
                Ok((eps, distance_ratio(&p, &t, eps)?))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        plot(g, &series)?;
    }
    let inputs = json!({
        "theta": [a.theta1, a.theta2, a.theta3],
        "tangent": [a.d1, a.d2, a.d3],
        "eps": a.eps,
    });
    let result = json!({
        "coords": coords,
        "matrix": matrix,
        "embedding": embedding,
        "distance_ratio": ratio,
    });
    doc("metric-check", inputs, result)
}

#[derive(Debug, Args, Clone)]
pub struct Su3Args {
    #[arg(long)]
    pub gamma1: f64,
    #[arg(long)]
    pub gamma2: f64,
    /// Five comma-separated phases.
    #[arg(long, default_value = "0,0,0,0,0")]
    pub phi: String,
    /// Also write the matrix to this file.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

pub fn su3_example(g: &Global, a: &Su3Args) -> Doc {
    no_plot(g, "su3-example")?;
    let phi: [f64; 5] = parse_list(&a.phi)?
        .try_into()
        .map_err(|v: Vec<f64>| CliError::Input(format!("--phi needs 5 values, got {}", v.len())))?;
    let u = su3_example_gate(a.gamma1, a.gamma2, &phi)?;
    let file = MatrixFile::from_matrix(u.matrix());
    if let Some(path) = &a.out {
        std::fs::write(path, crate::output::to_json(&file))
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    let id = Gate::identity(3);
    let result = json!({
        "matrix": serde_json::to_value(&file).expect("plain data"),
        "fidelity_vs_identity": gate_fidelity_sud(&id, &u)?,
        "e1_amplitude": complex(u.matrix()[(0, 0)]),
    });
    let inputs = json!({"gamma1": a.gamma1, "gamma2": a.gamma2, "phi": phi});
    doc("su3-example", inputs, result)
}

#[derive(Debug, Args, Clone)]
pub struct DiscriminateArgs {
    /// JSON file `{"gates": [matrix, ...]}`.
    #[arg(long, value_name = "FILE")]
    pub set: PathBuf,
    /// Index of the gate actually applied.
    #[arg(long = "true", value_name = "INDEX", conflicts_with = "true_gate", required_unless_present = "true_gate")]
    pub true_index: Option<usize>,
    /// Matrix file of an applied gate that need not be in the set.
    #[arg(long, value_name = "FILE")]
    pub true_gate: Option<PathBuf>,
}

pub fn discriminate(g: &Global, a: &DiscriminateArgs) -> Doc {
    no_plot(g, "discriminate")?;
    let h = HypothesisSet::new(read_gate_set(&a.set, g.tol)?)?;
    let plan = plan_elimination(&h)?;
    let (res, truth) = match (&a.true_index, &a.true_gate) {
        (Some(i), _) => (simulate_elimination(&plan, &h, *i, g.seed)?, json!(i)),
        (None, Some(path)) => (simulate_with_gate(&plan, &h, &read_gate(path, g.tol)?, g.seed)?, json!(path_str(path))),
        (None, None) => unreachable!("clap requires one of them"),
    };
    let trace: Vec<Value> = res
        .trace
        .iter()
        .map(|t| {
            json!({
                "pair": [t.pair.0, t.pair.1],
                "copies": t.copies,
                "outcome": match t.outcome { Outcome::First => "first", Outcome::Second => "second" },
                "discarded": t.discarded,
            })
        })
        .collect();
    let result = json!({
        "identified": res.identified_index,
        "total_runs": res.total_runs,
        "planned_runs": plan.planned_runs(),
        "verified": res.verified,
        "trace": trace,
    });
    doc("discriminate", json!({"set": path_str(&a.set), "true": truth, "seed": g.seed}), result)
}
