use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use num_complex::Complex64;

use super::{check_qubit, check_same_dim, min_copies_from_distance, minimal_covering_arc, relative_gate, Gate};
use crate::error::{Error, Result};
use crate::numkit::{
    apply_tensor_power, checked_power_dim, partial_trace_b, ComplexMatrix, ComplexVector, DEFAULT_SIZE_CAP,
    STRUCTURE_TOL,
};

/// Longest explicit system ⊗ ancilla vector a probe will materialize.
pub const MAX_DENSE_LEN: usize = 1 << 22;

/// Overlap bound the N-copy construction must meet.
const ORTHOGONALITY_TOL: f64 = 1e-8;

/// One term `a · |x₁⟩^{⊗n₁} ⊗ |x₂⟩^{⊗n₂} ⊗ …` of a product superposition.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductTerm {
    pub amplitude: Complex64,
    /// Site vectors with their repetition counts, in copy order.
    pub runs: Vec<(ComplexVector, usize)>,
}

impl ProductTerm {
    pub fn new(amplitude: Complex64, runs: Vec<(ComplexVector, usize)>) -> Self {
        Self {
            amplitude,
            runs: runs.into_iter().filter(|(_, n)| *n > 0).collect(),
        }
    }

    fn copies(&self) -> usize {
        self.runs.iter().map(|(_, n)| n).sum()
    }

    fn map_sites(&self, m: &ComplexMatrix) -> Result<Self> {
        Ok(Self {
            amplitude: self.amplitude,
            runs: self
                .runs
                .iter()
                .map(|(v, n)| Ok((m.mul_vec(v)?, *n)))
                .collect::<Result<_>>()?,
        })
    }

    /// `⟨self|other⟩`, merging the run boundaries of the two terms.
    fn inner(&self, other: &Self) -> Result<Complex64> {
        let mut acc = self.amplitude.conj() * other.amplitude;
        let (mut i, mut j) = (0, 0);
        let (mut left_a, mut left_b) = (
            self.runs.first().map_or(0, |r| r.1),
            other.runs.first().map_or(0, |r| r.1),
        );
        while i < self.runs.len() && j < other.runs.len() {
            let k = left_a.min(left_b);
            let site = self.runs[i].0.inner(&other.runs[j].0)?;
            acc *= site.powu(k as u32);
            left_a -= k;
            left_b -= k;
            if left_a == 0 {
                i += 1;
                left_a = self.runs.get(i).map_or(0, |r| r.1);
            }
            if left_b == 0 {
                j += 1;
                left_b = other.runs.get(j).map_or(0, |r| r.1);
            }
        }
        Ok(acc)
    }

    fn to_dense(&self) -> ComplexVector {
        let mut v = ComplexVector::from_entries(vec![self.amplitude]);
        for (x, n) in &self.runs {
            for _ in 0..*n {
                v = v.kron(x);
            }
        }
        v
    }
}

/// Storage of a probe.
#[derive(Debug, Clone, PartialEq)]
pub enum ProbeRepr {
    /// Explicit amplitudes. With `ancilla` the vector lives on
    /// `C^D ⊗ C^D` (system first); otherwise on the system `C^D` alone.
    Dense { vector: ComplexVector, ancilla: bool },
    /// `Σ_t` of product terms on the `N` system copies.
    Product(Vec<ProductTerm>),
}

/// A probe state for `N` parallel uses of a `d`-dimensional gate, `D = d^N`.
///
/// Probes without an explicit ancilla are understood as `|ψ⟩ ⊗ |0…0⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeState {
    site_dim: usize,
    copies: usize,
    repr: ProbeRepr,
    separable: bool,
}

impl ProbeState {
    /// Wraps an explicit vector of length `D²` (with ancilla) or `D`.
    pub fn dense(vector: ComplexVector, site_dim: usize, copies: usize) -> Result<Self> {
        if site_dim == 0 || copies == 0 {
            return Err(Error::invalid("probe needs a positive site dimension and copy count"));
        }
        let sys = site_dim
            .checked_pow(copies as u32)
            .ok_or_else(|| Error::dim("probe dimension overflows"))?;
        let ancilla = if vector.dim() == sys * sys && sys > 1 {
            true
        } else if vector.dim() == sys {
            false
        } else {
            return Err(Error::dim(format!(
                "vector of length {} is neither {sys} nor {sys}²",
                vector.dim()
            )));
        };
        check_norm(vector.norm())?;
        let separable = if ancilla {
            let rho = partial_trace_b(&vector, sys)?;
            let purity: f64 = rho.matmul(&rho)?.trace().re;
            (purity - 1.0).abs() <= STRUCTURE_TOL
        } else {
            true
        };
        Ok(Self {
            site_dim,
            copies,
            repr: ProbeRepr::Dense { vector, ancilla },
            separable,
        })
    }

    /// Superposition of product terms over `copies` sites of dimension `site_dim`.
    pub fn product(site_dim: usize, copies: usize, terms: Vec<ProductTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::invalid("probe needs at least one term"));
        }
        for t in &terms {
            if t.copies() != copies {
                return Err(Error::dim(format!("term spans {} copies, expected {copies}", t.copies())));
            }
            if t.runs.iter().any(|(v, _)| v.dim() != site_dim) {
                return Err(Error::dim(format!("site vector is not of dimension {site_dim}")));
            }
        }
        let probe = Self {
            site_dim,
            copies,
            repr: ProbeRepr::Product(terms),
            separable: true,
        };
        check_norm(probe.inner(&probe)?.re.sqrt())?;
        Ok(probe)
    }

    /// `(1/√d) Σ_k |k⟩|k⟩` on a single copy.
    pub fn maximally_entangled(d: usize) -> Result<Self> {
        let mut v = ComplexVector::zeros(d * d);
        for k in 0..d {
            v[k * d + k] = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
        }
        Self::dense(v, d, 1)
    }

    pub fn site_dim(&self) -> usize {
        self.site_dim
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn repr(&self) -> &ProbeRepr {
        &self.repr
    }

    /// Whether the probe is a product between system and ancilla.
    pub fn is_separable(&self) -> bool {
        self.separable
    }

    fn has_ancilla(&self) -> bool {
        matches!(self.repr, ProbeRepr::Dense { ancilla: true, .. })
    }

    fn system_dim(&self) -> usize {
        self.site_dim.pow(self.copies as u32)
    }

    /// Explicit vector on the system alone; errors for entangled probes.
    pub fn system_vector(&self) -> Result<ComplexVector> {
        match &self.repr {
            ProbeRepr::Dense { vector, ancilla: false } => Ok(vector.clone()),
            ProbeRepr::Dense { ancilla: true, .. } => {
                Err(Error::invalid("probe has an explicit ancilla; use to_dense"))
            }
            ProbeRepr::Product(terms) => {
                checked_power_dim(self.site_dim, self.copies, MAX_DENSE_LEN)?;
                let mut acc = ComplexVector::zeros(self.system_dim());
                for t in terms {
                    acc = acc.add(&t.to_dense())?;
                }
                Ok(acc)
            }
        }
    }

    /// Explicit vector on `C^D ⊗ C^D`, appending `|0…0⟩` where the ancilla is implicit.
    pub fn to_dense(&self) -> Result<ComplexVector> {
        if let ProbeRepr::Dense { vector, ancilla: true } = &self.repr {
            return Ok(vector.clone());
        }
        checked_power_dim(self.site_dim, 2 * self.copies, MAX_DENSE_LEN)?;
        Ok(self
            .system_vector()?
            .kron(&ComplexVector::basis(self.system_dim(), 0)))
    }

    /// Reduced state on the system, `tr_B |Ψ⟩⟨Ψ|`.
    pub fn reduced_state(&self) -> Result<ComplexMatrix> {
        checked_power_dim(self.site_dim, self.copies, DEFAULT_SIZE_CAP)?;
        match &self.repr {
            ProbeRepr::Dense { vector, ancilla: true } => partial_trace_b(vector, self.system_dim()),
            _ => {
                let v = self.system_vector()?;
                Ok(ComplexMatrix::outer(&v, &v))
            }
        }
    }

    /// `(M^{⊗N} ⊗ 1)|Ψ⟩` for a site operator `M`.
    pub fn evolve(&self, site_op: &ComplexMatrix) -> Result<Self> {
        if site_op.square_dim()? != self.site_dim {
            return Err(Error::dim(format!(
                "operator of dimension {} on probe sites of dimension {}",
                site_op.rows(),
                self.site_dim
            )));
        }
        let repr = match &self.repr {
            ProbeRepr::Dense { vector, ancilla } => {
                let trailing = if *ancilla { self.system_dim() } else { 1 };
                ProbeRepr::Dense {
                    vector: apply_tensor_power(site_op, self.copies, trailing, vector)?,
                    ancilla: *ancilla,
                }
            }
            ProbeRepr::Product(terms) => {
                ProbeRepr::Product(terms.iter().map(|t| t.map_sites(site_op)).collect::<Result<_>>()?)
            }
        };
        Ok(Self {
            repr,
            ..self.clone()
        })
    }

    /// `⟨self|other⟩` on system ⊗ ancilla.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.site_dim != other.site_dim || self.copies != other.copies {
            return Err(Error::dim(format!(
                "probes on {}^{} and {}^{}",
                self.site_dim, self.copies, other.site_dim, other.copies
            )));
        }
        match (&self.repr, &other.repr) {
            (ProbeRepr::Product(a), ProbeRepr::Product(b)) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for x in a {
                    for y in b {
                        acc += x.inner(y)?;
                    }
                }
                Ok(acc)
            }
            _ if self.has_ancilla() || other.has_ancilla() => self.to_dense()?.inner(&other.to_dense()?),
            _ => self.system_vector()?.inner(&other.system_vector()?),
        }
    }
}

fn check_norm(norm: f64) -> Result<()> {
    if (norm - 1.0).abs() > STRUCTURE_TOL {
        return Err(Error::invalid(format!("probe has norm {norm}, expected 1")));
    }
    Ok(())
}

/// `|⟨Ψ|(U₁†U₂)^{⊗N} ⊗ 1|Ψ⟩|²`.
pub fn probe_overlap(u1: &Gate, u2: &Gate, probe: &ProbeState, copies: usize) -> Result<f64> {
    check_same_dim(u1, u2)?;
    if probe.copies() != copies || probe.site_dim() != u1.dim() {
        return Err(Error::dim(format!(
            "probe on {}^{} used for {copies} copies of a {}-dimensional gate",
            probe.site_dim(),
            probe.copies(),
            u1.dim()
        )));
    }
    let rel = relative_gate(u1, u2)?;
    let moved = probe.evolve(rel.matrix())?;
    Ok(probe.inner(&moved)?.norm_sqr().clamp(0.0, 1.0))
}

/// Same quantity as [`probe_overlap`] computed as `|Σ_i λ_i u_i|²`, with `u_i`
/// the eigenvalues of `(U₁†U₂)^{⊗N}` and `λ_i = ⟨u_i|ρ_A|u_i⟩` the weights of
/// the reduced probe on the product eigenbasis. Needs `d^N` within the size cap.
pub fn probe_overlap_spectral(u1: &Gate, u2: &Gate, probe: &ProbeState, copies: usize) -> Result<f64> {
    check_same_dim(u1, u2)?;
    if probe.copies() != copies || probe.site_dim() != u1.dim() {
        return Err(Error::dim("probe does not match gate dimension and copy count"));
    }
    let d = u1.dim();
    let big = checked_power_dim(d, copies, DEFAULT_SIZE_CAP)?;
    let rel = relative_gate(u1, u2)?;
    let eig = rel.spectral()?;
    let rho = probe.reduced_state()?;

    let mut sum = Complex64::new(0.0, 0.0);
    let mut digits = vec![0usize; copies];
    for _ in 0..big {
        let mut vec = ComplexVector::from_entries(vec![Complex64::new(1.0, 0.0)]);
        let mut phase = 0.0;
        for &k in &digits {
            vec = vec.kron(&eig.vectors[k]);
            phase += eig.phases[k];
        }
        let weight = vec.inner(&rho.mul_vec(&vec)?)?.re;
        sum += Complex64::from_polar(weight, phase);
        for slot in digits.iter_mut().rev() {
            *slot += 1;
            if *slot < d {
                break;
            }
            *slot = 0;
        }
    }
    Ok(sum.norm_sqr().clamp(0.0, 1.0))
}

/// Optimal single-use probe for two qubit gates.
///
/// With `entangled`, the maximally entangled state, which is optimal for every
/// pair. Otherwise the product state `(|u⟩ + |u⊥⟩)/√2 ⊗ |0⟩` built on the
/// eigenbasis of `U₁†U₂`. Both put weight ½ on each eigenvector.
pub fn optimal_probe_single(u1: &Gate, u2: &Gate, entangled: bool) -> Result<ProbeState> {
    check_qubit(u1)?;
    check_qubit(u2)?;
    if entangled {
        return ProbeState::maximally_entangled(2);
    }
    let rel = relative_gate(u1, u2)?;
    let eig = rel.spectral()?;
    let site = eig.vectors[0]
        .add(&eig.vectors[1])?
        .scale(Complex64::new(FRAC_1_SQRT_2, 0.0));
    ProbeState::product(2, 1, vec![ProductTerm::new(Complex64::new(1.0, 0.0), vec![(site, 1)])])
}

/// Weight `q` of the outer branch `√q(|u_{+N}⟩ + |u_{−N}⟩)` in the N-copy probe
/// for half-arc `delta`:
/// `q = cos(mδ) / (2(cos(mδ) − cos(Nδ)))`, `m = N mod 2`.
///
/// A single copy (`δ = π/2`) puts everything on the outer branch, `q = ½`.
pub fn ncopy_probe_weight(delta: f64, copies: usize) -> Result<f64> {
    if copies == 0 {
        return Err(Error::invalid("copy count must be positive"));
    }
    if copies == 1 {
        return Ok(0.5);
    }
    let m = (copies % 2) as f64;
    let inner = (m * delta).cos();
    let outer = (copies as f64 * delta).cos();
    let q = inner / (2.0 * (inner - outer));
    // N·δ sitting on π/2 within the copy-count tolerance gives q = ½ + O(1e-12).
    let q = if q > 0.5 && q - 0.5 <= 1e-9 { 0.5 } else { q };
    if !(0.0..=0.5).contains(&q) || !q.is_finite() {
        return Err(Error::Internal(format!("probe weight q = {q} outside [0, 1/2]")));
    }
    Ok(q)
}

/// Simplex weights on at most three of the given phases whose combination
/// `Σ w_k e^{iφ_k}` vanishes, if the origin lies in their convex hull.
fn zero_combination(phases: &[f64]) -> Option<Vec<(usize, f64)>> {
    let z: Vec<Complex64> = phases.iter().map(|&p| Complex64::from_polar(1.0, p)).collect();
    let n = z.len();
    for i in 0..n {
        for j in i + 1..n {
            if (z[i] + z[j]).norm() <= 1e-12 {
                return Some(vec![(i, 0.5), (j, 0.5)]);
            }
        }
    }
    let cross = |a: Complex64, b: Complex64| a.re * b.im - a.im * b.re;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let area = cross(z[j] - z[i], z[k] - z[i]);
                if area.abs() < 1e-14 {
                    continue;
                }
                // barycentric coordinates of the origin
                let wi = cross(z[j], z[k]) / area;
                let wj = cross(z[k], z[i]) / area;
                let wk = cross(z[i], z[j]) / area;
                if wi >= -1e-14 && wj >= -1e-14 && wk >= -1e-14 {
                    let w = [wi.max(0.0), wj.max(0.0), wk.max(0.0)];
                    let s: f64 = w.iter().sum();
                    return Some(vec![(i, w[0] / s), (j, w[1] / s), (k, w[2] / s)]);
                }
            }
        }
    }
    None
}

/// Separable probe that makes `U₁^{⊗N}` and `U₂^{⊗N}` orthogonal at
/// `N = min_copies(U₁, U₂)`:
///
/// `|Ψ⟩ = √q (|u_{+N}⟩ + |u_{−N}⟩) + √(½ − q) (|u_+⟩ + |u_−⟩)`,
///
/// where `u_{±N}` are the eigenvectors of `(U₁†U₂)^{⊗N}` with the extreme
/// phases `±Nδ` (relative to the arc center) and `u_±` those with `±(N mod 2)δ`.
/// For even `N` the inner pair coincides and carries weight `1 − 2q` alone.
/// The eigenvectors are the two arc-end eigenvectors of `U₁†U₂` and their
/// tensor products, so any dimension works; a single copy in `d > 2` may need a
/// third eigenvector to enclose the origin.
pub fn optimal_probe_ncopies(u1: &Gate, u2: &Gate) -> Result<ProbeState> {
    let rel = relative_gate(u1, u2)?;
    let eig = rel.spectral()?;
    let arc = minimal_covering_arc(&eig.phases)?;
    let delta = arc.delta.min(FRAC_PI_2);
    let n = min_copies_from_distance(delta)?;
    let d = u1.dim();
    let one = Complex64::new(1.0, 0.0);

    let probe = if n == 1 {
        let weights = zero_combination(&eig.phases)
            .ok_or_else(|| Error::Internal("single-copy arc encloses the origin but no zero combination found".into()))?;
        let mut site = ComplexVector::zeros(d);
        for (k, w) in weights {
            site = site.add(&eig.vectors[k].scale(Complex64::new(w.sqrt(), 0.0)))?;
        }
        ProbeState::product(d, 1, vec![ProductTerm::new(one, vec![(site, 1)])])?
    } else {
        let q = ncopy_probe_weight(delta, n)?;
        let minus = &eig.vectors[arc.extreme_indices.0];
        let plus = &eig.vectors[arc.extreme_indices.1];
        let outer = Complex64::new(q.sqrt(), 0.0);
        let mut terms = vec![
            ProductTerm::new(outer, vec![(plus.clone(), n)]),
            ProductTerm::new(outer, vec![(minus.clone(), n)]),
        ];
        if n % 2 == 1 {
            let inner = Complex64::new((0.5 - q).sqrt(), 0.0);
            let (hi, lo) = (n.div_ceil(2), n / 2);
            terms.push(ProductTerm::new(inner, vec![(plus.clone(), hi), (minus.clone(), lo)]));
            terms.push(ProductTerm::new(inner, vec![(plus.clone(), lo), (minus.clone(), hi)]));
        } else {
            let inner = Complex64::new((1.0 - 2.0 * q).sqrt(), 0.0);
            terms.push(ProductTerm::new(inner, vec![(plus.clone(), n / 2), (minus.clone(), n / 2)]));
        }
        ProbeState::product(d, n, terms)?
    };

    let overlap = probe_overlap(u1, u2, &probe, n)?;
    if overlap > ORTHOGONALITY_TOL {
        return Err(Error::Internal(format!(
            "N-copy probe leaves overlap {overlap:e} at N = {n}"
        )));
    }
    Ok(probe)
}
