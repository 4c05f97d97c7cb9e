use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::numkit::wrap_phase;

const TWO_PI: f64 = 2.0 * PI;

/// Ties between circular gaps closer than this are broken by the center phase.
const GAP_TIE_TOL: f64 = 1e-12;

/// Cap on the number of distinct phases [`tensor_power_phase_set`] will produce.
const PHASE_SET_CAP: usize = 1 << 20;

/// Shortest arc of the unit circle containing a set of phases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcResult {
    /// Half-width of the arc, in `[0, π]`.
    pub delta: f64,
    /// Midpoint phase, in `(-π, π]`.
    pub center: f64,
    /// Phases at the clockwise and counter-clockwise ends, `center ∓ delta`.
    pub extremes: (f64, f64),
    /// Input indices of `extremes`.
    pub extreme_indices: (usize, usize),
}

impl ArcResult {
    /// Whether `phase` lies on the arc up to `tol`.
    pub fn contains(&self, phase: f64, tol: f64) -> bool {
        wrap_phase(phase - self.center).abs() <= self.delta + tol
    }
}

/// Minimal covering arc: its complement is the largest circular gap between
/// consecutive sorted phases. Equal gaps resolve to the smallest center phase.
pub fn minimal_covering_arc(phases: &[f64]) -> Result<ArcResult> {
    if phases.is_empty() {
        return Err(Error::invalid("covering arc of an empty phase set"));
    }
    if let Some(p) = phases.iter().find(|p| !p.is_finite()) {
        return Err(Error::invalid(format!("phase {p} is not finite")));
    }
    let mut sorted: Vec<(f64, usize)> = phases.iter().map(|&p| wrap_phase(p)).zip(0..).collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = sorted.len();

    let mut best: Option<(f64, ArcResult)> = None;
    for k in 0..n {
        // gap runs counter-clockwise from sorted[k] to sorted[k+1]
        let (lo, lo_idx) = sorted[k];
        let (hi, hi_idx) = sorted[(k + 1) % n];
        let gap = if k + 1 == n { hi + TWO_PI - lo } else { hi - lo };
        let delta = ((TWO_PI - gap) / 2.0).max(0.0);
        let center = wrap_phase(hi + delta);
        let candidate = ArcResult {
            delta,
            center,
            extremes: (hi, lo),
            extreme_indices: (hi_idx, lo_idx),
        };
        best = match best {
            None => Some((gap, candidate)),
            Some((g, cur)) => {
                if gap > g + GAP_TIE_TOL || ((gap - g).abs() <= GAP_TIE_TOL && center < cur.center) {
                    Some((gap, candidate))
                } else {
                    Some((g, cur))
                }
            }
        };
    }
    Ok(best.expect("nonempty").1)
}

/// `min_{λ ∈ simplex} |Σ_k λ_k e^{iφ_k}|²`.
///
/// The convex hull of the points lies within the arc's chord region, so the
/// minimum is `cos² δ` (the chord between the extreme phases) when `δ < π/2`,
/// and zero once the hull contains the origin.
pub fn convex_min_overlap(phases: &[f64]) -> Result<f64> {
    let arc = minimal_covering_arc(phases)?;
    if arc.delta >= FRAC_PI_2 {
        return Ok(0.0);
    }
    Ok(arc.delta.cos().powi(2))
}

/// Distinct eigenphases of `U^{⊗n}` given those of `U`: every sum of `n`
/// phases drawn with repetition, wrapped to `(-π, π]`. Multiplicities are
/// dropped, which is all an arc computation needs.
pub fn tensor_power_phase_set(phases: &[f64], n: usize) -> Result<Vec<f64>> {
    if phases.is_empty() {
        return Err(Error::invalid("empty phase set"));
    }
    if n == 0 {
        return Err(Error::invalid("tensor power needs at least one copy"));
    }
    let mut out = Vec::new();
    let mut counts = vec![0usize; phases.len()];
    fill(phases, &mut counts, 0, n, &mut out)?;
    Ok(out)
}

fn fill(phases: &[f64], counts: &mut [usize], pos: usize, left: usize, out: &mut Vec<f64>) -> Result<()> {
    if pos + 1 == phases.len() {
        counts[pos] = left;
        if out.len() >= PHASE_SET_CAP {
            return Err(Error::SizeCap {
                dim: out.len() + 1,
                cap: PHASE_SET_CAP,
            });
        }
        let s: f64 = counts.iter().zip(phases).map(|(&c, &p)| c as f64 * p).sum();
        out.push(wrap_phase(s));
        return Ok(());
    }
    for c in 0..=left {
        counts[pos] = c;
        fill(phases, counts, pos + 1, left - c, out)?;
    }
    Ok(())
}
