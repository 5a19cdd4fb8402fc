use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::model::{check_dim, wrap_phase, MeasurementBasis, ProbeState, AMPLITUDE_FLOOR};

pub const PHASE_TOL: f64 = 1e-10;

/// `max_{j,l} ||b_{j,l}| − |b_{j,M−1−l}||`.
pub fn check_balance(basis: &MeasurementBasis) -> f64 {
    let m = basis.dim();
    let moduli = basis.moduli();
    let mut worst = 0.0f64;
    for j in 0..m {
        for l in 0..m / 2 {
            worst = worst.max((moduli[(j, l)] - moduli[(j, m - 1 - l)]).abs());
        }
    }
    worst
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseConditionResult {
    /// Circular mean of the pair sums for each outcome `j`, in `(−π, π]`.
    pub xi: Vec<f64>,
    /// Largest circular spread among the pair sums of any single outcome.
    pub max_residual: f64,
    pub satisfied: bool,
    /// Mirrored pairs of generator indices over the state's support.
    pub pairs: Vec<(usize, usize)>,
    /// `(j, pair)` combinations skipped because a basis amplitude vanishes.
    pub excluded: usize,
}

pub fn check_phase_condition(
    state: &ProbeState,
    basis: &MeasurementBasis,
) -> Result<PhaseConditionResult> {
    check_phase_condition_with_tolerance(state, basis, PHASE_TOL)
}

/// For each outcome `j`, the sums `(θ_δ − θ_{j,δ}) + (θ_l − θ_{j,l})` over
/// mirrored pairs of the support must agree modulo 2π.
///
/// Pairs are formed on the support in index order, first with last, which
/// matches the mirror pairing of an admissible probe.
pub fn check_phase_condition_with_tolerance(
    state: &ProbeState,
    basis: &MeasurementBasis,
    tolerance: f64,
) -> Result<PhaseConditionResult> {
    check_dim(basis.dim(), state.dim())?;
    let support = state.support();
    let n = support.len();
    let pairs: Vec<(usize, usize)> = (0..n.div_ceil(2))
        .map(|i| (support[i], support[n - 1 - i]))
        .collect();
    let c = state.amplitudes();

    let mut xi = Vec::with_capacity(basis.dim());
    let mut max_residual = 0.0f64;
    let mut excluded = 0;
    for j in 0..basis.dim() {
        let mut sums = Vec::with_capacity(pairs.len());
        for &(l, d) in &pairs {
            let (bl, bd) = (basis.coefficient(j, l), basis.coefficient(j, d));
            if bl.norm() < AMPLITUDE_FLOOR || bd.norm() < AMPLITUDE_FLOOR {
                excluded += 1;
                continue;
            }
            sums.push((c[l] * c[d] * bl.conj() * bd.conj()).arg());
        }
        let mean: Complex64 = sums.iter().map(|&s| Complex64::from_polar(1.0, s)).sum();
        xi.push(if sums.is_empty() { 0.0 } else { mean.arg() });
        for (a, &sa) in sums.iter().enumerate() {
            for &sb in &sums[a + 1..] {
                max_residual = max_residual.max(wrap_phase(sa - sb).abs());
            }
        }
    }
    Ok(PhaseConditionResult {
        xi,
        satisfied: max_residual <= tolerance,
        max_residual,
        pairs,
        excluded,
    })
}
