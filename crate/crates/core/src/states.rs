//! Admissible probe states: symmetric spectra about the mean with balanced
//! moduli on mirrored eigenvalues.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::Exp1;
use serde::Serialize;

use crate::error::{QibError, Result};
use crate::model::{
    central_moment, check_dim, mean_a, Generator, ProbeState, NORM_TOL, VARIANCE_FLOOR,
};

/// Default tolerance for admissibility certification.
pub const CERTIFY_TOL: f64 = 1e-10;
/// Tolerance when matching eigenvalues against a requested mirror point.
pub const SPECTRUM_TOL: f64 = 1e-10;
/// Tolerance of the conjugate-symmetry check `c_m = c*_{-m}`.
pub const CONJUGATE_TOL: f64 = 1e-10;

/// Pairing data and residuals of the admissibility conditions.
///
/// The pairing runs over the support of the state (components with nonzero
/// modulus), sorted by eigenvalue: the `i`-th smallest is matched with the
/// `i`-th largest. Entries of `pairing` are generator indices.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetryCertificate {
    pub support: Vec<usize>,
    pub pairing: Vec<(usize, usize)>,
    pub mean_a: f64,
    /// `max |A_l + A_δ(l) − 2⟨Â⟩|`; for an odd support the centre enters as
    /// `2|A_c − ⟨Â⟩|`.
    pub spectrum_residual: f64,
    /// `max ||c_l| − |c_δ(l)||`.
    pub moduli_residual: f64,
    pub tolerance: f64,
    pub admissible: bool,
}

pub fn certify(state: &ProbeState, gen: &Generator) -> Result<SymmetryCertificate> {
    certify_with_tolerance(state, gen, CERTIFY_TOL)
}

pub fn certify_with_tolerance(
    state: &ProbeState,
    gen: &Generator,
    tolerance: f64,
) -> Result<SymmetryCertificate> {
    let mean = mean_a(state, gen)?;
    let eig = gen.eigenvalues();
    let moduli = state.moduli();

    let mut support = state.support();
    support.sort_by(|&a, &b| eig[a].total_cmp(&eig[b]));
    let m = support.len();
    let pairing: Vec<(usize, usize)> = (0..m.div_ceil(2))
        .map(|i| (support[i], support[m - 1 - i]))
        .collect();

    let spectrum_residual = pairing
        .iter()
        .map(|&(l, d)| (eig[l] + eig[d] - 2.0 * mean).abs())
        .fold(0.0, f64::max);
    let moduli_residual = pairing
        .iter()
        .map(|&(l, d)| (moduli[l] - moduli[d]).abs())
        .fold(0.0, f64::max);
    support.sort_unstable();

    Ok(SymmetryCertificate {
        admissible: m >= 2 && spectrum_residual <= tolerance && moduli_residual <= tolerance,
        support,
        pairing,
        mean_a: mean,
        spectrum_residual,
        moduli_residual,
        tolerance,
    })
}

/// Builds a balanced state on a spectrum that is symmetric about `mean`.
///
/// `moduli[l]` is shared by the mirrored pair `(l, M−1−l)`. For odd `M` the
/// centre modulus is either the last of `⌈M/2⌉` entries, or, when only
/// `⌊M/2⌋` entries are given, whatever normalization leaves for it.
pub fn build_symmetric_state(
    gen: &Generator,
    moduli: &[f64],
    phases: &[f64],
    mean: f64,
) -> Result<ProbeState> {
    let dim = gen.dim();
    check_dim(dim, phases.len())?;
    let eig = gen.eigenvalues();
    let half = dim.div_ceil(2);
    let odd = dim % 2 == 1;

    for l in 0..half {
        let d = dim - 1 - l;
        let r = eig[l] + eig[d] - 2.0 * mean;
        if r.abs() > SPECTRUM_TOL {
            return Err(QibError::Symmetry(if l == d {
                format!("centre eigenvalue {} differs from mean {mean}", eig[l])
            } else {
                format!(
                    "eigenvalues {} and {} are not mirrored about {mean}",
                    eig[l], eig[d]
                )
            }));
        }
    }

    let pairs = dim / 2;
    let forced_centre = odd && moduli.len() == pairs;
    if !forced_centre && moduli.len() != half {
        return Err(QibError::DimensionMismatch {
            expected: half,
            found: moduli.len(),
        });
    }
    if moduli.iter().any(|&r| !(r > 0.0)) {
        return Err(QibError::InvalidArgument(
            "moduli must be strictly positive".into(),
        ));
    }

    let mut full = vec![0.0; dim];
    for l in 0..pairs {
        full[l] = moduli[l];
        full[dim - 1 - l] = moduli[l];
    }
    if odd {
        let centre = if forced_centre {
            let rest = 1.0 - 2.0 * moduli.iter().map(|r| r * r).sum::<f64>();
            if !(rest > 0.0) {
                return Err(QibError::Normalization {
                    norm_sqr: 1.0 - rest,
                });
            }
            rest.sqrt()
        } else {
            moduli[half - 1]
        };
        full[half - 1] = centre;
    }
    let norm_sqr: f64 = full.iter().map(|r| r * r).sum();
    if (norm_sqr - 1.0).abs() > NORM_TOL {
        return Err(QibError::Normalization { norm_sqr });
    }
    ProbeState::from_polar(&full, phases)
}

/// Standardized third central moment of `Â` in the probe.
pub fn skewness(state: &ProbeState, gen: &Generator) -> Result<f64> {
    let variance = central_moment(state, gen, 2)?;
    if variance <= VARIANCE_FLOOR {
        return Err(QibError::DegenerateState);
    }
    Ok(central_moment(state, gen, 3)? / variance.powf(1.5))
}

/// `(|A_0⟩ + e^{iθ}|A_k⟩)/√2` with `A_k = 2⟨Â⟩ − A_0`, the admissible probe
/// of largest quantum Fisher information at fixed mean.
pub fn heisenberg_state(gen: &Generator, mean: f64, theta_k: f64) -> Result<ProbeState> {
    let a0 = gen.min_eigenvalue();
    if mean < a0 - SPECTRUM_TOL {
        return Err(QibError::MeanBelowMinimum { mean, minimum: a0 });
    }
    if mean - a0 <= SPECTRUM_TOL {
        return Err(QibError::DegenerateState);
    }
    let mirror = 2.0 * mean - a0;
    let k = gen
        .position(mirror, SPECTRUM_TOL)
        .ok_or(QibError::MissingMirror { eigenvalue: mirror })?;
    let i0 = gen.position(a0, 0.0).expect("minimum is in the spectrum");
    let mut amps = vec![Complex64::new(0.0, 0.0); gen.dim()];
    amps[i0] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amps[k] = Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, theta_k);
    ProbeState::new(amps)
}

/// Heisenberg-limit value `4(⟨Â⟩ − A_0)²`.
pub fn heisenberg_qfi(gen: &Generator, mean: f64) -> Result<f64> {
    let a0 = gen.min_eigenvalue();
    if mean < a0 - SPECTRUM_TOL {
        return Err(QibError::MeanBelowMinimum { mean, minimum: a0 });
    }
    let d = (mean - a0).max(0.0);
    Ok(4.0 * d * d)
}

/// Gaussian approximation of a coherent state with `n̄ = nbar`, truncated to
/// `n = 0..=2·nbar` and mirrored so the moduli are exactly balanced.
///
/// Amplitudes are `√g_n e^{i n θ}` with `θ = phase_slope`.
pub fn truncated_coherent_state(nbar: usize, phase_slope: f64) -> Result<(Generator, ProbeState)> {
    if nbar < 1 {
        return Err(QibError::InvalidArgument(format!(
            "mean photon number must be at least 1, got {nbar}"
        )));
    }
    let mean = nbar as f64;
    let top = 2 * nbar;
    let raw: Vec<f64> = (0..=top)
        .map(|n| {
            let d = n as f64 - mean;
            (-d * d / (2.0 * mean)).exp() / (2.0 * PI * mean).sqrt()
        })
        .collect();
    let sym: Vec<f64> = (0..=top).map(|n| 0.5 * (raw[n] + raw[top - n])).collect();
    let total: f64 = sym.iter().sum();
    let amps = sym
        .iter()
        .enumerate()
        .map(|(n, g)| Complex64::from_polar((g / total).sqrt(), n as f64 * phase_slope))
        .collect();
    Ok((Generator::number(top)?, ProbeState::normalized(amps)?))
}

fn ln_factorials(max_n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(max_n + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..=max_n {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

/// Poisson weights `e^{-n̄} n̄^n / n!` for `n = 0..=max_n`, not renormalized.
pub fn poisson_weights(nbar: f64, max_n: usize) -> Vec<f64> {
    let lf = ln_factorials(max_n);
    (0..=max_n)
        .map(|n| (-nbar + n as f64 * nbar.ln() - lf[n]).exp())
        .collect()
}

/// Coherent-state amplitudes `e^{-|α|²/2} αⁿ/√n!` on `n = 0..=max_n`.
pub fn coherent_amplitudes(alpha: Complex64, max_n: usize) -> Vec<Complex64> {
    let lf = ln_factorials(max_n);
    let r = alpha.norm();
    let phase = alpha.arg();
    (0..=max_n)
        .map(|n| {
            let modulus = if r == 0.0 {
                if n == 0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                (-r * r / 2.0 + n as f64 * r.ln() - 0.5 * lf[n]).exp()
            };
            Complex64::from_polar(modulus, n as f64 * phase)
        })
        .collect()
}

/// Real Poisson-weighted probe on `n = 0..=max_n`, renormalized.
pub fn poisson_state(nbar: f64, max_n: usize) -> Result<(Generator, ProbeState)> {
    if !(nbar > 0.0) {
        return Err(QibError::InvalidArgument(format!(
            "mean photon number must be positive, got {nbar}"
        )));
    }
    let amps = poisson_weights(nbar, max_n)
        .into_iter()
        .map(|p| Complex64::new(p.sqrt(), 0.0))
        .collect();
    Ok((Generator::number(max_n)?, ProbeState::normalized(amps)?))
}

/// Smallest cutoff `N ≥ 2n̄` with the Poisson tail beyond `N` below `tail`.
pub fn poisson_cutoff(nbar: f64, tail: f64) -> usize {
    let mut n = (2.0 * nbar).ceil() as usize;
    loop {
        // beyond 2n̄ the ratio p_{n+1}/p_n ≤ 1/2, so the tail is at most 2 p_{n+1}
        let p = poisson_weights(nbar, n + 1)[n + 1];
        if 2.0 * p < tail {
            return n;
        }
        n += 1;
    }
}

/// Probe over `J_z/ħ` for spin `j = (M−1)/2` whose amplitudes satisfy
/// `c_m = c*_{−m}`.
pub fn spin_symmetric_state(dim: usize, amplitudes: &[Complex64]) -> Result<(Generator, ProbeState)> {
    check_dim(dim, amplitudes.len())?;
    if dim < 2 {
        return Err(QibError::InvalidArgument(format!(
            "spin dimension must be at least 2, got {dim}"
        )));
    }
    for l in 0..dim.div_ceil(2) {
        let deviation = (amplitudes[l] - amplitudes[dim - 1 - l].conj()).norm();
        if deviation > CONJUGATE_TOL {
            return Err(QibError::ConjugateSymmetry {
                index: l,
                deviation,
            });
        }
    }
    Ok((Generator::spin(dim - 1)?, ProbeState::new(amplitudes.to_vec())?))
}

/// Mirrored eigenvalue pairs `(i, k)` with `A_i < ⟨Â⟩ < A_k`, plus the index
/// of an eigenvalue sitting at the mean, if any.
pub fn symmetric_pairs(gen: &Generator, mean: f64) -> (Vec<(usize, usize)>, Option<usize>) {
    let eig = gen.eigenvalues();
    let pairs = (0..gen.dim())
        .filter(|&i| eig[i] < mean - SPECTRUM_TOL)
        .filter_map(|i| {
            gen.position(2.0 * mean - eig[i], SPECTRUM_TOL)
                .map(|k| (i, k))
        })
        .collect();
    (pairs, gen.position(mean, SPECTRUM_TOL))
}

/// Draws a random admissible probe with mean `mean`: a random nonempty set of
/// mirrored pairs (and possibly the centre), exponential weights normalized to
/// one, and uniform phases.
///
/// When the spectrum only offers a centre eigenvalue the result is that
/// eigenstate.
pub fn random_admissible_state<R: Rng + ?Sized>(
    gen: &Generator,
    mean: f64,
    rng: &mut R,
) -> Result<ProbeState> {
    let (pairs, centre) = symmetric_pairs(gen, mean);
    if pairs.is_empty() && centre.is_none() {
        return Err(QibError::Symmetry(format!(
            "spectrum admits no symmetric pairing about {mean}"
        )));
    }
    let mut chosen: Vec<(usize, usize)> =
        pairs.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
    if chosen.is_empty() && !pairs.is_empty() {
        chosen.push(pairs[rng.random_range(0..pairs.len())]);
    }
    let with_centre = centre.filter(|_| chosen.is_empty() || rng.random_bool(0.5));

    let mut weights: Vec<f64> = (0..chosen.len() + with_centre.is_some() as usize)
        .map(|_| rng.sample::<f64, _>(Exp1))
        .collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);

    let mut amps = vec![Complex64::new(0.0, 0.0); gen.dim()];
    for (&(i, k), w) in chosen.iter().zip(&weights) {
        let r = (w / 2.0).sqrt();
        amps[i] = Complex64::from_polar(r, rng.random_range(-PI..PI));
        amps[k] = Complex64::from_polar(r, rng.random_range(-PI..PI));
    }
    if let Some(c) = with_centre {
        let w = weights[chosen.len()];
        amps[c] = Complex64::from_polar(w.sqrt(), rng.random_range(-PI..PI));
    }
    ProbeState::normalized(amps)
}
