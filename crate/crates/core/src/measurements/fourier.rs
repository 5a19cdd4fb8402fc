use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QibError, Result};
use crate::model::{check_dim, MeasurementBasis, ProbeState};

/// Integer offsets `f_l` (1-based `l`) that make the shifted-phase basis
/// orthonormal. Every value is even, which closes the shift cycle.
pub fn fourier_f(l: usize, dim: usize) -> Result<i64> {
    if dim < 2 || l < 1 || l > dim {
        return Err(QibError::InvalidArgument(format!(
            "index {l} out of range 1..={dim}"
        )));
    }
    let (l, m) = (l as i64, dim as i64);
    Ok(if m % 2 == 0 {
        let sign_term = if l % 2 == 0 { 2 } else { 0 };
        (l - 1) + sign_term * (m - 1) / 2
    } else {
        (l - 1) * (1 - m)
    })
}

/// The `β` that makes every phase-sum constant `ξ_j` vanish.
pub fn canonical_beta(dim: usize) -> f64 {
    let m1 = dim as f64 - 1.0;
    if dim.is_multiple_of(2) {
        -PI * m1
    } else {
        PI * m1 * m1 / 2.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierBasisSpec {
    pub dim: usize,
    pub beta: f64,
    /// Free eigenvalue-dependent phases `φ_l = h(A_l)`.
    pub eta_phases: Vec<f64>,
}

impl FourierBasisSpec {
    pub fn new(dim: usize, beta: f64, eta_phases: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(QibError::InvalidArgument(format!(
                "basis dimension must be at least 2, got {dim}"
            )));
        }
        check_dim(dim, eta_phases.len())?;
        if !beta.is_finite() || eta_phases.iter().any(|p| !p.is_finite()) {
            return Err(QibError::InvalidArgument("phases must be finite".into()));
        }
        Ok(Self {
            dim,
            beta,
            eta_phases,
        })
    }

    /// Canonical `β` and zero free phases.
    pub fn canonical(dim: usize) -> Result<Self> {
        Self::new(dim, canonical_beta(dim), vec![0.0; dim])
    }
}

/// `b_{j,l} = e^{iθ_{j,l}}/√M` with `θ_{j,l} = (jπ/M) f_l + jβ/M + φ_l`.
pub fn fourier_basis(spec: &FourierBasisSpec) -> Result<MeasurementBasis> {
    let spec = FourierBasisSpec::new(spec.dim, spec.beta, spec.eta_phases.clone())?;
    let m = spec.dim;
    let mi = m as i64;
    let f: Vec<i64> = (1..=m).map(|l| fourier_f(l, m)).collect::<Result<_>>()?;
    // β only matters modulo 2πM, and jf_l only modulo 2M
    let beta = spec.beta.rem_euclid(2.0 * PI * m as f64);
    let amp = 1.0 / (m as f64).sqrt();
    let coefficients = DMatrix::from_fn(m, m, |row, col| {
        let j = row as i64 + 1;
        let r = (j * f[col]).rem_euclid(2 * mi);
        let theta = PI * r as f64 / m as f64 + j as f64 * beta / m as f64 + spec.eta_phases[col];
        Complex64::from_polar(amp, theta)
    });
    MeasurementBasis::new(coefficients)
}

/// `Σ_l exp(iπ(j − j')f_l/M)` for 1-based `j, j'`; equals `M δ_{jj'}`.
pub fn fourier_orthogonality_sum(dim: usize, j: usize, jp: usize) -> Result<Complex64> {
    let mi = dim as i64;
    let dj = j as i64 - jp as i64;
    (1..=dim)
        .map(|l| {
            fourier_f(l, dim).map(|f| {
                let r = (dj * f).rem_euclid(2 * mi);
                Complex64::from_polar(1.0, PI * r as f64 / dim as f64)
            })
        })
        .sum()
}

/// Probe phases paired with a Fourier basis so that every phase sum
/// vanishes: `θ_l + θ_δ(l) = φ_l + φ_δ(l)` and, for odd `M`, `θ_c = φ_c`.
///
/// `free` holds the `⌊M/2⌋` phases of the lower half.
pub fn fourier_matched_phases(free: &[f64], eta_phases: &[f64]) -> Result<Vec<f64>> {
    let m = eta_phases.len();
    check_dim(m / 2, free.len())?;
    let mut theta = eta_phases.to_vec();
    for (l, &t) in free.iter().enumerate() {
        let d = m - 1 - l;
        theta[l] = t;
        theta[d] = eta_phases[l] + eta_phases[d] - t;
    }
    Ok(theta)
}

/// Lifts a basis of a subspace spanned by the generator eigenvectors listed
/// in `support` to the full space, completing it with the remaining
/// eigenvectors.
pub fn embed_on_support(
    basis: &MeasurementBasis,
    support: &[usize],
    dim: usize,
) -> Result<MeasurementBasis> {
    check_dim(basis.dim(), support.len())?;
    let mut seen = vec![false; dim];
    for &s in support {
        if s >= dim || seen[s] {
            return Err(QibError::InvalidArgument(format!(
                "support index {s} repeated or out of range"
            )));
        }
        seen[s] = true;
    }
    let rest: Vec<usize> = (0..dim).filter(|&l| !seen[l]).collect();
    let mut coefficients = DMatrix::<Complex64>::zeros(dim, dim);
    for j in 0..support.len() {
        for (k, &l) in support.iter().enumerate() {
            coefficients[(j, l)] = basis.coefficient(j, k);
        }
    }
    for (i, &l) in rest.iter().enumerate() {
        coefficients[(support.len() + i, l)] = Complex64::new(1.0, 0.0);
    }
    MeasurementBasis::new(coefficients)
}

/// Fourier basis on the support of `state` whose free phases equal the
/// state's own phases, so every phase sum is constant; completed by the
/// unused eigenvectors. The support must hold at least two components.
pub fn matched_fourier_basis(state: &ProbeState) -> Result<MeasurementBasis> {
    let support = state.support();
    let n = support.len();
    if n < 2 {
        return Err(QibError::InvalidArgument(format!(
            "support of size {n} admits no informative basis"
        )));
    }
    let phases = state.phases();
    let eta = support.iter().map(|&l| phases[l]).collect();
    let small = fourier_basis(&FourierBasisSpec::new(n, canonical_beta(n), eta)?)?;
    embed_on_support(&small, &support, state.dim())
}

/// The cyclic shift `V|ψ_j⟩ = |ψ_{j+1}⟩`, `V|ψ_M⟩ = e^{iβ}|ψ_1⟩`, in the
/// generator eigenbasis.
pub fn shift_operator(basis: &MeasurementBasis, beta: f64) -> DMatrix<Complex64> {
    let m = basis.dim();
    let psi = basis.coefficients().transpose();
    let mut s = DMatrix::<Complex64>::zeros(m, m);
    for j in 0..m.saturating_sub(1) {
        s[(j + 1, j)] = Complex64::new(1.0, 0.0);
    }
    s[(0, m - 1)] += Complex64::from_polar(1.0, beta);
    &psi * s * psi.adjoint()
}
