use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QibError, Result};
use crate::model::MeasurementBasis;

/// Generalized binomial `x(x−1)…(x−k+1)/k!` for integer `x`.
fn binomial(x: i64, k: i64) -> f64 {
    if k < 0 {
        return 0.0;
    }
    let mut acc = 1.0;
    for i in 0..k {
        acc *= (x - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// `P_n^{(a,b)}(0)` for integer parameters.
///
/// Non-negative parameters use the three-term recurrence in `n`. A negative
/// parameter is first removed with the degree-lowering identity
/// `P_n^{(−l,b)} = C(n+b,l)/C(n,l) (−1/2)^l P_{n−l}^{(l,b)}` (and the
/// reflection `P_n^{(a,b)}(0) = (−1)^n P_n^{(b,a)}(0)`). Parameters below
/// `−n`, where that identity does not apply, fall back to the explicit sum.
pub fn jacobi_at_zero(n: usize, a: i64, b: i64) -> f64 {
    let ni = n as i64;
    if n == 0 {
        return 1.0;
    }
    if a < -ni || b < -ni {
        let s: f64 = (0..=ni)
            .map(|k| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign * binomial(ni + a, ni - k) * binomial(ni + b, k)
            })
            .sum();
        return s * 0.5f64.powi(n as i32);
    }
    if a < 0 {
        let l = -a;
        let ratio = binomial(ni + b, l) / binomial(ni, l);
        return ratio * (-0.5f64).powi(l as i32) * jacobi_at_zero(n - l as usize, l, b);
    }
    if b < 0 {
        let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        return sign * jacobi_at_zero(n, b, a);
    }

    let (af, bf) = (a as f64, b as f64);
    let mut prev = 1.0;
    let mut cur = (af - bf) / 2.0;
    for k in 2..=n {
        let kf = k as f64;
        let s = 2.0 * kf + af + bf;
        let next = ((s - 1.0) * (af * af - bf * bf) * cur
            - 2.0 * (kf + af - 1.0) * (kf + bf - 1.0) * s * prev)
            / (2.0 * kf * (kf + af + bf) * (s - 2.0));
        prev = cur;
        cur = next;
    }
    cur
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Rotation matrix `d(π/2)` of spin `(M−1)/2`, rows and columns ordered by
/// ascending magnetic number.
///
/// Entry `[l][j]` is the amplitude of `|m_l⟩` in the rotated `|m_j⟩`, built
/// from Jacobi values at zero.
pub fn wigner_d_half_pi(dim: usize) -> Result<DMatrix<f64>> {
    if dim < 2 {
        return Err(QibError::InvalidArgument(format!(
            "dimension must be at least 2, got {dim}"
        )));
    }
    let m = dim as i64;
    let lf: Vec<f64> = (0..=dim).map(ln_factorial).collect();
    let mut d = DMatrix::from_fn(dim, dim, |row, col| {
        let (l, j) = (row as i64 + 1, col as i64 + 1);
        let ln_pref = 0.5
            * (lf[(m - l) as usize] + lf[(l - 1) as usize]
                - lf[(j - 1) as usize]
                - lf[(m - j) as usize]);
        // (1/2)^{l − (M+1)/2}
        let ln_two = -((l as f64) - (m as f64 + 1.0) / 2.0) * std::f64::consts::LN_2;
        let p = jacobi_at_zero((m - l) as usize, l - j, l + j - (m + 1));
        (ln_pref + ln_two).exp() * p
    });
    // |d_{m',m}| = |d_{−m',m}| holds analytically; copy the moduli so the
    // mirror balance also holds bit for bit
    for j in 0..dim {
        for l in dim.div_ceil(2)..dim {
            let mirror = d[(dim - 1 - l, j)].abs();
            d[(l, j)] = mirror.copysign(d[(l, j)]);
        }
    }
    Ok(d)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WignerBasisSpec {
    pub dim: usize,
    /// Free angle; the row phases become `(l − (M+1)/2) ϑ` plus a sign.
    pub vartheta: f64,
}

impl WignerBasisSpec {
    pub fn new(dim: usize, vartheta: f64) -> Result<Self> {
        if dim < 2 {
            return Err(QibError::InvalidArgument(format!(
                "basis dimension must be at least 2, got {dim}"
            )));
        }
        if !vartheta.is_finite() {
            return Err(QibError::InvalidArgument("angle must be finite".into()));
        }
        Ok(Self { dim, vartheta })
    }
}

/// `b_{j,l} = e^{i(l − (M+1)/2)ϑ} d_{l,j}(π/2)`: measurement vectors are the
/// `J_z` eigenstates rotated by a quarter turn about `y`.
pub fn wigner_basis(spec: &WignerBasisSpec) -> Result<MeasurementBasis> {
    let spec = WignerBasisSpec::new(spec.dim, spec.vartheta)?;
    let d = wigner_d_half_pi(spec.dim)?;
    let centre = (spec.dim as f64 + 1.0) / 2.0;
    let coefficients = DMatrix::from_fn(spec.dim, spec.dim, |j, l| {
        let phase = (l as f64 + 1.0 - centre) * spec.vartheta;
        Complex64::from_polar(1.0, phase) * d[(l, j)]
    });
    MeasurementBasis::new(coefficients)
}
