//! Classical and quantum Fisher information, symmetric logarithmic
//! derivatives, and the diagnostics that certify `F(ε) = F_Q` over a grid.

use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QibError, Result};
use crate::model::{
    check_dim, phi_minus, Generator, Kinematics, MeasurementBasis, ProbeState,
};

/// Probability below which an outcome is treated as a node of `p_j(ε)`.
pub const PROBABILITY_FLOOR: f64 = 1e-14;
/// `|Re ż z*|` above which a node is considered badly conditioned.
pub const NODE_SLOPE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Largest accepted `(F_Q − F(ε))/F_Q` over the grid.
    pub gap: f64,
    /// Largest accepted `|Im[w_j z_j*]|`.
    pub residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            gap: 1e-8,
            residual: 1e-10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonGrid {
    points: Vec<f64>,
}

impl EpsilonGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(QibError::InvalidArgument("empty ε grid".into()));
        }
        if points.iter().any(|x| !x.is_finite()) {
            return Err(QibError::InvalidArgument("ε grid must be finite".into()));
        }
        Ok(Self { points })
    }

    /// `n` evenly spaced points on `[start, end)`.
    pub fn uniform(start: f64, end: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(QibError::InvalidArgument("empty ε grid".into()));
        }
        let step = (end - start) / n as f64;
        Self::new((0..n).map(|i| start + step * i as f64).collect())
    }

    /// `n` points over one period `2π/g`, where `g` is the common spacing of
    /// the shifted eigenvalues `A_l − ⟨Â⟩` on the support. Spectra without a
    /// usable common spacing get `[−π, π)`.
    pub fn default_for(state: &ProbeState, gen: &Generator, n: usize) -> Result<Self> {
        let k = Kinematics::new(state, gen)?;
        let shifts: Vec<f64> = state
            .support()
            .into_iter()
            .map(|l| k.shifted[l].abs())
            .filter(|d| *d > 0.0)
            .collect();
        match common_spacing(&shifts) {
            Some(g) => Self::uniform(0.0, 2.0 * PI / g, n),
            None => Self::uniform(-PI, PI, n),
        }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Approximate greatest common divisor of positive reals, or `None` when the
/// values look incommensurate.
fn common_spacing(values: &[f64]) -> Option<f64> {
    let max = values.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return None;
    }
    let tol = 1e-9 * max;
    let mut g = values[0];
    for &v in &values[1..] {
        let (mut a, mut b) = (g.max(v), g.min(v));
        let mut steps = 0;
        while b > tol {
            let mut r = a % b;
            if r > b - tol {
                r = 0.0;
            }
            a = b;
            b = r;
            steps += 1;
            if steps > 64 {
                return None;
            }
        }
        g = a;
    }
    (g >= 1e-6 * max).then_some(g)
}

/// Per-ε quantities shared by the sweep and the single-point functions.
struct PointDiagnostics {
    cfi: f64,
    im_residual: f64,
    lambda: Vec<Option<Complex64>>,
    flagged: bool,
}

fn diagnose(
    k: &Kinematics,
    state: &ProbeState,
    basis: &MeasurementBasis,
    epsilon: f64,
) -> PointDiagnostics {
    let (z, zdot) = k.amplitudes(state, basis, epsilon);
    let sqrt_f = k.qfi.sqrt();
    let mut cfi = 0.0;
    let mut im_residual = 0.0f64;
    let mut flagged = false;
    let mut lambda = Vec::with_capacity(z.len());
    for (z, zd) in z.iter().zip(&zdot) {
        let p = z.norm_sqr();
        let cross = zd * z.conj();
        let w_cross = cross * (2.0 / sqrt_f);
        im_residual = im_residual.max(w_cross.im.abs());
        if p < PROBABILITY_FLOOR {
            // (dp/dε)²/p → 4|ż|² as z → 0
            cfi += 4.0 * zd.norm_sqr();
            flagged |= cross.re.abs() > NODE_SLOPE_TOL;
            lambda.push(None);
        } else {
            let dp = 2.0 * cross.re;
            cfi += dp * dp / p;
            // √F w/z = 2ż/z
            lambda.push(Some(2.0 * zd / z));
        }
    }
    PointDiagnostics {
        cfi,
        im_residual,
        lambda,
        flagged,
    }
}

fn prepare(state: &ProbeState, gen: &Generator, basis: &MeasurementBasis) -> Result<Kinematics> {
    check_dim(gen.dim(), state.dim())?;
    check_dim(gen.dim(), basis.dim())?;
    Kinematics::new(state, gen)
}

/// `dp_j/dε = 2 Re[ż_j z_j*]`.
pub fn probability_derivatives(
    state: &ProbeState,
    gen: &Generator,
    basis: &MeasurementBasis,
    epsilon: f64,
) -> Result<Vec<f64>> {
    let k = prepare(state, gen, basis)?;
    let (z, zdot) = k.amplitudes(state, basis, epsilon);
    Ok(z.iter().zip(&zdot).map(|(z, zd)| 2.0 * (zd * z.conj()).re).collect())
}

/// `F(ε) = Σ_j (dp_j/dε)²/p_j` with analytic derivatives.
pub fn classical_fisher(
    state: &ProbeState,
    gen: &Generator,
    basis: &MeasurementBasis,
    epsilon: f64,
) -> Result<f64> {
    let k = prepare(state, gen, basis)?;
    Ok(diagnose(&k, state, basis, epsilon).cfi)
}

/// `λ_j = √F_Q ⟨ψ_j|φ−(ε)⟩/⟨ψ_j|φ+(ε)⟩`, or `None` where `p_j(ε)` vanishes.
pub fn lambda_values(
    state: &ProbeState,
    gen: &Generator,
    basis: &MeasurementBasis,
    epsilon: f64,
) -> Result<Vec<Option<Complex64>>> {
    let k = prepare(state, gen, basis)?;
    Ok(diagnose(&k, state, basis, epsilon).lambda)
}

/// `max_j |Im[w_j z_j*]|`; zero exactly when `F(ε) = F_Q`.
pub fn saturation_residual(
    state: &ProbeState,
    gen: &Generator,
    basis: &MeasurementBasis,
    epsilon: f64,
) -> Result<f64> {
    let k = prepare(state, gen, basis)?;
    Ok(diagnose(&k, state, basis, epsilon).im_residual)
}

/// The saturation condition written through generator matrix elements
/// `v_{jj'} = ⟨ψ_j|Â|ψ_{j'}⟩`:
/// `Σ_{j'≠j} |v_{jj'}| (|z_{j'}|/|z_j|) cos(α_{j'} − α_j + arg v_{jj'}) = ⟨Â⟩ − v_{jj}`.
///
/// Returns `max_j |LHS − RHS|`. Every outcome must have nonzero probability.
pub fn rewritten_condition_check(
    state: &ProbeState,
    gen: &Generator,
    basis: &MeasurementBasis,
    epsilon: f64,
) -> Result<f64> {
    let k = prepare(state, gen, basis)?;
    let (z, _) = k.amplitudes(state, basis, epsilon);
    for (j, zj) in z.iter().enumerate() {
        let p = zj.norm_sqr();
        if p < PROBABILITY_FLOOR {
            return Err(QibError::UnsupportedOutcome {
                outcome: j,
                probability: p,
            });
        }
    }
    let b = basis.coefficients();
    let a = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        gen.dim(),
        gen.eigenvalues().iter().map(|&x| Complex64::new(x, 0.0)),
    ));
    let v = b.conjugate() * a * b.transpose();
    let m = z.len();
    let mut worst = 0.0f64;
    for j in 0..m {
        let (rj, aj) = z[j].to_polar();
        let lhs: f64 = (0..m)
            .filter(|&jp| jp != j)
            .map(|jp| {
                let (rv, av) = v[(j, jp)].to_polar();
                let (rjp, ajp) = z[jp].to_polar();
                rv * (rjp / rj) * (ajp - aj + av).cos()
            })
            .sum();
        let rhs = k.mean - v[(j, j)].re;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

/// Solutions `L_0 = L'_0 + Q 𝕃 Q†` of `ρ_0 L_0 + L_0 ρ_0 = L'_0` with
/// `ρ_0 = |φ+⟩⟨φ+|`, where `Q` spans the complement of `|φ+⟩`.
#[derive(Clone, Debug)]
pub struct SldFamily {
    /// `√F_Q (|φ+⟩⟨φ−| + |φ−⟩⟨φ+|)`.
    pub particular: DMatrix<Complex64>,
    pub free_block: Option<DMatrix<Complex64>>,
    /// Orthonormal columns: `|φ+⟩`, `|φ−⟩`, then a completion.
    pub ortho_basis: DMatrix<Complex64>,
    /// The assembled `L_0`.
    pub sld: DMatrix<Complex64>,
    pub qfi: f64,
}

impl SldFamily {
    /// `max |L'_0 − (ρ_0 L_0 + L_0 ρ_0)|`.
    pub fn sylvester_residual(&self) -> f64 {
        let phi = self.ortho_basis.column(0);
        let rho = phi * phi.adjoint();
        (&self.particular - (&rho * &self.sld + &self.sld * &rho))
            .map(|x| x.norm())
            .max()
    }
}

fn hermitian_defect(m: &DMatrix<Complex64>) -> f64 {
    (m - m.adjoint()).map(|x| x.norm()).max()
}

/// Gram–Schmidt completion of `first` to an orthonormal basis, drawing the
/// remaining directions from the standard basis.
fn complete_basis(first: &[Vec<Complex64>], dim: usize) -> DMatrix<Complex64> {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    let mut candidates: Vec<Vec<Complex64>> = first.to_vec();
    candidates.extend((0..dim).map(|k| {
        let mut e = vec![Complex64::new(0.0, 0.0); dim];
        e[k] = Complex64::new(1.0, 0.0);
        e
    }));
    for mut v in candidates {
        if cols.len() == dim {
            break;
        }
        // two passes keep the completion orthogonal to rounding level
        for _ in 0..2 {
            for c in &cols {
                let overlap: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                v.iter_mut().zip(c).for_each(|(x, y)| *x -= overlap * y);
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    DMatrix::from_fn(dim, dim, |r, c| cols[c][r])
}

/// Builds the SLD family of the probe.
///
/// `free_block` is a Hermitian matrix acting on the complement of `|φ+⟩`:
/// size `M−1` spans `|φ−⟩, |φ_3⟩, …`, while size `M−2` leaves the `|φ−⟩`
/// diagonal entry at zero and spans only `|φ_3⟩, …`.
pub fn sld_assemble(
    state: &ProbeState,
    gen: &Generator,
    free_block: Option<&DMatrix<Complex64>>,
) -> Result<SldFamily> {
    let minus = phi_minus(state, gen)?;
    let k = Kinematics::new(state, gen)?;
    let dim = gen.dim();
    let sqrt_f = k.qfi.sqrt();
    let plus = state.amplitudes();
    let mv = minus.amplitudes();

    let particular = DMatrix::from_fn(dim, dim, |r, c| {
        (plus[r] * mv[c].conj() + mv[r] * plus[c].conj()) * sqrt_f
    });
    let ortho_basis = complete_basis(&[plus.to_vec(), mv.to_vec()], dim);

    let mut sld = particular.clone();
    if let Some(block) = free_block {
        let n = block.nrows();
        if block.ncols() != n || (n != dim - 1 && n != dim.saturating_sub(2)) {
            return Err(QibError::DimensionMismatch {
                expected: dim - 1,
                found: n,
            });
        }
        let defect = hermitian_defect(block);
        if defect > 1e-12 {
            return Err(QibError::NonHermitian { defect });
        }
        let first = dim - n;
        let q = ortho_basis.columns(first, n);
        sld += q * block * q.adjoint();
    }
    Ok(SldFamily {
        particular,
        free_block: free_block.cloned(),
        ortho_basis,
        sld,
        qfi: k.qfi,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SaturationReport {
    pub epsilons: Vec<f64>,
    pub cfi: Vec<f64>,
    pub qfi: f64,
    pub im_residual: Vec<f64>,
    /// `max_j |Im λ_j|` over outcomes with nonzero probability.
    pub lambda_imag_max: Vec<f64>,
    /// Grid indices where a zero-probability outcome had a nonzero slope.
    pub flagged: Vec<usize>,
    pub max_relative_gap: f64,
    pub max_im_residual: f64,
    pub tolerances: Tolerances,
    pub saturated: bool,
}

impl SaturationReport {
    /// CSV with header `epsilon,cfi,qfi,im_residual,lambda_imag_max`; numbers
    /// use the shortest representation that round-trips.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epsilon,cfi,qfi,im_residual,lambda_imag_max\n");
        for i in 0..self.epsilons.len() {
            writeln!(
                out,
                "{:?},{:?},{:?},{:?},{:?}",
                self.epsilons[i], self.cfi[i], self.qfi, self.im_residual[i], self.lambda_imag_max[i]
            )
            .expect("writing to a String cannot fail");
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is always serializable")
    }

    /// `(F_Q − F(ε_i))/F_Q` at each grid point.
    pub fn relative_gaps(&self) -> Vec<f64> {
        self.cfi.iter().map(|f| (self.qfi - f) / self.qfi).collect()
    }
}

pub fn saturation_sweep(
    state: &ProbeState,
    gen: &Generator,
    basis: &MeasurementBasis,
    grid: &EpsilonGrid,
) -> Result<SaturationReport> {
    saturation_sweep_with(state, gen, basis, grid, Tolerances::default())
}

/// Evaluates every diagnostic on the grid. Saturation requires the largest
/// relative gap to stay within `tolerances.gap`.
pub fn saturation_sweep_with(
    state: &ProbeState,
    gen: &Generator,
    basis: &MeasurementBasis,
    grid: &EpsilonGrid,
    tolerances: Tolerances,
) -> Result<SaturationReport> {
    let k = prepare(state, gen, basis)?;
    let n = grid.len();
    let mut report = SaturationReport {
        epsilons: grid.points().to_vec(),
        cfi: Vec::with_capacity(n),
        qfi: k.qfi,
        im_residual: Vec::with_capacity(n),
        lambda_imag_max: Vec::with_capacity(n),
        flagged: Vec::new(),
        max_relative_gap: 0.0,
        max_im_residual: 0.0,
        tolerances,
        saturated: false,
    };
    for (i, &eps) in grid.points().iter().enumerate() {
        let d = diagnose(&k, state, basis, eps);
        let lambda_max = d
            .lambda
            .iter()
            .flatten()
            .map(|l| l.im.abs())
            .fold(0.0, f64::max);
        if d.flagged {
            report.flagged.push(i);
        }
        report.max_relative_gap = report.max_relative_gap.max((k.qfi - d.cfi) / k.qfi);
        report.max_im_residual = report.max_im_residual.max(d.im_residual);
        report.cfi.push(d.cfi);
        report.im_residual.push(d.im_residual);
        report.lambda_imag_max.push(lambda_max);
    }
    report.saturated = report.max_relative_gap <= tolerances.gap;
    Ok(report)
}

/// `F_Q (1 − Σ_j Im[w_j z_j*]²/p_j)`, the classical Fisher information
/// expressed through the saturation residuals.
pub fn cfi_from_residuals(
    state: &ProbeState,
    gen: &Generator,
    basis: &MeasurementBasis,
    epsilon: f64,
) -> Result<f64> {
    let k = prepare(state, gen, basis)?;
    let (z, zdot) = k.amplitudes(state, basis, epsilon);
    let scale = 2.0 / k.qfi.sqrt();
    let loss: f64 = z
        .iter()
        .zip(&zdot)
        .filter(|(z, _)| z.norm_sqr() >= PROBABILITY_FLOOR)
        .map(|(z, zd)| (zd * scale * z.conj()).im.powi(2) / z.norm_sqr())
        .sum();
    Ok(k.qfi * (1.0 - loss))
}
