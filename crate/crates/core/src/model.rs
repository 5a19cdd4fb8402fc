//! Generators, probe states and measurement bases, all expressed in the
//! eigenbasis of the generator.

use std::f64::consts::PI;
use std::ops::Range;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{QibError, Result};

/// Accepted deviation of `Σ|c|²` from one when a state is constructed.
pub const NORM_TOL: f64 = 1e-10;
/// Accepted `‖B†B − I‖_max` when a measurement basis is constructed.
pub const UNITARITY_TOL: f64 = 1e-10;
/// Generator variance below which a probe is treated as an eigenstate.
pub const VARIANCE_FLOOR: f64 = 1e-14;
/// Amplitude modulus below which a component counts as absent.
pub const AMPLITUDE_FLOOR: f64 = 1e-14;

/// Maps an angle into `(-π, π]`.
pub fn wrap_phase(x: f64) -> f64 {
    let r = x.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Discrete spectrum of a Hermitian generator restricted to the working
/// subspace.
///
/// A plain generator has strictly increasing eigenvalues. A direct sum keeps
/// that ordering inside each block but may repeat eigenvalues across blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    eigenvalues: Vec<f64>,
    labels: Vec<i64>,
    blocks: Vec<Range<usize>>,
}

impl Generator {
    pub fn new(eigenvalues: Vec<f64>) -> Result<Self> {
        let labels = (0..eigenvalues.len() as i64).collect();
        Self::with_labels(eigenvalues, labels)
    }

    pub fn with_labels(eigenvalues: Vec<f64>, labels: Vec<i64>) -> Result<Self> {
        validate_spectrum(&eigenvalues)?;
        if labels.len() != eigenvalues.len() {
            return Err(QibError::DimensionMismatch {
                expected: eigenvalues.len(),
                found: labels.len(),
            });
        }
        if labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(QibError::InvalidGenerator(
                "labels must be strictly increasing".into(),
            ));
        }
        let dim = eigenvalues.len();
        Ok(Self {
            eigenvalues,
            labels,
            blocks: vec![0..dim],
        })
    }

    /// Number operator truncated to `0..=max_n`.
    pub fn number(max_n: usize) -> Result<Self> {
        Self::new((0..=max_n).map(|n| n as f64).collect())
    }

    /// `J_z/ħ` for spin `j = two_j/2`: eigenvalues `-j, -j+1, …, j`.
    pub fn spin(two_j: usize) -> Result<Self> {
        let j = two_j as f64 / 2.0;
        Self::new((0..=two_j).map(|k| k as f64 - j).collect())
    }

    /// Direct sum of generators. Eigenvalues may repeat across blocks; each
    /// block keeps its own strictly increasing order.
    pub fn direct_sum(parts: &[Generator]) -> Result<Self> {
        if parts.is_empty() {
            return Err(QibError::InvalidGenerator("empty direct sum".into()));
        }
        let mut eigenvalues = Vec::new();
        let mut labels = Vec::new();
        let mut blocks = Vec::new();
        let mut next_label = 0i64;
        for part in parts {
            let start = eigenvalues.len();
            eigenvalues.extend_from_slice(&part.eigenvalues);
            for _ in 0..part.dim() {
                labels.push(next_label);
                next_label += 1;
            }
            blocks.push(start..eigenvalues.len());
        }
        Ok(Self {
            eigenvalues,
            labels,
            blocks,
        })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn blocks(&self) -> &[Range<usize>] {
        &self.blocks
    }

    pub fn is_block_diagonal(&self) -> bool {
        self.blocks.len() > 1
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Index of the eigenvalue within `tol` of `value`, if any.
    pub fn position(&self, value: f64, tol: f64) -> Option<usize> {
        self.eigenvalues.iter().position(|&a| (a - value).abs() <= tol)
    }
}

fn validate_spectrum(eigenvalues: &[f64]) -> Result<()> {
    if eigenvalues.len() < 2 {
        return Err(QibError::InvalidGenerator(format!(
            "need at least 2 eigenvalues, got {}",
            eigenvalues.len()
        )));
    }
    if eigenvalues.iter().any(|a| !a.is_finite()) {
        return Err(QibError::InvalidGenerator("non-finite eigenvalue".into()));
    }
    if let Some(w) = eigenvalues.windows(2).find(|w| w[0] >= w[1]) {
        return Err(QibError::InvalidGenerator(format!(
            "eigenvalues must be strictly increasing ({} then {})",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// Pure probe state as amplitudes in the generator eigenbasis.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeState {
    amplitudes: Vec<Complex64>,
}

impl ProbeState {
    /// Accepts amplitudes whose squared norm is within [`NORM_TOL`] of one and
    /// rescales them to unit norm.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm_sqr = norm_sqr(&amplitudes);
        if amplitudes.is_empty() || !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(QibError::Normalization { norm_sqr });
        }
        Ok(Self::rescaled(amplitudes, norm_sqr))
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm_sqr = norm_sqr(&amplitudes);
        if amplitudes.is_empty() || !norm_sqr.is_finite() || norm_sqr <= 0.0 {
            return Err(QibError::Normalization { norm_sqr });
        }
        Ok(Self::rescaled(amplitudes, norm_sqr))
    }

    pub fn from_polar(moduli: &[f64], phases: &[f64]) -> Result<Self> {
        if moduli.len() != phases.len() {
            return Err(QibError::DimensionMismatch {
                expected: moduli.len(),
                found: phases.len(),
            });
        }
        Self::new(
            moduli
                .iter()
                .zip(phases)
                .map(|(&r, &t)| Complex64::from_polar(r, t))
                .collect(),
        )
    }

    fn rescaled(mut amplitudes: Vec<Complex64>, norm_sqr: f64) -> Self {
        // already unit norm to rounding: leave the values untouched so files
        // round-trip bit for bit
        if (norm_sqr - 1.0).abs() <= 8.0 * f64::EPSILON {
            return Self { amplitudes };
        }
        let scale = norm_sqr.sqrt().recip();
        for c in &mut amplitudes {
            *c *= scale;
        }
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm()).collect()
    }

    pub fn phases(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.arg()).collect()
    }

    /// Indices whose modulus exceeds [`AMPLITUDE_FLOOR`].
    pub fn support(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&l| self.amplitudes[l].norm() > AMPLITUDE_FLOOR)
            .collect()
    }

    pub fn with_global_phase(&self, gamma: f64) -> Self {
        let u = Complex64::from_polar(1.0, gamma);
        Self {
            amplitudes: self.amplitudes.iter().map(|c| c * u).collect(),
        }
    }

    pub fn inner(&self, other: &ProbeState) -> Result<Complex64> {
        check_dim(self.dim(), other.dim())?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Direct sum with block weights; each part keeps its internal amplitudes.
    pub fn direct_sum(parts: &[(f64, &ProbeState)]) -> Result<Self> {
        let mut amplitudes = Vec::new();
        for &(weight, part) in parts {
            if weight < 0.0 {
                return Err(QibError::InvalidArgument(format!(
                    "negative block weight {weight}"
                )));
            }
            let s = weight.sqrt();
            amplitudes.extend(part.amplitudes.iter().map(|c| c * s));
        }
        Self::new(amplitudes)
    }
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}

/// Projective measurement with coefficient `(j, l) = ⟨A_l|ψ_j⟩`.
///
/// Row `j` holds the expansion of `|ψ_j⟩` in the generator eigenbasis.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementBasis {
    coefficients: DMatrix<Complex64>,
}

impl MeasurementBasis {
    pub fn new(coefficients: DMatrix<Complex64>) -> Result<Self> {
        if coefficients.nrows() != coefficients.ncols() {
            return Err(QibError::DimensionMismatch {
                expected: coefficients.nrows(),
                found: coefficients.ncols(),
            });
        }
        if coefficients.nrows() == 0 {
            return Err(QibError::InvalidArgument("empty basis".into()));
        }
        let basis = Self { coefficients };
        let defect = basis.unitarity_defect();
        if !(defect <= UNITARITY_TOL) {
            return Err(QibError::NonUnitary { defect });
        }
        Ok(basis)
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(QibError::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        Self::new(DMatrix::from_fn(n, n, |j, l| rows[j][l]))
    }

    /// The generator eigenbasis itself.
    pub fn identity(dim: usize) -> Self {
        Self {
            coefficients: DMatrix::identity(dim, dim),
        }
    }

    /// Haar-random unitary basis via QR of a complex Gaussian matrix.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        let g = DMatrix::from_fn(dim, dim, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let qr = g.qr();
        let r = qr.r();
        let mut q = qr.q();
        for k in 0..dim {
            let d = r[(k, k)];
            let u = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
            for i in 0..dim {
                q[(i, k)] *= u;
            }
        }
        Self { coefficients: q }
    }

    pub fn dim(&self) -> usize {
        self.coefficients.nrows()
    }

    pub fn coefficients(&self) -> &DMatrix<Complex64> {
        &self.coefficients
    }

    pub fn coefficient(&self, j: usize, l: usize) -> Complex64 {
        self.coefficients[(j, l)]
    }

    /// `|ψ_j⟩` in the generator eigenbasis.
    pub fn vector(&self, j: usize) -> Vec<Complex64> {
        self.coefficients.row(j).iter().copied().collect()
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.dim()).map(|j| self.vector(j)).collect()
    }

    pub fn moduli(&self) -> DMatrix<f64> {
        self.coefficients.map(|b| b.norm())
    }

    pub fn phases(&self) -> DMatrix<f64> {
        self.coefficients.map(|b| b.arg())
    }

    /// `max |(B B†)_{jj'} − δ_{jj'}|`, the larger of the row and column
    /// orthonormality defects.
    pub fn unitarity_defect(&self) -> f64 {
        let b = &self.coefficients;
        let n = b.nrows();
        let eye = DMatrix::<Complex64>::identity(n, n);
        let rows = (b * b.adjoint() - &eye).map(|x| x.norm()).max();
        let cols = (b.adjoint() * b - &eye).map(|x| x.norm()).max();
        rows.max(cols)
    }

    /// Applies `exp(i h(Â))` to every basis vector: `b_{j,l} → e^{i h_l} b_{j,l}`.
    pub fn with_eigenphase_map(&self, phases: &[f64]) -> Result<Self> {
        check_dim(self.dim(), phases.len())?;
        let mut coefficients = self.coefficients.clone();
        for (l, &h) in phases.iter().enumerate() {
            let u = Complex64::from_polar(1.0, h);
            for j in 0..self.dim() {
                coefficients[(j, l)] *= u;
            }
        }
        Ok(Self { coefficients })
    }

    /// Block-diagonal direct sum of bases.
    pub fn direct_sum(parts: &[&MeasurementBasis]) -> Self {
        let n: usize = parts.iter().map(|p| p.dim()).sum();
        let mut coefficients = DMatrix::<Complex64>::zeros(n, n);
        let mut offset = 0;
        for part in parts {
            let d = part.dim();
            coefficients
                .view_mut((offset, offset), (d, d))
                .copy_from(&part.coefficients);
            offset += d;
        }
        Self { coefficients }
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        Err(QibError::DimensionMismatch { expected, found })
    } else {
        Ok(())
    }
}

/// `⟨Â⟩ = Σ|c_l|² A_l`.
pub fn mean_a(state: &ProbeState, gen: &Generator) -> Result<f64> {
    check_dim(gen.dim(), state.dim())?;
    Ok(state
        .amplitudes
        .iter()
        .zip(&gen.eigenvalues)
        .map(|(c, a)| c.norm_sqr() * a)
        .sum())
}

/// Central moment `Σ|c_l|² (A_l − ⟨Â⟩)^k`.
pub(crate) fn central_moment(state: &ProbeState, gen: &Generator, k: i32) -> Result<f64> {
    let mean = mean_a(state, gen)?;
    Ok(state
        .amplitudes
        .iter()
        .zip(&gen.eigenvalues)
        .map(|(c, a)| c.norm_sqr() * (a - mean).powi(k))
        .sum())
}

/// Quantum Fisher information of the unitary family, `4 Var(Â)`.
pub fn qfi(state: &ProbeState, gen: &Generator) -> Result<f64> {
    Ok(4.0 * central_moment(state, gen, 2)?.max(0.0))
}

/// `exp(-i(Â − ⟨Â⟩)ε)|φ⟩`, with the mean taken in the input state.
pub fn evolve(state: &ProbeState, gen: &Generator, epsilon: f64) -> Result<ProbeState> {
    let mean = mean_a(state, gen)?;
    Ok(ProbeState {
        amplitudes: evolved_amplitudes(state, gen, mean, epsilon),
    })
}

fn evolved_amplitudes(
    state: &ProbeState,
    gen: &Generator,
    mean: f64,
    epsilon: f64,
) -> Vec<Complex64> {
    state
        .amplitudes
        .iter()
        .zip(&gen.eigenvalues)
        .map(|(c, a)| c * Complex64::from_polar(1.0, -(a - mean) * epsilon))
        .collect()
}

/// The auxiliary state `(-2i/√F_Q)(Â − ⟨Â⟩)|φ+⟩`, orthogonal to the probe.
pub fn phi_minus(state: &ProbeState, gen: &Generator) -> Result<ProbeState> {
    let k = Kinematics::new(state, gen)?;
    let pref = Complex64::new(0.0, -2.0 / k.qfi.sqrt());
    Ok(ProbeState {
        amplitudes: state
            .amplitudes
            .iter()
            .zip(&k.shifted)
            .map(|(c, d)| pref * d * c)
            .collect(),
    })
}

/// Mean, quantum Fisher information and shifted spectrum of a probe, shared
/// by every ε-dependent quantity.
#[derive(Clone, Debug)]
pub(crate) struct Kinematics {
    pub mean: f64,
    pub qfi: f64,
    /// `A_l − ⟨Â⟩`.
    pub shifted: Vec<f64>,
}

impl Kinematics {
    pub fn new(state: &ProbeState, gen: &Generator) -> Result<Self> {
        let mean = mean_a(state, gen)?;
        let shifted: Vec<f64> = gen.eigenvalues.iter().map(|a| a - mean).collect();
        let variance: f64 = state
            .amplitudes
            .iter()
            .zip(&shifted)
            .map(|(c, d)| c.norm_sqr() * d * d)
            .sum();
        if variance <= VARIANCE_FLOOR {
            return Err(QibError::DegenerateState);
        }
        Ok(Self {
            mean,
            qfi: 4.0 * variance,
            shifted,
        })
    }

    /// `z_j(ε) = ⟨ψ_j|φ+(ε)⟩` and `ż_j(ε) = dz_j/dε`.
    pub fn amplitudes(
        &self,
        state: &ProbeState,
        basis: &MeasurementBasis,
        epsilon: f64,
    ) -> (Vec<Complex64>, Vec<Complex64>) {
        let evolved: Vec<Complex64> = state
            .amplitudes
            .iter()
            .zip(&self.shifted)
            .map(|(c, d)| c * Complex64::from_polar(1.0, -d * epsilon))
            .collect();
        let derivative: Vec<Complex64> = evolved
            .iter()
            .zip(&self.shifted)
            .map(|(c, d)| Complex64::new(0.0, -d) * c)
            .collect();
        (project(basis, &evolved), project(basis, &derivative))
    }
}

/// `⟨ψ_j|v⟩ = Σ_l conj(b_{j,l}) v_l` for every `j`.
pub(crate) fn project(basis: &MeasurementBasis, v: &[Complex64]) -> Vec<Complex64> {
    let b = &basis.coefficients;
    (0..b.nrows())
        .map(|j| (0..b.ncols()).map(|l| b[(j, l)].conj() * v[l]).sum())
        .collect()
}

fn check_basis(state: &ProbeState, gen: &Generator, basis: &MeasurementBasis) -> Result<()> {
    check_dim(gen.dim(), state.dim())?;
    check_dim(gen.dim(), basis.dim())
}

/// Pairs `(z_j, w_j)` with `z_j = ⟨ψ_j|φ+(ε)⟩` and `w_j = ⟨ψ_j|φ−(ε)⟩`.
pub fn inner_products(
    state: &ProbeState,
    gen: &Generator,
    basis: &MeasurementBasis,
    epsilon: f64,
) -> Result<Vec<(Complex64, Complex64)>> {
    check_basis(state, gen, basis)?;
    let k = Kinematics::new(state, gen)?;
    let (z, zdot) = k.amplitudes(state, basis, epsilon);
    // φ−(ε) = (2/√F_Q) d/dε φ+(ε)
    let scale = 2.0 / k.qfi.sqrt();
    Ok(z.into_iter().zip(zdot).map(|(z, d)| (z, d * scale)).collect())
}

/// Outcome probabilities `p_j(ε) = |⟨ψ_j|φ+(ε)⟩|²`.
pub fn probabilities(
    state: &ProbeState,
    gen: &Generator,
    basis: &MeasurementBasis,
    epsilon: f64,
) -> Result<Vec<f64>> {
    check_basis(state, gen, basis)?;
    let mean = mean_a(state, gen)?;
    let evolved = evolved_amplitudes(state, gen, mean, epsilon);
    Ok(project(basis, &evolved)
        .into_iter()
        .map(|z| z.norm_sqr())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn two_level() -> (Generator, ProbeState) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        (
            Generator::new(vec![0.0, 2.0]).unwrap(),
            ProbeState::new(vec![c(s, 0.0), c(s, 0.0)]).unwrap(),
        )
    }

    #[test]
    fn generator_rejects_bad_spectra() {
        assert!(Generator::new(vec![1.0]).is_err());
        assert!(Generator::new(vec![0.0, 0.0]).is_err());
        assert!(Generator::new(vec![2.0, 1.0]).is_err());
        assert!(Generator::new(vec![0.0, f64::NAN]).is_err());
        assert!(Generator::with_labels(vec![0.0, 1.0], vec![3, 3]).is_err());
        assert_eq!(Generator::spin(3).unwrap().eigenvalues(), &[-1.5, -0.5, 0.5, 1.5]);
    }

    #[test]
    fn direct_sum_allows_repeats_across_blocks() {
        let g = Generator::direct_sum(&[Generator::spin(1).unwrap(), Generator::spin(2).unwrap()])
            .unwrap();
        assert_eq!(g.eigenvalues(), &[-0.5, 0.5, -1.0, 0.0, 1.0]);
        assert_eq!(g.blocks(), &[0..2, 2..5]);
        assert!(g.is_block_diagonal());
    }

    #[test]
    fn state_normalization() {
        assert!(ProbeState::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).is_err());
        let s = ProbeState::normalized(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert_abs_diff_eq!(s.moduli()[1], std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        assert!(ProbeState::normalized(vec![c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn evolve_identity_and_two_level() {
        let (g, s) = two_level();
        assert_eq!(evolve(&s, &g, 0.0).unwrap(), s);
        let eps = 0.37;
        let e = evolve(&s, &g, eps).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(e.amplitudes()[0].re, h * eps.cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(e.amplitudes()[0].im, h * eps.sin(), epsilon = 1e-15);
        assert_abs_diff_eq!(e.amplitudes()[1].re, h * eps.cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(e.amplitudes()[1].im, -h * eps.sin(), epsilon = 1e-15);
    }

    #[test]
    fn evolve_dimension_mismatch() {
        let (_, s) = two_level();
        let g = Generator::new(vec![0.0, 1.0, 2.0]).unwrap();
        assert!(matches!(
            evolve(&s, &g, 0.1),
            Err(QibError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn mean_and_qfi_examples() {
        let g = Generator::number(8).unwrap();
        let mut amps = vec![c(0.0, 0.0); 9];
        amps[3] = c(1.0, 0.0);
        let eig = ProbeState::new(amps.clone()).unwrap();
        assert_eq!(mean_a(&eig, &g).unwrap(), 3.0);
        assert_eq!(qfi(&eig, &g).unwrap(), 0.0);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        amps[3] = c(0.0, 0.0);
        amps[0] = c(h, 0.0);
        amps[4] = c(h, 0.0);
        let noon = ProbeState::new(amps).unwrap();
        assert_abs_diff_eq!(qfi(&noon, &g).unwrap(), 16.0, epsilon = 1e-12);

        let (g2, s2) = two_level();
        assert_abs_diff_eq!(mean_a(&s2, &g2).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn qfi_of_spin_extremal_superposition() {
        for two_j in 1..=8usize {
            let g = Generator::spin(two_j).unwrap();
            let mut amps = vec![c(0.0, 0.0); two_j + 1];
            amps[0] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            amps[two_j] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            let s = ProbeState::new(amps).unwrap();
            let j = two_j as f64 / 2.0;
            assert_abs_diff_eq!(qfi(&s, &g).unwrap(), 4.0 * j * j, epsilon = 1e-12);
        }
    }

    #[test]
    fn phi_minus_two_level_and_degenerate() {
        let (g, s) = two_level();
        let m = phi_minus(&s, &g).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(m.amplitudes()[0].im, h, epsilon = 1e-15);
        assert_abs_diff_eq!(m.amplitudes()[1].im, -h, epsilon = 1e-15);
        assert_abs_diff_eq!(m.amplitudes()[0].re, 0.0, epsilon = 1e-15);

        let eig = ProbeState::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(phi_minus(&eig, &g), Err(QibError::DegenerateState));
    }

    #[test]
    fn phi_minus_orthonormal_for_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let m = rng.random_range(2..10);
            let g = Generator::new((0..m).map(|k| k as f64 + rng.random::<f64>() * 0.5).collect())
                .unwrap();
            let amps: Vec<Complex64> = (0..m)
                .map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect();
            let s = ProbeState::normalized(amps).unwrap();
            let pm = phi_minus(&s, &g).unwrap();
            assert!(pm.inner(&s).unwrap().norm() <= 1e-12);
            assert_abs_diff_eq!(norm_sqr(pm.amplitudes()), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn two_level_inner_products_and_probabilities() {
        let (g, s) = two_level();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let basis =
            MeasurementBasis::from_rows(vec![vec![c(h, 0.0), c(h, 0.0)], vec![c(h, 0.0), c(-h, 0.0)]])
                .unwrap();
        for &eps in &[0.0, 0.3, 1.2, 2.9] {
            let zw = inner_products(&s, &g, &basis, eps).unwrap();
            assert_abs_diff_eq!(zw[0].0.re, f64::cos(eps), epsilon = 1e-14);
            assert_abs_diff_eq!(zw[0].0.im, 0.0, epsilon = 1e-14);
            let p = probabilities(&s, &g, &basis, eps).unwrap();
            assert_abs_diff_eq!(p[0], eps.cos().powi(2), epsilon = 1e-14);
            assert_abs_diff_eq!(p[1], eps.sin().powi(2), epsilon = 1e-14);
        }
        // at ε = 0 the w_j are the basis rows applied to φ−
        let zw = inner_products(&s, &g, &basis, 0.0).unwrap();
        let pm = phi_minus(&s, &g).unwrap();
        for (j, (_, w)) in zw.iter().enumerate() {
            let direct: Complex64 = basis
                .vector(j)
                .iter()
                .zip(pm.amplitudes())
                .map(|(b, a)| b.conj() * a)
                .sum();
            assert_abs_diff_eq!((w - direct).norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn probabilities_sum_to_one_on_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let m = rng.random_range(2..9);
            let g = Generator::new((0..m).map(|k| k as f64 * 0.7 - 1.0).collect()).unwrap();
            let s = ProbeState::normalized(
                (0..m)
                    .map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                    .collect(),
            )
            .unwrap();
            let b = MeasurementBasis::random(m, &mut rng);
            let eps = rng.random_range(-10.0..10.0);
            let p = probabilities(&s, &g, &b, eps).unwrap();
            assert!(p.iter().all(|&x| x >= 0.0));
            assert_abs_diff_eq!(p.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn probe_basis_first_outcome_is_certain_at_zero() {
        let (g, s) = two_level();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let b = MeasurementBasis::from_rows(vec![vec![c(h, 0.0), c(h, 0.0)], vec![c(0.0, h), c(0.0, -h)]])
            .unwrap();
        let zw = inner_products(&s, &g, &b, 0.0).unwrap();
        assert_abs_diff_eq!(zw[0].0.norm(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(zw[1].0.norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn basis_construction_checks() {
        assert!(MeasurementBasis::from_rows(vec![vec![c(1.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]])
            .is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for m in 2..20 {
            assert!(MeasurementBasis::random(m, &mut rng).unitarity_defect() <= 1e-12);
        }
    }

    #[test]
    fn wrap_phase_range() {
        assert_abs_diff_eq!(wrap_phase(3.0 * PI), PI, epsilon = 1e-12);
        assert_abs_diff_eq!(wrap_phase(-PI), PI, epsilon = 1e-12);
        assert_abs_diff_eq!(wrap_phase(0.5 - 4.0 * PI), 0.5, epsilon = 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn state_strategy() -> impl Strategy<Value = (Generator, ProbeState)> {
            (2usize..8).prop_flat_map(|m| {
                (
                    prop::collection::vec(0.1f64..2.0, m),
                    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), m),
                )
                    .prop_filter_map("nonzero", |(gaps, amps)| {
                        let mut acc = -3.0;
                        let eig: Vec<f64> = gaps
                            .iter()
                            .map(|g| {
                                acc += g;
                                acc
                            })
                            .collect();
                        let amps: Vec<Complex64> =
                            amps.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
                        Some((Generator::new(eig).ok()?, ProbeState::normalized(amps).ok()?))
                    })
            })
        }

        proptest! {
            #[test]
            fn evolution_preserves_norm((g, s) in state_strategy(), eps in -1000.0f64..1000.0) {
                let e = evolve(&s, &g, eps).unwrap();
                prop_assert!((norm_sqr(e.amplitudes()) - 1.0).abs() <= 1e-12);
            }

            #[test]
            fn evolution_composes((g, s) in state_strategy(), e1 in -5.0f64..5.0, e2 in -5.0f64..5.0) {
                let two = evolve(&evolve(&s, &g, e1).unwrap(), &g, e2).unwrap();
                let one = evolve(&s, &g, e1 + e2).unwrap();
                for (a, b) in two.amplitudes().iter().zip(one.amplitudes()) {
                    prop_assert!((a - b).norm() <= 1e-12);
                }
            }

            #[test]
            fn probabilities_ignore_global_phase((g, s) in state_strategy(), eps in -5.0f64..5.0, gamma in -4.0f64..4.0, seed in 0u64..1000) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let b = MeasurementBasis::random(g.dim(), &mut rng);
                let p = probabilities(&s, &g, &b, eps).unwrap();
                let q = probabilities(&s.with_global_phase(gamma), &g, &b, eps).unwrap();
                for (x, y) in p.iter().zip(&q) {
                    prop_assert!((x - y).abs() <= 1e-12);
                }
            }

            #[test]
            fn qfi_nonnegative_and_zero_only_for_eigenstates((g, s) in state_strategy()) {
                let f = qfi(&s, &g).unwrap();
                prop_assert!(f >= 0.0);
                if s.support().len() >= 2 {
                    prop_assert!(f > 0.0);
                }
            }
        }
    }
}
