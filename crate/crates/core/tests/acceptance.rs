//! Acceptance criteria 1-10. Criterion 11 (CLI determinism) lives in the CLI
//! crate's tests. Each test prints one PASS/FAIL line.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use qib_core::measurements::{fourier_matched_phases, fourier_orthogonality_sum};
use qib_core::states::{poisson_cutoff, random_admissible_state};
use qib_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(id: u32, what: &str, ok: bool, elapsed: Duration, detail: String) {
    println!(
        "{} criterion {id}: {what} ({detail}; {:.3} s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `mean ± d_k` with random increasing offsets, plus `mean` for odd `dim`.
fn symmetric_spectrum<R: Rng>(dim: usize, rng: &mut R) -> (Generator, f64) {
    let mean = rng.random_range(-2.0..2.0);
    let mut offsets = Vec::new();
    let mut d = 0.0;
    for _ in 0..dim / 2 {
        d += rng.random_range(0.3..1.5);
        offsets.push(d);
    }
    let mut eig: Vec<f64> = offsets.iter().rev().map(|d| mean - d).collect();
    if dim % 2 == 1 {
        eig.push(mean);
    }
    eig.extend(offsets.iter().map(|d| mean + d));
    (Generator::new(eig).unwrap(), mean)
}

/// Strictly increasing, otherwise unstructured.
fn random_spectrum<R: Rng>(dim: usize, rng: &mut R) -> Generator {
    let mut level = rng.random_range(-4.0..0.0);
    let eig = (0..dim)
        .map(|_| {
            level += rng.random_range(0.1..2.0);
            level
        })
        .collect();
    Generator::new(eig).unwrap()
}

/// Mirror-balanced moduli with full support.
fn symmetric_moduli<R: Rng>(dim: usize, rng: &mut R) -> Vec<f64> {
    let mut r = vec![0.0; dim];
    for l in 0..dim.div_ceil(2) {
        let x = rng.random_range(0.2..1.0);
        r[l] = x;
        r[dim - 1 - l] = x;
    }
    let n = r.iter().map(|x| x * x).sum::<f64>().sqrt();
    r.iter().map(|x| x / n).collect()
}

fn fourier_pair<R: Rng>(
    dim: usize,
    eta: Vec<f64>,
    rng: &mut R,
) -> (Generator, ProbeState, MeasurementBasis) {
    let (gen, _) = symmetric_spectrum(dim, rng);
    let free: Vec<f64> = (0..dim / 2).map(|_| rng.random_range(-PI..PI)).collect();
    let theta = fourier_matched_phases(&free, &eta).unwrap();
    let state = ProbeState::from_polar(&symmetric_moduli(dim, rng), &theta).unwrap();
    let basis = fourier_basis(&FourierBasisSpec::new(dim, canonical_beta(dim), eta).unwrap()).unwrap();
    (gen, state, basis)
}

#[test]
fn criterion_01_two_level_closed_form() {
    let t = Instant::now();
    let h = FRAC_1_SQRT_2;
    let gen = Generator::new(vec![0.0, 2.0]).unwrap();
    let state = ProbeState::new(vec![c(h, 0.0), c(h, 0.0)]).unwrap();
    let basis = MeasurementBasis::from_rows(vec![vec![c(h, 0.0), c(h, 0.0)], vec![c(h, 0.0), c(-h, 0.0)]]).unwrap();
    let grid = EpsilonGrid::uniform(-PI, PI, 101).unwrap();
    let report = saturation_sweep(&state, &gen, &basis, &grid).unwrap();
    let mut worst = (report.qfi - 4.0).abs();
    let mut worst_p = 0.0f64;
    for (&eps, &f) in grid.points().iter().zip(&report.cfi) {
        worst = worst.max((f - 4.0).abs());
        let p = probabilities(&state, &gen, &basis, eps).unwrap();
        let (cs, sn) = (eps.cos().powi(2), eps.sin().powi(2));
        worst_p = worst_p.max((p[0] - cs).abs()).max((p[1] - sn).abs());
    }
    let elapsed = t.elapsed();
    let ok = report.cfi.len() == 101 && worst <= 1e-10 && worst_p <= 1e-12 && elapsed < Duration::from_secs(1);
    verdict(1, "two-level closed form CFI = F_Q = 4", ok, elapsed, format!("max |F - 4| = {worst:.2e}, max |p - closed form| = {worst_p:.2e}"));
    assert!(ok);
}

#[test]
fn criterion_02_fourier_family_saturates() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut gap, mut residual) = (0.0f64, 0.0f64);
    let mut certified = true;
    for dim in 2..=8 {
        for _ in 0..20 {
            let eta: Vec<f64> = (0..dim).map(|_| rng.random_range(-PI..PI)).collect();
            let (gen, state, basis) = fourier_pair(dim, eta, &mut rng);
            certified &= certify(&state, &gen).unwrap().admissible;
            let grid = EpsilonGrid::default_for(&state, &gen, 101).unwrap();
            let r = saturation_sweep(&state, &gen, &basis, &grid).unwrap();
            gap = gap.max(r.max_relative_gap);
            residual = residual.max(r.max_im_residual);
        }
    }
    let elapsed = t.elapsed();
    let ok = certified && gap <= 1e-8 && residual <= 1e-10 && elapsed < Duration::from_secs(30);
    verdict(2, "Fourier family, M = 2..8, 20 states each", ok, elapsed, format!("max gap {gap:.2e}, max residual {residual:.2e}"));
    assert!(ok);
}

#[test]
fn criterion_03_wigner_family_saturates_and_is_rotation_invariant() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut gap, mut residual, mut rotation) = (0.0f64, 0.0f64, 0.0f64);
    for two_j in 1..=5usize {
        let dim = two_j + 1;
        for trial in 0..10 {
            // conjugate pairs c_{-m} = c_m*, real centre
            let moduli = symmetric_moduli(dim, &mut rng);
            let mut amps = vec![c(0.0, 0.0); dim];
            for l in 0..dim.div_ceil(2) {
                let d = dim - 1 - l;
                let phase = if l == d || trial == 0 { 0.0 } else { rng.random_range(-PI..PI) };
                amps[l] = Complex64::from_polar(moduli[l], phase);
                amps[d] = amps[l].conj();
            }
            let (gen, state) = spin_symmetric_state(dim, &amps).unwrap();
            let vartheta = rng.random_range(-PI..PI);
            let base = wigner_basis(&WignerBasisSpec::new(dim, vartheta).unwrap()).unwrap();
            let grid = EpsilonGrid::default_for(&state, &gen, 101).unwrap();
            let reference = saturation_sweep(&state, &gen, &base, &grid).unwrap();
            gap = gap.max(reference.max_relative_gap);
            residual = residual.max(reference.max_im_residual);
            for phi in [0.4, 1.3, -2.2] {
                let h: Vec<f64> = gen.eigenvalues().iter().map(|m| -phi * m).collect();
                let r = saturation_sweep(&state, &gen, &base.with_eigenphase_map(&h).unwrap(), &grid).unwrap();
                gap = gap.max(r.max_relative_gap);
                residual = residual.max(r.max_im_residual);
                for (a, b) in r.cfi.iter().zip(&reference.cfi) {
                    rotation = rotation.max((a - b).abs());
                }
            }
        }
    }
    let elapsed = t.elapsed();
    let ok = gap <= 1e-8 && residual <= 1e-10 && rotation <= 1e-9;
    verdict(3, "Wigner family, j = 1/2..5/2, with basis rotations", ok, elapsed, format!("max gap {gap:.2e}, max residual {residual:.2e}, max |F(phi) - F(0)| {rotation:.2e}"));
    assert!(ok);
}

#[test]
fn criterion_04_broken_conditions_are_detected() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut weakest = f64::INFINITY;
    let mut failures = 0;
    for trial in 0..100 {
        let dim = rng.random_range(3..=8);
        let (gen, state, basis) = fourier_pair(dim, vec![0.0; dim], &mut rng);
        let mut moduli = state.moduli();
        let mut phases = state.phases();
        if trial % 2 == 0 {
            let l = rng.random_range(0..dim);
            phases[l] += 0.3;
        } else {
            let mut l = rng.random_range(0..dim);
            if dim % 2 == 1 && l == dim / 2 {
                l = 0;
            }
            moduli[l] *= 1.1;
        }
        let n = moduli.iter().map(|x| x * x).sum::<f64>().sqrt();
        moduli.iter_mut().for_each(|x| *x /= n);
        let broken = ProbeState::from_polar(&moduli, &phases).unwrap();
        let grid = EpsilonGrid::default_for(&broken, &gen, 101).unwrap();
        let r = saturation_sweep(&broken, &gen, &basis, &grid).unwrap();
        weakest = weakest.min(r.max_im_residual);
        failures += (r.max_im_residual <= 1e-4) as usize;
    }
    let elapsed = t.elapsed();
    let ok = failures == 0;
    verdict(4, "100 perturbed probes all show residual > 1e-4", ok, elapsed, format!("smallest max residual {weakest:.2e}, undetected {failures}"));
    assert!(ok);
}

#[test]
fn criterion_05_heisenberg_limit() {
    let t = Instant::now();
    let gen = Generator::number(10).unwrap();
    let top = heisenberg_state(&gen, 2.0, 0.0).unwrap();
    let f_top = qfi(&top, &gen).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut max_f = 0.0f64;
    for _ in 0..10_000 {
        let s = random_admissible_state(&gen, 2.0, &mut rng).unwrap();
        max_f = max_f.max(qfi(&s, &gen).unwrap());
    }
    let elapsed = t.elapsed();
    let ok = (f_top - 16.0).abs() <= 1e-12 && heisenberg_qfi(&gen, 2.0).unwrap() == 16.0 && max_f <= 16.0 + 1e-9;
    verdict(5, "bound 16 reached, never exceeded by 10^4 samples", ok, elapsed, format!("F_Q = {f_top}, max sampled {max_f:.12}"));
    assert!(ok);
}

#[test]
fn criterion_06_information_inequality() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = f64::NEG_INFINITY;
    for i in 0..1000 {
        let dim = rng.random_range(2..=8);
        let state;
        let gen;
        if i % 3 == 0 {
            let (g, mean) = symmetric_spectrum(dim, &mut rng);
            state = random_admissible_state(&g, mean, &mut rng).unwrap();
            gen = g;
        } else {
            gen = random_spectrum(dim, &mut rng);
            let amps: Vec<Complex64> = (0..dim)
                .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            state = ProbeState::normalized(amps).unwrap();
        }
        let basis = MeasurementBasis::random(dim, &mut rng);
        let eps = rng.random_range(-PI..PI);
        let f = classical_fisher(&state, &gen, &basis, eps).unwrap();
        worst = worst.max(f - qfi(&state, &gen).unwrap());
    }
    let elapsed = t.elapsed();
    let ok = worst <= 1e-9;
    verdict(6, "CFI <= QFI on 1000 random triples", ok, elapsed, format!("max F - F_Q = {worst:.2e}"));
    assert!(ok);
}

/// `exp(i π/2 J_y)` through the eigendecomposition of the Hermitian `J_y`.
fn rotation_oracle(dim: usize) -> DMatrix<Complex64> {
    let j = (dim as f64 - 1.0) / 2.0;
    let mut jy = DMatrix::<Complex64>::zeros(dim, dim);
    for k in 0..dim - 1 {
        let m = k as f64 - j;
        let up = (j * (j + 1.0) - m * (m + 1.0)).sqrt();
        jy[(k + 1, k)] = c(0.0, -up / 2.0);
        jy[(k, k + 1)] = c(0.0, up / 2.0);
    }
    let eig = jy.symmetric_eigen();
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|x| Complex64::from_polar(1.0, PI / 2.0 * x)));
    &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}

#[test]
fn criterion_07_wigner_d_matches_matrix_exponential() {
    let t = Instant::now();
    let mut worst = 0.0f64;
    for dim in 2..=41 {
        let d = wigner_d_half_pi(dim).unwrap();
        let oracle = rotation_oracle(dim);
        for r in 0..dim {
            for col in 0..dim {
                worst = worst.max((oracle[(r, col)] - d[(r, col)]).norm());
            }
        }
    }
    let elapsed = t.elapsed();
    let ok = worst <= 1e-10 && elapsed < Duration::from_secs(5);
    verdict(7, "Jacobi construction vs exp(i pi/2 J_y), M <= 41", ok, elapsed, format!("max entry error {worst:.2e}"));
    assert!(ok);
}

#[test]
fn criterion_08_fourier_orthonormality_identity() {
    let t = Instant::now();
    let mut worst = 0.0f64;
    for dim in 2..=32usize {
        let f: Vec<i64> = (1..=dim).map(|l| fourier_f(l, dim).unwrap()).collect();
        for j in 0..dim {
            for jp in 0..dim {
                let delta = if j == jp { dim as f64 } else { 0.0 };
                // direct floating-point evaluation next to the library sum
                let direct: Complex64 = f
                    .iter()
                    .map(|&fl| Complex64::from_polar(1.0, PI * (j as f64 - jp as f64) * fl as f64 / dim as f64))
                    .sum();
                let lib = fourier_orthogonality_sum(dim, j, jp).unwrap();
                let dev = (direct - delta).norm().max((lib - delta).norm());
                worst = worst.max(dev / dim as f64);
            }
        }
    }
    let elapsed = t.elapsed();
    let ok = worst <= 1e-12;
    verdict(8, "Fourier orthonormality identity, M = 2..32", ok, elapsed, format!("max deviation / M = {worst:.2e}"));
    assert!(ok);
}

#[test]
fn criterion_09_bosonic_mode() {
    let t = Instant::now();
    let nbar = 20usize;
    let slope = 0.37;
    let (gen, state) = truncated_coherent_state(nbar, slope).unwrap();
    let dim = gen.dim();
    let basis = fourier_basis(&FourierBasisSpec::new(dim, canonical_beta(dim), vec![0.0; dim]).unwrap()).unwrap();
    let grid = EpsilonGrid::default_for(&state, &gen, 101).unwrap();
    let sym = saturation_sweep(&state, &gen, &basis, &grid).unwrap();

    // coherent amplitudes e^{-n/2} a^k / sqrt(k!) summed over all k
    let mut overlap = c(0.0, 0.0);
    let mut log_mod = -(nbar as f64) / 2.0;
    for k in 0..=400usize {
        if k > 0 {
            log_mod += 0.5 * (nbar as f64).ln() - 0.5 * (k as f64).ln();
        }
        let exact = Complex64::from_polar(log_mod.exp(), k as f64 * slope);
        if k < dim {
            overlap += exact.conj() * state.amplitudes()[k];
        }
    }
    let fidelity = overlap.norm_sqr();

    let cutoff = poisson_cutoff(4.0, 1e-16);
    let weights: Vec<f64> = {
        let mut w = vec![(-4.0f64).exp()];
        for k in 1..=cutoff {
            w.push(w[k - 1] * 4.0 / k as f64);
        }
        let s: f64 = w.iter().sum();
        w.iter().map(|x| (x / s).sqrt()).collect()
    };
    let pgen = Generator::number(cutoff).unwrap();
    let poisson = ProbeState::from_polar(&weights, &vec![0.0; cutoff + 1]).unwrap();
    let pbasis =
        fourier_basis(&FourierBasisSpec::new(cutoff + 1, canonical_beta(cutoff + 1), vec![0.0; cutoff + 1]).unwrap()).unwrap();
    let pgrid = EpsilonGrid::default_for(&poisson, &pgen, 101).unwrap();
    let pr = saturation_sweep(&poisson, &pgen, &pbasis, &pgrid).unwrap();

    let elapsed = t.elapsed();
    let ok = sym.max_relative_gap <= 1e-8 && fidelity > 0.98 && pr.max_im_residual > 1e-3;
    verdict(
        9,
        "symmetrized coherent state saturates, Poisson weights do not",
        ok,
        elapsed,
        format!(
            "gap {:.2e}, fidelity {fidelity:.6}, Poisson cutoff {cutoff} residual {:.2e}",
            sym.max_relative_gap, pr.max_im_residual
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_10_derivatives_match_finite_differences() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let h = 1e-5;
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let dim = rng.random_range(2..=8);
        let gen = random_spectrum(dim, &mut rng);
        let amps: Vec<Complex64> = (0..dim)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let state = ProbeState::normalized(amps).unwrap();
        let basis = MeasurementBasis::random(dim, &mut rng);
        let eps = rng.random_range(-PI..PI);
        let analytic = probability_derivatives(&state, &gen, &basis, eps).unwrap();
        let up = probabilities(&state, &gen, &basis, eps + h).unwrap();
        let down = probabilities(&state, &gen, &basis, eps - h).unwrap();
        for j in 0..dim {
            let fd = (up[j] - down[j]) / (2.0 * h);
            // relative, with a floor so vanishing slopes are compared absolutely
            worst = worst.max((analytic[j] - fd).abs() / analytic[j].abs().max(1e-3));
        }
    }
    let elapsed = t.elapsed();
    let ok = worst <= 1e-6;
    verdict(10, "analytic dp/d eps vs central differences, 100 cases", ok, elapsed, format!("max relative error {worst:.2e}"));
    assert!(ok);
}
