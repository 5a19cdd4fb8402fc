//! Pure-state quantum estimation models with globally optimal projective
//! measurements.
//!
//! A probe `|φ+⟩` is imprinted with a parameter offset `ε` by the unitary
//! `exp(-i(Â - ⟨Â⟩)ε)`. Everything here works in the eigenbasis of the
//! generator `Â`, where evolution is a diagonal phase map. The crate builds
//! probes and measurement bases for which the classical Fisher information
//! equals the quantum Fisher information `4 Var(Â)` at *every* offset, and
//! provides the diagnostics that certify it numerically.
//!
//! Module map:
//!
//! - [`model`]: generators, probe states, measurement bases, evolution and
//!   elementary expectation values.
//! - [`states`]: builders and certificates for admissible probes.
//! - [`measurements`]: the Fourier-shift and Wigner-d measurement families.
//! - [`fisher`]: classical/quantum Fisher information, SLD operators, and
//!   saturation sweeps.
//! - [`scenarios`]: end-to-end interferometer, bosonic, block-diagonal and
//!   Heisenberg-limit runs.
//! - [`io`]: the JSON file schemas shared by the CLI and the bindings.

pub mod error;
pub mod fisher;
pub mod io;
pub mod measurements;
pub mod model;
pub mod scenarios;
pub mod states;

pub use error::{QibError, Result};
pub use fisher::{
    classical_fisher, lambda_values, probability_derivatives, rewritten_condition_check, saturation_residual,
    saturation_sweep, saturation_sweep_with, sld_assemble, EpsilonGrid, SaturationReport,
    SldFamily, Tolerances,
};
pub use measurements::{
    canonical_beta, check_balance, check_phase_condition, fourier_basis, fourier_f,
    jacobi_at_zero, shift_operator, wigner_basis, wigner_d_half_pi, FourierBasisSpec,
    PhaseConditionResult, WignerBasisSpec,
};
pub use model::{
    evolve, inner_products, mean_a, phi_minus, probabilities, qfi, Generator, MeasurementBasis,
    ProbeState,
};
pub use num_complex::Complex64;
pub use states::{
    build_symmetric_state, certify, heisenberg_qfi, heisenberg_state, skewness,
    spin_symmetric_state, truncated_coherent_state, SymmetryCertificate,
};
pub use scenarios::{ScenarioConfig, ScenarioOutcome};
