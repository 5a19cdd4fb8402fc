//! Measurement bases that saturate the quantum Fisher information for every
//! offset, and validators for the modulus and phase conditions they rely on.

mod checks;
mod fourier;
mod wigner;

pub use checks::{
    check_balance, check_phase_condition, check_phase_condition_with_tolerance,
    PhaseConditionResult, PHASE_TOL,
};
pub use fourier::{
    canonical_beta, embed_on_support, fourier_basis, fourier_f, fourier_matched_phases,
    fourier_orthogonality_sum, matched_fourier_basis, shift_operator, FourierBasisSpec,
};
pub use wigner::{jacobi_at_zero, wigner_basis, wigner_d_half_pi, WignerBasisSpec};
