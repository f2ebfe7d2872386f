//! Construction, cut analysis and LOCC protocol simulation for the
//! four-party unlockable bound-entangled state.
//!
//! Qubit basis convention: `|0⟩` is spin up, `|1⟩` spin down, and composite
//! indices are big-endian in label order (A is the most significant factor).

pub mod analysis;
pub mod error;
pub mod factory;
pub mod layout;
pub mod matrix;
pub mod protocol;
pub mod state;

pub use analysis::{
    expansion_equality_check, negativity, permutation_invariant, ppt_check, separable_ensemble_for_cut,
    PptReport, SeparableEnsemble,
};
pub use error::{Error, Result};
pub use factory::{
    bell_state, generalized_bell_state, heisenberg_weyl, pauli_sigma, smolin_qudit_state, smolin_state,
    BellKind, SigmaIndex, WeylLabel,
};
pub use layout::{Cut, PermutationMap, SubsystemLayout, MAX_DIM};
pub use matrix::{frobenius_distance, hermitian_eigenvalues, kron, ComplexMatrix};
pub use protocol::{
    apply_correction, bell_basis_measurement, equivalence_check, superadditivity_protocol, teleport_view,
    unlock, MeasurementBranch, OutcomeLabel, PartyId, RegisterAssignment, Transcript, TranscriptEvent,
};
pub use state::{fidelity_pure, partial_trace, partial_transpose, permute_subsystems, DensityOperator, StateVector};

pub use num_complex::Complex64;
