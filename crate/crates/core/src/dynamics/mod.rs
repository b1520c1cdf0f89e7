//! Open-system time evolution.
//!
//! [`evolve_lindblad`] integrates the master equation for a [`LindbladModel`]
//! whose Hamiltonian is a sum of static operators times scalar envelopes.
//! Hamiltonians are stored divided by hbar, in rad/s.
//!
//! [`evolve_gaussian`] propagates the second moments `<a_j^dagger a_k>` of a
//! set of linearly coupled modes with loss and heating; it is exact for
//! quadratic Hamiltonians and linear jump operators, independent of
//! truncation.

mod collapse;
mod gaussian;
mod lindblad;
mod sparse;

pub use collapse::{build_collapse_set, collapse_set, Decoherence};
pub use gaussian::{evolve_gaussian, evolve_gaussian_sampled, GaussianModel, GaussianTrajectory};
pub use lindblad::{
    evolve_lindblad, recommended_step, CollapseOp, Envelope, EvolutionConfig, HamiltonianTerm,
    LindbladModel, Method, Tone, Trajectory,
};

/// Trace drift that aborts an integration.
pub const TRACE_DRIFT_LIMIT: f64 = 1e-6;
/// Smallest checkpoint eigenvalue accepted during integration.
pub const CHECKPOINT_POSITIVITY_LIMIT: f64 = -1e-6;
