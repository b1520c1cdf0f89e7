//! Truncated Fock-space operator algebra.
//!
//! Operators and density matrices are dense complex matrices. Subsystem order
//! in a [`HilbertSpace`] is the Kronecker order: the first subsystem is the most
//! significant index. Qubits use the basis `|0> = ground`, `|1> = excited`, so a
//! qubit looks like a two-level truncated mode.

mod hilbert;
mod operator;
mod state;

pub use hilbert::HilbertSpace;
pub use operator::{
    embed, identity, mode_operators, sigma_minus, sigma_plus, sigma_z, ModeOperators,
    OperatorMatrix,
};
pub use state::{expectation, state_fidelity, QuantumState};

/// Hermiticity tolerance for operators flagged Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Trace and Hermiticity tolerance for density matrices.
pub const STATE_TOL: f64 = 1e-10;
/// Smallest eigenvalue accepted for a density matrix.
pub const POSITIVITY_TOL: f64 = -1e-8;
