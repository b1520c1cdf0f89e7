//! Simulation and design toolkit for parametric frequency conversion between the
//! motion of a trapped electron and superconducting microwave circuits.
//!
//! The crate is organised by subsystem:
//!
//! * [`quantum`]: truncated Fock-space operators, states, fidelities.
//! * [`dynamics`]: Lindblad master-equation integration and a Gaussian
//!   second-moment solver for linear problems.
//! * [`coupling`]: coupling-rate calculators and Hamiltonian builders for the
//!   electron–resonator, electron–transmon, electron–electron and spin–motion
//!   interactions.
//! * [`trap`]: classical equations of motion in the RF trap with a parametric
//!   drive, spectra and stability maps.
//! * [`noise`]: surface dipole-noise integrals and heating-rate conversion.
//! * [`circuit`]: CPW impedance, CPW–cavity coupling, four-mode reduction and
//!   capacitive pickup estimates.
//! * [`scenario`]: named, fully resolved experiment configurations, sweeps,
//!   CSV output and run manifests.
//!
//! Data-parallel loops (sweeps, stability maps, surface meshes) go through
//! [`par`], which uses rayon when the `parallel` feature is enabled and runs
//! sequentially otherwise. Results are identical in both modes.

// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circuit;
pub mod constants;
pub mod coupling;
pub mod dynamics;
pub mod error;
pub mod noise;
pub mod par;
pub mod quantum;
pub mod scenario;
pub mod trap;

pub use error::{Error, Result};
pub use num_complex::Complex64;
