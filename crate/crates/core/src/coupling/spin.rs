use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::params::ElectronParams;
use crate::constants::{BOHR_MAGNETON, ELECTRON_G_FACTOR, HBAR, MU0};
use crate::dynamics::{
    collapse_set, evolve_lindblad, recommended_step, Decoherence, Envelope, EvolutionConfig,
    HamiltonianTerm,
    LindbladModel,
};
use crate::error::{Error, Result};
use crate::quantum::{embed, mode_operators, sigma_minus, state_fidelity, HilbertSpace, QuantumState};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinMotionRate {
    /// Field gradient at the trap centre, T/m.
    pub gradient: f64,
    /// Sideband Rabi rate, rad/s.
    pub omega_r: f64,
    /// Red-sideband drive frequency `omega_y - omega_s`, rad/s.
    pub drive_frequency: f64,
}

/// Gradient of an anti-Helmholtz coil pair of radius `radius` at half-spacing
/// `radius / 2` carrying `current`, and the resulting spin–motion rate
/// `mu_B B' y0 / (2 hbar)` for an oscillating gradient.
pub fn spin_motion_rate(radius: f64, current: f64, electron: &ElectronParams) -> Result<SpinMotionRate> {
    if !(radius > 0.0 && current >= 0.0) {
        return Err(Error::param("coil", "radius must be > 0 and current >= 0"));
    }
    let d = radius / 2.0;
    let gradient = 3.0 * MU0 * current * radius * radius * d / (radius * radius + d * d).powf(2.5);
    let y0 = (HBAR / (2.0 * electron.mass * electron.omega_y())).sqrt();
    Ok(SpinMotionRate {
        gradient,
        omega_r: BOHR_MAGNETON * gradient * y0 / (2.0 * HBAR),
        drive_frequency: electron.omega_y() - electron.omega_s,
    })
}

/// Red-sideband map of a motional Fock qubit onto the spin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinMapOutcome {
    /// `pi / (2 Omega_R)`, s.
    pub map_time: f64,
    /// Fidelity of `|1, down> -> |0, up>` (full state, up to the fixed phase -i).
    pub excited_fidelity: f64,
    /// Fidelity of `|0, down> -> |0, down>`.
    pub ground_fidelity: f64,
    /// Map fidelity averaged over the six cardinal motional inputs, which
    /// equals the average over all pure inputs for a qubit channel.
    pub fidelity: f64,
}

/// Simulate `H = Omega_R (sigma+ a + a^dagger sigma-)` with motional heating
/// over `duration` (default: the map time), motion truncated at `motion_dim`.
///
/// Input `(alpha|0> + beta|1>)|down>` should end in `|0>(alpha|down> - i beta|up>)`.
pub fn spin_motion_map_sim(
    omega_r: f64,
    heating: f64,
    duration: Option<f64>,
    motion_dim: usize,
) -> Result<SpinMapOutcome> {
    if !(omega_r > 0.0) {
        return Err(Error::param("omega_r", "must be > 0"));
    }
    let map_time = duration.unwrap_or(PI / (2.0 * omega_r));
    let space = HilbertSpace::new(vec![motion_dim, 2], vec!["motion", "spin"])?;
    let a = embed(&mode_operators(motion_dim)?.a, &space, 0)?;
    let sm = embed(&sigma_minus(), &space, 1)?;
    let terms = HamiltonianTerm::with_conjugate(&sm.adjoint() * &a, Envelope::real(omega_r));
    let model = LindbladModel::new(space.clone())
        .with_terms(terms)
        .with_collapse(collapse_set(&space, &[(0, Decoherence::Heating { rate: heating })])?);
    let cfg = EvolutionConfig::rk4(map_time, recommended_step(0.0, map_time));

    let s = std::f64::consts::FRAC_1_SQRT_2;
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let inputs = [
        (c(1.0, 0.0), c(0.0, 0.0)),
        (c(0.0, 0.0), c(1.0, 0.0)),
        (c(s, 0.0), c(s, 0.0)),
        (c(s, 0.0), c(-s, 0.0)),
        (c(s, 0.0), c(0.0, s)),
        (c(s, 0.0), c(0.0, -s)),
    ];
    let fidelities = crate::par::try_map(crate::par::Exec::default(), &inputs, |&(alpha, beta)| {
        let rho0 = QuantumState::superposition(space.clone(), &[(alpha, &[0, 0]), (beta, &[1, 0])])?;
        let target = QuantumState::superposition(
            space.clone(),
            &[(alpha, &[0, 0]), (beta * c(0.0, -1.0), &[0, 1])],
        )?;
        let tr = evolve_lindblad(&model, &rho0, &cfg)?;
        state_fidelity(&tr.final_state, &target)
    })?;
    Ok(SpinMapOutcome {
        map_time,
        excited_fidelity: fidelities[1],
        ground_fidelity: fidelities[0],
        fidelity: fidelities.iter().sum::<f64>() / fidelities.len() as f64,
    })
}

/// Spin coherence time for white field noise of one-sided power spectral
/// density `psd` (T^2/Hz): `Gamma_2 = gamma^2 psd / 4`. Infinite for zero noise.
pub fn spin_coherence(psd: f64) -> Result<f64> {
    if !(psd >= 0.0) {
        return Err(Error::param("S_B", "must be >= 0"));
    }
    if psd == 0.0 {
        return Ok(f64::INFINITY);
    }
    let gamma = ELECTRON_G_FACTOR * BOHR_MAGNETON / HBAR;
    Ok(4.0 / (gamma * gamma * psd))
}
