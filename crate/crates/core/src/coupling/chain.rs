use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::hamiltonian::{build_chain_hamiltonian, chain_space, ChainKind};
use super::rates::magic_detuning;
use crate::dynamics::{
    collapse_set, evolve_lindblad, recommended_step, Decoherence, EvolutionConfig, LindbladModel,
    Trajectory,
};
use crate::error::{Error, Result};
use crate::quantum::{embed, mode_operators, state_fidelity, OperatorMatrix, QuantumState};

/// A three-system state-transfer run starting from one electron quantum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub kind: ChainKind,
    /// Electron–bus rate, rad/s.
    pub g_p: f64,
    /// Bus–end rate (G_lt for a transmon, g_p for a second electron), rad/s.
    pub g_end: f64,
    /// Bus–end detuning, rad/s.
    pub delta: f64,
    /// Swap time, s. The Bell state is evaluated at half of it.
    pub tau_swap: f64,
    /// Heating of each electron, quanta/s.
    pub heating: f64,
    /// Bus energy decay time, s (infinite for lossless).
    pub bus_tau1: f64,
    /// Transmon `(tau1, tau2)`, s; ignored for electron–electron chains.
    pub transmon: Option<(f64, f64)>,
    pub electron_dim: usize,
    pub bus_dim: usize,
    /// Fixed RK4 step, s.
    pub step: f64,
    /// Observables are recorded every this many steps.
    pub record_every: usize,
}

impl ChainSpec {
    /// Magic-detuning run with the reference decoherence: 8100 quanta/s
    /// heating, 45 us bus, 70/92 us transmon, both links at `g_p`.
    pub fn magic(kind: ChainKind, n: u32, g_p: f64) -> Result<Self> {
        let (delta, tau_swap) = magic_detuning(n, g_p)?;
        Ok(Self {
            kind,
            g_p,
            g_end: g_p,
            delta,
            tau_swap,
            heating: 8100.0,
            bus_tau1: 45e-6,
            transmon: match kind {
                ChainKind::ElectronTransmon => Some((70e-6, 92e-6)),
                ChainKind::ElectronElectron => None,
            },
            electron_dim: 4,
            bus_dim: 4,
            step: recommended_step(delta, tau_swap),
            record_every: 10,
        })
    }

    pub fn lossless(mut self) -> Self {
        self.heating = 0.0;
        self.bus_tau1 = f64::INFINITY;
        self.transmon = None;
        self
    }
}

#[derive(Clone, Debug)]
pub struct ChainOutcome {
    /// Observables: electron, bus, end occupation.
    pub trajectory: Trajectory,
    /// Fidelity to `|0,0,1>` at `tau_swap`.
    pub swap_fidelity: f64,
    /// Fidelity to `(|0,0,1> - i|1,0,0>)/sqrt 2` at `tau_swap / 2`.
    pub bell_fidelity: f64,
    /// Bus occupation at `tau_swap`.
    pub bus_population: f64,
    pub tau_swap: f64,
}

/// Bell target `(|0,_,1> - i |1,_,0>)/sqrt 2` with the bus empty.
pub fn bell_target(spec: &ChainSpec) -> Result<QuantumState> {
    let space = chain_space(spec.kind, spec.electron_dim, spec.bus_dim)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    QuantumState::superposition(
        space,
        &[
            (Complex64::new(s, 0.0), &[0, 0, 1]),
            (Complex64::new(0.0, -s), &[1, 0, 0]),
        ],
    )
}

pub fn simulate_chain(spec: &ChainSpec) -> Result<ChainOutcome> {
    if !(spec.tau_swap > 0.0) {
        return Err(Error::param("tau_swap", "must be > 0"));
    }
    let space = chain_space(spec.kind, spec.electron_dim, spec.bus_dim)?;
    let terms = build_chain_hamiltonian(&space, spec.kind, spec.g_p, spec.g_end, spec.delta)?;
    let mut channels = vec![(0, Decoherence::Heating { rate: spec.heating })];
    if spec.bus_tau1.is_finite() {
        channels.push((1, Decoherence::Resonator { tau1: spec.bus_tau1 }));
    }
    match (spec.kind, spec.transmon) {
        (ChainKind::ElectronTransmon, Some((tau1, tau2))) => {
            channels.push((2, Decoherence::Qubit { tau1, tau2 }))
        }
        (ChainKind::ElectronElectron, _) => {
            channels.push((2, Decoherence::Heating { rate: spec.heating }))
        }
        _ => {}
    }
    let model = LindbladModel::new(space.clone())
        .with_terms(terms)
        .with_collapse(collapse_set(&space, &channels)?);

    let number = |i: usize| -> Result<OperatorMatrix> {
        embed(&mode_operators(space.dims()[i])?.n, &space, i)
    };
    let observables = vec![number(0)?, number(1)?, number(2)?];
    let mut config = EvolutionConfig::rk4(spec.tau_swap, spec.step)
        .with_observables(observables)
        .with_checkpoints(vec![spec.tau_swap / 2.0, spec.tau_swap]);
    config.record_every = spec.record_every.max(1);

    let rho0 = QuantumState::basis(space.clone(), &[1, 0, 0])?;
    let trajectory = evolve_lindblad(&model, &rho0, &config)?;

    let swap_target = QuantumState::basis(space, &[0, 0, 1])?;
    let half = trajectory
        .checkpoint(spec.tau_swap / 2.0)
        .ok_or_else(|| Error::IntegrationFailure("missing half-swap checkpoint".into()))?;
    let bell_fidelity = state_fidelity(half, &bell_target(spec)?)?;
    let swap_fidelity = state_fidelity(&trajectory.final_state, &swap_target)?;
    let bus_population = trajectory.observables[1].last().map_or(0.0, |z| z.re);
    Ok(ChainOutcome {
        swap_fidelity,
        bell_fidelity,
        bus_population,
        tau_swap: spec.tau_swap,
        trajectory,
    })
}
