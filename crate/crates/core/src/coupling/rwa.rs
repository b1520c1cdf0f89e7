use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::hamiltonian::{build_er_hamiltonian, ErFrequencies, ErMode};
use super::params::RateCard;
use crate::dynamics::{evolve_lindblad, recommended_step, EvolutionConfig, LindbladModel};
use crate::error::Result;
use crate::quantum::{embed, mode_operators, HilbertSpace, QuantumState};

/// Beam-splitter exchange `|1,0> -> |0,1>` with and without the rotating-wave
/// approximation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RwaSpec {
    /// Resonator, rad/s.
    pub omega: f64,
    pub omega_y: f64,
    /// rad/s; the full coupling is `g = 2 g_p`.
    pub g_p: f64,
    pub electron_dim: usize,
    pub bus_dim: usize,
    /// Step of the full run, s; `None` picks 1/50 of the fastest period.
    pub step: Option<f64>,
    /// Record the bus occupation every this many full-run steps.
    pub record_every: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RwaOutcome {
    /// First exchange maximum `pi / (2 g_p)`, s.
    pub t_max: f64,
    /// Bus occupation at `t_max`.
    pub rwa_population: f64,
    pub full_population: f64,
    pub relative_difference: f64,
    /// Full-run step actually used, s.
    pub step: f64,
    /// Full-run samples `(t, bus occupation)`.
    pub times: Vec<f64>,
    pub full_series: Vec<f64>,
}

impl RwaSpec {
    /// Step of the full run: the explicit one, else 1/50 of the fastest period.
    pub fn resolved_step(&self) -> f64 {
        let freqs = ErFrequencies::beamsplitter(self.omega, self.omega_y);
        let fastest = freqs.omega_d + self.omega + self.omega_y;
        self.step.unwrap_or_else(|| recommended_step(fastest, f64::INFINITY))
    }
}

pub fn rwa_validation(spec: &RwaSpec) -> Result<RwaOutcome> {
    let space = HilbertSpace::new(vec![spec.electron_dim, spec.bus_dim], vec!["electron", "bus"])?;
    let card = RateCard {
        y0: 0.0,
        q0: 0.0,
        g: 2.0 * spec.g_p,
        g_p: spec.g_p,
    };
    let freqs = ErFrequencies::beamsplitter(spec.omega, spec.omega_y);
    let t_max = PI / (2.0 * spec.g_p);
    let n_bus = embed(&mode_operators(spec.bus_dim)?.n, &space, 1)?;
    let rho0 = QuantumState::basis(space.clone(), &[1, 0])?;

    let run = |mode: ErMode, step: f64, every: usize| -> Result<(Vec<f64>, Vec<f64>)> {
        let model = LindbladModel::new(space.clone()).with_terms(build_er_hamiltonian(&card, &freqs, mode, &space)?);
        let mut cfg = EvolutionConfig::rk4(t_max, step).with_observables(vec![n_bus.clone()]);
        cfg.record_every = every.max(1);
        let tr = evolve_lindblad(&model, &rho0, &cfg)?;
        let series = tr.observable_real(0);
        Ok((tr.times, series))
    };
    let (_, rwa) = run(ErMode::RwaBeamsplitter, recommended_step(0.0, t_max), 1_000_000)?;
    let step = spec.resolved_step();
    let (times, full) = run(ErMode::FullTimeDependent, step, spec.record_every)?;
    let rwa_population = *rwa.last().expect("recorded");
    let full_population = *full.last().expect("recorded");
    Ok(RwaOutcome {
        t_max,
        rwa_population,
        full_population,
        relative_difference: (full_population - rwa_population).abs() / rwa_population,
        step,
        times,
        full_series: full,
    })
}
