use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::bose_occupation;
use crate::dynamics::{
    collapse_set, evolve_gaussian_sampled, evolve_lindblad, recommended_step, Decoherence, Envelope,
    EvolutionConfig, GaussianModel, HamiltonianTerm, LindbladModel,
};
use crate::error::{Error, Result};
use crate::quantum::{embed, expectation, mode_operators, HilbertSpace, QuantumState};

/// Sideband cooling of the electron by one resonant swap into a cold resonator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoolingSpec {
    /// Electron–resonator exchange rate, rad/s.
    pub g_p: f64,
    /// Initial electron occupation.
    pub nbar: f64,
    /// Electron heating, quanta/s.
    pub heating: f64,
    /// Resonator energy decay time, s (infinite for lossless).
    pub resonator_tau1: f64,
    /// Swap duration, s.
    pub duration: f64,
}

impl CoolingSpec {
    /// Electron precooled to `temperature` at `omega_y`, swapped for
    /// `pi / (2 g_p)`.
    pub fn thermal(g_p: f64, omega_y: f64, temperature: f64, heating: f64, resonator_tau1: f64) -> Self {
        Self {
            g_p,
            nbar: bose_occupation(omega_y, temperature),
            heating,
            resonator_tau1,
            duration: PI / (2.0 * g_p),
        }
    }

    fn model(&self, initial: [f64; 2]) -> Result<GaussianModel> {
        if !(self.duration > 0.0) {
            return Err(Error::param("duration", "must be > 0"));
        }
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 1)] = Complex64::new(self.g_p, 0.0);
        m[(1, 0)] = Complex64::new(self.g_p, 0.0);
        let loss = if self.resonator_tau1.is_finite() {
            1.0 / self.resonator_tau1
        } else {
            0.0
        };
        GaussianModel::new(m, vec![0.0, loss], vec![self.heating, 0.0], &initial)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoolingOutcome {
    pub times: Vec<f64>,
    pub electron: Vec<f64>,
    pub resonator: Vec<f64>,
    /// Electron occupation after the swap.
    pub final_occupation: f64,
    /// Ground-state population of the (Gaussian) electron state, `1/(1+n)`.
    pub ground_fidelity: f64,
}

/// Second-moment solution of the cooling swap.
pub fn simulate_cooling(spec: &CoolingSpec, samples: usize) -> Result<CoolingOutcome> {
    let tr = evolve_gaussian_sampled(&spec.model([spec.nbar, 0.0])?, spec.duration, samples)?;
    let n = tr.final_occupation(0);
    Ok(CoolingOutcome {
        final_occupation: n,
        ground_fidelity: 1.0 / (1.0 + n),
        electron: tr.occupations[0].clone(),
        resonator: tr.occupations[1].clone(),
        times: tr.times,
    })
}

/// Largest difference in electron `<n>` between a truncated Fock-space
/// master equation and the Gaussian solver, sampled at ten equally spaced
/// times. The electron starts thermal at `nbar` (truncated at `dim`); the
/// Gaussian run starts from the same truncated occupation.
pub fn cooling_cross_check(spec: &CoolingSpec, nbar: f64, dim: usize) -> Result<f64> {
    let space = HilbertSpace::new(vec![dim, dim], vec!["electron", "resonator"])?;
    let ops = mode_operators(dim)?;
    let ae = embed(&ops.a, &space, 0)?;
    let ar = embed(&ops.a, &space, 1)?;
    let ne = embed(&ops.n, &space, 0)?;
    let terms = HamiltonianTerm::with_conjugate(&ar.adjoint() * &ae, Envelope::real(spec.g_p));
    let mut channels = vec![(0, Decoherence::Heating { rate: spec.heating })];
    if spec.resonator_tau1.is_finite() {
        channels.push((1, Decoherence::Resonator { tau1: spec.resonator_tau1 }));
    }
    let model = LindbladModel::new(space.clone())
        .with_terms(terms)
        .with_collapse(collapse_set(&space, &channels)?);
    let rho0 = QuantumState::product(&[
        QuantumState::thermal(dim, nbar, "electron")?,
        QuantumState::basis(HilbertSpace::new(vec![dim], vec!["resonator"])?, &[0])?,
    ])?;
    let n0 = expectation(&rho0, &ne)?.re;
    let t = spec.duration;
    let marks: Vec<f64> = (1..=10).map(|k| if k == 10 { t } else { t * k as f64 / 10.0 }).collect();
    let cfg = EvolutionConfig::rk4(t, recommended_step(spec.g_p, t)).with_checkpoints(marks.clone());
    let fock = evolve_lindblad(&model, &rho0, &cfg)?;
    let gauss = evolve_gaussian_sampled(&spec.model([n0, 0.0])?, t, 10)?;
    let mut worst: f64 = 0.0;
    for (k, &tk) in marks.iter().enumerate() {
        let state = fock
            .checkpoint(tk)
            .ok_or_else(|| Error::IntegrationFailure("missing checkpoint".into()))?;
        let nf = expectation(state, &ne)?.re;
        worst = worst.max((nf - gauss.occupations[0][k + 1]).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::two_pi;

    #[test]
    fn lossless_swap_exchanges_occupations() {
        let mut s = CoolingSpec::thermal(two_pi(1.1e6), two_pi(500e6), 1.0, 0.0, f64::INFINITY);
        s.nbar = 41.2;
        let o = simulate_cooling(&s, 100).unwrap();
        assert!(o.final_occupation < 1e-9);
        assert!((o.resonator.last().unwrap() - 41.2).abs() < 1e-8);
    }

    #[test]
    fn residual_heating_is_half_gamma_t() {
        let s = CoolingSpec::thermal(two_pi(1.1e6), two_pi(500e6), 1.0, 8100.0, f64::INFINITY);
        let o = simulate_cooling(&s, 100).unwrap();
        // independent estimate: Gamma * int_0^T cos^2(g s) ds = Gamma T / 2
        let est = 8100.0 * s.duration / 2.0;
        assert!((o.final_occupation / est - 1.0).abs() < 0.01, "{} vs {est}", o.final_occupation);
    }
}
