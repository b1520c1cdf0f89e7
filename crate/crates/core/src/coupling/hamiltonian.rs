use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::params::RateCard;
use crate::dynamics::{Envelope, HamiltonianTerm};
use crate::error::{Error, Result};
use crate::quantum::{embed, mode_operators, sigma_minus, HilbertSpace, OperatorMatrix};

/// How much of the parametric electron–resonator interaction to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErMode {
    /// Difference-frequency drive, resonant exchange terms only.
    RwaBeamsplitter,
    /// Sum-frequency drive, resonant pair-creation terms only.
    RwaSqueezer,
    /// All four terms with the `cos(Omega_d t)` envelope.
    FullTimeDependent,
}

/// Frequencies entering the interaction picture, rad/s.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErFrequencies {
    /// Resonator
    pub omega: f64,
    pub omega_y: f64,
    pub omega_d: f64,
}

impl ErFrequencies {
    /// Drive tuned to the beam-splitter resonance.
    pub fn beamsplitter(omega: f64, omega_y: f64) -> Self {
        Self {
            omega,
            omega_y,
            omega_d: omega - omega_y,
        }
    }

    /// Drive tuned to the squeezing resonance.
    pub fn squeezer(omega: f64, omega_y: f64) -> Self {
        Self {
            omega,
            omega_y,
            omega_d: omega + omega_y,
        }
    }
}

fn ladder(space: &HilbertSpace, index: usize) -> Result<OperatorMatrix> {
    embed(&mode_operators(space.dims()[index])?.a, space, index)
}

/// Electron–resonator Hamiltonian terms (rad/s) on `space = (electron, bus)`.
///
/// In the RWA modes a drive slightly off the chosen resonance leaves a
/// residual phase `exp(i (resonance - Omega_d) t)` on the surviving term.
pub fn build_er_hamiltonian(
    rates: &RateCard,
    freqs: &ErFrequencies,
    mode: ErMode,
    space: &HilbertSpace,
) -> Result<Vec<HamiltonianTerm>> {
    if space.num_subsystems() != 2 {
        return Err(Error::InvalidDimension(
            "electron-resonator space needs (electron, bus)".into(),
        ));
    }
    let ay = ladder(space, 0)?;
    let aphi = ladder(space, 1)?;
    let exchange = &aphi.adjoint() * &ay;
    let pair = &aphi.adjoint() * &ay.adjoint();
    let diff = freqs.omega - freqs.omega_y;
    let sum = freqs.omega + freqs.omega_y;
    let closer_to_diff = (freqs.omega_d - diff).abs() < (freqs.omega_d - sum).abs();
    let g = Complex64::new(rates.g, 0.0);
    let gp = Complex64::new(rates.g_p, 0.0);
    let mut terms = Vec::new();
    match mode {
        ErMode::RwaBeamsplitter => {
            if !closer_to_diff {
                return Err(Error::InvalidRegime(
                    "beam-splitter mode needs Omega_d near Omega - omega_y".into(),
                ));
            }
            terms.extend(HamiltonianTerm::with_conjugate(
                exchange,
                Envelope::phase(gp, diff - freqs.omega_d),
            ));
        }
        ErMode::RwaSqueezer => {
            if closer_to_diff {
                return Err(Error::InvalidRegime(
                    "squeezer mode needs Omega_d near Omega + omega_y".into(),
                ));
            }
            terms.extend(HamiltonianTerm::with_conjugate(
                pair,
                Envelope::phase(gp, sum - freqs.omega_d),
            ));
        }
        ErMode::FullTimeDependent => {
            let drive = Envelope::cosine(g, freqs.omega_d);
            let one = Complex64::new(1.0, 0.0);
            terms.extend(HamiltonianTerm::with_conjugate(
                exchange,
                drive.times(&Envelope::phase(one, diff)),
            ));
            terms.extend(HamiltonianTerm::with_conjugate(
                pair,
                drive.times(&Envelope::phase(one, sum)),
            ));
        }
    }
    Ok(terms)
}

/// Far end of a three-system chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainKind {
    ElectronTransmon,
    ElectronElectron,
}

/// `(electron, bus, end)` space; the end is a qubit or a second electron mode.
pub fn chain_space(kind: ChainKind, electron_dim: usize, bus_dim: usize) -> Result<HilbertSpace> {
    match kind {
        ChainKind::ElectronTransmon => {
            HilbertSpace::new(vec![electron_dim, bus_dim, 2], vec!["electron", "bus", "transmon"])
        }
        ChainKind::ElectronElectron => HilbertSpace::new(
            vec![electron_dim, bus_dim, electron_dim],
            vec!["electron", "bus", "electron2"],
        ),
    }
}

/// `g_p (exp(i delta t) a_phi^dagger a_y + h.c.) + g_end (exp(i delta t) a_phi^dagger c + h.c.)`
/// with `c` the transmon lowering operator or the second electron's `a`.
///
/// `delta` is the bus frequency minus the far-end frequency. The drive puts
/// the electron on resonance with the far end, so both links see the same
/// bus detuning.
pub fn build_chain_hamiltonian(
    space: &HilbertSpace,
    kind: ChainKind,
    g_p: f64,
    g_end: f64,
    delta: f64,
) -> Result<Vec<HamiltonianTerm>> {
    if space.num_subsystems() != 3 {
        return Err(Error::InvalidDimension("chain space needs three subsystems".into()));
    }
    let ay = ladder(space, 0)?;
    let aphi = ladder(space, 1)?;
    let c = match kind {
        ChainKind::ElectronTransmon => {
            if space.dims()[2] != 2 {
                return Err(Error::InvalidDimension("transmon must have dimension 2".into()));
            }
            embed(&sigma_minus(), space, 2)?
        }
        ChainKind::ElectronElectron => ladder(space, 2)?,
    };
    let up = aphi.adjoint();
    let mut terms = Vec::with_capacity(4);
    terms.extend(HamiltonianTerm::with_conjugate(
        &up * &ay,
        Envelope::phase(Complex64::new(g_p, 0.0), delta),
    ));
    terms.extend(HamiltonianTerm::with_conjugate(
        &up * &c,
        Envelope::phase(Complex64::new(g_end, 0.0), delta),
    ));
    Ok(terms)
}
