use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::HBAR;
use crate::error::{Error, Result};

/// Geometric transfer from electrode imbalance charge to resonator drive,
/// calibrated once so the reference network gives about 200 photons.
pub const PICKUP_TRANSFER_FACTOR: f64 = 0.2315;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PickupNetwork {
    /// Parasitic capacitance to the coupling electrode, F.
    pub c_p: f64,
    /// Balancing capacitance on the opposite end, F.
    pub c_b: f64,
    /// Fine-tune coupling capacitance, F.
    pub c_b_prime: f64,
    /// Resonator capacitance, F.
    pub c_res: f64,
    /// Drive amplitude, V.
    pub v_d: f64,
    /// Fine-tune amplitude, V.
    pub v_ft: f64,
    /// Fine-tune phase relative to the drive, rad.
    pub phi_ft: f64,
    /// Drive detuning from the resonator, rad/s.
    pub detuning: f64,
}

impl PickupNetwork {
    pub fn validate(&self) -> Result<()> {
        if [self.c_p, self.c_b, self.c_b_prime].iter().any(|c| !(*c >= 0.0)) || !(self.c_res > 0.0) {
            return Err(Error::param("capacitances", "must be >= 0 (resonator > 0)"));
        }
        if self.detuning == 0.0 || !self.detuning.is_finite() {
            return Err(Error::param("detuning", "must be finite and non-zero"));
        }
        Ok(())
    }

    /// Charge left on the resonator: the parasitic path minus the balancing
    /// path plus the fine-tune phasor, C.
    pub fn net_charge(&self) -> Complex64 {
        Complex64::new((self.c_p - self.c_b) * self.v_d, 0.0)
            + Complex64::from_polar(self.c_b_prime * self.v_ft, self.phi_ft)
    }

    /// Fine-tune amplitude and phase that cancel the imbalance exactly.
    pub fn cancelling_fine_tune(&self) -> Option<(f64, f64)> {
        if self.c_b_prime == 0.0 {
            return None;
        }
        let q = Complex64::new((self.c_p - self.c_b) * self.v_d, 0.0);
        let v = -q / self.c_b_prime;
        Some((v.norm(), v.arg()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PickupResult {
    /// |Q_net|, C.
    pub net_charge: f64,
    /// Resonator drive strength, rad/s.
    pub drive: f64,
    /// Steady-state photon number.
    pub photons: f64,
}

/// `eps = |Q_net| / C * q0 / hbar * transfer`, `n = (eps / detuning)^2`.
pub fn pickup_excitation(net: &PickupNetwork, q0: f64, transfer: f64) -> Result<PickupResult> {
    net.validate()?;
    let q = net.net_charge().norm();
    let drive = q / net.c_res * q0 / HBAR * transfer;
    Ok(PickupResult {
        net_charge: q,
        drive,
        photons: (drive / net.detuning).powi(2),
    })
}

/// Order-of-magnitude radiative decay of the resonator into a load `r_load`
/// through a coupling capacitance `c_c`: `omega^2 C_c^2 R / C`.
pub fn radiative_decay_estimate(omega: f64, c_c: f64, r_load: f64, c_res: f64) -> f64 {
    omega * omega * c_c * c_c * r_load / c_res
}

#[cfg(test)]
mod tests {
    use super::*;

    fn net(imbalance: f64) -> PickupNetwork {
        PickupNetwork {
            c_p: 0.5e-15,
            c_b: 0.5e-15 - imbalance,
            c_b_prime: 0.0,
            c_res: 2.2736e-14,
            v_d: 0.2,
            v_ft: 0.0,
            phi_ft: 0.0,
            detuning: 2.0 * std::f64::consts::PI * 500e6,
        }
    }

    #[test]
    fn balanced_is_dark_and_scaling_is_quadratic() {
        let q0 = 2.3e-19;
        assert_eq!(pickup_excitation(&net(0.0), q0, 1.0).unwrap().photons, 0.0);
        let a = pickup_excitation(&net(10e-18), q0, 1.0).unwrap().photons;
        let b = pickup_excitation(&net(30e-18), q0, 1.0).unwrap().photons;
        assert!((b / a - 9.0).abs() < 1e-9);
        assert!(pickup_excitation(&PickupNetwork { detuning: 0.0, ..net(0.0) }, q0, 1.0).is_err());
    }

    #[test]
    fn fine_tune_cancels() {
        let mut n = net(10e-18);
        n.c_b_prime = 10e-18;
        let (v, phi) = n.cancelling_fine_tune().unwrap();
        n.v_ft = v;
        n.phi_ft = phi;
        assert!(pickup_excitation(&n, 2.3e-19, 1.0).unwrap().photons < 1e-20);
    }
}
