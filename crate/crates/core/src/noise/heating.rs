use serde::{Deserialize, Serialize};

use crate::constants::{two_pi, ELECTRON_MASS, ELEMENTARY_CHARGE, HBAR};
use crate::error::{Error, Result};

/// Electron heating rate at 2π×500 MHz that calibrates the `f^-1` reference.
pub const CALIBRATION_RATE: f64 = 8100.0;
/// Rate at the same frequency if the noise falls as `f^-3/2` instead.
pub const STEEP_SCALING_RATE: f64 = 690.0;
/// Frequency of the two rates above, Hz.
pub const CALIBRATION_FREQUENCY: f64 = 500e6;

/// `S_E(f) = S_ref (f_ref / f)^beta`.
pub fn extrapolate_noise(s_ref: f64, f_ref: f64, f: f64, beta: f64) -> Result<f64> {
    if !(f > 0.0 && f_ref > 0.0) {
        return Err(Error::param("f, f_ref", "must be > 0"));
    }
    Ok(s_ref * (f_ref / f).powf(beta))
}

/// Reference frequency at which two power laws `beta` and `beta + 1/2`
/// through a common reference yield rates in the ratio `rate_low / rate_high`
/// at `f`.
pub fn common_reference_frequency(f: f64, rate_low: f64, rate_high: f64) -> f64 {
    f / (rate_low / rate_high).powi(2)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DipoleNoiseModel {
    /// Frequency exponent.
    pub beta: f64,
    /// `S_E` at `f_ref`, (V/m)^2/Hz.
    pub s_ref: f64,
    /// Hz
    pub f_ref: f64,
}

impl DipoleNoiseModel {
    /// Reference noise shared by the `f^-1` and `f^-3/2` estimates: the
    /// common reference frequency of the two calibration rates, with the
    /// magnitude fixed so that `beta = 1` gives [`CALIBRATION_RATE`] for an
    /// electron at 2π×500 MHz.
    pub fn calibrated(beta: f64) -> Result<Self> {
        Self::calibrate(beta, CALIBRATION_FREQUENCY, CALIBRATION_RATE, STEEP_SCALING_RATE)
    }

    /// Same construction for an electron heated at `rate_low` (`f^-1`) or
    /// `rate_high` (`f^-3/2`) at `f` Hz.
    pub fn calibrate(beta: f64, f: f64, rate_low: f64, rate_high: f64) -> Result<Self> {
        if !(f > 0.0 && rate_low > 0.0 && rate_high > 0.0) {
            return Err(Error::param("calibration", "frequency and rates must be > 0"));
        }
        let f_ref = common_reference_frequency(f, rate_low, rate_high);
        let s_at_f = rate_to_noise(rate_low, two_pi(f), ELECTRON_MASS, ELEMENTARY_CHARGE);
        let model = Self {
            beta,
            s_ref: s_at_f * (f / f_ref),
            f_ref,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.5..=2.0).contains(&self.beta) {
            return Err(Error::param("beta", "must be in [0.5, 2]"));
        }
        if !(self.s_ref > 0.0 && self.f_ref > 0.0) {
            return Err(Error::param("S_ref, f_ref", "must be > 0"));
        }
        Ok(())
    }

    /// (V/m)^2/Hz at `f` (Hz).
    pub fn spectral_density(&self, f: f64) -> Result<f64> {
        extrapolate_noise(self.s_ref, self.f_ref, f, self.beta)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeatingResult {
    /// (V/m)^2/Hz
    pub s_e: f64,
    /// quanta/s
    pub rate: f64,
    /// s
    pub tau1: f64,
}

/// `Gamma = q^2 S_E / (4 m hbar omega)`.
pub fn heating_rate(s_e: f64, omega: f64, mass: f64, charge: f64) -> Result<HeatingResult> {
    if !(s_e > 0.0 && omega > 0.0 && mass > 0.0 && charge != 0.0) {
        return Err(Error::param("heating inputs", "S_E, omega, mass must be > 0 and charge non-zero"));
    }
    let rate = charge * charge * s_e / (4.0 * mass * HBAR * omega);
    Ok(HeatingResult {
        s_e,
        rate,
        tau1: 1.0 / rate,
    })
}

fn rate_to_noise(rate: f64, omega: f64, mass: f64, charge: f64) -> f64 {
    rate * 4.0 * mass * HBAR * omega / (charge * charge)
}

/// Electron heating at `omega` under `model`.
pub fn electron_heating(model: &DipoleNoiseModel, omega: f64) -> Result<HeatingResult> {
    let s = model.spectral_density(omega / (2.0 * std::f64::consts::PI))?;
    heating_rate(s, omega, ELECTRON_MASS, ELEMENTARY_CHARGE)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extrapolation_examples() {
        assert_eq!(extrapolate_noise(3.0, 1e6, 1e6, 1.0).unwrap(), 3.0);
        assert!((extrapolate_noise(1.0, 1e6, 1e7, 1.0).unwrap() - 0.1).abs() < 1e-15);
        assert!((extrapolate_noise(1.0, 1e6, 1e8, 1.5).unwrap() - 1e-3).abs() < 1e-15);
        assert!(extrapolate_noise(1.0, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn calibration_reproduces_both_rates() {
        let w = two_pi(500e6);
        let fast = electron_heating(&DipoleNoiseModel::calibrated(1.0).unwrap(), w).unwrap();
        let slow = electron_heating(&DipoleNoiseModel::calibrated(1.5).unwrap(), w).unwrap();
        assert!((fast.rate - 8100.0).abs() < 1e-6);
        assert!((slow.rate - 690.0).abs() < 1e-6);
        assert!((fast.tau1 * fast.rate - 1.0).abs() < 1e-15);
        assert!(DipoleNoiseModel::calibrated(3.0).is_err());
    }
}
