//! CODATA 2018 constants in SI units.

use std::f64::consts::PI;

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Planck constant, J s.
pub const H_PLANCK: f64 = 6.626_070_15e-34;
/// Elementary charge, C.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Electron mass, kg.
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
/// Bohr magneton, J/T.
pub const BOHR_MAGNETON: f64 = 9.274_010_078_3e-24;
/// Vacuum permeability, N/A^2.
pub const MU0: f64 = 1.256_637_062_12e-6;
/// Vacuum permittivity, F/m.
pub const EPSILON0: f64 = 8.854_187_812_8e-12;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Magnitude of the free-electron g-factor.
pub const ELECTRON_G_FACTOR: f64 = 2.002_319_304_362_56;
/// Atomic mass unit, kg.
pub const AMU: f64 = 1.660_539_066_60e-27;

/// Angular frequency for a frequency in Hz.
pub fn two_pi(f_hz: f64) -> f64 {
    2.0 * PI * f_hz
}

/// Mean Bose occupation of a mode at angular frequency `omega` and temperature `temperature`.
pub fn bose_occupation(omega: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    1.0 / ((HBAR * omega / (K_B * temperature)).exp_m1())
}

/// Read-only bundle of the constants, for code that wants them as a value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub elementary_charge: f64,
    pub electron_mass: f64,
    pub bohr_magneton: f64,
    pub mu0: f64,
    pub epsilon0: f64,
    pub k_b: f64,
}

impl PhysicalConstants {
    pub const CODATA2018: PhysicalConstants = PhysicalConstants {
        hbar: HBAR,
        elementary_charge: ELEMENTARY_CHARGE,
        electron_mass: ELECTRON_MASS,
        bohr_magneton: BOHR_MAGNETON,
        mu0: MU0,
        epsilon0: EPSILON0,
        k_b: K_B,
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bose_factor_at_one_kelvin() {
        let n = bose_occupation(two_pi(500e6), 1.0);
        assert!((n - 41.18).abs() < 0.05, "n = {n}");
    }

    #[test]
    fn hbar_is_h_over_two_pi() {
        assert!((HBAR - H_PLANCK / (2.0 * PI)).abs() / HBAR < 1e-9);
    }
}
