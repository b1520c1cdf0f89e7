use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{EPSILON0, HBAR};
use crate::error::{Error, Result};

/// Mode volume (m^3) that puts the reference CPW–cavity example at
/// 2π×10 MHz.
pub const REFERENCE_CAVITY_VOLUME: f64 = 3.14e-6;

/// Largest allowed mismatch between the dipole integral and the closed form.
pub const INTEGRAL_TOLERANCE: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CpwLine {
    /// ohm
    pub z_cpw: f64,
    pub mode: u32,
    /// Guided wavelength, m.
    pub wavelength: f64,
    /// Centre-to-return conductor spacing, m.
    pub d0: f64,
    /// Length of line inside the cavity, m.
    pub l_eff: f64,
}

impl CpwLine {
    pub fn validate(&self) -> Result<()> {
        if !(self.d0 > 0.0 && self.wavelength > 0.0) {
            return Err(Error::param("d0, lambda", "must be > 0"));
        }
        if !(self.l_eff >= 0.0 && self.l_eff <= self.wavelength / 2.0 * (1.0 + 1e-12)) {
            return Err(Error::param("l_eff", "must lie in [0, lambda/2]"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CavityMode {
    /// rad/s
    pub omega_c: f64,
    /// m^3
    pub volume: f64,
    /// Vacuum field fluctuation, V/m.
    pub e_c0: f64,
}

impl CavityMode {
    pub fn new(omega_c: f64, volume: f64) -> Result<Self> {
        if !(omega_c > 0.0 && volume > 0.0) {
            return Err(Error::param("omega_C, V", "must be > 0"));
        }
        Ok(Self {
            omega_c,
            volume,
            e_c0: (HBAR * omega_c / (2.0 * EPSILON0 * volume)).sqrt(),
        })
    }

    pub fn validate(&self) -> Result<()> {
        let expect = Self::new(self.omega_c, self.volume)?.e_c0;
        if ((self.e_c0 - expect) / expect).abs() > 1e-9 {
            return Err(Error::ModelInconsistency("E_C0 does not match omega_C and V".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CavityCoupling {
    /// Closed-form `G_lc`, rad/s.
    pub g_lc: f64,
    /// Same from the discretized dipole integral, rad/s.
    pub g_lc_integral: f64,
}

/// `hbar G = E_C0 q0 d0 l_eff / lambda` with `q0 = sqrt(hbar / 2Z)`, checked
/// against the dipole integral for a uniform cavity field.
pub fn cpw_cavity_coupling(line: &CpwLine, cavity: &CavityMode, z: f64) -> Result<CavityCoupling> {
    line.validate()?;
    cavity.validate()?;
    if !(z > 0.0) {
        return Err(Error::param("Z", "must be > 0"));
    }
    let q0 = (HBAR / (2.0 * z)).sqrt();
    let g_lc = cavity.e_c0 * q0 * line.d0 * line.l_eff / (line.wavelength * HBAR);
    let e0 = cavity.e_c0;
    let g_lc_integral = dipole_integral(line, z, |_| e0, 400);
    if g_lc > 0.0 && ((g_lc_integral - g_lc) / g_lc).abs() > INTEGRAL_TOLERANCE {
        return Err(Error::ModelInconsistency(format!(
            "dipole integral {g_lc_integral:e} and closed form {g_lc:e} differ by more than 5%"
        )));
    }
    Ok(CavityCoupling { g_lc, g_lc_integral })
}

/// Coupling rate (rad/s) from the CPW dipole density
/// `mu(z) = (2 pi d0 q0 / lambda) sin(2 pi z / lambda)` seen through a
/// cavity field profile `e_c(z)`: the closed-form prefactor times the
/// `mu`-weighted mean field over the inserted length. Midpoint rule with
/// `steps` cells.
pub fn dipole_integral(line: &CpwLine, z: f64, e_c: impl Fn(f64) -> f64, steps: usize) -> f64 {
    if line.l_eff == 0.0 || steps == 0 {
        return 0.0;
    }
    let q0 = (HBAR / (2.0 * z)).sqrt();
    let k = 2.0 * PI / line.wavelength;
    let mu0 = k * line.d0 * q0;
    let h = line.l_eff / steps as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..steps {
        let zi = (i as f64 + 0.5) * h;
        let mu = mu0 * (k * zi).sin();
        num += mu * e_c(zi) * h;
        den += mu * h;
    }
    q0 * line.d0 * line.l_eff / line.wavelength * (num / den) / HBAR
}
