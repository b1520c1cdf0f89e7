use serde::{Deserialize, Serialize};

use crate::constants::{two_pi, BOHR_MAGNETON, ELECTRON_G_FACTOR, ELECTRON_MASS, ELEMENTARY_CHARGE, HBAR};
use crate::error::{Error, Result};

/// Axis index of the coupled motional direction.
pub const Y: usize = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElectronParams {
    /// kg
    pub mass: f64,
    /// C (magnitude)
    pub charge: f64,
    /// Secular frequencies along x, y, z, rad/s.
    pub omega: [f64; 3],
    /// Spin splitting, rad/s.
    pub omega_s: f64,
    /// Bias field, T.
    pub b0: f64,
}

impl ElectronParams {
    /// Electron with the spin splitting set from `b0`.
    pub fn electron(omega: [f64; 3], b0: f64) -> Self {
        Self {
            mass: ELECTRON_MASS,
            charge: ELEMENTARY_CHARGE,
            omega,
            omega_s: zeeman_splitting(b0),
            b0,
        }
    }

    /// Trap with 500 MHz along y, 400 MHz transverse and a 1 mT bias.
    pub fn reference() -> Self {
        Self::electron([two_pi(400e6), two_pi(500e6), two_pi(400e6)], 1e-3)
    }

    pub fn omega_y(&self) -> f64 {
        self.omega[Y]
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass > 0.0 && self.charge > 0.0) {
            return Err(Error::param("mass/charge", "must be > 0"));
        }
        if self.omega.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::param("omega", "secular frequencies must be > 0"));
        }
        if self.b0 > 0.0 {
            let expect = zeeman_splitting(self.b0);
            if ((self.omega_s - expect) / expect).abs() > 0.01 {
                return Err(Error::param(
                    "omega_s",
                    format!("inconsistent with B0 = {} T (expected {expect:e} rad/s)", self.b0),
                ));
            }
        }
        Ok(())
    }
}

/// Electron spin splitting `g mu_B B0 / hbar`, rad/s.
pub fn zeeman_splitting(b0: f64) -> f64 {
    ELECTRON_G_FACTOR * BOHR_MAGNETON * b0 / HBAR
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResonatorParams {
    /// rad/s
    pub omega: f64,
    /// ohm
    pub z: f64,
    /// F
    pub c: f64,
    /// H
    pub l: f64,
    /// s
    pub tau1: f64,
}

impl ResonatorParams {
    pub fn from_omega_z(omega: f64, z: f64, tau1: f64) -> Result<Self> {
        if !(omega > 0.0 && z > 0.0 && tau1 > 0.0) {
            return Err(Error::param("resonator", "omega, Z and tau1 must be > 0"));
        }
        Ok(Self {
            omega,
            z,
            c: 1.0 / (omega * z),
            l: z / omega,
            tau1,
        })
    }

    /// 7 GHz, 1 kOhm, 45 us.
    pub fn reference() -> Self {
        Self::from_omega_z(two_pi(7e9), 1e3, 45e-6).expect("valid preset")
    }

    pub fn validate(&self) -> Result<()> {
        let omega = 1.0 / (self.l * self.c).sqrt();
        let z = (self.l / self.c).sqrt();
        if ((omega - self.omega) / self.omega).abs() > 1e-9 || ((z - self.z) / self.z).abs() > 1e-9 {
            return Err(Error::param("resonator", "omega, Z, L, C are inconsistent"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransmonParams {
    /// Bare transmon frequency, rad/s.
    pub omega_t: f64,
    /// Cavity frequency, rad/s.
    pub omega_c: f64,
    /// rad/s
    pub g_tc: f64,
    /// s
    pub tau1: f64,
    /// s
    pub tau2: f64,
}

impl TransmonParams {
    /// `Omega_c - omega_t`.
    pub fn delta(&self) -> f64 {
        self.omega_c - self.omega_t
    }

    /// Dispersive check: `Delta >= 5 G_tc` is required; returns `true` when
    /// the ratio is below 10 (marginal).
    pub fn check_dispersive(&self) -> Result<bool> {
        let d = self.delta();
        if d < 5.0 * self.g_tc {
            return Err(Error::NotDispersive {
                detuning: d,
                coupling: self.g_tc,
                factor: 5.0,
            });
        }
        Ok(d < 10.0 * self.g_tc)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriveParams {
    /// Driven motional amplitude, m.
    pub a_d: f64,
    /// rad/s
    pub omega_d: f64,
    /// rad/s
    pub omega_tr: f64,
    /// V
    pub v_tr: f64,
    /// V
    pub v_d: f64,
}

impl DriveParams {
    pub fn reference() -> Self {
        Self {
            a_d: 350e-9,
            omega_d: two_pi(7e9),
            omega_tr: two_pi(7e9),
            v_tr: 0.4,
            v_d: 0.2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingGeometry {
    /// Dipole coupling lengths, m.
    pub d1: [f64; 3],
    /// Quadrupole coupling lengths, m.
    pub d2: [f64; 3],
}

impl CouplingGeometry {
    pub fn reference() -> Self {
        Self {
            d1: [f64::INFINITY; 3],
            d2: [f64::INFINITY, 7.3e-6, f64::INFINITY],
        }
    }
}

/// Zero-point amplitudes and coupling rates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateCard {
    /// m
    pub y0: f64,
    /// C
    pub q0: f64,
    /// rad/s
    pub g: f64,
    /// rad/s, always `g / 2`
    pub g_p: f64,
}
