use serde::{Deserialize, Serialize};

use crate::constants::{two_pi, ELECTRON_MASS, ELEMENTARY_CHARGE};
use crate::error::{Error, Result};

/// Analytic multipole field of an RF trap plus a parametric drive.
///
/// Potential (V):
/// `phi = sum_i (s_i + c_i cos(Omega_tr t)) r_i^2
///      + cos(Omega_d t + phase_d) (-E_d y + sum_i k_i r_i^2)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrapFieldModel {
    /// kg
    pub mass: f64,
    /// Signed charge, C.
    pub charge: f64,
    /// rad/s
    pub omega_tr: f64,
    /// Oscillating curvature `c_i`, V/m^2.
    pub rf_curvature: [f64; 3],
    /// Static curvature `s_i`, V/m^2.
    pub static_curvature: [f64; 3],
    /// rad/s
    pub omega_d: f64,
    /// Drive phase relative to the trap RF, rad.
    pub drive_phase: f64,
    /// Drive field along y at the trap centre, V/m.
    pub drive_field: f64,
    /// Drive curvature `k_i`, V/m^2.
    pub drive_curvature: [f64; 3],
}

/// Mathieu parameters `(a_i, q_i)` per axis, for `x'' + (a - 2q cos 2 tau) x = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MathieuParams {
    pub a: [f64; 3],
    pub q: [f64; 3],
}

impl TrapFieldModel {
    /// RF trap with Mathieu parameters `(a, q)` along y; the transverse
    /// axes take `(-a/2, -q/2)` so the field satisfies Laplace's equation.
    pub fn mathieu(a: f64, q: f64, omega_tr: f64) -> Self {
        let p = MathieuParams {
            a: [-a / 2.0, a, -a / 2.0],
            q: [-q / 2.0, q, -q / 2.0],
        };
        Self::from_mathieu(&p, omega_tr)
    }

    /// Laplace-consistent electron trap with secular frequencies close to
    /// `omega_y` along y and `omega_xz` transversally (lowest-order Mathieu
    /// relation `omega = (Omega/2) sqrt(a + q^2/2)`), without drive.
    pub fn electron_trap(omega_tr: f64, omega_y: f64, omega_xz: f64) -> Result<Self> {
        let by = (2.0 * omega_y / omega_tr).powi(2);
        let bx = (2.0 * omega_xz / omega_tr).powi(2);
        // a_y + q_y^2/2 = by, -a_y/2 + q_y^2/8 = bx
        let q2 = 4.0 * (by + 2.0 * bx) / 3.0;
        let a_y = by - q2 / 2.0;
        if !(q2 > 0.0) {
            return Err(Error::param("secular frequencies", "no RF solution"));
        }
        let q_y = q2.sqrt();
        let mathieu = MathieuParams {
            a: [-a_y / 2.0, a_y, -a_y / 2.0],
            q: [-q_y / 2.0, q_y, -q_y / 2.0],
        };
        Ok(Self::from_mathieu(&mathieu, omega_tr))
    }

    /// Electron trap from per-axis Mathieu parameters.
    pub fn from_mathieu(p: &MathieuParams, omega_tr: f64) -> Self {
        let (mass, charge) = (ELECTRON_MASS, -ELEMENTARY_CHARGE);
        let unit = mass * omega_tr * omega_tr / charge;
        Self {
            mass,
            charge,
            omega_tr,
            rf_curvature: p.q.map(|q| -q * unit / 4.0),
            static_curvature: p.a.map(|a| a * unit / 8.0),
            omega_d: omega_tr,
            drive_phase: 0.0,
            drive_field: 0.0,
            drive_curvature: [0.0; 3],
        }
    }

    /// Reference electron trap: 7 GHz RF, 500 MHz along y, 400 MHz
    /// transverse, driven at the RF frequency in quadrature with 350 nm
    /// amplitude along y.
    pub fn reference() -> Self {
        let mut m = Self::electron_trap(two_pi(7e9), two_pi(500e6), two_pi(400e6))
            .expect("valid preset");
        m.drive_phase = std::f64::consts::FRAC_PI_2;
        m.set_drive_amplitude(two_pi(7e9), 350e-9, two_pi(500e6));
        m
    }

    /// Drive at `omega_d` with the field that gives amplitude `a_d` for an
    /// oscillator at `omega`: `E_d = a_d m (omega_d^2 - omega^2) / |q|`.
    pub fn set_drive_amplitude(&mut self, omega_d: f64, a_d: f64, omega: f64) {
        self.omega_d = omega_d;
        self.drive_field = a_d * self.mass * (omega_d * omega_d - omega * omega) / self.charge.abs();
    }

    /// Laplace-consistent drive curvature, expressed as a Mathieu-like
    /// `q_d` along y in units of the trap RF (`-q_d/2` transversally).
    pub fn with_drive_quadrupole(mut self, q_d: f64) -> Self {
        let unit = self.mass * self.omega_tr * self.omega_tr / self.charge;
        self.drive_curvature = [q_d / 2.0, -q_d, q_d / 2.0].map(|q| -q * unit / 4.0);
        self
    }

    pub fn mathieu_params(&self) -> MathieuParams {
        let unit = self.mass * self.omega_tr * self.omega_tr / self.charge;
        MathieuParams {
            a: self.static_curvature.map(|s| 8.0 * s / unit),
            q: self.rf_curvature.map(|c| -4.0 * c / unit),
        }
    }

    /// Largest angular frequency in the field.
    pub fn max_frequency(&self) -> f64 {
        self.omega_tr.max(if self.drive_field != 0.0 || self.drive_curvature.iter().any(|k| *k != 0.0) {
            self.omega_d
        } else {
            0.0
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass > 0.0 && self.charge != 0.0 && self.omega_tr > 0.0) {
            return Err(Error::param("trap", "mass, charge and Omega_tr must be non-zero"));
        }
        let sum: f64 = self.rf_curvature.iter().sum();
        let scale = self.rf_curvature.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if sum.abs() > 1e-9 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::ModelInconsistency(format!(
                "RF curvature violates the Laplace constraint (sum {sum:e} V/m^2)"
            )));
        }
        Ok(())
    }

    /// Acceleration at position `r` and time `t`.
    #[inline]
    pub fn acceleration(&self, r: &[f64; 3], t: f64) -> [f64; 3] {
        let rf = (self.omega_tr * t).cos();
        let dr = (self.omega_d * t + self.drive_phase).cos();
        let k = -self.charge / self.mass;
        let mut acc = [0.0; 3];
        for i in 0..3 {
            let curv = self.static_curvature[i] + self.rf_curvature[i] * rf + self.drive_curvature[i] * dr;
            acc[i] = k * 2.0 * curv * r[i];
        }
        acc[1] -= k * self.drive_field * dr;
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mathieu_round_trip() {
        let m = TrapFieldModel::mathieu(0.01, 0.3, two_pi(1e9));
        let p = m.mathieu_params();
        assert!((p.a[1] - 0.01).abs() < 1e-12 && (p.q[1] - 0.3).abs() < 1e-12);
        assert!((p.q[2] + 0.15).abs() < 1e-12);
        m.validate().unwrap();
    }

    #[test]
    fn reference_trap_is_laplace_consistent() {
        let m = TrapFieldModel::reference();
        m.validate().unwrap();
        let p = m.mathieu_params();
        assert!((p.q[1] - 0.2491).abs() < 1e-3, "{:?}", p);
        assert!((p.a[1] + 0.0106).abs() < 1e-3);
        let mut bad = m.clone();
        bad.rf_curvature[0] *= 2.0;
        assert!(bad.validate().is_err());
    }
}
