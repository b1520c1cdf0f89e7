use std::f64::consts::PI;

use super::params::{CouplingGeometry, DriveParams, ElectronParams, RateCard, ResonatorParams, Y};
use crate::constants::HBAR;
use crate::error::{Error, Result};

/// Position and charge zero-point amplitudes `(y0, q0)` in m and C.
pub fn zero_point_amplitudes(electron: &ElectronParams, resonator: &ResonatorParams) -> (f64, f64) {
    let y0 = (HBAR / (2.0 * electron.mass * electron.omega_y())).sqrt();
    let q0 = (HBAR / (2.0 * resonator.z)).sqrt();
    (y0, q0)
}

/// Parametric electron–resonator rate `hbar g = 2 e q0 A_d y0 / (C D_2y^2)`
/// times `calibration`; `g_p = g / 2`.
pub fn parametric_rate(
    electron: &ElectronParams,
    resonator: &ResonatorParams,
    drive: &DriveParams,
    geometry: &CouplingGeometry,
    calibration: f64,
) -> Result<RateCard> {
    let d2 = geometry.d2[Y];
    if !(d2 > 0.0) {
        return Err(Error::param("d2_y", "must be > 0"));
    }
    if !(drive.a_d >= 0.0) {
        return Err(Error::param("a_d", "must be >= 0"));
    }
    let (y0, q0) = zero_point_amplitudes(electron, resonator);
    let g = calibration * 2.0 * electron.charge * q0 * drive.a_d * y0
        / (resonator.c * d2 * d2 * HBAR);
    Ok(RateCard {
        y0,
        q0,
        g,
        g_p: g / 2.0,
    })
}

/// Magic detuning `delta_n` (rad/s) and swap time (s) for a three-system chain.
pub fn magic_detuning(n: u32, g_p: f64) -> Result<(f64, f64)> {
    if !(g_p > 0.0) {
        return Err(Error::param("g_p", "must be > 0"));
    }
    let n = n as f64;
    let delta = (8.0 * n * n / (2.0 * n + 1.0)).sqrt() * g_p;
    let tau = PI / g_p * ((2.0 * n + 1.0) / 2.0).sqrt();
    Ok((delta, tau))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::two_pi;

    #[test]
    fn zero_point_values() {
        let (y0, q0) = zero_point_amplitudes(&ElectronParams::reference(), &ResonatorParams::reference());
        assert!((y0 / 135.7e-9 - 1.0).abs() < 1e-3, "{y0}");
        assert!((q0 / 2.30e-19 - 1.0).abs() < 5e-3, "{q0}");
        let mut heavy = ElectronParams::reference();
        heavy.mass *= 4.0;
        let (y1, _) = zero_point_amplitudes(&heavy, &ResonatorParams::reference());
        assert!((y1 / y0 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rate_is_linear_in_drive() {
        let (e, r, g) = (
            ElectronParams::reference(),
            ResonatorParams::reference(),
            CouplingGeometry::reference(),
        );
        let mut d = DriveParams::reference();
        let r1 = parametric_rate(&e, &r, &d, &g, 1.0).unwrap();
        assert_eq!(r1.g_p, r1.g / 2.0);
        d.a_d *= 2.0;
        let r2 = parametric_rate(&e, &r, &d, &g, 1.0).unwrap();
        assert!((r2.g / r1.g - 2.0).abs() < 1e-12);
        d.a_d = 0.0;
        assert_eq!(parametric_rate(&e, &r, &d, &g, 1.0).unwrap().g, 0.0);
    }

    #[test]
    fn magic_values() {
        let gp = two_pi(1.1e6);
        let (d0, t0) = magic_detuning(0, gp).unwrap();
        assert_eq!(d0, 0.0);
        assert!((t0 - 321.4e-9).abs() < 1e-9);
        let (d1, t1) = magic_detuning(1, gp).unwrap();
        assert!((d1 / gp - (8.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!((t1 - 556.7e-9).abs() < 1e-9);
        assert!(magic_detuning(1, 0.0).is_err());
    }
}
