use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::integrate::{integrate_motion, max_motion_step, MotionOptions, TrajectoryRecord};
use super::model::TrapFieldModel;
use super::spectrum::{extract_spectrum, SpectrumPeaks, MIN_SPECTRUM_SAMPLES};
use crate::error::{Error, Result};
use crate::par::{self, Exec};

/// Drive-pseudopotential budget `U_ps,d / (m omega^2 A_d^2)`, calibrated so a
/// Be+ ion at 2π×2 MHz reaches its limit at a 2π×2 GHz drive.
pub const PSEUDOPOTENTIAL_BUDGET: f64 = 2.5e5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityOptions {
    /// Run length in (estimated) secular periods.
    pub secular_periods: f64,
    pub escape_factor: f64,
    /// Initial displacement on every axis, m.
    pub offset: f64,
}

impl Default for StabilityOptions {
    fn default() -> Self {
        Self {
            secular_periods: 200.0,
            escape_factor: 10.0,
            offset: 1e-7,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityPoint {
    pub a: f64,
    pub q: f64,
    pub stable: bool,
    /// Largest excursion over the initial envelope.
    pub growth: f64,
}

/// Lowest-order secular period estimate, from `beta ~ sqrt(a + q^2/2)` on
/// the slowest axis, clamped to `[0.05, 1]`.
pub fn secular_period_estimate(model: &TrapFieldModel) -> f64 {
    let p = model.mathieu_params();
    let beta = (0..3)
        .map(|i| (p.a[i] + 0.5 * p.q[i] * p.q[i]).max(0.0).sqrt())
        .fold(f64::INFINITY, f64::min)
        .clamp(0.05, 1.0);
    2.0 * PI / (0.5 * beta * model.omega_tr)
}

/// Bounded-trajectory test: stable when `|r|` stays within `escape_factor`
/// times its early envelope over `secular_periods` secular periods.
pub fn check_stability(model: &TrapFieldModel, opts: &StabilityOptions) -> Result<(bool, f64)> {
    model.validate()?;
    let t_sec = secular_period_estimate(model);
    let t_rf = 2.0 * PI / model.omega_tr;
    let motion = MotionOptions {
        sample_every: 0,
        envelope_window: (2.0 * t_sec).max(20.0 * t_rf),
        escape_factor: opts.escape_factor,
    };
    let r0 = [opts.offset; 3];
    let tr = integrate_motion(model, r0, [0.0; 3], opts.secular_periods * t_sec, max_motion_step(model), &motion)?;
    Ok((!tr.escaped(), tr.max_excursion / tr.initial_envelope))
}

/// Stability of `template(a, q)` at every grid point, in grid order.
pub fn stability_scan<F>(exec: Exec, grid: &[(f64, f64)], template: F, opts: &StabilityOptions) -> Result<Vec<StabilityPoint>>
where
    F: Fn(f64, f64) -> TrapFieldModel + Sync + Send,
{
    if grid.iter().any(|(a, q)| !a.is_finite() || !q.is_finite()) {
        return Err(Error::param("grid", "all points must be finite"));
    }
    par::try_map(exec, grid, |&(a, q)| {
        let (stable, growth) = check_stability(&template(a, q), opts)?;
        Ok(StabilityPoint { a, q, stable, growth })
    })
}

/// Bisect the stable/unstable boundary in `q` at fixed `a` between a stable
/// `q_lo` and an unstable `q_hi`.
pub fn mathieu_edge(a: f64, mut q_lo: f64, mut q_hi: f64, omega_tr: f64, tol: f64, opts: &StabilityOptions) -> Result<f64> {
    let stable = |q: f64| check_stability(&TrapFieldModel::mathieu(a, q, omega_tr), opts).map(|s| s.0);
    if !stable(q_lo)? || stable(q_hi)? {
        return Err(Error::param("bracket", "q_lo must be stable and q_hi unstable"));
    }
    while q_hi - q_lo > tol {
        let mid = 0.5 * (q_lo + q_hi);
        if stable(mid)? {
            q_lo = mid;
        } else {
            q_hi = mid;
        }
    }
    Ok(0.5 * (q_lo + q_hi))
}

/// Sampled trajectory long enough to resolve the secular motion: at least
/// `secular_periods` estimated periods, at least [`MIN_SPECTRUM_SAMPLES`]
/// samples and at least eight samples per fastest period.
pub fn spectral_run(model: &TrapFieldModel, r0: [f64; 3], v0: [f64; 3], secular_periods: f64) -> Result<TrajectoryRecord> {
    let h = max_motion_step(model);
    let t_end = secular_periods * secular_period_estimate(model);
    // the step is 1/100 of the fastest period, so 12 steps keep 8 samples
    let every = 12usize;
    let steps = ((t_end / h).ceil() as usize).max(every * MIN_SPECTRUM_SAMPLES);
    let t_sec = secular_period_estimate(model);
    let opts = MotionOptions::sampled(every, 2.0 * t_sec);
    integrate_motion(model, r0, v0, steps as f64 * h, h, &opts)
}

/// Secular frequency along `axis` (rad/s): strongest spectral peak below
/// half the RF frequency for a trap started at rest off-centre.
pub fn secular_frequency(model: &TrapFieldModel, axis: usize) -> Result<f64> {
    let mut r0 = [0.0; 3];
    r0[axis.min(2)] = 1e-7;
    let tr = spectral_run(model, r0, [0.0; 3], 200.0)?;
    if tr.escaped() {
        return Err(Error::InvalidRegime("trap is unstable".into()));
    }
    let spec = extract_spectrum(&tr, axis, 1e-4)?;
    below(&spec, 0.5 * model.omega_tr)
        .ok_or_else(|| Error::InvalidRegime("no secular peak found".into()))
}

fn below(spec: &SpectrumPeaks, limit: f64) -> Option<f64> {
    spec.peaks
        .iter()
        .filter(|p| p.frequency < limit)
        .max_by(|a, b| a.amplitude.total_cmp(&b.amplitude))
        .map(|p| p.frequency)
}

/// Position and velocity on the steady driven orbit of an oscillator at
/// `omega` (y axis), so no secular motion is excited by switching on.
pub fn driven_orbit_start(model: &TrapFieldModel, omega: f64) -> ([f64; 3], [f64; 3]) {
    let k = -model.charge / model.mass;
    let wd = model.omega_d;
    let c = k * model.drive_field / (wd * wd - omega * omega);
    let phi = model.drive_phase;
    ([0.0, c * phi.cos(), 0.0], [0.0, -c * wd * phi.sin(), 0.0])
}

/// `U_ps,d / (m omega^2 A_d^2) = (Omega_d / omega)^2 / 4`.
pub fn drive_pseudopotential_ratio(omega_d: f64, omega: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::param("omega", "must be > 0"));
    }
    Ok(0.25 * (omega_d / omega).powi(2))
}

/// Drive frequency at which the ratio reaches `budget`.
pub fn limiting_drive_frequency(omega: f64, budget: f64) -> Result<f64> {
    if !(omega > 0.0 && budget > 0.0) {
        return Err(Error::param("omega, budget", "must be > 0"));
    }
    Ok(2.0 * omega * budget.sqrt())
}

/// Pseudopotential ratio from a simulation: the time-averaged kinetic energy
/// of the driven motion in a static well `omega`, over `m omega^2 A_d^2`.
pub fn simulated_pseudopotential_ratio(omega_d: f64, omega: f64, a_d: f64) -> Result<f64> {
    let mut model = TrapFieldModel::mathieu(0.0, 0.0, omega_d);
    model.static_curvature = [0.0; 3];
    model.static_curvature[1] = model.mass * omega * omega / (2.0 * model.charge);
    model.set_drive_amplitude(omega_d, a_d, omega);
    let (r0, v0) = driven_orbit_start(&model, omega);
    let h = max_motion_step(&model);
    let periods = 200.0;
    let t_end = periods * 2.0 * PI / omega_d;
    let tr = integrate_motion(&model, r0, v0, t_end, h, &MotionOptions::sampled(1, t_end))?;
    let n = tr.velocities.len() - 1;
    let ke: f64 = tr.velocities[..n].iter().map(|v| 0.5 * model.mass * v[1] * v[1]).sum::<f64>() / n as f64;
    Ok(ke / (model.mass * omega * omega * a_d * a_d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::two_pi;

    #[test]
    fn ratio_formula() {
        assert!((drive_pseudopotential_ratio(3.0, 3.0).unwrap() - 0.25).abs() < 1e-15);
        let r1 = drive_pseudopotential_ratio(10.0, 1.0).unwrap();
        let r2 = drive_pseudopotential_ratio(20.0, 1.0).unwrap();
        assert!((r2 / r1 - 4.0).abs() < 1e-12);
        let w = two_pi(2e6);
        let lim = limiting_drive_frequency(w, PSEUDOPOTENTIAL_BUDGET).unwrap();
        assert!((lim / two_pi(2e9) - 1.0).abs() < 1e-9);
        assert!(drive_pseudopotential_ratio(1.0, 0.0).is_err());
    }

    #[test]
    fn deep_and_overdriven_points() {
        let rf = two_pi(1e9);
        let opts = StabilityOptions::default();
        let pts = stability_scan(Exec::Sequential, &[(0.0, 0.05), (0.0, 2.0)], |a, q| TrapFieldModel::mathieu(a, q, rf), &opts).unwrap();
        assert!(pts[0].stable && !pts[1].stable);
    }

    #[test]
    fn driven_orbit_is_steady() {
        let w = two_pi(50e6);
        let r = simulated_pseudopotential_ratio(20.0 * w, w, 1e-7).unwrap();
        assert!((r / 100.0 - 1.0).abs() < 0.02, "{r}");
    }
}
