use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::model::TrapFieldModel;
use crate::error::{Error, Result};

/// Uniformly sampled classical trajectory.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub positions: Vec<[f64; 3]>,
    pub velocities: Vec<[f64; 3]>,
    /// Time at which `|r|` first exceeded the escape bound, if it did.
    pub escaped_at: Option<f64>,
    /// Largest `|r|` inside the initial-envelope window, m.
    pub initial_envelope: f64,
    /// Largest `|r|` over the whole run, m.
    pub max_excursion: f64,
}

impl TrajectoryRecord {
    pub fn sample_interval(&self) -> f64 {
        if self.times.len() < 2 {
            0.0
        } else {
            self.times[1] - self.times[0]
        }
    }

    pub fn axis(&self, axis: usize) -> Vec<f64> {
        self.positions.iter().map(|r| r[axis]).collect()
    }

    pub fn escaped(&self) -> bool {
        self.escaped_at.is_some()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MotionOptions {
    /// Store every n-th step; 0 stores nothing but the bookkeeping.
    pub sample_every: usize,
    /// Length of the window that defines the initial envelope, s.
    pub envelope_window: f64,
    /// Escape when `|r|` exceeds this multiple of the initial envelope.
    pub escape_factor: f64,
}

impl MotionOptions {
    pub fn sampled(sample_every: usize, envelope_window: f64) -> Self {
        Self {
            sample_every,
            envelope_window,
            escape_factor: 10.0,
        }
    }
}

/// Largest step accepted by [`integrate_motion`].
pub fn max_motion_step(model: &TrapFieldModel) -> f64 {
    2.0 * PI / (100.0 * model.max_frequency())
}

fn norm(r: &[f64; 3]) -> f64 {
    (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt()
}

/// Integrate `m r'' = q E(r, t)` with classical RK4 from `t = 0` to `t_end`.
pub fn integrate_motion(
    model: &TrapFieldModel,
    r0: [f64; 3],
    v0: [f64; 3],
    t_end: f64,
    step: f64,
    opts: &MotionOptions,
) -> Result<TrajectoryRecord> {
    let limit = max_motion_step(model);
    if !(step > 0.0 && step <= limit * (1.0 + 1e-12)) {
        return Err(Error::param(
            "step",
            format!("{step:e} s must be in (0, {limit:e}] (1/100 of the fastest period)"),
        ));
    }
    if !(t_end > 0.0) {
        return Err(Error::param("t_end", "must be > 0"));
    }
    let n = (t_end / step).round().max(1.0) as usize;
    let h = t_end / n as f64;
    let mut rec = TrajectoryRecord::default();
    if let Some(cap) = n.checked_div(opts.sample_every) {
        let cap = cap + 1;
        rec.times.reserve(cap);
        rec.positions.reserve(cap);
        rec.velocities.reserve(cap);
    }
    let (mut r, mut v) = (r0, v0);
    rec.initial_envelope = norm(&r);
    rec.max_excursion = rec.initial_envelope;
    let store = |rec: &mut TrajectoryRecord, t: f64, r: &[f64; 3], v: &[f64; 3]| {
        rec.times.push(t);
        rec.positions.push(*r);
        rec.velocities.push(*v);
    };
    if opts.sample_every > 0 {
        store(&mut rec, 0.0, &r, &v);
    }
    let add = |a: &[f64; 3], b: &[f64; 3], s: f64| [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]];
    for k in 0..n {
        let t = k as f64 * h;
        let a1 = model.acceleration(&r, t);
        let r2 = add(&r, &v, 0.5 * h);
        let v2 = add(&v, &a1, 0.5 * h);
        let a2 = model.acceleration(&r2, t + 0.5 * h);
        let r3 = add(&r, &v2, 0.5 * h);
        let v3 = add(&v, &a2, 0.5 * h);
        let a3 = model.acceleration(&r3, t + 0.5 * h);
        let r4 = add(&r, &v3, h);
        let v4 = add(&v, &a3, h);
        let a4 = model.acceleration(&r4, t + h);
        for i in 0..3 {
            r[i] += h / 6.0 * (v[i] + 2.0 * v2[i] + 2.0 * v3[i] + v4[i]);
            v[i] += h / 6.0 * (a1[i] + 2.0 * a2[i] + 2.0 * a3[i] + a4[i]);
        }
        let t1 = (k + 1) as f64 * h;
        let d = norm(&r);
        if !d.is_finite() {
            rec.escaped_at = Some(t1);
            break;
        }
        rec.max_excursion = rec.max_excursion.max(d);
        if t1 <= opts.envelope_window {
            rec.initial_envelope = rec.initial_envelope.max(d);
        } else if rec.initial_envelope > 0.0 && d > opts.escape_factor * rec.initial_envelope {
            rec.escaped_at = Some(t1);
            break;
        }
        if opts.sample_every > 0 && (k + 1) % opts.sample_every == 0 {
            store(&mut rec, t1, &r, &v);
        }
    }
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::two_pi;

    /// Pure static well along y: `a = (2 omega / Omega)^2`, `q = 0`.
    fn static_trap(omega: f64) -> TrapFieldModel {
        let rf = two_pi(1e9);
        TrapFieldModel::mathieu((2.0 * omega / rf).powi(2), 0.0, rf)
    }

    #[test]
    fn harmonic_amplitude_conserved() {
        let w = two_pi(100e6);
        let m = static_trap(w);
        let period = 2.0 * PI / w;
        let step = max_motion_step(&m);
        let tr = integrate_motion(&m, [0.0, 1e-6, 0.0], [0.0; 3], 100.0 * period, step, &MotionOptions::sampled(1, period)).unwrap();
        let y = tr.axis(1);
        let vy: Vec<f64> = tr.velocities.iter().map(|v| v[1]).collect();
        let energy = |i: usize| 0.5 * vy[i] * vy[i] + 0.5 * w * w * y[i] * y[i];
        let e0 = energy(0);
        let drift = (0..y.len()).map(|i| ((energy(i) - e0) / e0).abs()).fold(0.0, f64::max);
        assert!(drift < 1e-6, "energy drift {drift:e}");
        let t = *tr.times.last().unwrap();
        assert!((y.last().unwrap() - 1e-6 * (w * t).cos()).abs() < 1e-12);
    }

    #[test]
    fn coarse_step_rejected() {
        let m = TrapFieldModel::reference();
        let s = max_motion_step(&m);
        assert!(integrate_motion(&m, [0.0; 3], [0.0; 3], 1e-9, 2.0 * s, &MotionOptions::sampled(1, 1e-9)).is_err());
    }

    #[test]
    fn unstable_motion_is_reported_not_thrown() {
        let m = TrapFieldModel::mathieu(0.0, 1.2, two_pi(1e9));
        let rf = 1e-9;
        let tr = integrate_motion(&m, [0.0, 1e-7, 0.0], [0.0; 3], 200.0 * rf, max_motion_step(&m), &MotionOptions::sampled(0, 2.0 * rf)).unwrap();
        assert!(tr.escaped());
    }
}
