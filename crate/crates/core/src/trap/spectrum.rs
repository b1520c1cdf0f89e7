use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::integrate::TrajectoryRecord;
use crate::error::{Error, Result};

/// Fewest samples accepted by [`extract_spectrum`].
pub const MIN_SPECTRUM_SAMPLES: usize = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    /// rad/s
    pub frequency: f64,
    /// Amplitude of the cosine component, m.
    pub amplitude: f64,
}

/// Peaks sorted by frequency.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPeaks {
    pub peaks: Vec<Peak>,
    /// Transform bin width, rad/s.
    pub resolution: f64,
}

impl SpectrumPeaks {
    /// Strongest peak within `tolerance` of `frequency`.
    pub fn near(&self, frequency: f64, tolerance: f64) -> Option<Peak> {
        self.peaks
            .iter()
            .filter(|p| (p.frequency - frequency).abs() <= tolerance)
            .copied()
            .max_by(|a, b| a.amplitude.total_cmp(&b.amplitude))
    }

    pub fn strongest(&self) -> Option<Peak> {
        self.peaks
            .iter()
            .copied()
            .max_by(|a, b| a.amplitude.total_cmp(&b.amplitude))
    }
}

/// 4-term Blackman–Harris window.
fn blackman_harris(n: usize) -> Vec<f64> {
    const A: [f64; 4] = [0.35875, 0.48829, 0.14128, 0.01168];
    let m = n as f64;
    (0..n)
        .map(|k| {
            let x = 2.0 * PI * k as f64 / m;
            A[0] - A[1] * x.cos() + A[2] * (2.0 * x).cos() - A[3] * (3.0 * x).cos()
        })
        .collect()
}

/// Windowed spectrum of one coordinate. Peaks are local maxima above
/// `threshold` times the largest bin; each frequency is refined by a
/// parabola through the log magnitudes and the amplitude is evaluated at the
/// refined frequency, so scalloping does not bias amplitudes.
pub fn extract_spectrum(traj: &TrajectoryRecord, axis: usize, threshold: f64) -> Result<SpectrumPeaks> {
    let n = traj.positions.len();
    if n < MIN_SPECTRUM_SAMPLES {
        return Err(Error::TooFewSamples {
            found: n,
            required: MIN_SPECTRUM_SAMPLES,
        });
    }
    if axis > 2 {
        return Err(Error::param("axis", "must be 0, 1 or 2"));
    }
    let dt = traj.sample_interval();
    let x: Vec<f64> = traj.positions.iter().map(|r| r[axis]).collect();
    let mean = x.iter().sum::<f64>() / n as f64;
    let w = blackman_harris(n);
    let wsum: f64 = w.iter().sum();
    let mut buf: Vec<Complex64> = x
        .iter()
        .zip(&w)
        .map(|(xi, wi)| Complex64::new((xi - mean) * wi, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let mag: Vec<f64> = buf[..n / 2].iter().map(|z| z.norm()).collect();
    let top = mag.iter().cloned().fold(0.0, f64::max);
    let resolution = 2.0 * PI / (n as f64 * dt);
    let mut peaks = Vec::new();
    if top == 0.0 {
        return Ok(SpectrumPeaks { peaks, resolution });
    }
    for k in 1..mag.len() - 1 {
        if mag[k] >= threshold * top && mag[k] > mag[k - 1] && mag[k] >= mag[k + 1] {
            let (l, c, r) = (mag[k - 1].ln(), mag[k].ln(), mag[k + 1].ln());
            let denom = l - 2.0 * c + r;
            let shift = if denom.abs() > 0.0 { 0.5 * (l - r) / denom } else { 0.0 };
            let frequency = (k as f64 + shift.clamp(-0.5, 0.5)) * resolution;
            let amplitude = windowed_amplitude(&x, mean, &w, wsum, frequency, dt);
            peaks.push(Peak {
                frequency,
                amplitude,
            });
        }
    }
    Ok(SpectrumPeaks { peaks, resolution })
}

fn windowed_amplitude(x: &[f64], mean: f64, w: &[f64], wsum: f64, omega: f64, dt: f64) -> f64 {
    let step = Complex64::from_polar(1.0, -omega * dt);
    let mut phase = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, (xi, wi)) in x.iter().zip(w).enumerate() {
        acc += phase * ((xi - mean) * wi);
        phase *= step;
        if k % 1024 == 1023 {
            phase /= phase.norm();
        }
    }
    2.0 * acc.norm() / wsum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(f: impl Fn(f64) -> f64, n: usize, dt: f64) -> TrajectoryRecord {
        let times: Vec<f64> = (0..n).map(|k| k as f64 * dt).collect();
        TrajectoryRecord {
            positions: times.iter().map(|&t| [0.0, f(t), 0.0]).collect(),
            velocities: vec![[0.0; 3]; n],
            times,
            ..Default::default()
        }
    }

    #[test]
    fn two_tones_resolved_with_amplitudes() {
        let (w1, w2) = (2.0 * PI * 1.37e6, 2.0 * PI * 4.91e6);
        let tr = record(|t| 2e-7 * (w1 * t).cos() + 3e-9 * (w2 * t + 0.4).sin(), 1 << 15, 2e-9);
        let s = extract_spectrum(&tr, 1, 1e-4).unwrap();
        assert_eq!(s.peaks.len(), 2, "{:?}", s.peaks);
        let p1 = s.near(w1, s.resolution).unwrap();
        let p2 = s.near(w2, s.resolution).unwrap();
        assert!((p1.amplitude / 2e-7 - 1.0).abs() < 5e-3);
        assert!((p2.amplitude / 3e-9 - 1.0).abs() < 5e-3);
        assert!((p1.frequency - w1).abs() < 0.1 * s.resolution);
    }

    #[test]
    fn short_records_rejected() {
        let tr = record(|t| t, 1000, 1e-9);
        assert!(matches!(extract_spectrum(&tr, 1, 1e-4), Err(Error::TooFewSamples { .. })));
    }
}
