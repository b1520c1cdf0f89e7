use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Linear modes `H = sum_jk M_jk a_j^dagger a_k` with per-mode loss and
/// symmetric heating, described by `N_jk = <a_j^dagger a_k>`.
#[derive(Clone, Debug)]
pub struct GaussianModel {
    coupling: DMatrix<Complex64>,
    loss: Vec<f64>,
    heating: Vec<f64>,
    initial: DMatrix<Complex64>,
}

impl GaussianModel {
    /// Diagonal initial moments from mean occupations `nbar`.
    pub fn new(
        coupling: DMatrix<Complex64>,
        loss: Vec<f64>,
        heating: Vec<f64>,
        nbar: &[f64],
    ) -> Result<Self> {
        let n = coupling.nrows();
        if nbar.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: nbar.len(),
            });
        }
        if let Some(x) = nbar.iter().find(|x| !(**x >= 0.0 && x.is_finite())) {
            return Err(Error::param("nbar", format!("{x} is not >= 0")));
        }
        let initial = DMatrix::from_diagonal(&DVector::from_iterator(
            n,
            nbar.iter().map(|&x| Complex64::new(x, 0.0)),
        ));
        Self::with_moments(coupling, loss, heating, initial)
    }

    /// Arbitrary initial moment matrix `N_jk = <a_j^dagger a_k>` (Hermitian, PSD).
    pub fn with_moments(
        coupling: DMatrix<Complex64>,
        loss: Vec<f64>,
        heating: Vec<f64>,
        initial: DMatrix<Complex64>,
    ) -> Result<Self> {
        let n = coupling.nrows();
        if n == 0 || coupling.ncols() != n {
            return Err(Error::InvalidDimension("coupling matrix must be square".into()));
        }
        for len in [loss.len(), heating.len(), initial.nrows(), initial.ncols()] {
            if len != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: len,
                });
            }
        }
        let scale = coupling.iter().fold(1.0f64, |m, z| m.max(z.norm()));
        if (&coupling - coupling.adjoint()).iter().any(|z| z.norm() > 1e-12 * scale) {
            return Err(Error::param("coupling", "matrix is not Hermitian"));
        }
        for r in loss.iter().chain(&heating) {
            if !(*r >= 0.0 && r.is_finite()) {
                return Err(Error::param("rates", format!("{r} is not >= 0")));
            }
        }
        let iscale = initial.iter().fold(1.0f64, |m, z| m.max(z.norm()));
        if (&initial - initial.adjoint()).iter().any(|z| z.norm() > 1e-12 * iscale)
            || initial.diagonal().iter().any(|z| z.re < 0.0)
        {
            return Err(Error::param("initial moments", "must be Hermitian with n >= 0"));
        }
        Ok(Self {
            coupling,
            loss,
            heating,
            initial,
        })
    }

    pub fn mode_count(&self) -> usize {
        self.coupling.nrows()
    }

    pub fn initial_moments(&self) -> &DMatrix<Complex64> {
        &self.initial
    }

    /// Drift `A` with `d<a>/dt = A <a>`; heating contributes both a lowering
    /// and raising jump, so only the loss rate damps the amplitude.
    fn drift(&self) -> DMatrix<Complex64> {
        let mut a = self.coupling.map(|z| z * Complex64::new(0.0, -1.0));
        for j in 0..self.mode_count() {
            a[(j, j)] -= Complex64::new(0.5 * self.loss[j], 0.0);
        }
        a
    }
}

#[derive(Clone, Debug)]
pub struct GaussianTrajectory {
    pub times: Vec<f64>,
    /// `occupations[j][i]` is `<n_j>` at `times[i]`.
    pub occupations: Vec<Vec<f64>>,
    pub final_moments: DMatrix<Complex64>,
}

impl GaussianTrajectory {
    pub fn final_occupation(&self, mode: usize) -> f64 {
        *self.occupations[mode].last().expect("non-empty trajectory")
    }
}

/// Evolve to `t_end`, recording 1000 equally spaced samples.
pub fn evolve_gaussian(model: &GaussianModel, t_end: f64) -> Result<GaussianTrajectory> {
    evolve_gaussian_sampled(model, t_end, 1000)
}

/// Evolve `dN/dt = conj(A) N + N A^T + diag(heating)` by RK4, recording
/// `samples` equally spaced points after `t = 0`.
pub fn evolve_gaussian_sampled(
    model: &GaussianModel,
    t_end: f64,
    samples: usize,
) -> Result<GaussianTrajectory> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::param("t_end", "must be > 0"));
    }
    if samples == 0 {
        return Err(Error::param("samples", "must be >= 1"));
    }
    let m = model.mode_count();
    let a = model.drift();
    let a_conj = a.map(|z| z.conj());
    let a_t = a.transpose();
    let source = DMatrix::from_diagonal(&DVector::from_iterator(
        m,
        model.heating.iter().map(|&g| Complex64::new(g, 0.0)),
    ));
    // h * ||A|| <= 1e-2 keeps the RK4 local error near 1e-10 per step.
    let norm = a.iter().fold(0.0f64, |s, z| s.max(z.norm())) * m as f64;
    let per_sample = t_end / samples as f64;
    let sub = ((per_sample * norm / 1e-2).ceil() as usize).max(1);
    let h = per_sample / sub as f64;

    let f = |n: &DMatrix<Complex64>| &a_conj * n + n * &a_t + &source;

    let mut n = model.initial.clone();
    let mut times = Vec::with_capacity(samples + 1);
    let mut occ = vec![Vec::with_capacity(samples + 1); m];
    let push = |t: f64, n: &DMatrix<Complex64>, times: &mut Vec<f64>, occ: &mut [Vec<f64>]| {
        times.push(t);
        for (j, o) in occ.iter_mut().enumerate() {
            o.push(n[(j, j)].re);
        }
    };
    push(0.0, &n, &mut times, &mut occ);
    for s in 0..samples {
        for _ in 0..sub {
            let k1 = f(&n);
            let k2 = f(&(&n + &k1 * Complex64::new(0.5 * h, 0.0)));
            let k3 = f(&(&n + &k2 * Complex64::new(0.5 * h, 0.0)));
            let k4 = f(&(&n + &k3 * Complex64::new(h, 0.0)));
            n += (k1 + (k2 + k3) * Complex64::new(2.0, 0.0) + k4) * Complex64::new(h / 6.0, 0.0);
        }
        let t = if s + 1 == samples {
            t_end
        } else {
            (s + 1) as f64 * per_sample
        };
        push(t, &n, &mut times, &mut occ);
    }
    if n.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::IntegrationFailure("non-finite second moments".into()));
    }
    Ok(GaussianTrajectory {
        times,
        occupations: occ,
        final_moments: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn beam_splitter(g: f64) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 1)] = Complex64::new(g, 0.0);
        m[(1, 0)] = Complex64::new(g, 0.0);
        m
    }

    #[test]
    fn frozen_without_coupling_or_rates() {
        let model =
            GaussianModel::new(DMatrix::zeros(2, 2), vec![0.0; 2], vec![0.0; 2], &[3.0, 0.5]).unwrap();
        let tr = evolve_gaussian(&model, 1e-6).unwrap();
        assert_eq!(tr.final_occupation(0), 3.0);
        assert_eq!(tr.final_occupation(1), 0.5);
    }

    #[test]
    fn lossless_swap_exchanges_occupations() {
        let g = 2.0 * PI * 1.1e6;
        let model = GaussianModel::new(beam_splitter(g), vec![0.0; 2], vec![0.0; 2], &[41.2, 0.0]).unwrap();
        let tr = evolve_gaussian(&model, PI / (2.0 * g)).unwrap();
        assert!(tr.final_occupation(0).abs() < 1e-9);
        assert!((tr.final_occupation(1) - 41.2).abs() < 1e-8);
    }

    #[test]
    fn heating_alone_is_linear() {
        let model =
            GaussianModel::new(DMatrix::zeros(1, 1), vec![0.0], vec![8100.0], &[0.0]).unwrap();
        let tr = evolve_gaussian(&model, 1e-6).unwrap();
        assert!((tr.final_occupation(0) - 8100.0e-6).abs() < 1e-15);
    }

    #[test]
    fn loss_decays_exponentially() {
        let model = GaussianModel::new(DMatrix::zeros(1, 1), vec![1e6], vec![0.0], &[5.0]).unwrap();
        let tr = evolve_gaussian(&model, 2e-6).unwrap();
        assert!((tr.final_occupation(0) - 5.0 * (-2.0f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn rejects_invalid_models() {
        let mut m = beam_splitter(1.0);
        m[(0, 1)] = Complex64::new(2.0, 0.0);
        assert!(GaussianModel::new(m, vec![0.0; 2], vec![0.0; 2], &[0.0, 0.0]).is_err());
        assert!(GaussianModel::new(beam_splitter(1.0), vec![-1.0, 0.0], vec![0.0; 2], &[0.0, 0.0]).is_err());
        assert!(GaussianModel::new(beam_splitter(1.0), vec![0.0; 2], vec![0.0; 2], &[-1.0, 0.0]).is_err());
    }
}
