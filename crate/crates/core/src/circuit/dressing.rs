use nalgebra::{Matrix3, Matrix4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest cavity–transmon detuning, in units of `G_tc`, accepted by
/// [`dress_and_reduce`].
pub const MIN_DISPERSIVE_RATIO: f64 = 5.0;

/// Real symmetric coupling matrix (rad/s) in the order
/// (electron, line, cavity, transmon).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingMatrix4 {
    pub matrix: Matrix4<f64>,
}

impl CouplingMatrix4 {
    /// Diagonal `(omega, omega + delta, omega + big_delta, omega_t)` with
    /// electron–line `g_p`, line–cavity `g_lc` and cavity–transmon `g_tc`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(omega: f64, delta: f64, big_delta: f64, omega_t: f64, g_p: f64, g_lc: f64, g_tc: f64) -> Self {
        #[rustfmt::skip]
        let matrix = Matrix4::new(
            omega, g_p, 0.0, 0.0,
            g_p, omega + delta, g_lc, 0.0,
            0.0, g_lc, omega + big_delta, g_tc,
            0.0, 0.0, g_tc, omega_t,
        );
        Self { matrix }
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.matrix;
        let scale = m.amax().max(1.0);
        if (m - m.transpose()).amax() > 1e-12 * scale {
            return Err(Error::ModelInconsistency("coupling matrix is not symmetric".into()));
        }
        for (i, j) in [(0, 2), (0, 3), (1, 3)] {
            if m[(i, j)] != 0.0 {
                return Err(Error::ModelInconsistency(format!("entry ({i}, {j}) must be zero")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reduction {
    /// Dressed transmon frequency, rad/s.
    pub omega_t: f64,
    /// (electron, line, dressed transmon), rad/s.
    pub reduced: Matrix3<f64>,
    /// Magnitude of the line–transmon coupling, rad/s.
    pub g_lt: f64,
    /// Dispersive shifts of the transmon and the line, rad/s.
    pub transmon_shift: f64,
    pub line_shift: f64,
}

/// `G_lt = G_lc G_tc / Delta`.
pub fn adiabatic_coupling(g_lc: f64, g_tc: f64, delta: f64) -> f64 {
    g_lc * g_tc / delta
}

/// Dress the transmon with the cavity to first order in `G_tc / Delta`
/// and drop the cavity-like mode.
///
/// The dressed transmon is `|t> - (G_tc/Delta) |c>` with
/// `Delta = omega_c - omega_t`, so the line sees it through
/// `-G_lc G_tc / Delta`. The second-order shifts of the transmon and of the
/// line are kept on the diagonal.
pub fn dress_and_reduce(c4: &CouplingMatrix4) -> Result<Reduction> {
    c4.validate()?;
    let m = &c4.matrix;
    let g_tc = m[(2, 3)];
    let g_lc = m[(1, 2)];
    let delta = m[(2, 2)] - m[(3, 3)];
    if delta.abs() < MIN_DISPERSIVE_RATIO * g_tc.abs() {
        return Err(Error::NotDispersive {
            detuning: delta.abs(),
            coupling: g_tc.abs(),
            factor: MIN_DISPERSIVE_RATIO,
        });
    }
    let transmon_shift = -g_tc * g_tc / delta;
    let line_shift = -g_lc * g_lc / (m[(2, 2)] - m[(1, 1)]);
    let omega_t = m[(3, 3)] + transmon_shift;
    let lt = -adiabatic_coupling(g_lc, g_tc, delta);
    #[rustfmt::skip]
    let reduced = Matrix3::new(
        m[(0, 0)], m[(0, 1)], 0.0,
        m[(1, 0)], m[(1, 1)] + line_shift, lt,
        0.0, lt, omega_t,
    );
    Ok(Reduction {
        omega_t,
        reduced,
        g_lt: lt.abs(),
        transmon_shift,
        line_shift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::two_pi;

    #[test]
    fn product_formula_example() {
        let g = adiabatic_coupling(two_pi(3e6), two_pi(100e6), two_pi(272.7e6));
        assert!((g / two_pi(1.1e6) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn decoupled_line() {
        let w = two_pi(7e9);
        let c = CouplingMatrix4::new(w, two_pi(1e6), two_pi(600e6), w, two_pi(1e6), 0.0, two_pi(100e6));
        let r = dress_and_reduce(&c).unwrap();
        assert_eq!(r.reduced[(1, 2)], 0.0);
        assert_eq!(r.g_lt, 0.0);
    }

    #[test]
    fn shift_commutes() {
        let w = two_pi(7e9);
        let c = CouplingMatrix4::new(w, two_pi(2e6), two_pi(600e6), w, two_pi(1e6), two_pi(3e6), two_pi(100e6));
        let mut s = c.clone();
        s.matrix += Matrix4::identity() * 123.0;
        let (a, b) = (dress_and_reduce(&c).unwrap(), dress_and_reduce(&s).unwrap());
        assert!((b.reduced - a.reduced - Matrix3::identity() * 123.0).amax() < 1e-3);
        assert_eq!(a.g_lt, b.g_lt);
    }

    #[test]
    fn weak_detuning_rejected() {
        let c = CouplingMatrix4::new(0.0, 0.0, 2.0, 0.0, 0.1, 0.1, 1.0);
        assert!(matches!(dress_and_reduce(&c), Err(Error::NotDispersive { .. })));
        let mut bad = CouplingMatrix4::new(0.0, 0.0, 20.0, 0.0, 0.1, 0.1, 1.0);
        bad.matrix[(0, 3)] = 0.5;
        bad.matrix[(3, 0)] = 0.5;
        assert!(bad.validate().is_err());
    }
}
