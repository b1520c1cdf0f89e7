//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::Matrix3;

/// Monodromy trace over one drive period of `x'' + (a - 2q cos 2t) x = 0`,
/// from a plain fixed-step RK4 in the dimensionless time.
pub fn mathieu_half_trace(a: f64, q: f64) -> f64 {
    let n = 20_000;
    let h = std::f64::consts::PI / n as f64;
    let rhs = |t: f64, y: [f64; 2]| [y[1], -(a - 2.0 * q * (2.0 * t).cos()) * y[0]];
    let mut cols = [[1.0, 0.0], [0.0, 1.0]];
    for y in cols.iter_mut() {
        let mut t = 0.0;
        for _ in 0..n {
            let k1 = rhs(t, *y);
            let k2 = rhs(t + h / 2.0, [y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]]);
            let k3 = rhs(t + h / 2.0, [y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]]);
            let k4 = rhs(t + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
            for i in 0..2 {
                y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            t += h;
        }
    }
    0.5 * (cols[0][0] + cols[1][1])
}

/// Characteristic exponent `beta` in the first stability region; the secular
/// frequency is `beta * Omega_rf / 2`.
pub fn floquet_beta(a: f64, q: f64) -> f64 {
    mathieu_half_trace(a, q).clamp(-1.0, 1.0).acos() / std::f64::consts::PI
}

/// First stability edge on the `a` = const line, by bisection on the trace.
pub fn floquet_edge(a: f64, mut lo: f64, mut hi: f64) -> f64 {
    while hi - lo > 1e-7 {
        let mid = 0.5 * (lo + hi);
        if mathieu_half_trace(a, mid) > -1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Single-excitation propagation of a lossless chain with both links at `g`
/// and the bus detuned by `delta`. Returns the (end, bus) populations at `t`
/// starting from the first system.
pub fn chain_single_excitation(g: f64, delta: f64, t: f64) -> (f64, f64) {
    let h = Matrix3::new(0.0, g, 0.0, g, delta, g, 0.0, g, 0.0);
    let eig = h.symmetric_eigen();
    let amp = |row: usize| {
        let (mut re, mut im) = (0.0, 0.0);
        for k in 0..3 {
            let w = eig.eigenvectors[(row, k)] * eig.eigenvectors[(0, k)];
            re += w * (eig.eigenvalues[k] * t).cos();
            im -= w * (eig.eigenvalues[k] * t).sin();
        }
        re * re + im * im
    };
    (amp(2), amp(1))
}
