//! Triplet view of dense operators for the integrator kernels.
//!
//! Ladder operators embedded in product spaces are almost entirely zero; the
//! master-equation right-hand side is evaluated on the non-zero entries only.

use nalgebra::DMatrix;
use num_complex::Complex64;

#[derive(Clone, Debug)]
pub(crate) struct Triplets {
    pub entries: Vec<(usize, usize, Complex64)>,
}

impl Triplets {
    pub fn from_dense(m: &DMatrix<Complex64>) -> Self {
        let mut entries = Vec::new();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let v = m[(i, j)];
                if v != Complex64::new(0.0, 0.0) {
                    entries.push((i, j, v));
                }
            }
        }
        Self { entries }
    }
}

/// `out += c * A * rho` for row-major `rho`, `out` of side `d`.
#[inline]
pub(crate) fn add_left_product(
    out: &mut [Complex64],
    a: &Triplets,
    c: Complex64,
    rho: &[Complex64],
    d: usize,
) {
    for &(i, k, v) in &a.entries {
        let w = c * v;
        let src = &rho[k * d..(k + 1) * d];
        let dst = &mut out[i * d..(i + 1) * d];
        for (o, r) in dst.iter_mut().zip(src) {
            *o += w * r;
        }
    }
}

/// `out += rate * L rho L^dagger`.
#[inline]
pub(crate) fn add_sandwich(
    out: &mut [Complex64],
    l: &Triplets,
    rate: f64,
    rho: &[Complex64],
    d: usize,
) {
    for &(i, k, a) in &l.entries {
        let ra = a * rate;
        for &(j, m, b) in &l.entries {
            out[i * d + j] += ra * b.conj() * rho[k * d + m];
        }
    }
}

/// `tr(rho O)` for triplet `O`.
#[inline]
pub(crate) fn trace_product(rho: &[Complex64], o: &Triplets, d: usize) -> Complex64 {
    o.entries
        .iter()
        .map(|&(i, k, v)| v * rho[k * d + i])
        .sum()
}
