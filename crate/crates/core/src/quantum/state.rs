use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{HilbertSpace, OperatorMatrix, POSITIVITY_TOL, STATE_TOL};
use crate::error::{Error, Result};

/// Density matrix on a [`HilbertSpace`].
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    space: HilbertSpace,
    rho: DMatrix<Complex64>,
}

impl QuantumState {
    /// Validated density matrix (unit trace, Hermitian, positive within tolerance).
    pub fn from_density(space: HilbertSpace, rho: DMatrix<Complex64>) -> Result<Self> {
        let s = Self::from_density_unchecked(space, rho)?;
        s.validate()?;
        Ok(s)
    }

    /// Shape-checked only; used by integrators that validate at checkpoints.
    pub fn from_density_unchecked(space: HilbertSpace, rho: DMatrix<Complex64>) -> Result<Self> {
        let d = space.total_dim();
        if rho.nrows() != d || rho.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: rho.nrows(),
            });
        }
        Ok(Self { space, rho })
    }

    /// Pure state from amplitudes; the vector is normalised.
    pub fn pure(space: HilbertSpace, amplitudes: &[Complex64]) -> Result<Self> {
        let d = space.total_dim();
        if amplitudes.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: amplitudes.len(),
            });
        }
        let v = DVector::from_column_slice(amplitudes);
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let v = v / Complex64::new(norm, 0.0);
        let rho = &v * v.adjoint();
        Ok(Self { space, rho })
    }

    /// Product basis state `|levels...>`.
    pub fn basis(space: HilbertSpace, levels: &[usize]) -> Result<Self> {
        let idx = space.basis_index(levels)?;
        let d = space.total_dim();
        let mut rho = DMatrix::zeros(d, d);
        rho[(idx, idx)] = Complex64::new(1.0, 0.0);
        Ok(Self { space, rho })
    }

    /// Superposition `sum_k c_k |levels_k>` of product basis states.
    pub fn superposition(space: HilbertSpace, terms: &[(Complex64, &[usize])]) -> Result<Self> {
        let mut amps = vec![Complex64::new(0.0, 0.0); space.total_dim()];
        for (c, levels) in terms {
            amps[space.basis_index(levels)?] += *c;
        }
        Self::pure(space, &amps)
    }

    /// Thermal state of a single truncated mode: the Bose distribution at mean
    /// occupation `nbar`, truncated to `dim` levels and renormalised.
    pub fn thermal(dim: usize, nbar: f64, label: &str) -> Result<Self> {
        if nbar < 0.0 || !nbar.is_finite() {
            return Err(Error::param("nbar", "must be finite and >= 0"));
        }
        let space = HilbertSpace::single(dim, label)?;
        let ratio = nbar / (1.0 + nbar);
        let weights: Vec<f64> = (0..dim).map(|k| ratio.powi(k as i32)).collect();
        let total: f64 = weights.iter().sum();
        let rho = DMatrix::from_fn(dim, dim, |i, j| {
            if i == j {
                Complex64::new(weights[i] / total, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Ok(Self { space, rho })
    }

    /// Tensor product of states; the spaces are concatenated in order.
    pub fn product(parts: &[QuantumState]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidState("empty product".into()))?;
        let mut dims = Vec::new();
        let mut labels = Vec::new();
        let mut rho = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
        for p in parts {
            dims.extend_from_slice(p.space.dims());
            labels.extend(p.space.labels().iter().cloned());
            rho = rho.kronecker(&p.rho);
        }
        let _ = first;
        Ok(Self {
            space: HilbertSpace::new(dims, labels)?,
            rho,
        })
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn rho(&self) -> &DMatrix<Complex64> {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.rho.trace()
    }

    pub fn purity(&self) -> f64 {
        // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
        self.rho.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        OperatorMatrix::from_matrix_unchecked(self.rho.clone()).hermiticity_defect()
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let h = (&self.rho + self.rho.adjoint()) * Complex64::new(0.5, 0.0);
        let mut v: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Population of a product basis state.
    pub fn population(&self, levels: &[usize]) -> Result<f64> {
        let i = self.space.basis_index(levels)?;
        Ok(self.rho[(i, i)].re)
    }

    pub fn validate(&self) -> Result<()> {
        let tr = self.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let h = self.hermiticity_defect();
        if h > STATE_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (defect {h:e})")));
        }
        let e = self.min_eigenvalue();
        if e < POSITIVITY_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {e:e}")));
        }
        Ok(())
    }

    /// Reduced state on the listed subsystems (kept in the given order of the
    /// original space).
    pub fn partial_trace_keep(&self, keep: &[usize]) -> Result<Self> {
        let dims = self.space.dims();
        let mut keep_sorted = keep.to_vec();
        keep_sorted.sort_unstable();
        keep_sorted.dedup();
        if keep_sorted.is_empty() || keep_sorted.iter().any(|&k| k >= dims.len()) {
            return Err(Error::InvalidEmbedding(format!(
                "cannot keep subsystems {keep:?} of {}",
                dims.len()
            )));
        }
        let kdims: Vec<usize> = keep_sorted.iter().map(|&k| dims[k]).collect();
        let klabels: Vec<String> = keep_sorted
            .iter()
            .map(|&k| self.space.labels()[k].clone())
            .collect();
        let kspace = HilbertSpace::new(kdims, klabels)?;
        let kd = kspace.total_dim();
        let mut out = DMatrix::zeros(kd, kd);
        let d = self.dim();
        let levels: Vec<Vec<usize>> = (0..d).map(|i| self.space.levels_of(i)).collect();
        let reduced_index = |lv: &[usize]| -> usize {
            keep_sorted
                .iter()
                .fold(0, |acc, &k| acc * dims[k] + lv[k])
        };
        let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep_sorted.contains(k)).collect();
        for i in 0..d {
            for j in 0..d {
                let (li, lj) = (&levels[i], &levels[j]);
                if traced.iter().all(|&t| li[t] == lj[t]) {
                    out[(reduced_index(li), reduced_index(lj))] += self.rho[(i, j)];
                }
            }
        }
        Ok(Self {
            space: kspace,
            rho: out,
        })
    }
}

/// Fidelity between `rho` and `target`.
///
/// If either state is pure this is the overlap `tr(rho target)`; otherwise the
/// Uhlmann fidelity `(tr sqrt(sqrt(rho) target sqrt(rho)))^2`. Clamped to `[0, 1]`.
pub fn state_fidelity(rho: &QuantumState, target: &QuantumState) -> Result<f64> {
    if rho.space != target.space {
        return Err(Error::InvalidComparison(format!(
            "spaces differ: {:?} vs {:?}",
            rho.space.dims(),
            target.space.dims()
        )));
    }
    const PURE: f64 = 1.0 - 1e-12;
    let f = if target.purity() > PURE || rho.purity() > PURE {
        (&rho.rho * &target.rho).trace().re
    } else {
        let sqrt_rho = hermitian_sqrt(&rho.rho);
        let inner = &sqrt_rho * &target.rho * &sqrt_rho;
        let s: f64 = hermitian_eigs(&inner).iter().map(|&e| e.max(0.0).sqrt()).sum();
        s * s
    };
    Ok(f.clamp(0.0, 1.0))
}

/// `tr(rho op)`.
pub fn expectation(rho: &QuantumState, op: &OperatorMatrix) -> Result<Complex64> {
    if op.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: op.dim(),
        });
    }
    let r = &rho.rho;
    let o = op.matrix();
    let d = rho.dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..d {
        for k in 0..d {
            acc += r[(i, k)] * o[(k, i)];
        }
    }
    Ok(acc)
}

fn hermitian_eigs(m: &DMatrix<Complex64>) -> Vec<f64> {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    h.symmetric_eigenvalues().iter().copied().collect()
}

fn hermitian_sqrt(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let sq = eig
        .eigenvalues
        .map(|e| Complex64::new(e.max(0.0).sqrt(), 0.0));
    &eig.eigenvectors * DMatrix::from_diagonal(&sq) * eig.eigenvectors.adjoint()
}
