use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{HilbertSpace, HERMITIAN_TOL};
use crate::error::{Error, Result};

/// Dense square complex operator.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    entries: DMatrix<Complex64>,
    hermitian_hint: bool,
}

impl OperatorMatrix {
    /// Wrap a square matrix. The Hermitian hint is set when the matrix is
    /// Hermitian within [`HERMITIAN_TOL`].
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::InvalidDimension(format!(
                "operator is {}x{}, not square",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.nrows() == 0 {
            return Err(Error::InvalidDimension("empty operator".into()));
        }
        let hermitian_hint = hermiticity_defect(&entries) < HERMITIAN_TOL;
        Ok(Self {
            entries,
            hermitian_hint,
        })
    }

    pub(crate) fn from_matrix_unchecked(entries: DMatrix<Complex64>) -> Self {
        let hermitian_hint = hermiticity_defect(&entries) < HERMITIAN_TOL;
        Self {
            entries,
            hermitian_hint,
        }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let m = DMatrix::from_fn(n, rows.first().map_or(0, |r| r.len()), |i, j| {
            Complex64::new(rows[i][j], 0.0)
        });
        Self::new(m)
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_matrix_unchecked(DMatrix::zeros(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn hermitian_hint(&self) -> bool {
        self.hermitian_hint
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.adjoint(),
            hermitian_hint: self.hermitian_hint,
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_matrix_unchecked(&self.entries * c)
    }

    pub fn scale_real(&self, c: f64) -> Self {
        Self {
            entries: &self.entries * Complex64::new(c, 0.0),
            hermitian_hint: self.hermitian_hint,
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    /// Largest entry of `|A - A^dagger|`.
    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.entries)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self::from_matrix_unchecked(
            &self.entries * &other.entries - &other.entries * &self.entries,
        ))
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self {
            entries: self.entries.kronecker(&other.entries),
            hermitian_hint: self.hermitian_hint && other.hermitian_hint,
        }
    }

    /// Eigenvalues of a Hermitian operator in ascending order.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .entries
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self::from_matrix_unchecked(&self.entries + &other.entries))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self::from_matrix_unchecked(&self.entries * &other.entries))
    }
}

fn hermiticity_defect(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

// Operator arithmetic panics on dimension mismatch, like matrix arithmetic does.
impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.try_add(rhs).expect("operator dimension mismatch")
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.check_same_dim(rhs).expect("operator dimension mismatch");
        OperatorMatrix::from_matrix_unchecked(&self.entries - &rhs.entries)
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.try_mul(rhs).expect("operator dimension mismatch")
    }
}

/// Annihilation, creation and number operators of a truncated mode.
#[derive(Clone, Debug)]
pub struct ModeOperators {
    pub a: OperatorMatrix,
    pub a_dagger: OperatorMatrix,
    pub n: OperatorMatrix,
}

pub fn mode_operators(dim: usize) -> Result<ModeOperators> {
    if dim < 2 {
        return Err(Error::InvalidDimension(format!("mode truncation {dim} < 2")));
    }
    let mut a = DMatrix::zeros(dim, dim);
    for k in 1..dim {
        a[(k - 1, k)] = Complex64::new((k as f64).sqrt(), 0.0);
    }
    let n = DMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            Complex64::new(i as f64, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let a = OperatorMatrix::from_matrix_unchecked(a);
    Ok(ModeOperators {
        a_dagger: a.adjoint(),
        a,
        n: OperatorMatrix::from_matrix_unchecked(n),
    })
}

pub fn identity(dim: usize) -> OperatorMatrix {
    OperatorMatrix::from_matrix_unchecked(DMatrix::identity(dim, dim))
}

/// Qubit lowering operator `|0><1|`.
pub fn sigma_minus() -> OperatorMatrix {
    let mut m = DMatrix::zeros(2, 2);
    m[(0, 1)] = Complex64::new(1.0, 0.0);
    OperatorMatrix::from_matrix_unchecked(m)
}

pub fn sigma_plus() -> OperatorMatrix {
    sigma_minus().adjoint()
}

/// `sigma_z = |1><1| - |0><0|` (excited state +1).
pub fn sigma_z() -> OperatorMatrix {
    let mut m = DMatrix::zeros(2, 2);
    m[(0, 0)] = Complex64::new(-1.0, 0.0);
    m[(1, 1)] = Complex64::new(1.0, 0.0);
    OperatorMatrix::from_matrix_unchecked(m)
}

/// Lift a single-subsystem operator into the full space.
pub fn embed(op: &OperatorMatrix, space: &HilbertSpace, index: usize) -> Result<OperatorMatrix> {
    let dims = space.dims();
    if index >= dims.len() {
        return Err(Error::InvalidEmbedding(format!(
            "subsystem index {index} out of range for {} subsystems",
            dims.len()
        )));
    }
    if op.dim() != dims[index] {
        return Err(Error::InvalidEmbedding(format!(
            "operator dimension {} does not match subsystem `{}` of dimension {}",
            op.dim(),
            space.labels()[index],
            dims[index]
        )));
    }
    let left: usize = dims[..index].iter().product();
    let right: usize = dims[index + 1..].iter().product();
    let mut out = op.clone();
    if right > 1 {
        out = out.kron(&identity(right));
    }
    if left > 1 {
        out = identity(left).kron(&out);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn smallest_truncation() {
        let ops = mode_operators(2).unwrap();
        let expected = OperatorMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert_eq!(ops.a, expected);
    }

    #[test]
    fn number_operator_diagonal() {
        let ops = mode_operators(5).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let want = if i == j { c(i as f64) } else { c(0.0) };
                assert_eq!(ops.n.get(i, j), want);
            }
        }
    }

    #[test]
    fn truncated_commutator_defect() {
        let ops = mode_operators(4).unwrap();
        let comm = ops.a.commutator(&ops.a_dagger).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = match (i, j) {
                    (3, 3) => -3.0,
                    (i, j) if i == j => 1.0,
                    _ => 0.0,
                };
                assert!((comm.get(i, j) - c(want)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn rejects_dim_one() {
        assert!(matches!(mode_operators(1), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn embed_identity_is_identity() {
        let s = HilbertSpace::new(vec![3, 2, 4], vec!["a", "q", "b"]).unwrap();
        let id = embed(&identity(2), &s, 1).unwrap();
        assert_eq!(id, identity(24));
    }

    #[test]
    fn embed_sigma_z_block_diagonal() {
        let s = HilbertSpace::new(vec![2, 3], vec!["q", "m"]).unwrap();
        let op = embed(&sigma_z(), &s, 0).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let want = if i != j {
                    0.0
                } else if i < 3 {
                    -1.0
                } else {
                    1.0
                };
                assert_eq!(op.get(i, j), c(want));
            }
        }
    }

    #[test]
    fn embedded_operators_on_different_modes_commute() {
        let s = HilbertSpace::new(vec![4, 3], vec!["a", "b"]).unwrap();
        let a = embed(&mode_operators(4).unwrap().a, &s, 0).unwrap();
        let b = embed(&mode_operators(3).unwrap().a_dagger, &s, 1).unwrap();
        let comm = a.commutator(&b).unwrap();
        assert_eq!(comm.max_abs(), 0.0);
    }

    #[test]
    fn embed_rejects_mismatch() {
        let s = HilbertSpace::new(vec![4, 3], vec!["a", "b"]).unwrap();
        let a = mode_operators(3).unwrap().a;
        assert!(matches!(embed(&a, &s, 0), Err(Error::InvalidEmbedding(_))));
        assert!(matches!(embed(&a, &s, 5), Err(Error::InvalidEmbedding(_))));
    }

    #[test]
    fn embedding_preserves_spectrum() {
        let s = HilbertSpace::new(vec![2, 5, 3], vec!["q", "a", "b"]).unwrap();
        let ops = mode_operators(5).unwrap();
        let x = &ops.a + &ops.a_dagger;
        let big = embed(&x, &s, 1).unwrap();
        assert!(big.hermitian_hint());
        let small = x.hermitian_eigenvalues();
        let mut repeated: Vec<f64> = small.iter().flat_map(|&e| [e; 6]).collect();
        repeated.sort_by(f64::total_cmp);
        let got = big.hermitian_eigenvalues();
        for (a, b) in got.iter().zip(&repeated) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}
