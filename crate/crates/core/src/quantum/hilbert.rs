use crate::error::{Error, Result};

/// Tensor-product space of truncated modes and qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSpace {
    dims: Vec<usize>,
    labels: Vec<String>,
}

impl HilbertSpace {
    pub fn new<S: Into<String>>(dims: Vec<usize>, labels: Vec<S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if dims.is_empty() {
            return Err(Error::InvalidDimension("no subsystems".into()));
        }
        if dims.len() != labels.len() {
            return Err(Error::InvalidDimension(format!(
                "{} dimensions but {} labels",
                dims.len(),
                labels.len()
            )));
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDimension(format!(
                "subsystem dimension {d} < 2"
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidDimension(format!("duplicate label `{l}`")));
            }
        }
        Ok(Self { dims, labels })
    }

    /// Single-subsystem space.
    pub fn single(dim: usize, label: &str) -> Result<Self> {
        Self::new(vec![dim], vec![label])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Flat basis index of the product state `|levels[0], levels[1], ...>`.
    pub fn basis_index(&self, levels: &[usize]) -> Result<usize> {
        if levels.len() != self.dims.len() {
            return Err(Error::DimensionMismatch {
                expected: self.dims.len(),
                found: levels.len(),
            });
        }
        let mut idx = 0;
        for (&l, &d) in levels.iter().zip(&self.dims) {
            if l >= d {
                return Err(Error::InvalidDimension(format!(
                    "level {l} outside truncation {d}"
                )));
            }
            idx = idx * d + l;
        }
        Ok(idx)
    }

    /// Inverse of [`basis_index`](Self::basis_index).
    pub fn levels_of(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = idx % d;
            idx /= d;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_dimension_is_product() {
        let s = HilbertSpace::new(vec![4, 3, 2], vec!["a", "b", "q"]).unwrap();
        assert_eq!(s.total_dim(), 24);
        assert_eq!(s.index_of("q"), Some(2));
    }

    #[test]
    fn rejects_small_and_duplicate() {
        assert!(HilbertSpace::new(vec![1, 3], vec!["a", "b"]).is_err());
        assert!(HilbertSpace::new(vec![2, 3], vec!["a", "a"]).is_err());
        assert!(HilbertSpace::new(vec![2], vec!["a", "b"]).is_err());
    }

    #[test]
    fn basis_index_round_trips() {
        let s = HilbertSpace::new(vec![4, 3, 2], vec!["a", "b", "q"]).unwrap();
        for i in 0..s.total_dim() {
            assert_eq!(s.basis_index(&s.levels_of(i)).unwrap(), i);
        }
        assert_eq!(s.basis_index(&[1, 0, 0]).unwrap(), 6);
        assert!(s.basis_index(&[0, 3, 0]).is_err());
    }
}
