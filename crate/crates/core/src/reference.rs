//! Brute-force dense matrices, used to cross-check the amplitude-level
//! fast paths.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{check_qubits, MarkedSet, StateVector};

/// Largest register for which a dense Grover step will be built.
pub const MAX_REFERENCE_QUBITS: usize = 6;

/// Square row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Largest entrywise distance to another matrix.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |M†M − I|` over all entries.
    pub fn unitarity_defect(&self) -> f64 {
        self.adjoint()
            .mul(self)
            .max_abs_diff(&Self::identity(self.dim))
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.entries[r * self.dim + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[r * self.dim + c]
    }
}

/// Diagonal phase oracle `diag((-1)^{f(x)})`.
pub fn dense_phase_oracle(k: usize, marked: &MarkedSet) -> Result<DenseMatrix> {
    check_reference_size(k)?;
    let dim = 1usize << k;
    marked.check_range(dim)?;
    let mut m = DenseMatrix::identity(dim);
    for i in marked.iter() {
        m[(i, i)] = Complex64::new(-1.0, 0.0);
    }
    Ok(m)
}

/// `2|s⟩⟨s| − I` with `|s⟩` the uniform superposition, built as an outer
/// product of the uniform vector.
pub fn dense_diffusion(k: usize) -> Result<DenseMatrix> {
    check_reference_size(k)?;
    let s = StateVector::new_uniform(k)?;
    let dim = s.dimension();
    let mut m = DenseMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            m[(i, j)] = 2.0 * s.amplitudes()[i] * s.amplitudes()[j].conj();
        }
        m[(i, i)] -= Complex64::new(1.0, 0.0);
    }
    Ok(m)
}

/// The explicit Grover iterate `(2|s⟩⟨s| − I)·O` as a dense `2^k × 2^k`
/// matrix.
pub fn dense_reference_step(k: usize, marked: &MarkedSet) -> Result<DenseMatrix> {
    Ok(dense_diffusion(k)?.mul(&dense_phase_oracle(k, marked)?))
}

fn check_reference_size(k: usize) -> Result<()> {
    check_qubits(k)?;
    if k > MAX_REFERENCE_QUBITS {
        return Err(Error::Size(format!(
            "dense reference limited to {MAX_REFERENCE_QUBITS} qubits, got {k}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::ALGEBRAIC_TOL;

    #[test]
    fn empty_oracle_gives_diffusion() {
        let step = dense_reference_step(1, &MarkedSet::empty()).unwrap();
        assert!(step.max_abs_diff(&dense_diffusion(1).unwrap()) <= ALGEBRAIC_TOL);
        assert!(step.unitarity_defect() <= ALGEBRAIC_TOL);
    }

    #[test]
    fn matches_fast_path_on_uniform() {
        let marked = MarkedSet::singleton(2);
        let step = dense_reference_step(2, &marked).unwrap();
        let mut s = StateVector::new_uniform(2).unwrap();
        let dense = step.apply(s.amplitudes());
        s.apply_phase_oracle(&marked).unwrap();
        s.apply_diffusion();
        for (a, b) in dense.iter().zip(s.amplitudes()) {
            assert!((a - b).norm() <= ALGEBRAIC_TOL);
        }
    }

    #[test]
    fn unitary_with_two_marked() {
        let step = dense_reference_step(3, &MarkedSet::from([0, 5])).unwrap();
        assert!(step.unitarity_defect() <= ALGEBRAIC_TOL);
    }

    #[test]
    fn size_limits() {
        assert!(matches!(
            dense_reference_step(7, &MarkedSet::empty()),
            Err(Error::Size(_))
        ));
        assert!(matches!(
            dense_reference_step(0, &MarkedSet::empty()),
            Err(Error::Size(_))
        ));
    }
}
