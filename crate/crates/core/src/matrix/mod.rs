//! Dense complex matrices and the numeric `(B,C)`-core-EP machinery.
//!
//! Ranks, pseudoinverses and projectors all go through one SVD with a
//! relative singular-value cut; see [`rank`].

mod core_ep;
mod io;
mod linalg;
pub mod random;

use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

pub use core_ep::{
    bc_core_ep, bc_core_ep_candidate, bc_core_ep_index, bc_core_ep_per_k, bc_inverse, closed_forms,
    direct_sum_check, dual_bc_core_ep, dual_bc_core_ep_index, solve_constrained, BcSolution,
    ClosedForms, ConstrainedSolution, CoreEpSolution, DirectSumReport, DualSolution, IndexScan,
    PerKSolutions, RankRow, Tolerances,
};
pub use io::{parse_complex, parse_vector, vector_to_json};
pub use linalg::{i13, i13_family, pinv, projector, range_residual, rank, RankProfile};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatrixError {
    #[error("matrix must have at least one row and one column")]
    Empty,
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("ragged rows: row {row} has {got} entries, expected {expected}")]
    Ragged {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
    #[error("no admissible k in [0, {k_max}] (rank table: {table})")]
    NotInvertible { k_max: usize, table: String },
    #[error("k = {k} is not admissible (rank table: {table})")]
    NotAdmissible { k: usize, table: String },
    #[error("not (B,C)-invertible: rk(CAB) = {rank_cab}, rk([CAB C]) = {rank_with_c}, rk([CAB; B]) = {rank_with_b}")]
    NotBcInvertible {
        rank_cab: usize,
        rank_with_c: usize,
        rank_with_b: usize,
    },
    #[error("cannot parse matrix: {0}")]
    Parse(String),
}

/// A dense complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    /// Wraps an nalgebra matrix, rejecting empty shapes and NaN/Inf entries.
    pub fn new(inner: DMatrix<Complex64>) -> Result<Self, MatrixError> {
        if inner.nrows() == 0 || inner.ncols() == 0 {
            return Err(MatrixError::Empty);
        }
        for c in 0..inner.ncols() {
            for r in 0..inner.nrows() {
                let z = inner[(r, c)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(MatrixError::NonFinite { row: r, col: c });
                }
            }
        }
        Ok(ComplexMatrix(inner))
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, MatrixError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != ncols {
                return Err(MatrixError::Ragged {
                    row: i,
                    got: r.len(),
                    expected: ncols,
                });
            }
        }
        Self::new(DMatrix::from_fn(nrows, ncols, |r, c| rows[r][c]))
    }

    /// Real matrix from row-major entries.
    pub fn from_real(nrows: usize, ncols: usize, entries: &[f64]) -> Result<Self, MatrixError> {
        if entries.len() != nrows * ncols {
            return Err(MatrixError::Dimension(format!(
                "{} entries for a {nrows}x{ncols} matrix",
                entries.len()
            )));
        }
        Self::new(DMatrix::from_fn(nrows, ncols, |r, c| {
            Complex64::new(entries[r * ncols + c], 0.0)
        }))
    }

    pub fn identity(n: usize) -> Self {
        ComplexMatrix(DMatrix::identity(n, n))
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        ComplexMatrix(DMatrix::zeros(nrows, ncols))
    }

    /// The matrix unit `E_{ij}` of size `n` (zero-based indices).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = DMatrix::zeros(n, n);
        m[(i, j)] = Complex64::new(1.0, 0.0);
        ComplexMatrix(m)
    }

    pub fn nrows(&self) -> usize {
        self.0.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.0[(r, c)]
    }

    pub fn inner(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.0
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        ComplexMatrix(self.0.adjoint())
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::identity(self.nrows()), |acc, _| &acc * self)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        linalg::spectral_norm(self)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, s: f64) -> Self {
        ComplexMatrix(self.0.map(|z| z * s))
    }

    /// `[self other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        let (r, c1, c2) = (self.nrows(), self.ncols(), other.ncols());
        assert_eq!(r, other.nrows(), "hstack row mismatch");
        ComplexMatrix(DMatrix::from_fn(r, c1 + c2, |i, j| {
            if j < c1 {
                self.0[(i, j)]
            } else {
                other.0[(i, j - c1)]
            }
        }))
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &Self) -> Self {
        let (r1, r2, c) = (self.nrows(), other.nrows(), self.ncols());
        assert_eq!(c, other.ncols(), "vstack column mismatch");
        ComplexMatrix(DMatrix::from_fn(r1 + r2, c, |i, j| {
            if i < r1 {
                self.0[(i, j)]
            } else {
                other.0[(i - r1, j)]
            }
        }))
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.ncols(), "vector length mismatch");
        (0..self.nrows())
            .map(|r| (0..self.ncols()).map(|c| self.0[(r, c)] * v[c]).sum())
            .collect()
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.nrows())
            .map(|r| (0..self.ncols()).map(|c| self.0[(r, c)]).collect())
            .collect()
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

/// Euclidean norm of a complex vector.
pub fn vector_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_and_empty() {
        let nan = DMatrix::from_element(2, 2, Complex64::new(f64::NAN, 0.0));
        assert_eq!(
            ComplexMatrix::new(nan),
            Err(MatrixError::NonFinite { row: 0, col: 0 })
        );
        assert_eq!(
            ComplexMatrix::new(DMatrix::zeros(0, 3)),
            Err(MatrixError::Empty)
        );
        let ragged = vec![vec![Complex64::new(1.0, 0.0)], vec![]];
        assert!(matches!(
            ComplexMatrix::from_rows(&ragged),
            Err(MatrixError::Ragged { row: 1, .. })
        ));
    }

    #[test]
    fn units_and_powers() {
        let e12 = ComplexMatrix::unit(3, 0, 1);
        let e23 = ComplexMatrix::unit(3, 1, 2);
        assert_eq!(&e12 * &e23, ComplexMatrix::unit(3, 0, 2));
        let shift = &e12 + &e23;
        assert_eq!(shift.pow(2), ComplexMatrix::unit(3, 0, 2));
        assert_eq!(shift.pow(3), ComplexMatrix::zeros(3, 3));
        assert_eq!(shift.pow(0), ComplexMatrix::identity(3));
    }

    #[test]
    fn stacking() {
        let i = ComplexMatrix::identity(2);
        let z = ComplexMatrix::zeros(2, 2);
        let h = i.hstack(&z);
        assert_eq!((h.nrows(), h.ncols()), (2, 4));
        let v = i.vstack(&z);
        assert_eq!((v.nrows(), v.ncols()), (4, 2));
        assert_eq!(v.get(1, 1), Complex64::new(1.0, 0.0));
    }
}
