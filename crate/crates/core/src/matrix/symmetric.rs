use std::ops::Deref;

use super::{check_index, Matrix};
use crate::error::{Error, Result};
use crate::ring::Ring;

/// An element of `H_n(R)`: a matrix with `a^{i,j} = a^{j,i}`, checked at construction.
///
/// Stored as a full matrix since every formula on `H_n(R)` goes through
/// ordinary matrix products.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymmetricMatrix(Matrix);

impl SymmetricMatrix {
    pub fn new(m: Matrix) -> Result<SymmetricMatrix> {
        if !m.is_symmetric() {
            return Err(Error::domain("matrix is not symmetric"));
        }
        Ok(SymmetricMatrix(m))
    }

    pub(crate) fn new_unchecked(m: Matrix) -> SymmetricMatrix {
        debug_assert!(m.is_symmetric());
        SymmetricMatrix(m)
    }

    /// `ē_{i,j} = e_{i,j} + e_{j,i}` for `i ≠ j`.
    pub fn jordan_unit(ring: Ring, n: usize, i: usize, j: usize) -> Result<SymmetricMatrix> {
        check_index(n, i)?;
        check_index(n, j)?;
        if i == j {
            return Err(Error::domain(format!(
                "ē_{{{i},{j}}} needs distinct indices; use the matrix unit e_{{{i},{i}}} for diagonal probes"
            )));
        }
        let m = &Matrix::unit(ring, n, i, j)? + &Matrix::unit(ring, n, j, i)?;
        Ok(SymmetricMatrix(m))
    }

    /// The diagonal unit `e_{i,i}`, which is symmetric.
    pub fn diagonal_unit(ring: Ring, n: usize, i: usize) -> Result<SymmetricMatrix> {
        Ok(SymmetricMatrix(Matrix::unit(ring, n, i, i)?))
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    /// Jordan product; `H_n(R)` is closed under it.
    pub fn jordan_mul(&self, other: &SymmetricMatrix) -> Result<SymmetricMatrix> {
        Ok(SymmetricMatrix(self.0.jordan_mul(&other.0)?))
    }

    pub fn try_add(&self, other: &SymmetricMatrix) -> Result<SymmetricMatrix> {
        Ok(SymmetricMatrix(self.0.try_add(&other.0)?))
    }
}

impl Deref for SymmetricMatrix {
    type Target = Matrix;
    fn deref(&self) -> &Matrix {
        &self.0
    }
}

impl AsRef<Matrix> for SymmetricMatrix {
    fn as_ref(&self) -> &Matrix {
        &self.0
    }
}

impl TryFrom<Matrix> for SymmetricMatrix {
    type Error = Error;
    fn try_from(m: Matrix) -> Result<SymmetricMatrix> {
        SymmetricMatrix::new(m)
    }
}
