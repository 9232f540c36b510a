//! Dense `n × n` matrices over a [`Ring`].
//!
//! The public API indexes rows and columns from 1, matching the usual
//! `e_{i,j}` notation; storage is row-major and 0-based. Checked operations
//! (`try_*`, [`Matrix::corner`], [`Matrix::unit`], ...) return
//! [`Error::Domain`] on shape, ring or index problems. The operator impls on
//! `&Matrix` panic on mismatch instead and are meant for code that has
//! already established compatible shapes.

mod symmetric;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::ring::{Elem, Ring, RingValue};

pub use symmetric::SymmetricMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    ring: Ring,
    n: usize,
    entries: Vec<Elem>,
}

impl Matrix {
    pub(crate) fn from_fn(ring: Ring, n: usize, mut f: impl FnMut(usize, usize) -> Elem) -> Matrix {
        assert!(n >= 1, "matrices have dimension at least 1");
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                entries.push(f(r, c));
            }
        }
        Matrix { ring, n, entries }
    }

    /// The zero matrix. Panics if `n == 0`.
    pub fn zeros(ring: Ring, n: usize) -> Matrix {
        Matrix::from_fn(ring, n, |_, _| ring.zero())
    }

    /// The scalar matrix `z·I`.
    pub fn scalar(ring: Ring, n: usize, z: &Elem) -> Matrix {
        Matrix::from_fn(ring, n, |r, c| if r == c { z.clone() } else { ring.zero() })
    }

    pub fn identity(ring: Ring, n: usize) -> Matrix {
        Matrix::scalar(ring, n, &ring.one())
    }

    /// The matrix unit `e_{i,j}` (1-based).
    pub fn unit(ring: Ring, n: usize, i: usize, j: usize) -> Result<Matrix> {
        check_index(n, i)?;
        check_index(n, j)?;
        Ok(Matrix::from_fn(ring, n, |r, c| {
            if r + 1 == i && c + 1 == j {
                ring.one()
            } else {
                ring.zero()
            }
        }))
    }

    /// Builds a matrix from canonical rows; every row must have length `rows.len()`.
    pub fn from_rows(ring: Ring, rows: Vec<Vec<Elem>>) -> Result<Matrix> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::domain("matrix must have at least one row"));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::domain(format!(
                    "row {} has {} entries, expected {n}",
                    r + 1,
                    row.len()
                )));
            }
            for e in row {
                ring.check(&e)?;
                entries.push(e);
            }
        }
        Ok(Matrix { ring, n, entries })
    }

    /// Builds a matrix from integer rows, reducing each entry into the ring.
    pub fn from_ints<R: AsRef<[i64]>>(ring: Ring, rows: &[R]) -> Result<Matrix> {
        Matrix::from_rows(
            ring,
            rows.iter()
                .map(|row| row.as_ref().iter().map(|&k| ring.from_i64(k)).collect())
                .collect(),
        )
    }

    /// The superdiagonal shift `x₀ = Σ_{k=1}^{n-1} e_{k,k+1}`. Requires `n >= 2`.
    pub fn probe_x0(ring: Ring, n: usize) -> Result<Matrix> {
        if n < 2 {
            return Err(Error::domain(format!(
                "the shift probe needs n >= 2, got n = {n}"
            )));
        }
        Ok(Matrix::from_fn(ring, n, |r, c| {
            if c == r + 1 {
                ring.one()
            } else {
                ring.zero()
            }
        }))
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `(i, j)`, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> Result<RingValue> {
        check_index(self.n, i)?;
        check_index(self.n, j)?;
        Ok(RingValue::from_canonical(self.ring, self.at(i - 1, j - 1).clone()))
    }

    /// 0-based entry access.
    #[inline]
    pub(crate) fn at(&self, r: usize, c: usize) -> &Elem {
        &self.entries[r * self.n + c]
    }

    #[inline]
    pub(crate) fn at_mut(&mut self, r: usize, c: usize) -> &mut Elem {
        &mut self.entries[r * self.n + c]
    }

    /// Rows as owned payload vectors.
    pub fn rows(&self) -> Vec<Vec<Elem>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub(crate) fn entries(&self) -> &[Elem] {
        &self.entries
    }

    /// Fails unless `other` has the same ring and dimension.
    pub fn check_compatible(&self, other: &Matrix) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::domain(format!(
                "ring mismatch: {} vs {}",
                self.ring, other.ring
            )));
        }
        if self.n != other.n {
            return Err(Error::domain(format!(
                "dimension mismatch: {} vs {}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(&Elem, &Elem) -> Elem) -> Matrix {
        Matrix {
            ring: self.ring,
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn try_add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, |a, b| self.ring.add(a, b)))
    }

    pub fn try_sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, |a, b| self.ring.sub(a, b)))
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_compatible(other)?;
        let ring = self.ring;
        let n = self.n;
        let mut out = Matrix::zeros(ring, n);
        for r in 0..n {
            for k in 0..n {
                let a = self.at(r, k);
                if ring.is_zero(a) {
                    continue;
                }
                for c in 0..n {
                    let b = other.at(k, c);
                    if ring.is_zero(b) {
                        continue;
                    }
                    let prod = ring.mul(a, b);
                    let slot = out.at_mut(r, c);
                    *slot = ring.add(slot, &prod);
                }
            }
        }
        Ok(out)
    }

    /// `[a, b] = ab − ba`.
    pub fn commutator(&self, other: &Matrix) -> Result<Matrix> {
        self.check_compatible(other)?;
        Ok(&(self * other) - &(other * self))
    }

    /// Jordan product `a ∘ b = ½(ab + ba)`.
    pub fn jordan_mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_compatible(other)?;
        Ok((&(self * other) + &(other * self)).half())
    }

    pub fn neg(&self) -> Matrix {
        self.map(|e| self.ring.neg(e))
    }

    /// Multiplies every entry by `z`.
    pub fn scale(&self, z: &Elem) -> Matrix {
        self.map(|e| self.ring.mul(z, e))
    }

    pub fn scale_int(&self, k: i64) -> Matrix {
        self.scale(&self.ring.from_i64(k))
    }

    pub fn half(&self) -> Matrix {
        self.map(|e| self.ring.half(e))
    }

    pub(crate) fn map(&self, f: impl Fn(&Elem) -> Elem) -> Matrix {
        Matrix {
            ring: self.ring,
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Matrix {
        let mut acc = Matrix::identity(self.ring, self.n);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.ring, self.n, |r, c| self.at(c, r).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| self.ring.is_zero(e))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|r| (r + 1..self.n).all(|c| self.at(r, c) == self.at(c, r)))
    }

    /// `aᵀ = −a`. With 2 invertible this forces a zero diagonal.
    pub fn is_skew(&self) -> bool {
        (0..self.n).all(|r| (r..self.n).all(|c| *self.at(r, c) == self.ring.neg(self.at(c, r))))
    }

    pub fn has_zero_diagonal(&self) -> bool {
        (0..self.n).all(|r| self.ring.is_zero(self.at(r, r)))
    }

    /// `e_{i,i} · a · e_{j,j}`: keeps entry `(i, j)` and zeroes the rest.
    pub fn corner(&self, i: usize, j: usize) -> Result<Matrix> {
        check_index(self.n, i)?;
        check_index(self.n, j)?;
        Ok(self.corner0(i - 1, j - 1))
    }

    pub(crate) fn corner0(&self, r0: usize, c0: usize) -> Matrix {
        let ring = self.ring;
        Matrix::from_fn(ring, self.n, |r, c| {
            if r == r0 && c == c0 {
                self.at(r, c).clone()
            } else {
                ring.zero()
            }
        })
    }

    /// The `size × size` block with top-left corner at 0-based `(r0, c0)`.
    pub(crate) fn block(&self, r0: usize, c0: usize, size: usize) -> Matrix {
        Matrix::from_fn(self.ring, size, |r, c| self.at(r0 + r, c0 + c).clone())
    }

    /// `[[a, b], [c, d]]` from four equally sized blocks.
    pub(crate) fn from_blocks(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Matrix {
        let h = a.n;
        Matrix::from_fn(a.ring, 2 * h, |r, col| {
            let src = match (r < h, col < h) {
                (true, true) => a,
                (true, false) => b,
                (false, true) => c,
                (false, false) => d,
            };
            src.at(r % h, col % h).clone()
        })
    }

    /// Places `self` in the top-left corner of a zero `size × size` matrix.
    pub(crate) fn embed(&self, size: usize) -> Matrix {
        debug_assert!(size >= self.n);
        let ring = self.ring;
        Matrix::from_fn(ring, size, |r, c| {
            if r < self.n && c < self.n {
                self.at(r, c).clone()
            } else {
                ring.zero()
            }
        })
    }

    /// Sum of a nonempty list of compatible matrices.
    pub fn sum<'a>(ring: Ring, n: usize, terms: impl IntoIterator<Item = &'a Matrix>) -> Matrix {
        terms
            .into_iter()
            .fold(Matrix::zeros(ring, n), |acc, t| &acc + t)
    }
}

pub(crate) fn check_index(n: usize, i: usize) -> Result<()> {
    if i == 0 || i > n {
        return Err(Error::domain(format!(
            "index {i} out of range 1..={n}"
        )));
    }
    Ok(())
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (r, row) in self.entries.chunks(self.n).enumerate() {
            if r > 0 {
                f.write_str(", ")?;
            }
            let cells: Vec<String> = row.iter().map(|e| self.ring.display(e)).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        f.write_str("]")
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.try_add(rhs).expect("incompatible matrices in +")
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.try_sub(rhs).expect("incompatible matrices in -")
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.try_mul(rhs).expect("incompatible matrices in *")
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z5() -> Ring {
        Ring::zmod(5).unwrap()
    }

    fn e(n: usize, i: usize, j: usize) -> Matrix {
        Matrix::unit(z5(), n, i, j).unwrap()
    }

    #[test]
    fn matrix_unit_products() {
        assert_eq!(&e(2, 1, 2) * &e(2, 2, 1), e(2, 1, 1));
        assert!((&e(2, 1, 2) * &e(2, 1, 2)).is_zero());
        let diag = Matrix::sum(z5(), 3, &[e(3, 1, 1), e(3, 2, 2), e(3, 3, 3)]);
        assert_eq!(diag, Matrix::identity(z5(), 3));
    }

    #[test]
    fn unit_indices_are_one_based() {
        assert!(Matrix::unit(z5(), 2, 0, 1).is_err());
        assert!(Matrix::unit(z5(), 2, 1, 3).is_err());
        assert_eq!(e(2, 2, 1).entry(2, 1).unwrap(), RingValue::one(z5()));
    }

    #[test]
    fn schoolbook_product_mod_5() {
        let a = Matrix::from_ints(z5(), &[[1, 2], [3, 4]]).unwrap();
        let s = Matrix::from_ints(z5(), &[[0, 1], [1, 0]]).unwrap();
        assert_eq!(&a * &s, Matrix::from_ints(z5(), &[[2, 1], [4, 3]]).unwrap());
        let i = Matrix::identity(z5(), 2);
        assert_eq!(&a * &i, a);
        assert_eq!(&i * &a, a);
    }

    #[test]
    fn shape_and_ring_mismatch() {
        let a = Matrix::identity(z5(), 2);
        let b = Matrix::identity(z5(), 3);
        let c = Matrix::identity(Ring::zmod(7).unwrap(), 2);
        assert!(matches!(a.try_mul(&b), Err(Error::Domain(_))));
        assert!(matches!(a.try_add(&c), Err(Error::Domain(_))));
        assert!(a.commutator(&b).is_err());
        assert!(a.jordan_mul(&c).is_err());
    }

    #[test]
    fn commutator_of_units() {
        let c = e(2, 1, 2).commutator(&e(2, 2, 1)).unwrap();
        assert_eq!(c, &e(2, 1, 1) - &e(2, 2, 2));
        let a = Matrix::from_ints(z5(), &[[1, 2], [3, 4]]).unwrap();
        assert!(a.commutator(&a).unwrap().is_zero());
        assert!(a.commutator(&Matrix::identity(z5(), 2)).unwrap().is_zero());
    }

    #[test]
    fn corners() {
        let a = Matrix::from_ints(z5(), &[[1, 2], [3, 4]]).unwrap();
        assert_eq!(a.corner(1, 2).unwrap(), Matrix::from_ints(z5(), &[[0, 2], [0, 0]]).unwrap());
        let total = Matrix::sum(
            z5(),
            2,
            &[
                a.corner(1, 1).unwrap(),
                a.corner(1, 2).unwrap(),
                a.corner(2, 1).unwrap(),
                a.corner(2, 2).unwrap(),
            ],
        );
        assert_eq!(total, a);
        let zi = Matrix::scalar(z5(), 3, &Elem::Residue(4));
        assert!(zi.corner(1, 3).unwrap().is_zero());
        assert!(a.corner(3, 1).is_err());
    }

    #[test]
    fn jordan_product_of_units() {
        // e11 ∘ ē12 = ½ ē12 = 3 ē12 over Z_5
        let ebar = &e(2, 1, 2) + &e(2, 2, 1);
        let prod = e(2, 1, 1).jordan_mul(&ebar).unwrap();
        assert_eq!(prod, ebar.scale_int(3));
        let a = Matrix::from_ints(z5(), &[[1, 2], [3, 4]]).unwrap();
        assert_eq!(Matrix::identity(z5(), 2).jordan_mul(&a).unwrap(), a);
    }

    #[test]
    fn transpose_and_predicates() {
        let a = Matrix::from_ints(z5(), &[[1, 2], [3, 4]]).unwrap();
        assert_eq!(a.transpose(), Matrix::from_ints(z5(), &[[1, 3], [2, 4]]).unwrap());
        assert!(Matrix::identity(z5(), 3).is_symmetric());
        assert!(!a.is_symmetric());
        let skew = Matrix::from_ints(z5(), &[[0, 2], [-2, 0]]).unwrap();
        assert!(skew.is_skew());
        assert!(!Matrix::identity(z5(), 2).is_skew());
    }

    #[test]
    fn shift_probe() {
        assert_eq!(Matrix::probe_x0(z5(), 2).unwrap(), e(2, 1, 2));
        assert_eq!(Matrix::probe_x0(z5(), 3).unwrap(), &e(3, 1, 2) + &e(3, 2, 3));
        for n in 2..6 {
            let x0 = Matrix::probe_x0(z5(), n).unwrap();
            assert!(x0.pow(n as u32).is_zero());
            assert!(!x0.pow(n as u32 - 1).is_zero());
        }
        assert!(Matrix::probe_x0(z5(), 1).is_err());
    }

    #[test]
    fn blocks_reassemble() {
        let a = Matrix::from_ints(z5(), &[[1, 2, 3, 4], [0, 1, 2, 3], [4, 0, 1, 2], [3, 4, 0, 1]]).unwrap();
        let back = Matrix::from_blocks(&a.block(0, 0, 2), &a.block(0, 2, 2), &a.block(2, 0, 2), &a.block(2, 2, 2));
        assert_eq!(back, a);
        let small = a.block(0, 0, 3);
        assert_eq!(small.embed(4).block(0, 0, 3), small);
    }

    #[test]
    fn from_rows_validates() {
        let r = z5();
        assert!(Matrix::from_rows(r, vec![]).is_err());
        assert!(Matrix::from_rows(r, vec![vec![r.one()], vec![r.one()]]).is_err());
        assert!(Matrix::from_rows(r, vec![vec![Elem::Residue(7)]]).is_err());
    }
}
