//! Dense matrices over `Z/p^N`.
//!
//! Factorizations never pivot: a non-unit pivot means the input has left the
//! congruence subgroup it was promised to lie in, and that is reported.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{PadicScalar, Zpn};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix", into = "RawMatrix")]
pub struct Matrix {
    ring: Zpn,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct RawMatrix {
    p: u64,
    #[serde(rename = "N")]
    prec: u32,
    entries: Vec<Vec<i64>>,
}

impl TryFrom<RawMatrix> for Matrix {
    type Error = Error;
    fn try_from(raw: RawMatrix) -> Result<Self> {
        let ring = Zpn::new(raw.p, raw.prec)?;
        Matrix::from_rows(ring, &raw.entries)
    }
}

impl From<Matrix> for RawMatrix {
    fn from(m: Matrix) -> Self {
        RawMatrix {
            p: m.ring.p(),
            prec: m.ring.prec(),
            entries: (0..m.rows)
                .map(|i| (0..m.cols).map(|j| m.data[i * m.cols + j] as i64).collect())
                .collect(),
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "] mod {}^{}", self.ring.p(), self.ring.prec())
    }
}

impl Matrix {
    pub fn zeros(ring: Zpn, rows: usize, cols: usize) -> Self {
        Self {
            ring,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(ring: Zpn, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % ring.modulus();
        }
        m
    }

    /// Ones on the antidiagonal.
    pub fn antidiagonal(ring: Zpn, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, n - 1 - i, ring.one());
        }
        m
    }

    pub fn from_rows(ring: Zpn, rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows"));
        }
        let data = rows.iter().flat_map(|row| row.iter().map(|&v| ring.elem(v as i128).residue())).collect();
        Ok(Self {
            ring,
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn from_fn(ring: Zpn, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> PadicScalar) -> Self {
        let mut m = Self::zeros(ring, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn diagonal(ring: Zpn, entries: &[PadicScalar]) -> Self {
        let n = entries.len();
        Self::from_fn(ring, n, n, |i, j| if i == j { entries[i] } else { ring.zero() })
    }

    pub fn ring(&self) -> Zpn {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> PadicScalar {
        self.ring.elem(self.data[i * self.cols + j] as i128)
    }

    pub fn set(&mut self, i: usize, j: usize, x: PadicScalar) {
        assert_eq!(x.ring(), self.ring, "mixed residue rings");
        self.data[i * self.cols + j] = x.residue();
    }

    pub fn diag(&self) -> Vec<PadicScalar> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.ring, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(self.ring, rows, cols, |i, j| self.get(r0 + i, c0 + j))
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j));
            }
        }
    }

    pub fn block_diag(a: &Matrix, b: &Matrix) -> Self {
        let mut m = Self::zeros(a.ring, a.rows + b.rows, a.cols + b.cols);
        m.set_block(0, 0, a);
        m.set_block(a.rows, a.cols, b);
        m
    }

    pub fn scale(&self, x: PadicScalar) -> Self {
        Self::from_fn(self.ring, self.rows, self.cols, |i, j| self.get(i, j) * x)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Gauss–Jordan inverse, searching for a unit pivot in each column.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("inverse of a non-square matrix"));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(self.ring, n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| a.get(r, col).is_unit()).ok_or(Error::Singular)?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let pinv = a.get(col, col).inverse()?;
            a.scale_row(col, pinv);
            inv.scale_row(col, pinv);
            for r in 0..n {
                if r != col {
                    let f = a.get(r, col);
                    if !f.is_zero() {
                        a.add_row_multiple(r, col, -f);
                        inv.add_row_multiple(r, col, -f);
                    }
                }
            }
        }
        Ok(inv)
    }

    /// Determinant, by elimination on the entry of least valuation in each column.
    pub fn det(&self) -> Result<PadicScalar> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("determinant of a non-square matrix"));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = self.ring.one();
        for col in 0..n {
            let pivot = (col..n)
                .filter(|&r| !a.get(r, col).is_zero())
                .min_by_key(|&r| a.get(r, col).valuation().floor());
            let Some(pivot) = pivot else {
                return Ok(self.ring.zero());
            };
            if pivot != col {
                a.swap_rows(pivot, col);
                det = -det;
            }
            let pv = a.get(col, col);
            det = det * pv;
            let pv_pow = self.ring.p().pow(pv.valuation().floor());
            // Any lift of a quotient by p^v works: the product with pv is exact mod p^N.
            let lift = |x: PadicScalar| self.ring.elem((x.residue() / pv_pow) as i128);
            let unit_inv = lift(pv).inverse()?;
            for r in col + 1..n {
                let x = a.get(r, col);
                if !x.is_zero() {
                    let f = lift(x) * unit_inv;
                    a.add_row_multiple(r, col, -f);
                }
            }
        }
        Ok(det)
    }

    /// `self = L U` with `L` unit lower triangular and `U` upper triangular.
    pub fn lu(&self) -> Result<(Self, Self)> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("LU of a non-square matrix"));
        }
        let n = self.rows;
        let mut u = self.clone();
        let mut l = Self::identity(self.ring, n);
        for col in 0..n {
            let pv = u.get(col, col);
            if !pv.is_unit() {
                return Err(Error::PivotNotUnit);
            }
            let pinv = pv.inverse()?;
            for r in col + 1..n {
                let f = u.get(r, col) * pinv;
                l.set(r, col, f);
                if !f.is_zero() {
                    u.add_row_multiple(r, col, -f);
                }
            }
        }
        Ok((l, u))
    }

    /// `self = R S` with `R` unit upper triangular and `S` lower triangular.
    pub fn ul(&self) -> Result<(Self, Self)> {
        let (l, u) = self.flip().lu()?;
        Ok((l.flip(), u.flip()))
    }

    /// Conjugation by the antidiagonal permutation.
    pub fn flip(&self) -> Self {
        let (r, c) = (self.rows, self.cols);
        Self::from_fn(self.ring, r, c, |i, j| self.get(r - 1 - i, c - 1 - j))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, x: PadicScalar) {
        for j in 0..self.cols {
            let v = self.get(r, j) * x;
            self.set(r, j, v);
        }
    }

    fn add_row_multiple(&mut self, target: usize, src: usize, f: PadicScalar) {
        for j in 0..self.cols {
            let v = self.get(target, j) + f * self.get(src, j);
            self.set(target, j, v);
        }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.ring, self.rows)
    }

    /// Every entry of `self - 1` has valuation at least `t`.
    pub fn congruent_to_identity(&self, t: u32) -> bool {
        (0..self.rows).all(|i| {
            (0..self.cols).all(|j| {
                let e = if i == j { self.get(i, j) - self.ring.one() } else { self.get(i, j) };
                e.valuation().at_least(t)
            })
        })
    }

    /// Entries strictly below the diagonal have valuation at least `t`.
    pub fn lower_part_at_least(&self, t: u32) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self.get(i, j).valuation().at_least(t)))
    }

    /// Entries strictly above the diagonal have valuation at least `t`.
    pub fn upper_part_at_least(&self, t: u32) -> bool {
        (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self.get(i, j).valuation().at_least(t)))
    }

    pub fn off_diagonal_at_least(&self, t: u32) -> bool {
        self.lower_part_at_least(t) && self.upper_part_at_least(t)
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_unipotent_upper(&self) -> bool {
        self.is_upper_triangular() && self.diag().iter().all(|d| d.is_one())
    }

    pub fn is_unipotent_lower(&self) -> bool {
        self.is_lower_triangular() && self.diag().iter().all(|d| d.is_one())
    }

    pub fn is_invertible(&self) -> bool {
        self.det().map(|d| d.is_unit()).unwrap_or(false)
    }

    /// Entries as signed representatives, for reports.
    pub fn to_signed_rows(&self) -> Vec<Vec<i128>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).lift_symmetric()).collect())
            .collect()
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        assert_eq!(self.ring, rhs.ring, "mixed residue rings");
        let m = self.ring.modulus() as u128;
        let mut out = Matrix::zeros(self.ring, self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc: u128 = 0;
                for k in 0..self.cols {
                    let a = self.data[i * self.cols + k] as u128;
                    let b = rhs.data[k * rhs.cols + j] as u128;
                    acc = (acc + a * b) % m;
                }
                out.data[i * rhs.cols + j] = acc as u64;
            }
        }
        out
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "matrix sum shape mismatch");
        Matrix::from_fn(self.ring, self.rows, self.cols, |i, j| self.get(i, j) + rhs.get(i, j))
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self + &(-rhs)
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix::from_fn(self.ring, self.rows, self.cols, |i, j| -self.get(i, j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ring() -> Zpn {
        Zpn::new(3, 5).unwrap()
    }

    fn random_matrix(ring: Zpn, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
        Matrix::from_fn(ring, n, n, |_, _| ring.random(rng))
    }

    #[test]
    fn inverse_round_trip() {
        let r = ring();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut done = 0;
        while done < 50 {
            let m = random_matrix(r, 4, &mut rng);
            if let Ok(inv) = m.inverse() {
                assert!((&m * &inv).is_identity());
                assert!((&inv * &m).is_identity());
                done += 1;
            }
        }
    }

    #[test]
    fn det_is_multiplicative() {
        let r = ring();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let a = random_matrix(r, 3, &mut rng);
            let b = random_matrix(r, 3, &mut rng);
            if let (Ok(da), Ok(db)) = (a.det(), b.det()) {
                assert_eq!((&a * &b).det().unwrap(), da * db);
            }
        }
    }

    #[test]
    fn lu_and_ul_reconstruct() {
        let r = ring();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let m = &Matrix::identity(r, 4) + &Matrix::from_fn(r, 4, 4, |_, _| r.random_in_disc(1, &mut rng));
            let (l, u) = m.lu().unwrap();
            assert!(l.is_unipotent_lower() && u.is_upper_triangular());
            assert_eq!(&l * &u, m);
            let (rr, s) = m.ul().unwrap();
            assert!(rr.is_unipotent_upper() && s.is_lower_triangular());
            assert_eq!(&rr * &s, m);
        }
    }

    #[test]
    fn lu_reports_non_unit_pivot() {
        let r = ring();
        let m = Matrix::from_rows(r, &[vec![3, 1], vec![1, 0]]).unwrap();
        assert_eq!(m.lu().unwrap_err(), Error::PivotNotUnit);
    }

    #[test]
    fn det_of_non_units() {
        let r = Zpn::new(3, 4).unwrap();
        let m = Matrix::from_rows(r, &[vec![3, 1], vec![6, 5]]).unwrap();
        assert_eq!(m.det().unwrap(), r.elem(9));
        let z = Matrix::from_rows(r, &[vec![9, 3], vec![27, 9]]).unwrap();
        assert!(z.det().unwrap().is_zero());
    }
}
