//! Dense exact matrices.
//!
//! Two small workhorses: `IntMatrix` over `i64` for replacement matrices and
//! determinant probes, and `RatMatrix` over arbitrary-precision rationals for
//! everything downstream of the principal eigenvector. Sizes stay tiny (a few
//! dozen rows), so the implementations favor clarity over blocking tricks.
//! Determinants of integer matrices use Bareiss fraction-free elimination so
//! every intermediate value is an exact integer minor.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn row_sums(&self) -> Vec<i64> {
        (0..self.rows).map(|r| self.row(r).iter().sum()).collect()
    }

    /// Exact determinant of `self - shift*I` by Bareiss elimination.
    ///
    /// Fraction-free: every intermediate entry is a minor of the original
    /// matrix, so the arithmetic stays in integers of modest size.
    pub fn det_shifted(&self, shift: i64) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant needs a square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m: Vec<Vec<BigInt>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        let v = self.get(r, c) - if r == c { shift } else { 0 };
                        BigInt::from(v)
                    })
                    .collect()
            })
            .collect();
        let mut sign = 1i64;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    // Exact division is the Bareiss invariant.
                    debug_assert!((&num % &prev).is_zero());
                    m[i][j] = num / &prev;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        if sign < 0 {
            -det
        } else {
            det
        }
    }

    pub fn det(&self) -> BigInt {
        self.det_shifted(0)
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect(),
        }
    }
}

/// Row-major matrix of arbitrary-precision rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        RatMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        RatMatrix { rows, cols, data }
    }

    /// Column vector from a slice.
    pub fn column(v: &[BigRational]) -> Self {
        RatMatrix { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigRational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> RatMatrix {
        RatMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        RatMatrix::from_fn(self.rows, other.cols, |r, c| {
            let mut acc = BigRational::zero();
            for q in 0..self.cols {
                let a = self.get(r, q);
                let b = other.get(q, c);
                if !a.is_zero() && !b.is_zero() {
                    acc += a * b;
                }
            }
            acc
        })
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c) + other.get(r, c))
    }

    pub fn sub(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c) - other.get(r, c))
    }

    pub fn scale(&self, s: &BigRational) -> RatMatrix {
        RatMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c) * s)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..r).all(|c| self.get(r, c) == self.get(c, r)))
    }

    pub fn row_sums(&self) -> Vec<BigRational> {
        (0..self.rows)
            .map(|r| self.row(r).iter().fold(BigRational::zero(), |a, b| a + b))
            .collect()
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<RatMatrix> {
        assert_eq!(self.rows, self.cols, "inverse needs a square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero()).ok_or_else(|| {
                Error::Structural("matrix is singular, no exact inverse".into())
            })?;
            if pivot != col {
                for c in 0..n {
                    let (x, y) = (a.get(pivot, c).clone(), a.get(col, c).clone());
                    a.set(pivot, c, y);
                    a.set(col, c, x);
                    let (x, y) = (inv.get(pivot, c).clone(), inv.get(col, c).clone());
                    inv.set(pivot, c, y);
                    inv.set(col, c, x);
                }
            }
            let p = a.get(col, col).clone();
            for c in 0..n {
                a.set(col, c, a.get(col, c) / &p);
                inv.set(col, c, inv.get(col, c) / &p);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for c in 0..n {
                    let v = a.get(r, c) - &f * a.get(col, c);
                    a.set(r, c, v);
                    let v = inv.get(r, c) - &f * inv.get(col, c);
                    inv.set(r, c, v);
                }
            }
        }
        Ok(inv)
    }

    /// Exact positive-semidefiniteness test for a symmetric matrix.
    ///
    /// Repeatedly pivots on a strictly positive diagonal entry and forms the
    /// Schur complement. If at some stage every remaining diagonal entry is
    /// zero, the matrix is PSD exactly when the whole remaining block is zero;
    /// a negative diagonal entry refutes immediately.
    pub fn is_positive_semidefinite(&self) -> bool {
        assert!(self.is_symmetric(), "PSD test needs a symmetric matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut active: Vec<usize> = (0..n).collect();
        while !active.is_empty() {
            if active.iter().any(|&i| m.get(i, i).is_negative()) {
                return false;
            }
            let Some(&p) = active.iter().find(|&&i| m.get(i, i).is_positive()) else {
                // All diagonal entries are zero; PSD forces the block to vanish.
                return active
                    .iter()
                    .all(|&r| active.iter().all(|&c| m.get(r, c).is_zero()));
            };
            let piv = m.get(p, p).clone();
            active.retain(|&i| i != p);
            for &r in &active {
                for &c in &active {
                    let v = m.get(r, c) - m.get(r, p) * m.get(p, c) / &piv;
                    m.set(r, c, v);
                }
            }
        }
        true
    }

    /// Entries as doubles, row-major rows.
    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(crate::ratio::rational_to_f64).collect())
            .collect()
    }

    /// Frobenius norm of the matrix, as a double.
    pub fn frobenius_f64(&self) -> f64 {
        self.data
            .iter()
            .map(|v| {
                let x = crate::ratio::rational_to_f64(v);
                x * x
            })
            .sum::<f64>()
            .sqrt()
    }
}

impl serde::Serialize for RatMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut rows = s.serialize_seq(Some(self.rows))?;
        for r in 0..self.rows {
            let row: Vec<crate::ratio::Exact> =
                self.row(r).iter().cloned().map(crate::ratio::Exact).collect();
            rows.serialize_element(&row)?;
        }
        rows.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{int, rat};

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m = IntMatrix::from_rows(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]);
        assert_eq!(m.det(), BigInt::from(-3));
        let singular = IntMatrix::from_rows(vec![vec![1, 2], vec![2, 4]]);
        assert_eq!(singular.det(), BigInt::zero());
    }

    #[test]
    fn det_shift_is_characteristic_value() {
        // Companion-style matrix with eigenvalues 2 and -1.
        let m = IntMatrix::from_rows(vec![vec![1, 1], vec![2, 0]]);
        assert_eq!(m.det_shifted(2), BigInt::zero());
        assert_eq!(m.det_shifted(-1), BigInt::zero());
        assert_ne!(m.det_shifted(1), BigInt::zero());
        assert_ne!(m.det_shifted(3), BigInt::zero());
    }

    #[test]
    fn inverse_round_trips() {
        let m = RatMatrix::from_rows(vec![
            vec![int(1), int(2)],
            vec![int(1), int(0)],
        ]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), RatMatrix::identity(2));
        assert_eq!(inv.mul(&m), RatMatrix::identity(2));
    }

    #[test]
    fn singular_inverse_refused() {
        let m = RatMatrix::from_rows(vec![
            vec![int(1), int(2)],
            vec![int(2), int(4)],
        ]);
        assert!(m.inverse().is_err());
    }

    #[test]
    fn psd_detection() {
        let psd = RatMatrix::from_rows(vec![
            vec![rat(1, 9), rat(-1, 9)],
            vec![rat(-1, 9), rat(1, 9)],
        ]);
        assert!(psd.is_positive_semidefinite());
        let not = RatMatrix::from_rows(vec![
            vec![int(1), int(3)],
            vec![int(3), int(1)],
        ]);
        assert!(!not.is_positive_semidefinite());
        // Zero diagonal with off-diagonal mass is not PSD.
        let zero_diag = RatMatrix::from_rows(vec![
            vec![int(0), int(1)],
            vec![int(1), int(0)],
        ]);
        assert!(!zero_diag.is_positive_semidefinite());
    }
}
