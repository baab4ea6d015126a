//! Dense matrices of scalars with exact elimination.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::AlgebraError;
use crate::field::{FieldSpec, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, field: FieldSpec, data: Vec<Scalar>) -> Result<Self, AlgebraError> {
        if data.len() != rows * cols {
            return Err(AlgebraError::DimensionMismatch { expected: rows * cols, got: data.len() });
        }
        if let Some(x) = data.iter().find(|x| x.field() != field) {
            return Err(AlgebraError::FieldMismatch { left: field, right: x.field() });
        }
        Ok(Matrix { rows, cols, field, data })
    }

    pub fn zeros(rows: usize, cols: usize, field: FieldSpec) -> Self {
        Matrix { rows, cols, field, data: alloc::vec![field.zero(); rows * cols] }
    }

    pub fn identity(n: usize, field: FieldSpec) -> Self {
        let mut m = Matrix::zeros(n, n, field);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, field: FieldSpec, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, field, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn submatrix(&self, rows: core::ops::Range<usize>, cols: core::ops::Range<usize>) -> Matrix {
        let (r0, c0) = (rows.start, cols.start);
        Matrix::from_fn(rows.len(), cols.len(), self.field, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        Matrix::from_fn(self.rows, other.cols, self.field, |i, j| {
            let mut acc = self.field.zero();
            for t in 0..self.cols {
                acc = acc + self.get(i, t) * other.get(t, j);
            }
            acc
        })
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, self.field, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j { v.is_one() } else { v.is_zero() }
                })
            })
    }

    /// Determinant of a square matrix. Rationals go through fraction-free
    /// (Bareiss) elimination on a row-scaled integer matrix; prime fields
    /// use plain Gaussian elimination.
    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        match self.field {
            FieldSpec::Rational => Scalar::Rational(self.det_bareiss()),
            FieldSpec::Prime(_) => self.det_gauss(),
        }
    }

    fn det_bareiss(&self) -> BigRational {
        let n = self.rows;
        if n == 0 {
            return BigRational::one();
        }
        // Clear denominators row by row; det(A) = det(scaled) / prod(scale).
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let lcm = (0..n).fold(BigInt::one(), |acc, j| {
                acc.lcm(self.get(i, j).as_rational().expect("rational").denom())
            });
            let row = (0..n)
                .map(|j| {
                    let q = self.get(i, j).as_rational().expect("rational");
                    q.numer() * (&lcm / q.denom())
                })
                .collect();
            scale *= &lcm;
            a.push(row);
        }
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(p) => {
                        a.swap(k, p);
                        sign = -sign;
                    }
                    None => return BigRational::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        BigRational::new(sign * &a[n - 1][n - 1], scale)
    }

    fn det_gauss(&self) -> Scalar {
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = self.field.one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i * n + k].is_zero()) else {
                return self.field.zero();
            };
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                det = -det;
            }
            let pivot = a[k * n + k].clone();
            det = det * &pivot;
            let inv = pivot.inv().expect("nonzero pivot");
            for i in k + 1..n {
                if a[i * n + k].is_zero() {
                    continue;
                }
                let factor = &a[i * n + k] * &inv;
                for j in k..n {
                    let v = &a[i * n + j] - &(&factor * &a[k * n + j]);
                    a[i * n + j] = v;
                }
            }
        }
        det
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let (rows, cols) = (self.rows, self.cols);
        let mut a = self.data.clone();
        let mut rank = 0;
        for col in 0..cols {
            let Some(p) = (rank..rows).find(|&i| !a[i * cols + col].is_zero()) else {
                continue;
            };
            for j in 0..cols {
                a.swap(rank * cols + j, p * cols + j);
            }
            let inv = a[rank * cols + col].inv().expect("nonzero pivot");
            for i in rank + 1..rows {
                if a[i * cols + col].is_zero() {
                    continue;
                }
                let factor = &a[i * cols + col] * &inv;
                for j in col..cols {
                    let v = &a[i * cols + j] - &(&factor * &a[rank * cols + j]);
                    a[i * cols + j] = v;
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    /// Inverse by Gauss-Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n, self.field);
        for k in 0..n {
            let p = (k..n).find(|&i| !a.get(i, k).is_zero())?;
            for j in 0..n {
                a.data.swap(k * n + j, p * n + j);
                inv.data.swap(k * n + j, p * n + j);
            }
            let pinv = a.get(k, k).inv().ok()?;
            for j in 0..n {
                a.set(k, j, a.get(k, j) * &pinv);
                inv.set(k, j, inv.get(k, j) * &pinv);
            }
            for i in 0..n {
                if i == k || a.get(i, k).is_zero() {
                    continue;
                }
                let factor = a.get(i, k).clone();
                for j in 0..n {
                    a.set(i, j, a.get(i, j) - &(&factor * a.get(k, j)));
                    inv.set(i, j, inv.get(i, j) - &(&factor * inv.get(k, j)));
                }
            }
        }
        Some(inv)
    }
}
