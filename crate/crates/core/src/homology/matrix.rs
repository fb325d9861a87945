//! Dense matrices over the two coefficient rings the crate works with:
//! arbitrary-precision integers and the field with two elements.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::HomologyError;

/// Largest dimension accepted for dense work.
pub const MAX_DENSE_DIM: usize = 512;

/// A Euclidean coefficient ring, as much of it as Smith reduction needs.
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Compare by Euclidean size (absolute value over the integers).
    fn cmp_size(&self, other: &Self) -> Ordering;
    /// Quotient `q` with `self - q * divisor` strictly smaller than `divisor`.
    fn quotient(&self, divisor: &Self) -> Self;
    fn divides(&self, other: &Self) -> bool;
    fn is_unit(&self) -> bool;
    /// True when the element is not in canonical (associate-normalized) form.
    fn needs_negation(&self) -> bool;
    fn negate(&self) -> Self;
    fn from_bigint(value: &BigInt) -> Self;
    fn to_bigint(&self) -> BigInt;
}

impl Coeff for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn cmp_size(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }
    fn quotient(&self, divisor: &Self) -> Self {
        self.div_floor(divisor)
    }
    fn divides(&self, other: &Self) -> bool {
        if Zero::is_zero(self) {
            Zero::is_zero(other)
        } else {
            Zero::is_zero(&other.mod_floor(self))
        }
    }
    fn is_unit(&self) -> bool {
        self.magnitude().is_one()
    }
    fn needs_negation(&self) -> bool {
        self.is_negative()
    }
    fn negate(&self) -> Self {
        -self
    }
    fn from_bigint(value: &BigInt) -> Self {
        value.clone()
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

/// Element of the field with two elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct F2(pub bool);

impl F2 {
    pub const ZERO: F2 = F2(false);
    pub const ONE: F2 = F2(true);
}

impl Coeff for F2 {
    fn zero() -> Self {
        F2::ZERO
    }
    fn one() -> Self {
        F2::ONE
    }
    fn is_zero(&self) -> bool {
        !self.0
    }
    fn add(&self, other: &Self) -> Self {
        F2(self.0 ^ other.0)
    }
    fn sub(&self, other: &Self) -> Self {
        F2(self.0 ^ other.0)
    }
    fn mul(&self, other: &Self) -> Self {
        F2(self.0 & other.0)
    }
    fn cmp_size(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
    fn quotient(&self, _divisor: &Self) -> Self {
        *self
    }
    fn divides(&self, other: &Self) -> bool {
        self.0 || !other.0
    }
    fn is_unit(&self) -> bool {
        self.0
    }
    fn needs_negation(&self) -> bool {
        false
    }
    fn negate(&self) -> Self {
        *self
    }
    fn from_bigint(value: &BigInt) -> Self {
        F2(value.is_odd())
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(u8::from(self.0))
    }
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

pub type IntMatrix = Matrix<BigInt>;
pub type F2Matrix = Matrix<F2>;

impl<R: Coeff> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![R::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = R::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self, HomologyError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != ncols) {
            return Err(HomologyError::Ragged {
                row: bad,
                expected: ncols,
                found: rows[bad].len(),
            });
        }
        Ok(Matrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<R>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Coeff::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, HomologyError> {
        if self.cols != other.rows {
            return Err(HomologyError::DimensionMismatch {
                context: "matrix product",
                left: self.cols,
                right: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].add(&a.mul(b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[R]) -> Result<Vec<R>, HomologyError> {
        if self.cols != v.len() {
            return Err(HomologyError::DimensionMismatch {
                context: "matrix-vector product",
                left: self.cols,
                right: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(R::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect())
    }

    /// Sub-matrix of the given row range and all columns.
    pub fn row_slice(&self, from: usize, to: usize) -> Self {
        Self::from_fn(to - from, self.cols, |i, j| self[(i + from, j)].clone())
    }

    /// Sub-matrix of all rows and the given column range.
    pub fn col_slice(&self, from: usize, to: usize) -> Self {
        Self::from_fn(self.rows, to - from, |i, j| self[(i, j + from)].clone())
    }

    pub fn column(&self, j: usize) -> Vec<R> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn map<S: Coeff>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += c * row[source]
    pub(crate) fn add_row_multiple(&mut self, target: usize, source: usize, c: &R) {
        for j in 0..self.cols {
            let v = self[(source, j)].mul(c);
            if !v.is_zero() {
                let t = &mut self.data[target * self.cols + j];
                *t = t.add(&v);
            }
        }
    }

    /// col[target] += c * col[source]
    pub(crate) fn add_col_multiple(&mut self, target: usize, source: usize, c: &R) {
        for i in 0..self.rows {
            let v = self[(i, source)].mul(c);
            if !v.is_zero() {
                let t = &mut self.data[i * self.cols + target];
                *t = t.add(&v);
            }
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let t = &mut self.data[i * self.cols + j];
            *t = t.negate();
        }
    }

    pub(crate) fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let t = &mut self.data[i * self.cols + j];
            *t = t.negate();
        }
    }
}

impl IntMatrix {
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self, HomologyError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt, HomologyError> {
        if self.rows != self.cols {
            return Err(HomologyError::DimensionMismatch {
                context: "determinant of non-square matrix",
                left: self.rows,
                right: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(<BigInt as One>::one());
        }
        let mut m = self.clone();
        let mut sign = <BigInt as One>::one();
        let mut prev = <BigInt as One>::one();
        for k in 0..n - 1 {
            if Zero::is_zero(&m[(k, k)]) {
                let Some(swap) = (k + 1..n).find(|&i| !Zero::is_zero(&m[(i, k)])) else {
                    return Ok(<BigInt as Zero>::zero());
                };
                m.swap_rows(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = num / &prev;
                }
            }
            prev = m[(k, k)].clone();
        }
        Ok(sign * &m[(n - 1, n - 1)])
    }

    pub fn reduce_mod2(&self) -> F2Matrix {
        self.map(F2::from_bigint)
    }
}

impl F2Matrix {
    pub fn lift(&self) -> IntMatrix {
        self.map(F2::to_bigint)
    }
}

impl<R> std::ops::Index<(usize, usize)> for Matrix<R> {
    type Output = R;
    fn index(&self, (i, j): (usize, usize)) -> &R {
        &self.data[i * self.cols + j]
    }
}

impl<R> std::ops::IndexMut<(usize, usize)> for Matrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut R {
        &mut self.data[i * self.cols + j]
    }
}

impl<R: Coeff> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_bigint().to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Interchange form: either dense rows or a sparse coordinate list.
#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixRepr {
    Dense(Vec<Vec<crate::json::JsonInt>>),
    Sparse {
        rows: usize,
        cols: usize,
        #[serde(default)]
        entries: Vec<(usize, usize, crate::json::JsonInt)>,
    },
}

impl IntMatrix {
    fn from_repr(repr: MatrixRepr) -> Result<Self, HomologyError> {
        match repr {
            MatrixRepr::Dense(rows) => {
                let m = Self::from_rows(
                    rows.into_iter()
                        .map(|r| r.into_iter().map(|x| x.0).collect())
                        .collect(),
                )?;
                check_dims(m.rows, m.cols)?;
                Ok(m)
            }
            MatrixRepr::Sparse { rows, cols, entries } => {
                check_dims(rows, cols)?;
                let mut m = Self::zeros(rows, cols);
                for (i, j, v) in entries {
                    if i >= rows || j >= cols {
                        return Err(HomologyError::EntryOutOfRange { row: i, col: j, rows, cols });
                    }
                    m[(i, j)] += v.0;
                }
                Ok(m)
            }
        }
    }
}

fn check_dims(rows: usize, cols: usize) -> Result<(), HomologyError> {
    if rows > MAX_DENSE_DIM || cols > MAX_DENSE_DIM {
        return Err(HomologyError::TooLarge { rows, cols, limit: MAX_DENSE_DIM });
    }
    Ok(())
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(deserializer)?;
        IntMatrix::from_repr(repr).map_err(serde::de::Error::custom)
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<crate::json::JsonInt>> = self
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(crate::json::JsonInt).collect())
            .collect();
        rows.serialize(serializer)
    }
}
