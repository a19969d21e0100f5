//! Exact rational linear algebra and integer lattice normal forms.
//!
//! Everything here works over `BigRational` (or `BigInt` for the lattice
//! routines). There are no tolerances: equality is equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// An exact rational number.
pub type Scalar = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Scalar {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Formats a rational as `"p"` or `"p/q"`.
pub fn format_scalar(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_scalar(s: &str) -> Result<Scalar, LinError> {
    let err = || LinError::Parse(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        None => t.parse::<BigInt>().map(BigRational::from_integer).map_err(|_| err()),
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| err())?;
            let q: BigInt = q.trim().parse().map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            Ok(BigRational::new(p, q))
        }
    }
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Scalar::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self, LinError> {
        if data.len() != rows * cols {
            return Err(LinError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix from integer rows. Panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().map(|&v| int(v)));
        }
        Matrix { rows: rows.len(), cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self, LinError> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinError::Shape("ragged rows".into()));
        }
        let n = rows.len();
        Ok(Matrix { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn scalar(x: Scalar) -> Self {
        Matrix { rows: 1, cols: 1, data: vec![x] }
    }

    pub fn diag(entries: &[Scalar]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    /// Column vector.
    pub fn column(entries: Vec<Scalar>) -> Self {
        Matrix { rows: entries.len(), cols: 1, data: entries }
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Matrix {
        Matrix::column((0..self.rows).map(|r| self.get(r, c).clone()).collect())
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Matrix::identity(self.rows)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn scale(&self, k: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * k).collect() }
    }

    pub fn try_mul(&self, rhs: &Matrix) -> Result<Matrix, LinError> {
        if self.cols != rhs.rows {
            return Err(LinError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, rhs: &Matrix) -> Result<Matrix, LinError> {
        self.zip(rhs, |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &Matrix) -> Result<Matrix, LinError> {
        self.zip(rhs, |a, b| a - b)
    }

    fn zip(&self, rhs: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Matrix, LinError> {
        if self.shape() != rhs.shape() {
            return Err(LinError::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    /// Copies the `rows x cols` block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut b = Matrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                b.data[r * cols + c] = self.get(r0 + r, c0 + c).clone();
            }
        }
        b
    }

    /// Overwrites the block at `(r0, c0)` with `m`.
    pub fn set_block(&mut self, r0: usize, c0: usize, m: &Matrix) {
        for r in 0..m.rows {
            for c in 0..m.cols {
                self.set(r0 + r, c0 + c, m.get(r, c).clone());
            }
        }
    }

    /// Adds `m` into the block at `(r0, c0)`.
    pub fn add_block(&mut self, r0: usize, c0: usize, m: &Matrix) {
        for r in 0..m.rows {
            for c in 0..m.cols {
                let v = self.get(r0 + r, c0 + c) + m.get(r, c);
                self.set(r0 + r, c0 + c, v);
            }
        }
    }

    /// Two-by-two block matrix `[[a, b], [c, d]]`.
    pub fn blocks2(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Result<Matrix, LinError> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(LinError::Shape("incompatible block shapes".into()));
        }
        let mut m = Matrix::zeros(a.rows + c.rows, a.cols + b.cols);
        m.set_block(0, 0, a);
        m.set_block(0, a.cols, b);
        m.set_block(a.rows, 0, c);
        m.set_block(a.rows, a.cols, d);
        Ok(m)
    }

    /// Kronecker product.
    pub fn kron(&self, rhs: &Matrix) -> Matrix {
        let (r2, c2) = rhs.shape();
        let mut out = Matrix::zeros(self.rows * r2, self.cols * c2);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..r2 {
                    for l in 0..c2 {
                        out.set(i * r2 + k, j * c2 + l, a * rhs.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Row-major flattening as a column vector.
    pub fn vectorize(&self) -> Matrix {
        Matrix::column(self.data.clone())
    }

    /// Inverse of [`Matrix::vectorize`].
    pub fn unvectorize(v: &Matrix, rows: usize, cols: usize) -> Result<Matrix, LinError> {
        Matrix::from_vec(rows, cols, v.data.clone())
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(format_scalar).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.try_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.try_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.try_sub(rhs).expect("matrix difference shape mismatch")
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }
}

// Serialized as an array of rows, entries as "p/q" strings.
impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            (0..self.rows).map(|r| self.row(r).iter().map(format_scalar).collect()).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_scalar(s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        Matrix::from_rows(parsed).map_err(serde::de::Error::custom)
    }
}

/// Reduced row echelon form together with the pivot columns.
pub fn rref(a: &Matrix) -> (Matrix, Vec<usize>) {
    let mut m = a.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
            continue;
        };
        if p != row {
            for c in 0..m.cols {
                m.data.swap(p * m.cols + c, row * m.cols + c);
            }
        }
        let inv = m.get(row, col).recip();
        for c in col..m.cols {
            let v = m.get(row, c) * &inv;
            m.set(row, c, v);
        }
        for r in 0..m.rows {
            if r == row || m.get(r, col).is_zero() {
                continue;
            }
            let factor = m.get(r, col).clone();
            for c in col..m.cols {
                let v = m.get(r, c) - &factor * m.get(row, c);
                m.set(r, c, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    (m, pivots)
}

pub fn rank(a: &Matrix) -> usize {
    rref(a).1.len()
}

/// Result of [`rank_and_solve`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub rank: usize,
    /// A particular solution of `A x = b`, when `b` was given and is in the column space.
    pub solution: Option<Matrix>,
    /// Basis of the null space of `A`, as column vectors.
    pub kernel: Vec<Matrix>,
}

/// Rank, null space, and (optionally) a particular solution of `A x = b`.
pub fn rank_and_solve(a: &Matrix, b: Option<&Matrix>) -> Result<Solution, LinError> {
    if let Some(b) = b {
        if b.rows != a.rows || b.cols != 1 {
            return Err(LinError::Shape(format!(
                "right-hand side {}x{} for a {}x{} system",
                b.rows, b.cols, a.rows, a.cols
            )));
        }
    }
    let n = a.cols;
    let (r, pivots) = match b {
        Some(b) => {
            let aug = Matrix::blocks2(a, b, &Matrix::zeros(0, n), &Matrix::zeros(0, 1))?;
            rref(&aug)
        }
        None => rref(a),
    };
    let consistent = !pivots.contains(&n);
    let pivots: Vec<usize> = pivots.into_iter().filter(|&p| p < n).collect();

    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&fc| {
            let mut v = vec![Scalar::zero(); n];
            v[fc] = Scalar::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(row, fc).clone();
            }
            Matrix::column(v)
        })
        .collect();

    let solution = match b {
        Some(_) if consistent => {
            let mut x = vec![Scalar::zero(); n];
            for (row, &pc) in pivots.iter().enumerate() {
                x[pc] = r.get(row, n).clone();
            }
            Some(Matrix::column(x))
        }
        _ => None,
    };
    Ok(Solution { rank: pivots.len(), solution, kernel })
}

/// Inverse of a square matrix, or `None` when it is singular.
pub fn inverse(a: &Matrix) -> Result<Option<Matrix>, LinError> {
    if !a.is_square() {
        return Err(LinError::NotSquare { rows: a.rows, cols: a.cols });
    }
    let n = a.rows;
    let aug = Matrix::blocks2(a, &Matrix::identity(n), &Matrix::zeros(0, n), &Matrix::zeros(0, n))?;
    let (r, pivots) = rref(&aug);
    if n > 0 && (pivots.len() < n || pivots[n - 1] >= n) {
        return Ok(None);
    }
    Ok(Some(r.block(0, n, n, n)))
}

/// Basis (as columns) of the column space, taken from pivot columns.
pub fn column_space(a: &Matrix) -> Vec<Matrix> {
    rref(a).1.into_iter().map(|c| a.col(c)).collect()
}

/// Stacks column vectors side by side.
pub fn hstack(cols: &[Matrix], rows: usize) -> Matrix {
    let mut m = Matrix::zeros(rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        m.set_block(0, j, c);
    }
    m
}

/// Dense integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().map(|&v| BigInt::from(v)));
        }
        IntMatrix { rows: rows.len(), cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Result<Self, LinError> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinError::Shape("ragged rows".into()));
        }
        let n = rows.len();
        Ok(IntMatrix { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix, LinError> {
        if self.cols != rhs.rows {
            return Err(LinError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt, LinError> {
        if self.rows != self.cols {
            return Err(LinError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut m = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !m[r * n + k].is_zero()) else {
                    return Ok(BigInt::zero());
                };
                for c in 0..n {
                    m.swap(k * n + c, p * n + c);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[i * n + j] * &m[k * n + k] - &m[i * n + k] * &m[k * n + j]) / &prev;
                    m[i * n + j] = v;
                }
            }
            prev = m[k * n + k].clone();
        }
        Ok(if n == 0 { BigInt::one() } else { sign * &m[(n - 1) * n + (n - 1)] })
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for c in 0..self.cols {
            let v = &self.data[dst * self.cols + c] + k * &self.data[src * self.cols + c];
            self.data[dst * self.cols + c] = v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -&self.data[r * self.cols + c];
            self.data[r * self.cols + c] = v;
        }
    }

    /// Replaces rows (i, j) by the unimodular combination
    /// `(a*ri + b*rj, c*ri + d*rj)`.
    fn combine_rows(&mut self, i: usize, j: usize, a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) {
        for col in 0..self.cols {
            let x = self.data[i * self.cols + col].clone();
            let y = self.data[j * self.cols + col].clone();
            self.data[i * self.cols + col] = a * &x + b * &y;
            self.data[j * self.cols + col] = c * &x + d * &y;
        }
    }
}

/// Row-style Hermite normal form: returns `(H, U)` with `U` unimodular and
/// `H = U * M` in echelon form, pivots positive, entries above each pivot
/// reduced into `[0, pivot)`, zero rows at the bottom.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut row = 0;
    for col in 0..h.cols {
        if row == h.rows {
            break;
        }
        // Fold the column below `row` into a single gcd entry at `row`.
        for r in row + 1..h.rows {
            if h.get(r, col).is_zero() {
                continue;
            }
            let x = h.get(row, col).clone();
            let y = h.get(r, col).clone();
            let e = x.extended_gcd(&y);
            let g = e.gcd;
            let (xa, yb) = (e.x, e.y);
            let (c, d) = (-(&y / &g), &x / &g);
            h.combine_rows(row, r, &xa, &yb, &c, &d);
            u.combine_rows(row, r, &xa, &yb, &c, &d);
        }
        if h.get(row, col).is_zero() {
            continue;
        }
        if h.get(row, col).is_negative() {
            h.negate_row(row);
            u.negate_row(row);
        }
        let pivot = h.get(row, col).clone();
        for r in 0..row {
            let q = h.get(r, col).div_floor(&pivot);
            if !q.is_zero() {
                let k = -q;
                h.add_row_multiple(r, row, &k);
                u.add_row_multiple(r, row, &k);
            }
        }
        row += 1;
    }
    (h, u)
}

/// Echelon pivot columns of a matrix in Hermite normal form (one per nonzero row).
fn hnf_pivots(h: &IntMatrix) -> Vec<usize> {
    (0..h.rows)
        .filter_map(|r| (0..h.cols).find(|&c| !h.get(r, c).is_zero()))
        .collect()
}

/// ℤ-basis of the left kernel `{x : x^T M = 0}`, read off the transform of the HNF.
pub fn integer_left_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let (h, u) = hermite_normal_form(m);
    let rank = hnf_pivots(&h).len();
    (rank..m.rows).map(|r| u.row(r).to_vec()).collect()
}

/// ℤ-basis of `{x ∈ ℤ^n : M x = 0}`.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    integer_left_kernel(&m.transpose())
}

/// Integer coefficients `c` with `Σ c_i * generators[i] = target`, or `None`
/// when the target is outside the lattice the generators span.
pub fn lattice_membership(generators: &[Vec<Scalar>], target: &[Scalar]) -> Option<Vec<BigInt>> {
    let dim = target.len();
    if generators.iter().any(|g| g.len() != dim) {
        return None;
    }
    // Clear every denominator at once.
    let mut lcm = BigInt::one();
    for x in generators.iter().flatten().chain(target) {
        lcm = lcm.lcm(x.denom());
    }
    let scale = |x: &Scalar| -> BigInt { (x * BigRational::from_integer(lcm.clone())).to_integer() };
    let g = IntMatrix::from_rows(generators.iter().map(|v| v.iter().map(scale).collect()).collect(), dim)
        .expect("generator lengths checked");
    let t: Vec<BigInt> = target.iter().map(scale).collect();

    // Solve y H = t with H = U G in echelon form, then c = y U.
    let (h, u) = hermite_normal_form(&g);
    let pivots = hnf_pivots(&h);
    let mut residual = t;
    let mut y = vec![BigInt::zero(); g.rows()];
    for (r, &pc) in pivots.iter().enumerate() {
        let (q, rem) = residual[pc].div_rem(h.get(r, pc));
        if !rem.is_zero() {
            return None;
        }
        for (c, x) in residual.iter_mut().enumerate() {
            *x -= &q * h.get(r, c);
        }
        y[r] = q;
    }
    if residual.iter().any(|x| !x.is_zero()) {
        return None;
    }
    let coeffs = (0..g.rows())
        .map(|j| (0..g.rows()).map(|r| &y[r] * u.get(r, j)).sum())
        .collect();
    Some(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(v: &[i64]) -> Matrix {
        Matrix::column(v.iter().map(|&x| int(x)).collect())
    }

    fn ivec(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn qvec(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn scalar_round_trip() {
        for s in ["0", "-3", "7/2", "-1/3"] {
            assert_eq!(format_scalar(&parse_scalar(s).unwrap()), s);
        }
        assert_eq!(format_scalar(&parse_scalar("4/-6").unwrap()), "-2/3");
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("abc").is_err());
    }

    #[test]
    fn solve_identity() {
        let s = rank_and_solve(&Matrix::identity(3), Some(&col(&[1, 2, 3]))).unwrap();
        assert_eq!(s.rank, 3);
        assert_eq!(s.solution, Some(col(&[1, 2, 3])));
        assert!(s.kernel.is_empty());
    }

    #[test]
    fn solve_rank_deficient() {
        let a = Matrix::from_i64(&[&[1, 2], &[2, 4]]);
        let b = col(&[1, 2]);
        let s = rank_and_solve(&a, Some(&b)).unwrap();
        assert_eq!(s.rank, 1);
        assert_eq!(&a * s.solution.as_ref().unwrap(), b);
        assert_eq!(s.kernel, vec![col(&[-2, 1])]);
    }

    #[test]
    fn solve_inconsistent() {
        let s = rank_and_solve(&Matrix::zeros(2, 2), Some(&col(&[1, 0]))).unwrap();
        assert_eq!(s.rank, 0);
        assert!(s.solution.is_none());
        assert_eq!(s.kernel.len(), 2);
    }

    #[test]
    fn solve_shape_mismatch() {
        assert!(rank_and_solve(&Matrix::identity(2), Some(&col(&[1, 2, 3]))).is_err());
    }

    #[test]
    fn inverse_cases() {
        assert_eq!(inverse(&Matrix::identity(3)).unwrap(), Some(Matrix::identity(3)));
        assert_eq!(inverse(&Matrix::scalar(int(2))).unwrap(), Some(Matrix::scalar(frac(1, 2))));
        assert_eq!(inverse(&Matrix::from_i64(&[&[1, 1], &[1, 1]])).unwrap(), None);
        assert!(inverse(&Matrix::zeros(2, 3)).is_err());
        assert_eq!(inverse(&Matrix::zeros(0, 0)).unwrap(), Some(Matrix::zeros(0, 0)));
    }

    #[test]
    fn hnf_identity_and_reduced() {
        let (h, u) = hermite_normal_form(&IntMatrix::identity(3));
        assert_eq!(h, IntMatrix::identity(3));
        assert_eq!(u, IntMatrix::identity(3));
        let m = IntMatrix::from_i64(&[&[2, 4]]);
        let (h, u) = hermite_normal_form(&m);
        assert_eq!(h, m);
        assert_eq!(u, IntMatrix::identity(1));
    }

    #[test]
    fn hnf_two_by_two() {
        // Rows (2,0),(1,1) span {(a,b): a ≡ b mod 2}; its reduced basis is (1,1),(0,2).
        let m = IntMatrix::from_i64(&[&[2, 0], &[1, 1]]);
        let (h, u) = hermite_normal_form(&m);
        assert_eq!(h, IntMatrix::from_i64(&[&[1, 1], &[0, 2]]));
        assert_eq!(u.mul(&m).unwrap(), h);
        assert_eq!(u.determinant().unwrap().abs(), BigInt::one());
    }

    #[test]
    fn lattice_examples() {
        let e1 = qvec(&[1, 0]);
        let e2 = qvec(&[0, 1]);
        assert_eq!(lattice_membership(&[e1.clone(), e2], &e1), Some(ivec(&[1, 0])));
        assert_eq!(lattice_membership(&[qvec(&[2, 0])], &e1), None);
        assert_eq!(
            lattice_membership(&[qvec(&[1, 1]), qvec(&[0, 2])], &qvec(&[1, 3])),
            Some(ivec(&[1, 1]))
        );
    }

    #[test]
    fn lattice_with_rational_entries() {
        let gens = vec![vec![frac(1, 2), int(0)], vec![int(0), frac(1, 3)]];
        assert_eq!(lattice_membership(&gens, &[int(1), int(1)]), Some(ivec(&[2, 3])));
        assert_eq!(lattice_membership(&gens, &[frac(1, 4), int(0)]), None);
    }

    #[test]
    fn integer_kernel_of_zero_row() {
        let k = integer_kernel(&IntMatrix::zeros(1, 2));
        assert_eq!(k.len(), 2);
        let k = integer_kernel(&IntMatrix::from_i64(&[&[-1], &[1]]));
        assert!(k.is_empty());
    }

    #[test]
    fn determinant_small() {
        assert_eq!(IntMatrix::from_i64(&[&[2, 1], &[7, 4]]).determinant().unwrap(), BigInt::from(1));
        assert_eq!(IntMatrix::from_i64(&[&[0, 1], &[1, 0]]).determinant().unwrap(), BigInt::from(-1));
        assert_eq!(
            IntMatrix::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]).determinant().unwrap(),
            BigInt::from(-3)
        );
    }

    #[test]
    fn kron_and_blocks() {
        let a = Matrix::from_i64(&[&[1, 2], &[3, 4]]);
        let k = a.kron(&Matrix::identity(2));
        assert_eq!(k.shape(), (4, 4));
        assert_eq!(k.get(2, 0), &int(3));
        assert_eq!(k.block(2, 0, 2, 2), Matrix::identity(2).scale(&int(3)));
    }
}
