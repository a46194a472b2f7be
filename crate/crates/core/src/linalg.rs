//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary-precision integers ([`BigInt`]) or
//! rationals ([`BigRational`]); there is no floating point anywhere in the
//! crate.
//!
//! Hermite normal form convention: row style. `h = u * m` where `h` is in row
//! echelon form, every pivot is positive, entries above a pivot lie in
//! `[0, pivot)`, and zero rows are at the bottom.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Integer vector in a coordinate lattice. Ordering is lexicographic.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector(Vec<BigInt>);

/// Rational vector with every coordinate in lowest terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QVector(Vec<BigRational>);

/// Dense integer matrix in row-major order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        IntVector(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        IntVector(vec![BigInt::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = BigInt::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BigInt> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &IntVector) -> BigInt {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn dot_q(&self, other: &QVector) -> BigRational {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| b * a)
            .fold(BigRational::zero(), |acc, x| acc + x)
    }

    /// Greatest common divisor of the coordinates (0 for the zero vector).
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    /// The vector divided by the gcd of its entries.
    pub fn primitive(&self) -> Result<IntVector> {
        let g = self.content();
        if g.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(IntVector(self.0.iter().map(|x| x / &g).collect()))
    }

    pub fn scaled(&self, k: &BigInt) -> IntVector {
        IntVector(self.0.iter().map(|x| x * k).collect())
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: &BigInt, other: &IntVector, b: &BigInt) -> IntVector {
        IntVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        )
    }

    /// Appends one coordinate.
    pub fn lifted(&self, last: impl Into<BigInt>) -> IntVector {
        let mut c = self.0.clone();
        c.push(last.into());
        IntVector(c)
    }

    /// Drops the last coordinate.
    pub fn truncated(&self) -> IntVector {
        IntVector(self.0[..self.0.len() - 1].to_vec())
    }

    pub fn to_q(&self) -> QVector {
        QVector(
            self.0
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect(),
        )
    }

    /// Coordinates as `i64`, if they all fit.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }
}

impl From<Vec<BigInt>> for IntVector {
    fn from(v: Vec<BigInt>) -> Self {
        IntVector(v)
    }
}

impl From<Vec<i64>> for IntVector {
    fn from(v: Vec<i64>) -> Self {
        IntVector(v.into_iter().map(BigInt::from).collect())
    }
}

impl From<&[i64]> for IntVector {
    fn from(v: &[i64]) -> Self {
        IntVector(v.iter().map(|&x| BigInt::from(x)).collect())
    }
}

impl<const N: usize> From<[i64; N]> for IntVector {
    fn from(v: [i64; N]) -> Self {
        IntVector(v.iter().map(|&x| BigInt::from(x)).collect())
    }
}

impl<const N: usize> From<&[i64; N]> for IntVector {
    fn from(v: &[i64; N]) -> Self {
        IntVector(v.iter().map(|&x| BigInt::from(x)).collect())
    }
}

impl Index<usize> for IntVector {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl Add for &IntVector {
    type Output = IntVector;
    fn add(self, rhs: &IntVector) -> IntVector {
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &IntVector {
    type Output = IntVector;
    fn sub(self, rhs: &IntVector) -> IntVector {
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &IntVector {
    type Output = IntVector;
    fn neg(self) -> IntVector {
        IntVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl QVector {
    pub fn new(coords: Vec<BigRational>) -> Self {
        QVector(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        QVector(vec![BigRational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BigRational> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &QVector) -> BigRational {
        self.0
            .iter()
            .zip(&other.0)
            .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scaled(&self, k: &BigRational) -> QVector {
        QVector(self.0.iter().map(|x| x * k).collect())
    }

    /// Least common multiple of the denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
    }

    /// `(self * lcm, lcm)` where `lcm` clears every denominator.
    pub fn clear_denominators(&self) -> (IntVector, BigInt) {
        let l = self.denominator_lcm();
        let v = self
            .0
            .iter()
            .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
            .collect();
        (IntVector(v), l)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }

    pub fn to_int(&self) -> Option<IntVector> {
        if self.is_integral() {
            Some(IntVector(self.0.iter().map(|x| x.to_integer()).collect()))
        } else {
            None
        }
    }

    /// Primitive integer vector pointing in the same direction.
    pub fn direction(&self) -> Result<IntVector> {
        self.clear_denominators().0.primitive()
    }

    pub fn lifted(&self, last: BigRational) -> QVector {
        let mut c = self.0.clone();
        c.push(last);
        QVector(c)
    }
}

impl From<Vec<BigRational>> for QVector {
    fn from(v: Vec<BigRational>) -> Self {
        QVector(v)
    }
}

impl From<&IntVector> for QVector {
    fn from(v: &IntVector) -> Self {
        v.to_q()
    }
}

impl Index<usize> for QVector {
    type Output = BigRational;
    fn index(&self, i: usize) -> &BigRational {
        &self.0[i]
    }
}

impl Add for &QVector {
    type Output = QVector;
    fn add(self, rhs: &QVector) -> QVector {
        QVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &QVector {
    type Output = QVector;
    fn sub(self, rhs: &QVector) -> QVector {
        QVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Rational number `n / d` from machine integers; handy in tests.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from equal-length rows.
    pub fn from_rows(rows: &[IntVector]) -> Result<Self> {
        let cols = rows.first().map_or(0, IntVector::dim);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.dim() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.dim(),
                });
            }
            data.extend(r.iter().cloned());
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[IntVector]) -> Result<Self> {
        Ok(Self::from_rows(cols)?.transpose())
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        let rows: Vec<IntVector> = rows.iter().map(|r| IntVector::from(*r)).collect();
        Self::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    fn at_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> IntVector {
        IntVector(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> IntVector {
        IntVector((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn row_vectors(&self) -> Vec<IntVector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn column_vectors(&self) -> Vec<IntVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at_mut(j, i) = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * other.get(k, j);
                    *out.at_mut(i, j) += prod;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &IntVector) -> Result<IntVector> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.dim(),
            });
        }
        Ok(IntVector(
            (0..self.rows).map(|i| self.row(i).dot(v)).collect(),
        ))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] -= q * row[source]
    fn row_axpy(&mut self, target: usize, source: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let delta = q * self.get(source, j);
            *self.at_mut(target, j) -= delta;
        }
    }

    /// col[target] -= q * col[source]
    fn col_axpy(&mut self, target: usize, source: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let delta = q * self.get(i, source);
            *self.at_mut(i, target) -= delta;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = self.at_mut(i, j);
            *x = -std::mem::take(x);
        }
    }

    /// Exact determinant by Bareiss fraction-free elimination.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(k, k) * a.get(i, j) - a.get(i, k) * a.get(k, j)) / &prev;
                    *a.at_mut(i, j) = v;
                }
            }
            prev = a.get(k, k).clone();
        }
        Ok(sign * a.get(n - 1, n - 1))
    }

    /// Determinant reduced into `{0, …, p-1}`.
    pub fn det_mod_p(&self, p: u64) -> Result<u64> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let d = self.det()?;
        let r = d.mod_floor(&BigInt::from(p));
        Ok(r.to_u64().expect("residue below p"))
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for j in 0..a.cols {
            if rank == a.rows {
                break;
            }
            let Some(p) = (rank..a.rows).find(|&i| !a.get(i, j).is_zero()) else {
                continue;
            };
            a.swap_rows(rank, p);
            for i in rank + 1..a.rows {
                if a.get(i, j).is_zero() {
                    continue;
                }
                let piv = a.get(rank, j).clone();
                let f = a.get(i, j).clone();
                for k in j..a.cols {
                    let v = &piv * a.get(i, k) - &f * a.get(rank, k);
                    *a.at_mut(i, k) = v;
                }
                // keep entries small
                let g = a.row(i).content();
                if !g.is_zero() && !g.is_one() {
                    for k in j..a.cols {
                        let v = a.get(i, k) / &g;
                        *a.at_mut(i, k) = v;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Row-style Hermite normal form `(h, u)` with `h = u * self`.
    pub fn hermite_normal_form(&self) -> (IntMatrix, IntMatrix) {
        let mut h = self.clone();
        let mut u = IntMatrix::identity(self.rows);
        let mut r = 0;
        for j in 0..h.cols {
            if r == h.rows {
                break;
            }
            loop {
                // smallest nonzero |entry| in column j among rows >= r
                let pivot = (r..h.rows)
                    .filter(|&i| !h.get(i, j).is_zero())
                    .min_by(|&a, &b| h.get(a, j).abs().cmp(&h.get(b, j).abs()));
                let Some(p) = pivot else { break };
                h.swap_rows(r, p);
                u.swap_rows(r, p);
                let mut done = true;
                for i in r + 1..h.rows {
                    if h.get(i, j).is_zero() {
                        continue;
                    }
                    let q = h.get(i, j).div_floor(h.get(r, j));
                    h.row_axpy(i, r, &q);
                    u.row_axpy(i, r, &q);
                    if !h.get(i, j).is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if h.get(r, j).is_zero() {
                continue;
            }
            if h.get(r, j).is_negative() {
                h.negate_row(r);
                u.negate_row(r);
            }
            for i in 0..r {
                let q = h.get(i, j).div_floor(h.get(r, j));
                h.row_axpy(i, r, &q);
                u.row_axpy(i, r, &q);
            }
            r += 1;
        }
        (h, u)
    }

    /// Smith normal form `(s, u, v)` with `s = u * self * v`, `s` diagonal,
    /// diagonal entries nonnegative and each dividing the next.
    pub fn smith_normal_form(&self) -> (IntMatrix, IntMatrix, IntMatrix) {
        let mut a = self.clone();
        let mut u = IntMatrix::identity(self.rows);
        let mut v = IntMatrix::identity(self.cols);
        let n = self.rows.min(self.cols);
        for t in 0..n {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..a.rows {
                for j in t..a.cols {
                    let x = a.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < a.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);
            loop {
                let mut changed = false;
                // clear column t
                for i in t + 1..a.rows {
                    if a.get(i, t).is_zero() {
                        continue;
                    }
                    let q = a.get(i, t).div_floor(a.get(t, t));
                    a.row_axpy(i, t, &q);
                    u.row_axpy(i, t, &q);
                    if !a.get(i, t).is_zero() {
                        a.swap_rows(t, i);
                        u.swap_rows(t, i);
                        changed = true;
                    }
                }
                // clear row t
                for j in t + 1..a.cols {
                    if a.get(t, j).is_zero() {
                        continue;
                    }
                    let q = a.get(t, j).div_floor(a.get(t, t));
                    a.col_axpy(j, t, &q);
                    v.col_axpy(j, t, &q);
                    if !a.get(t, j).is_zero() {
                        a.swap_cols(t, j);
                        v.swap_cols(t, j);
                        changed = true;
                    }
                }
                if changed {
                    continue;
                }
                // divisibility of the trailing block
                let piv = a.get(t, t).clone();
                let bad = (t + 1..a.rows)
                    .find(|&i| (t + 1..a.cols).any(|j| !a.get(i, j).is_multiple_of(&piv)));
                match bad {
                    Some(i) => {
                        let minus_one = -BigInt::one();
                        a.row_axpy(t, i, &minus_one);
                        u.row_axpy(t, i, &minus_one);
                    }
                    None => break,
                }
            }
            if a.get(t, t).is_negative() {
                a.negate_row(t);
                u.negate_row(t);
            }
        }
        (a, u, v)
    }

    /// Nonzero diagonal entries of the Smith normal form.
    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        let (s, _, _) = self.smith_normal_form();
        (0..s.rows.min(s.cols))
            .map(|i| s.get(i, i).clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    /// Exact rational solution of `self * x = b`, or `None` if inconsistent.
    ///
    /// Free variables are set to zero.
    pub fn solve_rational(&self, b: &IntVector) -> Option<QVector> {
        assert_eq!(b.dim(), self.rows, "right-hand side has wrong length");
        let n = self.cols;
        let mut aug: Vec<Vec<BigRational>> = (0..self.rows)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..n)
                    .map(|j| BigRational::from_integer(self.get(i, j).clone()))
                    .collect();
                row.push(BigRational::from_integer(b[i].clone()));
                row
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for j in 0..n {
            let Some(p) = (r..aug.len()).find(|&i| !aug[i][j].is_zero()) else {
                continue;
            };
            aug.swap(r, p);
            let inv = aug[r][j].recip();
            for x in aug[r].iter_mut() {
                *x *= &inv;
            }
            let pivot = aug[r].clone();
            for (i, row) in aug.iter_mut().enumerate() {
                if i == r || row[j].is_zero() {
                    continue;
                }
                let f = row[j].clone();
                for (x, p) in row.iter_mut().zip(&pivot).skip(j).take(n + 1 - j) {
                    *x -= &f * p;
                }
            }
            pivots.push(j);
            r += 1;
            if r == aug.len() {
                break;
            }
        }
        if aug[r..].iter().any(|row| !row[n].is_zero()) {
            return None;
        }
        let mut x = vec![BigRational::zero(); n];
        for (i, &j) in pivots.iter().enumerate() {
            x[j] = aug[i][n].clone();
        }
        Some(QVector(x))
    }

    /// Inverse of a unimodular matrix.
    pub fn unimodular_inverse(&self) -> Result<IntMatrix> {
        let d = self.det()?;
        if d.abs() != BigInt::one() {
            return Err(Error::NotUnimodular);
        }
        let n = self.rows;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let x = self
                .solve_rational(&IntVector::unit(n, j))
                .and_then(|q| q.to_int())
                .ok_or(Error::NotUnimodular)?;
            cols.push(x);
        }
        IntMatrix::from_columns(&cols)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{}", self.row(i))?;
        }
        Ok(())
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors of a nonzero integer, by trial division.
pub fn prime_factors(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::from(2u32);
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            out.push(d.to_u64().expect("small factor"));
            while n.is_multiple_of(&d) {
                n /= &d;
            }
        }
        d += 1u32;
    }
    if n > BigInt::one() {
        out.push(n.to_u64().expect("prime factor fits in u64"));
    }
    out
}

/// Least common multiple of the denominators of a list of rationals.
pub fn lcm_denominators<'a>(xs: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
}
