//! Exact dense linear algebra over a prime field.
//!
//! Matrices are row-major `u32` buffers; every operation takes the field as an
//! explicit argument so a matrix carries no hidden modulus. Gaussian
//! elimination always pivots on the first nonzero entry, which keeps every
//! output (kernels, complements, solutions) reproducible.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default characteristic: the largest prime below 2^16.
pub const DEFAULT_PRIME: u32 = 65521;

/// The field of integers modulo a prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PrimeField {
    p: u32,
}

impl TryFrom<u32> for PrimeField {
    type Error = Error;

    fn try_from(p: u32) -> Result<Self> {
        PrimeField::new(p)
    }
}

impl From<PrimeField> for u32 {
    fn from(f: PrimeField) -> u32 {
        f.p
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if is_prime(p as u64) {
            Ok(PrimeField { p })
        } else {
            Err(Error::NotPrime(p as u64))
        }
    }

    #[inline]
    pub fn characteristic(self) -> u32 {
        self.p
    }

    /// Reduces an arbitrary signed integer into `[0, p)`.
    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    /// The representative of `x` in `(-p/2, p/2]`, used for human-readable output.
    #[inline]
    pub fn centered(self, x: u32) -> i64 {
        if x as u64 * 2 > self.p as u64 {
            x as i64 - self.p as i64
        } else {
            x as i64
        }
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p as u64 - b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1u32 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(self, a: u32) -> u32 {
        debug_assert!(!a.is_multiple_of(self.p), "inverting zero");
        self.pow(a, self.p as u64 - 2)
    }

    pub fn random<R: Rng + ?Sized>(self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.p)
    }
}

/// A dense matrix with entries in `[0, p)` for some externally supplied field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}[", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(u32::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Scalar multiple of the identity.
    pub fn scalar(n: usize, c: u32) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Mat { rows, cols, data })
    }

    /// Builds a matrix from signed integer rows, reducing every entry into the field.
    /// `cols` is only consulted when `rows` is empty.
    pub fn from_rows(f: PrimeField, rows: &[Vec<i64>], cols: usize) -> Result<Self> {
        let ncols = rows.first().map_or(cols, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * ncols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch(format!(
                    "row {} has {} entries, expected {}",
                    i,
                    row.len(),
                    ncols
                )));
            }
            data.extend(row.iter().map(|&x| f.reduce(x)));
        }
        Ok(Mat {
            rows: rows.len(),
            cols: ncols,
            data,
        })
    }

    /// A single column vector.
    pub fn column(v: &[u32]) -> Self {
        Mat {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn random<R: Rng + ?Sized>(f: PrimeField, rows: usize, cols: usize, rng: &mut R) -> Self {
        Mat {
            rows,
            cols,
            data: (0..rows * cols).map(|_| f.random(rng)).collect(),
        }
    }

    /// A uniformly random invertible matrix (rejection sampling).
    pub fn random_invertible<R: Rng + ?Sized>(f: PrimeField, n: usize, rng: &mut R) -> Self {
        loop {
            let m = Mat::random(f, n, n, rng);
            if m.rank(f) == n {
                return m;
            }
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    /// Sub-matrix made of the listed columns, in order.
    pub fn select_cols(&self, cols: &[usize]) -> Mat {
        let mut m = Mat::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                m.data[r * cols.len() + j] = self.get(r, c);
            }
        }
        m
    }

    /// Sub-matrix made of the listed rows, in order.
    pub fn select_rows(&self, rows: &[usize]) -> Mat {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        Mat {
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn hstack(&self, other: &Mat) -> Result<Mat> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Ok(Mat {
            rows: self.rows,
            cols,
            data,
        })
    }

    pub fn vstack(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "vstack of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Mat {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Stacks a list of matrices vertically; all must share a column count.
    pub fn vstack_all(cols: usize, parts: &[Mat]) -> Result<Mat> {
        let mut out = Mat::zeros(0, cols);
        for p in parts {
            out = out.vstack(p)?;
        }
        Ok(out)
    }

    /// Stacks a list of matrices horizontally; all must share a row count.
    pub fn hstack_all(rows: usize, parts: &[Mat]) -> Result<Mat> {
        let mut out = Mat::zeros(rows, 0);
        for p in parts {
            out = out.hstack(p)?;
        }
        Ok(out)
    }

    pub fn block_diag(&self, other: &Mat) -> Mat {
        let mut m = Mat::zeros(self.rows + other.rows, self.cols + other.cols);
        m.paste(0, 0, self);
        m.paste(self.rows, self.cols, other);
        m
    }

    /// Copies `src` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, src: &Mat) {
        for r in 0..src.rows {
            let dst = (r0 + r) * self.cols + c0;
            self.data[dst..dst + src.cols].copy_from_slice(src.row(r));
        }
    }

    pub fn mul(&self, f: PrimeField, other: &Mat) -> Mat {
        assert_eq!(
            self.cols, other.rows,
            "multiplying {}x{} by {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let p = f.characteristic() as u64;
        let mut out = vec![0u64; self.rows * other.cols];
        for r in 0..self.rows {
            let acc = &mut out[r * other.cols..(r + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                for (c, slot) in acc.iter_mut().enumerate() {
                    *slot = (*slot + a * other.data[k * other.cols + c] as u64) % p;
                }
            }
        }
        Mat {
            rows: self.rows,
            cols: other.cols,
            data: out.into_iter().map(|x| x as u32).collect(),
        }
    }

    pub fn mul_vec(&self, f: PrimeField, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0u32, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn add(&self, f: PrimeField, other: &Mat) -> Mat {
        assert_eq!(self.shape(), other.shape());
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, f: PrimeField, other: &Mat) -> Mat {
        assert_eq!(self.shape(), other.shape());
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, f: PrimeField, c: u32) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn neg(&self, f: PrimeField) -> Mat {
        self.scale(f, f.neg(1))
    }

    pub fn pow(&self, f: PrimeField, mut exp: u64) -> Mat {
        assert!(self.is_square());
        let mut acc = Mat::identity(self.rows);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(f, &base);
            }
        }
        acc
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self, f: PrimeField) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place(f, self.cols);
        (m, pivots)
    }

    /// Row-reduces in place, choosing pivots only among the first `pivot_cols`
    /// columns. Returns the pivot columns.
    fn rref_in_place(&mut self, f: PrimeField, pivot_cols: usize) -> Vec<usize> {
        let p = f.characteristic() as u64;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut row = 0;
        for c in 0..pivot_cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| self.data[r * cols + c] != 0) else {
                continue;
            };
            if pr != row {
                for k in 0..cols {
                    self.data.swap(pr * cols + k, row * cols + k);
                }
            }
            let inv = f.inv(self.data[row * cols + c]) as u64;
            if inv != 1 {
                for k in c..cols {
                    let x = &mut self.data[row * cols + k];
                    *x = ((*x as u64 * inv) % p) as u32;
                }
            }
            let (head, tail) = self.data.split_at_mut(row * cols);
            let (pivot_row, rest) = tail.split_at_mut(cols);
            for other in head.chunks_mut(cols).chain(rest.chunks_mut(cols)) {
                let factor = other[c] as u64;
                if factor == 0 {
                    continue;
                }
                let neg = p - factor;
                for k in c..cols {
                    other[k] = ((other[k] as u64 + neg * pivot_row[k] as u64) % p) as u32;
                }
            }
            pivots.push(c);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self, f: PrimeField) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // Eliminate along the shorter side.
        if self.rows < self.cols {
            self.transpose().rref(f).1.len()
        } else {
            self.rref(f).1.len()
        }
    }

    /// Columns form a basis of the null space.
    pub fn kernel_basis(&self, f: PrimeField) -> Mat {
        let (r, pivots) = self.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Mat::zeros(self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            k.set(fc, j, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                k.set(pc, j, f.neg(r.get(i, fc)));
            }
        }
        k
    }

    /// Columns form a basis of the column space, chosen among the original columns.
    pub fn column_space(&self, f: PrimeField) -> Mat {
        let (_, pivots) = self.rref(f);
        self.select_cols(&pivots)
    }

    /// Some `x` with `self * x = b`, or `None` when `b` is outside the image.
    pub fn solve(&self, f: PrimeField, b: &[u32]) -> Result<Option<Vec<u32>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        Ok(self.solve_matrix(f, &Mat::column(b))?.map(|x| x.col(0)))
    }

    /// Some `X` with `self * X = rhs`, or `None` if a column of `rhs` is outside the image.
    pub fn solve_matrix(&self, f: PrimeField, rhs: &Mat) -> Result<Option<Mat>> {
        if rhs.rows != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side with {} rows for {} rows",
                rhs.rows, self.rows
            )));
        }
        let mut aug = self.hstack(rhs)?;
        let pivots = aug.rref_in_place(f, self.cols);
        let rank = pivots.len();
        for r in rank..aug.rows {
            if aug.row(r)[self.cols..].iter().any(|&x| x != 0) {
                return Ok(None);
            }
        }
        let mut x = Mat::zeros(self.cols, rhs.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, aug.get(i, self.cols + j));
            }
        }
        Ok(Some(x))
    }

    /// Determinant of a square matrix (1 for the empty matrix).
    pub fn determinant(&self, f: PrimeField) -> Result<u32> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = 1;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&r| m.get(r, c) != 0) else {
                return Ok(0);
            };
            if pr != c {
                for k in 0..n {
                    m.data.swap(pr * n + k, c * n + k);
                }
                det = f.neg(det);
            }
            let pivot = m.get(c, c);
            det = f.mul(det, pivot);
            let inv = f.inv(pivot);
            for r in c + 1..n {
                let factor = f.mul(m.get(r, c), inv);
                if factor != 0 {
                    for k in c..n {
                        let v = f.sub(m.get(r, k), f.mul(factor, m.get(c, k)));
                        m.set(r, k, v);
                    }
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self, f: PrimeField) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = self.hstack(&Mat::identity(n)).ok()?;
        let pivots = aug.rref_in_place(f, n);
        if pivots.len() < n {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Some(aug.select_cols(&cols))
    }

    pub fn is_invertible(&self, f: PrimeField) -> bool {
        self.is_square() && self.rank(f) == self.rows
    }

    /// For a matrix of full column rank, a matrix `L` with `L * self = I`.
    pub fn left_inverse(&self, f: PrimeField) -> Result<Mat> {
        let comp = complement_basis(f, self, self.rows)?;
        let full = self.hstack(&comp)?;
        let inv = full
            .inverse(f)
            .ok_or_else(|| Error::Inconsistency("basis extension is singular".into()))?;
        let rows: Vec<usize> = (0..self.cols).collect();
        Ok(inv.select_rows(&rows))
    }
}

/// Columns extending the (independent) columns of `sub` to a basis of the
/// ambient space of dimension `ambient`. Greedy over the standard basis.
pub fn complement_basis(f: PrimeField, sub: &Mat, ambient: usize) -> Result<Mat> {
    if sub.rows() != ambient {
        return Err(Error::DimensionMismatch(format!(
            "{} rows for an ambient space of dimension {}",
            sub.rows(),
            ambient
        )));
    }
    if sub.rank(f) != sub.cols() {
        return Err(Error::DependentColumns);
    }
    let aug = sub.hstack(&Mat::identity(ambient))?;
    let (_, pivots) = aug.rref(f);
    let picked: Vec<usize> = pivots
        .into_iter()
        .filter(|&c| c >= sub.cols())
        .map(|c| c - sub.cols())
        .collect();
    Ok(Mat::identity(ambient).select_cols(&picked))
}

/// Basis (as columns) of the intersection of the column spans of `u` and `v`.
pub fn intersect_spans(f: PrimeField, u: &Mat, v: &Mat) -> Result<Mat> {
    if u.rows() != v.rows() {
        return Err(Error::DimensionMismatch("spans in different spaces".into()));
    }
    if u.cols() == 0 || v.cols() == 0 {
        return Ok(Mat::zeros(u.rows(), 0));
    }
    let joint = u.hstack(&v.neg(f))?;
    let ker = joint.kernel_basis(f);
    let top: Vec<usize> = (0..u.cols()).collect();
    let coeffs = ker.select_rows(&top);
    Ok(u.mul(f, &coeffs).column_space(f))
}
