//! Dense exact linear algebra over the prime field F_p, plus the small amount
//! of arithmetic modulo p² needed to lift degree-one classes.
//!
//! Matrices are stored row-major with every entry reduced into `[0, p)`.
//! Pivoting is deterministic (first nonzero entry scanning columns left to
//! right), so every derived basis is reproducible bit for bit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[inline]
pub fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

#[inline]
pub fn neg_mod(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

pub fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0, "inverse of zero");
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, (a % p) as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p as i64) as u32
}

pub fn reduce_i64(a: i64, p: u32) -> u32 {
    a.rem_euclid(p as i64) as u32
}

/// `dst += c * src` over F_p.
#[inline]
pub fn axpy(dst: &mut [u32], src: &[u32], c: u32, p: u32) {
    debug_assert_eq!(dst.len(), src.len());
    if c == 0 {
        return;
    }
    if p == 2 {
        for (d, s) in dst.iter_mut().zip(src) {
            *d ^= *s;
        }
    } else if c == 1 {
        for (d, s) in dst.iter_mut().zip(src) {
            *d = add_mod(*d, *s, p);
        }
    } else {
        for (d, s) in dst.iter_mut().zip(src) {
            if *s != 0 {
                *d = add_mod(*d, mul_mod(c, *s, p), p);
            }
        }
    }
}

pub fn scale(v: &mut [u32], c: u32, p: u32) {
    if c == 1 {
        return;
    }
    for x in v.iter_mut() {
        *x = mul_mod(*x, c, p);
    }
}

pub fn dot(a: &[u32], b: &[u32], p: u32) -> u32 {
    let mut acc: u64 = 0;
    for (x, y) in a.iter().zip(b) {
        acc += *x as u64 * *y as u64;
        if acc >= 1 << 62 {
            acc %= p as u64;
        }
    }
    (acc % p as u64) as u32
}

pub fn is_zero(v: &[u32]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// A dense matrix over F_p.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl std::fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "FpMatrix(p={}, {}x{})", self.p, self.rows, self.cols)?;
        for r in 0..self.rows.min(16) {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Output of [`FpMatrix::rref`].
#[derive(Clone, Debug)]
pub struct Rref {
    pub reduced: FpMatrix,
    pub pivot_columns: Vec<usize>,
    pub rank: usize,
}

impl FpMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1 % p;
        }
        m
    }

    /// Builds a matrix from row-major data, reducing every entry mod p.
    pub fn from_entries(p: u32, rows: usize, cols: usize, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::input(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        let entries = entries.into_iter().map(|x| x % p).collect();
        Ok(FpMatrix {
            p,
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows(p: u32, cols: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::input(format!(
                    "row of length {} in a matrix with {cols} columns",
                    r.len()
                )));
            }
            entries.extend(r.iter().map(|x| x % p));
        }
        Ok(FpMatrix {
            p,
            rows: rows.len(),
            cols,
            entries,
        })
    }

    /// Signed integer rows, reduced into `[0, p)`.
    pub fn from_i64_rows(p: u32, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let reduced: Vec<Vec<u32>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| reduce_i64(x, p)).collect())
            .collect();
        Self::from_rows(p, cols, &reduced)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.entries[r * self.cols + c] = v % self.p;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u32] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [u32] {
        &mut self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        is_zero(&self.entries)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..self.cols).all(|c| self.get(r, c) == u32::from(r == c)))
    }

    fn check_modulus(&self, other: &FpMatrix) -> Result<()> {
        if self.p != other.p {
            return Err(Error::input(format!(
                "mixed moduli: {} and {}",
                self.p, other.p
            )));
        }
        Ok(())
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.entries[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.check_modulus(other)?;
        if self.cols != other.rows {
            return Err(Error::input(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let p = self.p;
        let mut out = FpMatrix::zeros(p, self.rows, other.cols);
        for r in 0..self.rows {
            let dst = &mut out.entries[r * other.cols..(r + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.entries[r * self.cols + k];
                if a != 0 {
                    axpy(dst, other.row(k), a, p);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.check_modulus(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::input("shape mismatch in matrix addition"));
        }
        let mut out = self.clone();
        axpy(&mut out.entries, &other.entries, 1, self.p);
        Ok(out)
    }

    pub fn sub(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.check_modulus(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::input("shape mismatch in matrix subtraction"));
        }
        let mut out = self.clone();
        axpy(&mut out.entries, &other.entries, self.p - 1, self.p);
        Ok(out)
    }

    pub fn scaled(&self, c: u32) -> FpMatrix {
        let mut out = self.clone();
        scale(&mut out.entries, c % self.p, self.p);
        out
    }

    /// `self · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::input(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok(self.apply(v))
    }

    /// Unchecked matrix-vector product.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        (0..self.rows).map(|r| dot(self.row(r), v, self.p)).collect()
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.check_modulus(other)?;
        if self.cols != other.cols && self.rows > 0 && other.rows > 0 {
            return Err(Error::input("column mismatch in vstack"));
        }
        let cols = if self.rows > 0 { self.cols } else { other.cols };
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(FpMatrix {
            p: self.p,
            rows: self.rows + other.rows,
            cols,
            entries,
        })
    }

    /// Kronecker product, row index `(i, k) -> i * other.rows + k`.
    pub fn kronecker(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.check_modulus(other)?;
        let p = self.p;
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = FpMatrix::zeros(p, rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if b != 0 {
                            out.entries[(i * other.rows + k) * cols + j * other.cols + l] =
                                mul_mod(a, b, p);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.rref_in_place(self.cols);
        Rref {
            rank: pivots.len(),
            pivot_columns: pivots,
            reduced: m,
        }
    }

    /// Row-reduces in place, choosing pivots only among the first
    /// `pivot_limit` columns. Returns the pivot columns.
    fn rref_in_place(&mut self, pivot_limit: usize) -> Vec<usize> {
        let p = self.p;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut lead = 0usize;
        for c in 0..pivot_limit.min(cols) {
            if lead == self.rows {
                break;
            }
            let Some(r) = (lead..self.rows).find(|&r| self.entries[r * cols + c] != 0) else {
                continue;
            };
            if r != lead {
                for k in 0..cols {
                    self.entries.swap(r * cols + k, lead * cols + k);
                }
            }
            let inv = inv_mod(self.entries[lead * cols + c], p);
            scale(&mut self.entries[lead * cols..(lead + 1) * cols], inv, p);
            let pivot_row: Vec<u32> = self.entries[lead * cols + c..(lead + 1) * cols].to_vec();
            for r in 0..self.rows {
                if r == lead {
                    continue;
                }
                let f = self.entries[r * cols + c];
                if f != 0 {
                    axpy(
                        &mut self.entries[r * cols + c..(r + 1) * cols],
                        &pivot_row,
                        neg_mod(f, p),
                        p,
                    );
                }
            }
            pivots.push(c);
            lead += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        // Reduce the smaller orientation.
        if self.rows > self.cols {
            let mut e = Echelon::new(self.p, self.rows);
            let t = self.transpose();
            for r in 0..t.rows {
                e.insert(t.row(r).to_vec());
            }
            e.rank()
        } else {
            let mut e = Echelon::new(self.p, self.cols);
            for r in 0..self.rows {
                e.insert(self.row(r).to_vec());
            }
            e.rank()
        }
    }

    /// Rows form a basis of `{v : self · vᵀ = 0}`, one row per free column
    /// in increasing order.
    pub fn kernel_basis(&self) -> FpMatrix {
        let p = self.p;
        let Rref {
            reduced,
            pivot_columns,
            ..
        } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivot_columns {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut out = FpMatrix::zeros(p, free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            let row = out.row_mut(k);
            row[f] = 1;
            for (i, &pc) in pivot_columns.iter().enumerate() {
                row[pc] = neg_mod(reduced.get(i, f), p);
            }
        }
        out
    }

    /// Some `x` with `self · x = b`, free variables pinned to zero, or `None`
    /// when the system is inconsistent.
    pub fn solve(&self, b: &[u32]) -> Result<Option<Vec<u32>>> {
        if b.len() != self.rows {
            return Err(Error::input(format!(
                "right-hand side of length {} for {} equations",
                b.len(),
                self.rows
            )));
        }
        let mut aug = FpMatrix::zeros(self.p, self.rows, self.cols + 1);
        for r in 0..self.rows {
            aug.row_mut(r)[..self.cols].copy_from_slice(self.row(r));
            aug.row_mut(r)[self.cols] = b[r] % self.p;
        }
        let pivots = aug.rref_in_place(self.cols);
        for r in pivots.len()..self.rows {
            if aug.get(r, self.cols) != 0 {
                return Ok(None);
            }
        }
        let mut x = vec![0; self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(i, self.cols);
        }
        Ok(Some(x))
    }

    /// The inverse of a square matrix, or `None` when it is singular.
    pub fn inverse(&self) -> Option<FpMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = FpMatrix::zeros(self.p, n, 2 * n);
        for r in 0..n {
            aug.row_mut(r)[..n].copy_from_slice(self.row(r));
            aug.row_mut(r)[n + r] = 1;
        }
        let pivots = aug.rref_in_place(n);
        if pivots.len() < n {
            return None;
        }
        let mut inv = FpMatrix::zeros(self.p, n, n);
        for r in 0..n {
            inv.row_mut(r).copy_from_slice(&aug.row(r)[n..]);
        }
        Some(inv)
    }
}

/// An incrementally built row-echelon basis of a subspace of F_p^n.
///
/// Rows are kept fully reduced against each other, so membership tests and
/// coordinate extraction are single passes.
#[derive(Clone, Debug)]
pub struct Echelon {
    p: u32,
    len: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
    // pivot column -> row index
    pivot_of: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(p: u32, len: usize) -> Self {
        Echelon {
            p,
            len,
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_of: vec![None; len],
        }
    }

    pub fn from_rows<'a>(p: u32, len: usize, rows: impl IntoIterator<Item = &'a [u32]>) -> Self {
        let mut e = Echelon::new(p, len);
        for r in rows {
            e.insert(r.to_vec());
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.len
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the basis; the result is zero iff `v` lies in the span.
    pub fn reduce(&self, v: &mut [u32]) {
        let p = self.p;
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let f = v[pc];
            if f != 0 {
                axpy(v, row, neg_mod(f, p), p);
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        is_zero(&w)
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<u32>) -> bool {
        debug_assert_eq!(v.len(), self.len);
        let p = self.p;
        self.reduce(&mut v);
        let Some(pc) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(v[pc], p);
        scale(&mut v, inv, p);
        for row in self.rows.iter_mut() {
            let f = row[pc];
            if f != 0 {
                axpy(row, &v, neg_mod(f, p), p);
            }
        }
        self.pivot_of[pc] = Some(self.rows.len());
        self.rows.push(v);
        self.pivots.push(pc);
        true
    }

    /// Coordinates of `v` in the stored basis, if `v` is in the span.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        let coords: Vec<u32> = self.pivots.iter().map(|&pc| v[pc]).collect();
        let mut w = v.to_vec();
        self.reduce(&mut w);
        is_zero(&w).then_some(coords)
    }

    pub fn to_matrix(&self) -> FpMatrix {
        FpMatrix::from_rows(self.p, self.len, &self.rows).expect("rows have ambient length")
    }
}

/// Precomputed right-inverse data for repeatedly solving `A x = y`.
///
/// Holds the transformation `E` with `E·A = rref(A)`, so each solve is a
/// matrix-vector product plus a consistency check. Solutions agree with
/// [`FpMatrix::solve`].
#[derive(Clone, Debug)]
pub struct Solver {
    rows: usize,
    cols: usize,
    rank: usize,
    pivots: Vec<usize>,
    transform: FpMatrix,
}

impl Solver {
    pub fn new(a: &FpMatrix) -> Self {
        let (rows, cols, p) = (a.rows(), a.cols(), a.p());
        let mut aug = FpMatrix::zeros(p, rows, cols + rows);
        for r in 0..rows {
            aug.row_mut(r)[..cols].copy_from_slice(a.row(r));
            aug.row_mut(r)[cols + r] = 1 % p;
        }
        let pivots = aug.rref_in_place(cols);
        let mut transform = FpMatrix::zeros(p, rows, rows);
        for r in 0..rows {
            transform.row_mut(r).copy_from_slice(&aug.row(r)[cols..]);
        }
        Solver {
            rows,
            cols,
            rank: pivots.len(),
            pivots,
            transform,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn solve(&self, y: &[u32]) -> Option<Vec<u32>> {
        debug_assert_eq!(y.len(), self.rows);
        let z = self.transform.apply(y);
        if !is_zero(&z[self.rank..]) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (i, &c) in self.pivots.iter().enumerate() {
            x[c] = z[i];
        }
        Some(x)
    }
}

/// A residue modulo p², used to lift homomorphisms to Z/p².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Zp2Scalar {
    value: u64,
    p: u32,
}

impl Zp2Scalar {
    pub fn new(value: i64, p: u32) -> Self {
        let m = (p as i64) * (p as i64);
        Zp2Scalar {
            value: value.rem_euclid(m) as u64,
            p,
        }
    }

    /// The lift of a residue mod p to its representative in `[0, p)`.
    pub fn lift(residue: u32, p: u32) -> Self {
        Self::new((residue % p) as i64, p)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        (self.p as u64) * (self.p as u64)
    }

    pub fn reduce_mod_p(&self) -> u32 {
        (self.value % self.p as u64) as u32
    }

    /// Exact division by p of a multiple of p, landing in F_p.
    pub fn div_p(&self) -> Option<u32> {
        (self.value % self.p as u64 == 0).then(|| (self.value / self.p as u64) as u32)
    }
}

impl std::ops::Add for Zp2Scalar {
    type Output = Zp2Scalar;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        Zp2Scalar::new((self.value + rhs.value) as i64, self.p)
    }
}

impl std::ops::Sub for Zp2Scalar {
    type Output = Zp2Scalar;
    fn sub(self, rhs: Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        Zp2Scalar::new(self.value as i64 - rhs.value as i64, self.p)
    }
}

impl std::ops::Mul for Zp2Scalar {
    type Output = Zp2Scalar;
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        Zp2Scalar::new(((self.value * rhs.value) % self.modulus()) as i64, self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(p: u32, rows: &[&[u32]]) -> FpMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<u32>> = rows.iter().map(|r| r.to_vec()).collect();
        FpMatrix::from_rows(p, cols, &rows).unwrap()
    }

    #[test]
    fn inverse_round_trip() {
        let a = FpMatrix::from_rows(5, 2, &[vec![1, 2], vec![3, 4]]).unwrap();
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).unwrap().is_identity());
        let singular = FpMatrix::from_rows(5, 2, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn rref_empty() {
        let r = FpMatrix::zeros(2, 0, 0).rref();
        assert_eq!(r.rank, 0);
        assert!(r.pivot_columns.is_empty());
    }

    #[test]
    fn rref_identity() {
        let id = FpMatrix::identity(2, 3);
        let r = id.rref();
        assert_eq!(r.reduced, id);
        assert_eq!(r.pivot_columns, vec![0, 1, 2]);
        assert_eq!(r.rank, 3);
    }

    #[test]
    fn rref_dependent_rows_f5() {
        let r = m(5, &[&[1, 2], &[2, 4]]).rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivot_columns, vec![0]);
        assert_eq!(r.reduced.row(0), &[1, 2]);
        assert_eq!(r.reduced.row(1), &[0, 0]);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(FpMatrix::identity(3, 4).kernel_basis().rows(), 0);
        assert_eq!(FpMatrix::zeros(2, 2, 3).kernel_basis().rows(), 3);
        let k = m(2, &[&[1, 1]]).kernel_basis();
        assert_eq!(k.to_rows(), vec![vec![1, 1]]);
    }

    #[test]
    fn kernel_matches_enumeration_f2() {
        // every vector of F_2^2 killed by [[1,1]]
        let a = m(2, &[&[1, 1]]);
        let killed: Vec<[u32; 2]> = (0..4u32)
            .map(|b| [b & 1, (b >> 1) & 1])
            .filter(|v| (v[0] + v[1]) % 2 == 0)
            .collect();
        assert_eq!(killed, vec![[0, 0], [1, 1]]);
        assert_eq!(a.kernel_basis().rows(), killed.len() - 1);
    }

    #[test]
    fn solve_examples() {
        let id = FpMatrix::identity(7, 3);
        assert_eq!(id.solve(&[3, 4, 5]).unwrap(), Some(vec![3, 4, 5]));
        assert_eq!(m(2, &[&[1, 1]]).solve(&[1]).unwrap(), Some(vec![1, 0]));
        assert_eq!(FpMatrix::zeros(2, 1, 1).solve(&[1]).unwrap(), None);
        assert!(id.solve(&[1]).is_err());
    }

    #[test]
    fn mixing_moduli_is_an_error() {
        let a = FpMatrix::identity(2, 2);
        let b = FpMatrix::identity(3, 2);
        assert!(a.mul(&b).is_err());
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn zp2_defect_divides() {
        // 1 + 1 - 2 over Z/4 with residues mod 2: lift(1)+lift(1)-lift(0) = 2
        let p = 2;
        let d = Zp2Scalar::lift(1, p) + Zp2Scalar::lift(1, p) - Zp2Scalar::lift(0, p);
        assert_eq!(d.value(), 2);
        assert_eq!(d.div_p(), Some(1));
        assert_eq!(Zp2Scalar::new(-1, 3).value(), 8);
        assert_eq!((Zp2Scalar::new(4, 3) * Zp2Scalar::new(5, 3)).value(), 2);
    }

    #[test]
    fn inverses() {
        for p in [2u32, 3, 5, 7, 13] {
            for a in 1..p {
                assert_eq!(mul_mod(a, inv_mod(a, p), p), 1);
            }
        }
    }

    fn arb_matrix() -> impl Strategy<Value = FpMatrix> {
        (prop::sample::select(vec![2u32, 3, 5]), 0usize..7, 0usize..7).prop_flat_map(
            |(p, r, c)| {
                prop::collection::vec(0..p, r * c)
                    .prop_map(move |e| FpMatrix::from_entries(p, r, c, e).unwrap())
            },
        )
    }

    proptest! {
        #[test]
        fn rank_nullity(a in arb_matrix()) {
            let k = a.kernel_basis();
            prop_assert_eq!(a.rref().rank + k.rows(), a.cols());
            for r in 0..k.rows() {
                prop_assert!(is_zero(&a.apply(k.row(r))));
            }
            prop_assert_eq!(a.rank(), a.rref().rank);
        }

        #[test]
        fn rref_idempotent(a in arb_matrix()) {
            let once = a.rref().reduced;
            prop_assert_eq!(once.rref().reduced, once);
        }

        #[test]
        fn solve_reproduces_rhs(a in arb_matrix(), seed in 0u32..1000) {
            let b: Vec<u32> = (0..a.rows()).map(|i| (seed.wrapping_mul(31).wrapping_add(i as u32 * 7)) % a.p()).collect();
            if let Some(x) = a.solve(&b).unwrap() {
                prop_assert_eq!(a.apply(&x), b.clone());
            }
            let s = Solver::new(&a);
            prop_assert_eq!(s.solve(&b), a.solve(&b).unwrap());
        }
    }
}
