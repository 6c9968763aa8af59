//! Exact linear algebra over prime fields GF(p).
//!
//! Row operations use left scalar multiplication and column operations use
//! right scalar multiplication. Over a prime field the two coincide, but the
//! API keeps [`Matrix::rref`] (row spaces) and [`Matrix::column_rref`]
//! (column spaces) separate since the rest of the crate relies on that split.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported modulus (exclusive).
pub const MAX_MODULUS: u32 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("modulus {0} is not prime")]
    NotPrime(u32),
    #[error("modulus {0} exceeds the supported range (< 2^16)")]
    UnsupportedModulus(u32),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("matrix is singular")]
    Singular,
    #[error("entry {value} out of range for modulus {modulus}")]
    EntryOutOfRange { value: u32, modulus: u32 },
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Validates a modulus: prime and below [`MAX_MODULUS`].
pub fn check_modulus(p: u32) -> Result<(), GfError> {
    if p >= MAX_MODULUS {
        return Err(GfError::UnsupportedModulus(p));
    }
    if !is_prime(p) {
        return Err(GfError::NotPrime(p));
    }
    Ok(())
}

#[inline]
fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

#[inline]
fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

/// Inverse of a nonzero residue by Fermat's little theorem.
fn inv_mod(a: u32, p: u32) -> Option<u32> {
    if a % p == 0 {
        return None;
    }
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u32;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    Some(acc)
}

/// A residue modulo a prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldElement {
    value: u32,
    modulus: u32,
}

impl FieldElement {
    pub fn new(value: u32, modulus: u32) -> Result<Self, GfError> {
        check_modulus(modulus)?;
        Ok(Self {
            value: value % modulus,
            modulus,
        })
    }

    pub fn zero(modulus: u32) -> Result<Self, GfError> {
        Self::new(0, modulus)
    }

    pub fn one(modulus: u32) -> Result<Self, GfError> {
        Self::new(1, modulus)
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: Self) -> Result<Self, GfError> {
        self.same_field(other)?;
        Ok(Self {
            value: add_mod(self.value, other.value, self.modulus),
            modulus: self.modulus,
        })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, other: Self) -> Result<Self, GfError> {
        self.same_field(other)?;
        Ok(Self {
            value: sub_mod(self.value, other.value, self.modulus),
            modulus: self.modulus,
        })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Self {
        Self {
            value: sub_mod(0, self.value, self.modulus),
            modulus: self.modulus,
        }
    }

    fn same_field(self, other: Self) -> Result<(), GfError> {
        if self.modulus != other.modulus {
            return Err(GfError::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(())
    }
}

pub fn fq_mul(a: FieldElement, b: FieldElement) -> Result<FieldElement, GfError> {
    a.same_field(b)?;
    Ok(FieldElement {
        value: mul_mod(a.value, b.value, a.modulus),
        modulus: a.modulus,
    })
}

pub fn fq_inv(a: FieldElement) -> Result<FieldElement, GfError> {
    let value = inv_mod(a.value, a.modulus).ok_or(GfError::ZeroInverse)?;
    Ok(FieldElement {
        value,
        modulus: a.modulus,
    })
}

/// Result of row reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub reduced: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Result of column reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnRref {
    pub reduced: Matrix,
    pub rank: usize,
}

/// Dense row-major matrix over GF(p).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    modulus: u32,
    entries: Vec<u32>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, modulus: u32, entries: Vec<u32>) -> Result<Self, GfError> {
        check_modulus(modulus)?;
        if entries.len() != rows * cols {
            return Err(GfError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(&value) = entries.iter().find(|&&x| x >= modulus) {
            return Err(GfError::EntryOutOfRange { value, modulus });
        }
        Ok(Self {
            rows,
            cols,
            modulus,
            entries,
        })
    }

    /// Builds a matrix from nested rows, reducing entries modulo `modulus`.
    pub fn from_rows<R: AsRef<[u32]>>(modulus: u32, rows: &[R]) -> Result<Self, GfError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(GfError::DimensionMismatch("ragged rows".into()));
        }
        check_modulus(modulus)?;
        let entries = rows
            .iter()
            .flat_map(|r| r.as_ref().iter().map(|&x| x % modulus))
            .collect();
        Self::new(rows.len(), cols, modulus, entries)
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, modulus: u32, entries: Vec<u32>) -> Self {
        debug_assert_eq!(entries.len(), rows * cols);
        Self {
            rows,
            cols,
            modulus,
            entries,
        }
    }

    pub fn zeros(rows: usize, cols: usize, modulus: u32) -> Result<Self, GfError> {
        Self::new(rows, cols, modulus, vec![0; rows * cols])
    }

    pub fn identity(n: usize, modulus: u32) -> Result<Self, GfError> {
        let mut m = Self::zeros(n, n, modulus)?;
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.cols + c]
    }

    pub fn element(&self, r: usize, c: usize) -> FieldElement {
        FieldElement {
            value: self.get(r, c),
            modulus: self.modulus,
        }
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: u32) {
        self.entries[r * self.cols + c] = value % self.modulus;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut entries = vec![0; self.entries.len()];
        for r in 0..self.rows {
            for c in 0..self.cols {
                entries[c * self.rows + r] = self.get(r, c);
            }
        }
        Self::from_raw(self.cols, self.rows, self.modulus, entries)
    }

    pub fn mat_mul(&self, other: &Self) -> Result<Self, GfError> {
        if self.modulus != other.modulus {
            return Err(GfError::ModulusMismatch(self.modulus, other.modulus));
        }
        if self.cols != other.rows {
            return Err(GfError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let p = self.modulus as u64;
        let mut entries = vec![0u32; self.rows * other.cols];
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0u64;
                for l in 0..self.cols {
                    acc += self.get(i, l) as u64 * other.get(l, j) as u64;
                    // entries < 2^16, so a handful of terms fit before reducing
                    if l % 1024 == 1023 {
                        acc %= p;
                    }
                }
                entries[i * other.cols + j] = (acc % p) as u32;
            }
        }
        Ok(Self::from_raw(self.rows, other.cols, self.modulus, entries))
    }

    pub fn add(&self, other: &Self) -> Result<Self, GfError> {
        self.check_same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| add_mod(a, b, self.modulus))
            .collect();
        Ok(Self::from_raw(self.rows, self.cols, self.modulus, entries))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, GfError> {
        self.check_same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| sub_mod(a, b, self.modulus))
            .collect();
        Ok(Self::from_raw(self.rows, self.cols, self.modulus, entries))
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), GfError> {
        if self.modulus != other.modulus {
            return Err(GfError::ModulusMismatch(self.modulus, other.modulus));
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(GfError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// Right scalar multiple.
    pub fn scale(&self, s: u32) -> Self {
        let s = s % self.modulus;
        let entries = self
            .entries
            .iter()
            .map(|&a| mul_mod(a, s, self.modulus))
            .collect();
        Self::from_raw(self.rows, self.cols, self.modulus, entries)
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for r in rows.clone() {
            for c in cols.clone() {
                entries.push(self.get(r, c));
            }
        }
        Self::from_raw(rows.len(), cols.len(), self.modulus, entries)
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(self.rows * cols.len());
        for r in 0..self.rows {
            for &c in cols {
                entries.push(self.get(r, c));
            }
        }
        Self::from_raw(self.rows, cols.len(), self.modulus, entries)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            entries.extend_from_slice(self.row(r));
        }
        Self::from_raw(rows.len(), self.cols, self.modulus, entries)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hconcat(&self, other: &Self) -> Result<Self, GfError> {
        if self.rows != other.rows {
            return Err(GfError::DimensionMismatch(
                "hconcat row counts differ".into(),
            ));
        }
        if self.modulus != other.modulus {
            return Err(GfError::ModulusMismatch(self.modulus, other.modulus));
        }
        let cols = self.cols + other.cols;
        let mut entries = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            entries.extend_from_slice(self.row(r));
            entries.extend_from_slice(other.row(r));
        }
        Ok(Self::from_raw(self.rows, cols, self.modulus, entries))
    }

    /// Reduced row echelon form using left scalar row operations.
    pub fn rref(&self) -> Rref {
        let p = self.modulus;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(pr) = (lead..m.rows).find(|&r| m.get(r, c) != 0) else {
                continue;
            };
            m.swap_rows(pr, lead);
            let inv = inv_mod(m.get(lead, c), p).expect("nonzero pivot");
            for j in 0..m.cols {
                let v = mul_mod(inv, m.get(lead, j), p);
                m.entries[lead * m.cols + j] = v;
            }
            for r in 0..m.rows {
                if r == lead {
                    continue;
                }
                let f = m.get(r, c);
                if f == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let v = sub_mod(m.get(r, j), mul_mod(f, m.get(lead, j), p), p);
                    m.entries[r * m.cols + j] = v;
                }
            }
            pivots.push(c);
            lead += 1;
        }
        Rref {
            rank: pivots.len(),
            reduced: m,
            pivots,
        }
    }

    /// Canonical form of the (right) column space: reduced column echelon
    /// form built from right scalar column operations.
    pub fn column_rref(&self) -> ColumnRref {
        let p = self.modulus;
        let mut m = self.clone();
        let mut lead = 0;
        for r in 0..m.rows {
            if lead == m.cols {
                break;
            }
            let Some(pc) = (lead..m.cols).find(|&c| m.get(r, c) != 0) else {
                continue;
            };
            m.swap_cols(pc, lead);
            let inv = inv_mod(m.get(r, lead), p).expect("nonzero pivot");
            for i in 0..m.rows {
                let v = mul_mod(m.get(i, lead), inv, p);
                m.entries[i * m.cols + lead] = v;
            }
            for c in 0..m.cols {
                if c == lead {
                    continue;
                }
                let f = m.get(r, c);
                if f == 0 {
                    continue;
                }
                for i in 0..m.rows {
                    let v = sub_mod(m.get(i, c), mul_mod(m.get(i, lead), f, p), p);
                    m.entries[i * m.cols + c] = v;
                }
            }
            lead += 1;
        }
        ColumnRref {
            reduced: m,
            rank: lead,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Inverse via row reduction of `[m | I]`.
    pub fn mat_inv(&self) -> Result<Self, GfError> {
        if !self.is_square() {
            return Err(GfError::DimensionMismatch(format!(
                "inverse of non-square {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let aug = self.hconcat(&Self::identity(n, self.modulus)?)?;
        let Rref {
            reduced, pivots, ..
        } = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(GfError::Singular);
        }
        Ok(reduced.submatrix(0..n, n..2 * n))
    }

    /// Basis of the right null space `{x : self * x = 0}` as the columns of
    /// the returned matrix.
    pub fn null_space(&self) -> Self {
        let Rref {
            reduced, pivots, ..
        } = self.rref();
        let p = self.modulus;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Self::from_raw(self.cols, free.len(), p, vec![0; self.cols * free.len()]);
        for (j, &f) in free.iter().enumerate() {
            basis.entries[f * free.len() + j] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                basis.entries[pc * free.len() + j] = sub_mod(0, reduced.get(i, f), p);
            }
        }
        basis
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Compact text encoding, rows separated by `;`.
    pub fn encode(&self) -> String {
        let mut s = String::new();
        for r in 0..self.rows {
            if r > 0 {
                s.push(';');
            }
            for (j, x) in self.row(r).iter().enumerate() {
                if j > 0 {
                    s.push(',');
                }
                s.push_str(&x.to_string());
            }
        }
        s
    }
}

impl std::ops::Mul for &Matrix {
    type Output = Matrix;

    /// Panics on shape or modulus mismatch; use [`Matrix::mat_mul`] for the
    /// fallible version.
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.mat_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.encode())
    }
}

/// Matrix product; free-function form of [`Matrix::mat_mul`].
pub fn mat_mul(a: &Matrix, b: &Matrix) -> Result<Matrix, GfError> {
    a.mat_mul(b)
}

pub fn rref(m: &Matrix) -> Rref {
    m.rref()
}

pub fn mat_inv(m: &Matrix) -> Result<Matrix, GfError> {
    m.mat_inv()
}

pub fn column_rref(m: &Matrix) -> ColumnRref {
    m.column_rref()
}

/// All matrices of the given shape over GF(p) in encoding order, i.e. the
/// row-major entry vector read as a base-p numeral with the first entry most
/// significant.
pub fn all_matrices(rows: usize, cols: usize, p: u32) -> impl Iterator<Item = Matrix> {
    let len = rows * cols;
    let total = (p as u64)
        .checked_pow(len as u32)
        .expect("matrix space too large");
    (0..total).map(move |mut code| {
        let mut entries = vec![0u32; len];
        for slot in entries.iter_mut().rev() {
            *slot = (code % p as u64) as u32;
            code /= p as u64;
        }
        Matrix::from_raw(rows, cols, p, entries)
    })
}
