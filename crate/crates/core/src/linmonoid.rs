//! The full matrix monoid M_n(GF(q)): idempotents of a given rank, their
//! `v wT` factorizations, Green's R and L classes, and Rees coordinates of the
//! rank-k D-class.
//!
//! A rank-k matrix factors as `a = v wT` with `v` of size n×k and `wT` of size
//! k×n, both of rank k; it is idempotent exactly when `wT v = I_k`. The
//! R-class of `a` is its column space and its L-class its row space, keyed by
//! the canonical representatives from [`Matrix::column_rref`] and
//! [`Matrix::rref`].

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::gf::{check_modulus, GfError, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinMonoidError {
    #[error(transparent)]
    Gf(#[from] GfError),
    #[error("{what} has {size} elements, over the budget of {budget}")]
    InfeasibleSize {
        what: String,
        size: u128,
        budget: usize,
    },
    #[error("expected rank {expected}, found {actual}")]
    RankMismatch { expected: usize, actual: usize },
    #[error("rank {k} is out of range for n = {n}")]
    InvalidRank { n: usize, k: usize },
}

/// Canonical representative of a row space or column space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassKey(pub Matrix);

impl fmt::Display for ClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.encode())
    }
}

impl Serialize for ClassKey {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.encode())
    }
}

/// An idempotent `e = v wT` of rank k together with its Green's class keys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdempotentRecord {
    pub matrix: Matrix,
    pub rank: usize,
    /// Canonical column-space representative (n×k).
    pub v: Matrix,
    /// The unique k×n matrix with `v wT = matrix`; satisfies `wT v = I_k`.
    pub wt: Matrix,
    pub rclass: ClassKey,
    pub lclass: ClassKey,
}

impl IdempotentRecord {
    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn q(&self) -> u32 {
        self.matrix.modulus()
    }

    /// Checks every structural invariant of the record.
    pub fn verify(&self) -> bool {
        let k = self.rank;
        let q = self.q();
        let Ok(ik) = Matrix::identity(k, q) else {
            return false;
        };
        &self.matrix * &self.matrix == self.matrix
            && &self.v * &self.wt == self.matrix
            && &self.wt * &self.v == ik
            && self.matrix.rank() == k
            && self.v.rank() == k
            && self.wt.rank() == k
            && self.rclass == column_key(&self.v)
            && self.lclass == row_key(&self.wt)
    }
}

#[derive(Serialize)]
struct RecordJson<'a> {
    n: usize,
    q: u32,
    k: usize,
    matrix: Vec<Vec<u32>>,
    v: Vec<Vec<u32>>,
    #[serde(rename = "wT")]
    wt: Vec<Vec<u32>>,
    rclass: &'a ClassKey,
    lclass: &'a ClassKey,
}

pub(crate) fn nested(m: &Matrix) -> Vec<Vec<u32>> {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

impl Serialize for IdempotentRecord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RecordJson {
            n: self.n(),
            q: self.q(),
            k: self.rank,
            matrix: nested(&self.matrix),
            v: nested(&self.v),
            wt: nested(&self.wt),
            rclass: &self.rclass,
            lclass: &self.lclass,
        }
        .serialize(s)
    }
}

/// Key of the column space spanned by the columns of `m`.
pub fn column_key(m: &Matrix) -> ClassKey {
    let c = m.column_rref();
    let keep: Vec<usize> = (0..c.rank).collect();
    ClassKey(c.reduced.select_columns(&keep))
}

/// Key of the row space spanned by the rows of `m`.
pub fn row_key(m: &Matrix) -> ClassKey {
    let r = m.rref();
    let keep: Vec<usize> = (0..r.rank).collect();
    ClassKey(r.reduced.select_rows(&keep))
}

/// Number of k-dimensional subspaces of GF(q)^n.
pub fn gaussian_binomial(n: usize, k: usize, q: u32) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Number of rank-k idempotents of M_n(GF(q)).
pub fn idempotent_count(n: usize, k: usize, q: u32) -> u128 {
    gaussian_binomial(n, k, q) * (q as u128).pow((k * (n - k)) as u32)
}

fn check_params(n: usize, q: u32, k: usize) -> Result<(), LinMonoidError> {
    check_modulus(q)?;
    if k > n {
        return Err(LinMonoidError::InvalidRank { n, k });
    }
    Ok(())
}

fn check_budget(what: impl Into<String>, size: u128, budget: usize) -> Result<(), LinMonoidError> {
    if size > budget as u128 {
        return Err(LinMonoidError::InfeasibleSize {
            what: what.into(),
            size,
            budget,
        });
    }
    Ok(())
}

/// Iterates over all vectors of `len` entries in GF(q), first entry most
/// significant.
fn for_each_vector(len: usize, q: u32, mut f: impl FnMut(&[u32])) {
    let mut digits = vec![0u32; len];
    loop {
        f(&digits);
        let mut i = len;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < q {
                break;
            }
            digits[i] = 0;
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// All k×n matrices of rank k in reduced row echelon form, sorted by entry
/// encoding. These are the canonical row-space (L-class) representatives.
pub fn row_class_reps(n: usize, q: u32, k: usize) -> Result<Vec<Matrix>, LinMonoidError> {
    check_params(n, q, k)?;
    let mut out = Vec::new();
    for pivots in combinations(n, k) {
        // free slots: positions right of the row's pivot that are not pivot columns
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| {
                let pivots = &pivots;
                (pivots[r] + 1..n)
                    .filter(move |c| !pivots.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        for_each_vector(free.len(), q, |vals| {
            let mut entries = vec![0u32; k * n];
            for (r, &c) in pivots.iter().enumerate() {
                entries[r * n + c] = 1;
            }
            for (&(r, c), &x) in free.iter().zip(vals) {
                entries[r * n + c] = x;
            }
            out.push(Matrix::from_raw(k, n, q, entries));
        });
    }
    out.sort();
    Ok(out)
}

/// Canonical column-space (R-class) representatives: transposes of
/// [`row_class_reps`], in the same order.
pub fn column_class_reps(n: usize, q: u32, k: usize) -> Result<Vec<Matrix>, LinMonoidError> {
    Ok(row_class_reps(n, q, k)?
        .iter()
        .map(Matrix::transpose)
        .collect())
}

/// Every rank-k idempotent of M_n(GF(q)).
///
/// For each canonical column representative `v` the solutions of
/// `wT v = I_k` form an affine space of dimension k(n-k); it is walked
/// directly instead of scanning all of M_n.
pub fn enumerate_idempotents(
    n: usize,
    q: u32,
    k: usize,
    budget: usize,
) -> Result<Vec<IdempotentRecord>, LinMonoidError> {
    check_params(n, q, k)?;
    check_budget(
        format!("rank-{k} idempotents of M_{n}(F_{q})"),
        idempotent_count(n, k, q),
        budget,
    )?;
    let ik = Matrix::identity(k, q)?;
    let mut out = Vec::new();
    for v in column_class_reps(n, q, k)? {
        // pivot rows of v carry an identity block
        let vt = v.transpose();
        let pivots = vt.rref().pivots;
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let v_free = v.select_rows(&free);
        for_each_vector(k * free.len(), q, |vals| {
            let w_free = Matrix::from_raw(k, free.len(), q, vals.to_vec());
            let w_piv = ik.sub(&(&w_free * &v_free)).expect("shapes agree");
            let mut wt = Matrix::from_raw(k, n, q, vec![0; k * n]);
            for r in 0..k {
                for (j, &c) in pivots.iter().enumerate() {
                    wt.set(r, c, w_piv.get(r, j));
                }
                for (j, &c) in free.iter().enumerate() {
                    wt.set(r, c, w_free.get(r, j));
                }
            }
            debug_assert_eq!(&wt * &v, ik);
            let matrix = &v * &wt;
            let lclass = row_key(&wt);
            out.push(IdempotentRecord {
                matrix,
                rank: k,
                rclass: ClassKey(v.clone()),
                v: v.clone(),
                wt,
                lclass,
            });
        });
    }
    Ok(out)
}

/// Idempotents of every rank in `ranks`, concatenated in rank order.
pub fn enumerate_idempotents_ranks(
    n: usize,
    q: u32,
    ranks: impl IntoIterator<Item = usize>,
    budget: usize,
) -> Result<Vec<IdempotentRecord>, LinMonoidError> {
    let mut ranks: Vec<usize> = ranks.into_iter().collect();
    ranks.sort_unstable();
    ranks.dedup();
    let total: u128 = ranks
        .iter()
        .map(|&k| if k <= n { idempotent_count(n, k, q) } else { 0 })
        .sum();
    check_budget(format!("idempotents of M_{n}(F_{q})"), total, budget)?;
    let mut out = Vec::new();
    for k in ranks {
        out.extend(enumerate_idempotents(n, q, k, budget)?);
    }
    Ok(out)
}

/// Rank factorization `a = v wT` read off the row reduction of `a`: `v` is the
/// pivot columns of `a`, `wT` the nonzero rows of its RREF.
pub fn vw_factorize(a: &Matrix, k: usize) -> Result<(Matrix, Matrix), LinMonoidError> {
    let r = a.rref();
    if r.rank != k {
        return Err(LinMonoidError::RankMismatch {
            expected: k,
            actual: r.rank,
        });
    }
    let v = a.select_columns(&r.pivots);
    let rows: Vec<usize> = (0..k).collect();
    let wt = r.reduced.select_rows(&rows);
    Ok((v, wt))
}

pub fn green_r_equal(a: &IdempotentRecord, b: &IdempotentRecord) -> bool {
    a.rclass == b.rclass
}

pub fn green_l_equal(a: &IdempotentRecord, b: &IdempotentRecord) -> bool {
    a.lclass == b.lclass
}

/// Entry of the sandwich matrix: an element of GL_k or the adjoined zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SandwichEntry {
    Zero,
    Unit(Matrix),
}

impl SandwichEntry {
    pub fn is_zero(&self) -> bool {
        matches!(self, SandwichEntry::Zero)
    }
}

/// Rees matrix coordinates of the rank-k principal factor of M_n(GF(q)).
#[derive(Debug, Clone)]
pub struct ReesStructure {
    pub k: usize,
    /// Canonical column-space representatives, n×k.
    pub xset: Vec<Matrix>,
    /// Canonical row-space representatives, k×n.
    pub yset: Vec<Matrix>,
    /// `sandwich[i][j]` is `yset[i] * xset[j]` when invertible.
    pub sandwich: Vec<Vec<SandwichEntry>>,
}

impl ReesStructure {
    pub fn nonzero_count(&self) -> usize {
        self.sandwich
            .iter()
            .flatten()
            .filter(|e| !e.is_zero())
            .count()
    }

    pub fn entry(&self, y: usize, x: usize) -> &SandwichEntry {
        &self.sandwich[y][x]
    }
}

pub fn rees_structure(
    n: usize,
    q: u32,
    k: usize,
    budget: usize,
) -> Result<ReesStructure, LinMonoidError> {
    check_params(n, q, k)?;
    if k == 0 {
        return Err(LinMonoidError::InvalidRank { n, k });
    }
    let classes = gaussian_binomial(n, k, q);
    check_budget(
        format!("rank-{k} sandwich matrix"),
        classes * classes,
        budget,
    )?;
    let yset = row_class_reps(n, q, k)?;
    let xset = column_class_reps(n, q, k)?;
    let sandwich = yset
        .iter()
        .map(|y| {
            xset.iter()
                .map(|x| {
                    let yx = y * x;
                    if yx.rank() == k {
                        SandwichEntry::Unit(yx)
                    } else {
                        SandwichEntry::Zero
                    }
                })
                .collect()
        })
        .collect();
    Ok(ReesStructure {
        k,
        xset,
        yset,
        sandwich,
    })
}
