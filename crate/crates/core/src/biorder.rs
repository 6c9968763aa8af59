//! Biordered sets: idempotents of a semigroup with their basic products.
//!
//! Two backings are supported. The matrix backing takes the idempotents of
//! M_n(GF(q)) of selected ranks; singularizers are still drawn from every
//! rank. The table backing takes a finite semigroup by its multiplication
//! table.
//!
//! An E-square `(e, f, g, h)` satisfies `e R f L g R h L e`. Laid out as
//!
//! ```text
//!   e  f
//!   h  g
//! ```
//! rows are R-classes and columns are L-classes.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{check_modulus, GfError, Matrix};
use crate::linmonoid::{column_key, enumerate_idempotents_ranks, IdempotentRecord, LinMonoidError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BiorderError {
    #[error(transparent)]
    LinMonoid(#[from] LinMonoidError),
    #[error(transparent)]
    Gf(#[from] GfError),
    #[error("table is not associative: ({x}*{y})*{z} != {x}*({y}*{z})")]
    NotAssociative { x: usize, y: usize, z: usize },
    #[error("semigroup has no idempotents")]
    NoIdempotents,
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("square is not a rectangular band")]
    NotABand,
    #[error("constructed singularizer failed verification")]
    InternalCheckFailed,
    #[error("operation needs the matrix monoid backing")]
    WrongBackend,
}

/// Non-fatal findings about the input semigroup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum BiorderWarning {
    /// The semigroup is not regular; `element` has no inverse-like `x` with `a x a = a`.
    NotRegular { element: usize },
    /// The table exceeded the exhaustive associativity budget.
    AssociativityUnchecked { size: usize },
}

/// Multiplication table input: `{ "size": m, "table": [row-major m*m] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableSpec {
    pub size: usize,
    pub table: Vec<usize>,
}

impl TableSpec {
    pub fn from_json(text: &str) -> Result<Self, BiorderError> {
        serde_json::from_str(text).map_err(|e| BiorderError::InvalidTable(e.to_string()))
    }

    fn validate(&self) -> Result<(), BiorderError> {
        if self.size == 0 {
            return Err(BiorderError::InvalidTable("empty table".into()));
        }
        if self.table.len() != self.size * self.size {
            return Err(BiorderError::InvalidTable(format!(
                "expected {} entries, found {}",
                self.size * self.size,
                self.table.len()
            )));
        }
        if let Some(&x) = self.table.iter().find(|&&x| x >= self.size) {
            return Err(BiorderError::InvalidTable(format!(
                "entry {x} out of range"
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size + b]
    }

    /// First associativity violation in lexicographic order, if any.
    pub fn associativity_witness(&self) -> Option<(usize, usize, usize)> {
        let m = self.size;
        for x in 0..m {
            for y in 0..m {
                let xy = self.mul(x, y);
                for z in 0..m {
                    if self.mul(xy, z) != self.mul(x, self.mul(y, z)) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    pub fn is_regular_element(&self, a: usize) -> bool {
        (0..self.size).any(|x| self.mul(self.mul(a, x), a) == a)
    }
}

/// Multiplication in the semigroup that backs a biordered set.
trait Backing {
    type Value: Clone + Eq;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
}

struct MatrixMul;

impl Backing for MatrixMul {
    type Value = Matrix;
    fn mul(&self, a: &Matrix, b: &Matrix) -> Matrix {
        a * b
    }
}

impl Backing for TableSpec {
    type Value = usize;
    fn mul(&self, a: &usize, b: &usize) -> usize {
        TableSpec::mul(self, *a, *b)
    }
}

/// For idempotents, `x ∈ S y` iff `x y = x` and `x ∈ y S` iff `y x = x`.
/// The pair is basic when either element lies in `S z ∪ z S` of the other.
fn is_basic_pair<B: Backing>(b: &B, x: &B::Value, y: &B::Value) -> bool {
    let xy = b.mul(x, y);
    let yx = b.mul(y, x);
    xy == *x || yx == *x || xy == *y || yx == *y
}

/// Basic product, or `None` when the pair is not basic.
fn basic_product<B: Backing>(b: &B, x: &B::Value, y: &B::Value) -> Option<B::Value> {
    is_basic_pair(b, x, y).then(|| b.mul(x, y))
}

/// One of the four ways an idempotent can singularize a square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    LeftRight,
    RightLeft,
    TopBottom,
    BottomTop,
}

impl Direction {
    /// Scan order used by [`BiorderedSet::find_singularizer`].
    pub const ALL: [Direction; 4] = [
        Direction::LeftRight,
        Direction::RightLeft,
        Direction::TopBottom,
        Direction::BottomTop,
    ];
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::LeftRight => "left-right",
            Direction::RightLeft => "right-left",
            Direction::TopBottom => "top-bottom",
            Direction::BottomTop => "bottom-top",
        })
    }
}

/// Checks the four basic-product equations for `t` and the given direction.
///
/// left-right: `te=e, th=h, et=f, ht=g`;
/// right-left: `tf=f, tg=g, ft=e, gt=h`;
/// top-bottom: `et=e, ft=f, te=h, tf=g`;
/// bottom-top: `ht=h, gt=g, th=e, tg=f`.
fn singularizes<B: Backing>(b: &B, t: &B::Value, sq: [&B::Value; 4], dir: Direction) -> bool {
    let [e, f, g, h] = sq;
    let left = |x: &B::Value, want: &B::Value| basic_product(b, t, x).as_ref() == Some(want);
    let right = |x: &B::Value, want: &B::Value| basic_product(b, x, t).as_ref() == Some(want);
    match dir {
        Direction::LeftRight => left(e, e) && left(h, h) && right(e, f) && right(h, g),
        Direction::RightLeft => left(f, f) && left(g, g) && right(f, e) && right(g, h),
        Direction::TopBottom => right(e, e) && right(f, f) && left(e, h) && left(f, g),
        Direction::BottomTop => right(h, h) && right(g, g) && left(h, e) && left(g, f),
    }
}

/// The singularizing idempotent, as an element of the backing semigroup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum WitnessElement {
    /// Element index into the table semigroup.
    Index(usize),
    /// Idempotent matrix of M_n(GF(q)), any rank.
    Matrix(#[serde(serialize_with = "ser_matrix")] Matrix),
}

impl fmt::Display for WitnessElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessElement::Index(i) => write!(f, "{i}"),
            WitnessElement::Matrix(m) => write!(f, "{m}"),
        }
    }
}

fn ser_matrix<S: serde::Serializer>(m: &Matrix, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&m.encode())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularizerWitness {
    pub t: WitnessElement,
    pub direction: Direction,
}

/// A nondegenerate E-square `e R f L g R h L e` of element indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ESquare {
    pub e: usize,
    pub f: usize,
    pub g: usize,
    pub h: usize,
}

impl ESquare {
    pub fn as_array(&self) -> [usize; 4] {
        [self.e, self.f, self.g, self.h]
    }

    /// The four relabelings that keep the `R L R L` pattern: identity, the
    /// half turn, and the two reflections through the R-edges.
    pub fn orientations(&self) -> [ESquare; 4] {
        let ESquare { e, f, g, h } = *self;
        [
            ESquare { e, f, g, h },
            ESquare {
                e: g,
                f: h,
                g: e,
                h: f,
            },
            ESquare {
                e: f,
                f: e,
                g: h,
                h: g,
            },
            ESquare {
                e: h,
                f: g,
                g: f,
                h: e,
            },
        ]
    }

    /// All eight dihedral relabelings as element sequences around the cycle.
    pub fn dihedral_sequences(&self) -> [[usize; 4]; 8] {
        let [a, b, c, d] = self.as_array();
        [
            [a, b, c, d],
            [b, c, d, a],
            [c, d, a, b],
            [d, a, b, c],
            [a, d, c, b],
            [d, c, b, a],
            [c, b, a, d],
            [b, a, d, c],
        ]
    }

    pub fn canonical(&self) -> ESquare {
        *self.orientations().iter().min().expect("four orientations")
    }
}

enum Store {
    Matrix {
        n: usize,
        q: u32,
        records: Vec<IdempotentRecord>,
        pool: OnceLock<Vec<Matrix>>,
    },
    Table {
        tbl: TableSpec,
        elements: Vec<usize>,
    },
}

/// The idempotents of a semigroup with R/L class data and basic products.
pub struct BiorderedSet {
    store: Store,
    rclass_of: Vec<usize>,
    lclass_of: Vec<usize>,
    rclass_count: usize,
    lclass_count: usize,
    warnings: Vec<BiorderWarning>,
    pool_budget: usize,
}

/// Outcome of a product query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasicProduct {
    /// Basic product, as an element index.
    Defined(usize),
    /// Basic product whose value lies outside the selected ranks.
    OutsideScope,
    /// The pair is not basic.
    Undefined,
}

fn class_ids<K: std::hash::Hash + Eq + Clone>(
    keys: impl Iterator<Item = K>,
) -> (Vec<usize>, usize) {
    let mut ids = HashMap::new();
    let of: Vec<usize> = keys
        .map(|k| {
            let next = ids.len();
            *ids.entry(k).or_insert(next)
        })
        .collect();
    (of, ids.len())
}

impl BiorderedSet {
    /// Idempotents of M_n(GF(q)) whose rank lies in `ranks`.
    pub fn from_matrix_monoid(
        n: usize,
        q: u32,
        ranks: impl IntoIterator<Item = usize>,
        budget: usize,
    ) -> Result<Self, BiorderError> {
        check_modulus(q)?;
        let records = enumerate_idempotents_ranks(n, q, ranks, budget)?;
        Ok(Self::from_records(n, q, records, budget))
    }

    /// Wraps pre-enumerated idempotent records of M_n(GF(q)).
    pub fn from_records(
        n: usize,
        q: u32,
        records: Vec<IdempotentRecord>,
        pool_budget: usize,
    ) -> Self {
        let (rclass_of, rclass_count) = class_ids(records.iter().map(|r| r.rclass.clone()));
        let (lclass_of, lclass_count) = class_ids(records.iter().map(|r| r.lclass.clone()));
        Self {
            store: Store::Matrix {
                n,
                q,
                records,
                pool: OnceLock::new(),
            },
            rclass_of,
            lclass_of,
            rclass_count,
            lclass_count,
            warnings: Vec::new(),
            pool_budget,
        }
    }

    /// Idempotents of a finite semigroup given by its multiplication table.
    ///
    /// Associativity is checked exhaustively when `size <= table_budget`.
    pub fn from_table(tbl: TableSpec, table_budget: usize) -> Result<Self, BiorderError> {
        tbl.validate()?;
        let mut warnings = Vec::new();
        if tbl.size <= table_budget {
            if let Some((x, y, z)) = tbl.associativity_witness() {
                return Err(BiorderError::NotAssociative { x, y, z });
            }
        } else {
            warnings.push(BiorderWarning::AssociativityUnchecked { size: tbl.size });
        }
        let elements: Vec<usize> = (0..tbl.size).filter(|&x| tbl.mul(x, x) == x).collect();
        if elements.is_empty() {
            return Err(BiorderError::NoIdempotents);
        }
        if let Some(element) = (0..tbl.size).find(|&a| !tbl.is_regular_element(a)) {
            warnings.push(BiorderWarning::NotRegular { element });
        }
        let len = elements.len();
        let r_equal = |i: usize, j: usize| {
            let (e, f) = (elements[i], elements[j]);
            tbl.mul(e, f) == f && tbl.mul(f, e) == e
        };
        let l_equal = |i: usize, j: usize| {
            let (e, f) = (elements[i], elements[j]);
            tbl.mul(e, f) == e && tbl.mul(f, e) == f
        };
        let (rclass_of, rclass_count) = Self::classes_by(len, r_equal);
        let (lclass_of, lclass_count) = Self::classes_by(len, l_equal);
        Ok(Self {
            store: Store::Table { tbl, elements },
            rclass_of,
            lclass_of,
            rclass_count,
            lclass_count,
            warnings,
            pool_budget: 0,
        })
    }

    fn classes_by(len: usize, same: impl Fn(usize, usize) -> bool) -> (Vec<usize>, usize) {
        let mut of = vec![usize::MAX; len];
        let mut count = 0;
        for i in 0..len {
            if of[i] != usize::MAX {
                continue;
            }
            of[i] = count;
            for j in i + 1..len {
                if of[j] == usize::MAX && same(i, j) {
                    of[j] = count;
                }
            }
            count += 1;
        }
        (of, count)
    }

    pub fn len(&self) -> usize {
        self.rclass_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn warnings(&self) -> &[BiorderWarning] {
        &self.warnings
    }

    pub fn rclass_of(&self, i: usize) -> usize {
        self.rclass_of[i]
    }

    pub fn lclass_of(&self, i: usize) -> usize {
        self.lclass_of[i]
    }

    pub fn rclass_count(&self) -> usize {
        self.rclass_count
    }

    pub fn lclass_count(&self) -> usize {
        self.lclass_count
    }

    pub fn r_equal(&self, i: usize, j: usize) -> bool {
        self.rclass_of[i] == self.rclass_of[j]
    }

    pub fn l_equal(&self, i: usize, j: usize) -> bool {
        self.lclass_of[i] == self.lclass_of[j]
    }

    /// Matrix records, when backed by M_n(GF(q)).
    pub fn records(&self) -> Option<&[IdempotentRecord]> {
        match &self.store {
            Store::Matrix { records, .. } => Some(records),
            Store::Table { .. } => None,
        }
    }

    /// `(n, q)` when backed by M_n(GF(q)).
    pub fn matrix_params(&self) -> Option<(usize, u32)> {
        match &self.store {
            Store::Matrix { n, q, .. } => Some((*n, *q)),
            Store::Table { .. } => None,
        }
    }

    /// Table element id of each idempotent, when table backed.
    pub fn table_elements(&self) -> Option<&[usize]> {
        match &self.store {
            Store::Table { elements, .. } => Some(elements),
            Store::Matrix { .. } => None,
        }
    }

    /// Human readable label of element `i`.
    pub fn label(&self, i: usize) -> String {
        match &self.store {
            Store::Matrix { records, .. } => records[i].matrix.encode(),
            Store::Table { elements, .. } => elements[i].to_string(),
        }
    }

    /// Label of the R-class of element `i`.
    pub fn rclass_label(&self, i: usize) -> String {
        match &self.store {
            Store::Matrix { records, .. } => format!("R[{}]", records[i].rclass),
            Store::Table { .. } => format!("R{}", self.rclass_of[i]),
        }
    }

    /// Label of the L-class of element `i`.
    pub fn lclass_label(&self, i: usize) -> String {
        match &self.store {
            Store::Matrix { records, .. } => format!("L[{}]", records[i].lclass),
            Store::Table { .. } => format!("L{}", self.lclass_of[i]),
        }
    }

    fn index_of_matrix(&self, m: &Matrix) -> Option<usize> {
        let Store::Matrix { records, .. } = &self.store else {
            return None;
        };
        records.iter().position(|r| &r.matrix == m)
    }

    fn index_of_table(&self, x: usize) -> Option<usize> {
        let Store::Table { elements, .. } = &self.store else {
            return None;
        };
        elements.binary_search(&x).ok()
    }

    /// Product `ij`, exposed only when `i ∈ S j ∪ j S` or `j ∈ S i ∪ i S`.
    pub fn product(&self, i: usize, j: usize) -> BasicProduct {
        match &self.store {
            Store::Matrix { records, .. } => {
                match basic_product(&MatrixMul, &records[i].matrix, &records[j].matrix) {
                    None => BasicProduct::Undefined,
                    Some(m) => self
                        .index_of_matrix(&m)
                        .map_or(BasicProduct::OutsideScope, BasicProduct::Defined),
                }
            }
            Store::Table { tbl, elements } => {
                match basic_product(tbl, &elements[i], &elements[j]) {
                    None => BasicProduct::Undefined,
                    Some(x) => self
                        .index_of_table(x)
                        .map_or(BasicProduct::OutsideScope, BasicProduct::Defined),
                }
            }
        }
    }

    /// All nondegenerate E-squares, one per geometric square, each in its
    /// canonical orientation (lexicographically least of the four R-first
    /// relabelings), sorted.
    pub fn enumerate_esquares(&self) -> Vec<ESquare> {
        let mut cell: HashMap<(usize, usize), usize> = HashMap::new();
        let mut lclasses_of_r: Vec<Vec<usize>> = vec![Vec::new(); self.rclass_count];
        for i in 0..self.len() {
            let (r, l) = (self.rclass_of[i], self.lclass_of[i]);
            // an H-class holds at most one idempotent
            if cell.insert((r, l), i).is_none() {
                lclasses_of_r[r].push(l);
            }
        }
        for ls in &mut lclasses_of_r {
            ls.sort_unstable();
        }
        let mut out = Vec::new();
        for r1 in 0..self.rclass_count {
            for r2 in r1 + 1..self.rclass_count {
                let common = sorted_intersection(&lclasses_of_r[r1], &lclasses_of_r[r2]);
                for (a, &l1) in common.iter().enumerate() {
                    for &l2 in &common[a + 1..] {
                        let sq = ESquare {
                            e: cell[&(r1, l1)],
                            f: cell[&(r1, l2)],
                            g: cell[&(r2, l2)],
                            h: cell[&(r2, l1)],
                        };
                        out.push(sq.canonical());
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Checks the defining relations `e R f L g R h L e` and distinctness.
    pub fn is_esquare(&self, sq: &ESquare) -> bool {
        let [e, f, g, h] = sq.as_array();
        let distinct = e != f && e != g && e != h && f != g && f != h && g != h;
        distinct
            && self.r_equal(e, f)
            && self.l_equal(f, g)
            && self.r_equal(g, h)
            && self.l_equal(h, e)
    }

    /// `x1 x2 x3 x4 x1 == x1` for the given cyclic sequence, computed in the
    /// backing semigroup.
    pub fn cyclic_product_returns(&self, seq: [usize; 4]) -> bool {
        match &self.store {
            Store::Matrix { records, .. } => {
                let m = |i: usize| &records[seq[i]].matrix;
                let p = &(&(&(m(0) * m(1)) * m(2)) * m(3)) * m(0);
                &p == m(0)
            }
            Store::Table { tbl, elements } => {
                let x = |i: usize| elements[seq[i]];
                let p = tbl.mul(tbl.mul(tbl.mul(tbl.mul(x(0), x(1)), x(2)), x(3)), x(0));
                p == x(0)
            }
        }
    }

    /// `efghe == e`.
    pub fn is_rectangular_band(&self, sq: &ESquare) -> bool {
        self.cyclic_product_returns(sq.as_array())
    }

    /// Evaluates `(w1ᵀv2)(w2ᵀv2)⁻¹(w2ᵀv1)(w1ᵀv1)⁻¹ == I_k` where `e` lies in
    /// `[v1] ∩ [w1ᵀ]` and `g` in `[v2] ∩ [w2ᵀ]`.
    pub fn star_identity_holds(&self, sq: &ESquare) -> Result<bool, BiorderError> {
        let records = self.records().ok_or(BiorderError::WrongBackend)?;
        let (e, g) = (&records[sq.e], &records[sq.g]);
        star_identity(&e.v, &g.v, &e.wt, &g.wt)
    }

    fn witness_pool(&self) -> Result<&[Matrix], BiorderError> {
        let Store::Matrix { n, q, pool, .. } = &self.store else {
            return Err(BiorderError::WrongBackend);
        };
        if let Some(p) = pool.get() {
            return Ok(p);
        }
        let all = enumerate_idempotents_ranks(*n, *q, 0..=*n, self.pool_budget)?;
        let _ = pool.set(all.into_iter().map(|r| r.matrix).collect());
        Ok(pool.get().expect("pool just set"))
    }

    /// Does `t` singularize `sq` in direction `dir`?
    pub fn check_witness(&self, sq: &ESquare, w: &SingularizerWitness) -> bool {
        match (&self.store, &w.t) {
            (Store::Matrix { records, .. }, WitnessElement::Matrix(t)) => {
                let m = |i: usize| &records[i].matrix;
                &(t * t) == t
                    && singularizes(
                        &MatrixMul,
                        t,
                        [m(sq.e), m(sq.f), m(sq.g), m(sq.h)],
                        w.direction,
                    )
            }
            (Store::Table { tbl, elements }, WitnessElement::Index(t)) => {
                let x = |i: usize| &elements[i];
                let t = elements[*t];
                singularizes(tbl, &t, [x(sq.e), x(sq.f), x(sq.g), x(sq.h)], w.direction)
            }
            _ => false,
        }
    }

    /// Brute-force singularizer search over every idempotent of the backing
    /// semigroup (all ranks, for matrices), directions scanned in
    /// [`Direction::ALL`] order.
    pub fn find_singularizer(
        &self,
        sq: &ESquare,
    ) -> Result<Option<SingularizerWitness>, BiorderError> {
        match &self.store {
            Store::Matrix { records, .. } => {
                let m = |i: usize| &records[i].matrix;
                let vals = [m(sq.e), m(sq.f), m(sq.g), m(sq.h)];
                for &direction in &Direction::ALL {
                    for t in self.witness_pool()? {
                        if singularizes(&MatrixMul, t, vals, direction) {
                            return Ok(Some(SingularizerWitness {
                                t: WitnessElement::Matrix(t.clone()),
                                direction,
                            }));
                        }
                    }
                }
                Ok(None)
            }
            Store::Table { tbl, elements } => {
                let x = |i: usize| &elements[i];
                let vals = [x(sq.e), x(sq.f), x(sq.g), x(sq.h)];
                for &direction in &Direction::ALL {
                    for (ti, t) in elements.iter().enumerate() {
                        if singularizes(tbl, t, vals, direction) {
                            return Ok(Some(SingularizerWitness {
                                t: WitnessElement::Index(ti),
                                direction,
                            }));
                        }
                    }
                }
                Ok(None)
            }
        }
    }

    /// Builds a left-right singularizer for a rectangular-band square of
    /// matrices.
    ///
    /// Conjugating by `P = [basis of col(e) | basis of null(e)]` puts the
    /// square in the block form `e = [I 0; 0 0]`, `f = [I b; 0 0]`,
    /// `h = [I 0; a 0]`, `g = [I b; a ab]` with `ba = 0`. Then
    /// `η = [I b; 0 c]` works for any idempotent `c` with `col(c) = col(a)`.
    pub fn construct_singularizer(
        &self,
        sq: &ESquare,
    ) -> Result<SingularizerWitness, BiorderError> {
        let records = self.records().ok_or(BiorderError::WrongBackend)?;
        if !self.is_rectangular_band(sq) {
            return Err(BiorderError::NotABand);
        }
        let m = |i: usize| &records[i].matrix;
        let t = block_singularizer(m(sq.e), m(sq.f), m(sq.h))?;
        let witness = SingularizerWitness {
            t: WitnessElement::Matrix(t),
            direction: Direction::LeftRight,
        };
        if !self.check_witness(sq, &witness) {
            return Err(BiorderError::InternalCheckFailed);
        }
        Ok(witness)
    }

    /// Witness used when sewing cells: matrices go through the band test and
    /// the block construction, tables through brute force.
    pub fn singular_witness(
        &self,
        sq: &ESquare,
    ) -> Result<Option<SingularizerWitness>, BiorderError> {
        match &self.store {
            Store::Matrix { .. } => {
                if self.is_rectangular_band(sq) {
                    self.construct_singularizer(sq).map(Some)
                } else {
                    Ok(None)
                }
            }
            Store::Table { .. } => self.find_singularizer(sq),
        }
    }
}

fn sorted_intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// `(w1ᵀv2)(w2ᵀv2)⁻¹(w2ᵀv1)(w1ᵀv1)⁻¹ == I_k`, factors in exactly this order.
pub fn star_identity(
    v1: &Matrix,
    v2: &Matrix,
    w1t: &Matrix,
    w2t: &Matrix,
) -> Result<bool, BiorderError> {
    let k = v1.cols();
    let p11 = w1t.mat_mul(v1)?;
    let p12 = w1t.mat_mul(v2)?;
    let p21 = w2t.mat_mul(v1)?;
    let p22 = w2t.mat_mul(v2)?;
    let lhs = &(&(&p12 * &p22.mat_inv()?) * &p21) * &p11.mat_inv()?;
    Ok(lhs == Matrix::identity(k, v1.modulus())?)
}

fn block_singularizer(e: &Matrix, f: &Matrix, h: &Matrix) -> Result<Matrix, BiorderError> {
    let n = e.rows();
    let q = e.modulus();
    let colspace = column_key(e).0;
    let k = colspace.cols();
    let basis = colspace.hconcat(&e.null_space())?;
    let basis_inv = basis
        .mat_inv()
        .map_err(|_| BiorderError::InternalCheckFailed)?;
    let conj = |x: &Matrix| &(&basis_inv * x) * &basis;
    let (fb, hb) = (conj(f), conj(h));
    let b = fb.submatrix(0..k, k..n);
    let a = hb.submatrix(k..n, 0..k);
    if !(&b * &a).is_zero() {
        return Err(BiorderError::InternalCheckFailed);
    }
    // idempotent c with col(c) = col(a): c = A Wᵀ with Wᵀ picking the pivot rows of A
    let acol = column_key(&a).0;
    let r = acol.cols();
    let pivot_rows = acol.transpose().rref().pivots;
    let mut wt = Matrix::zeros(r, n - k, q)?;
    for (i, &pr) in pivot_rows.iter().enumerate() {
        wt.set(i, pr, 1);
    }
    let c = if r == 0 {
        Matrix::zeros(n - k, n - k, q)?
    } else {
        &acol * &wt
    };
    let mut eta = Matrix::zeros(n, n, q)?;
    for i in 0..k {
        eta.set(i, i, 1);
        for j in k..n {
            eta.set(i, j, b.get(i, j - k));
        }
    }
    for i in k..n {
        for j in k..n {
            eta.set(i, j, c.get(i - k, j - k));
        }
    }
    Ok(&(&basis * &eta) * &basis_inv)
}
