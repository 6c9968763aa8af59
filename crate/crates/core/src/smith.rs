//! Abelian invariants of `Z^n / L` for a lattice `L` given by integer rows.
//!
//! Rows are first reduced sparsely against pivots with unit coefficients,
//! which is exact over the integers. Whatever survives without a unit entry is
//! collected into a dense block and brought to Smith normal form.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

/// Free rank plus torsion coefficients `d_1 | d_2 | ...`, each greater than 1.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianInvariants {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Order of the group, or `None` when it is infinite.
    pub fn order(&self) -> Option<u64> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }
}

impl std::fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".into()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" x "))
        }
    }
}

pub type SparseRow = Vec<(usize, i64)>;

/// Incremental integer row reduction with unit pivots.
pub struct LatticeReducer {
    ncols: usize,
    pivot_of_col: Vec<Option<usize>>,
    pivots: Vec<(usize, SparseRow)>,
    residual: Vec<SparseRow>,
    scratch: Vec<i64>,
    touched: Vec<usize>,
    queued: Vec<bool>,
}

impl LatticeReducer {
    pub fn new(ncols: usize) -> Self {
        Self {
            ncols,
            pivot_of_col: vec![None; ncols],
            pivots: Vec::new(),
            residual: Vec::new(),
            scratch: vec![0; ncols],
            touched: Vec::new(),
            queued: Vec::new(),
        }
    }

    /// Reduces `row` against every pivot. Pivot rows never contain the pivot
    /// column of an earlier pivot, so clearing pivots in insertion order
    /// terminates.
    fn reduce(&mut self, row: &[(usize, i64)]) -> SparseRow {
        let mut heap = BinaryHeap::new();
        self.queued.resize(self.pivots.len(), false);
        for &(c, v) in row {
            if v == 0 {
                continue;
            }
            if self.scratch[c] == 0 {
                self.touched.push(c);
            }
            self.scratch[c] = self.scratch[c]
                .checked_add(v)
                .expect("lattice coefficient overflow");
            if let Some(i) = self.pivot_of_col[c] {
                if !self.queued[i] {
                    self.queued[i] = true;
                    heap.push(Reverse(i));
                }
            }
        }
        while let Some(Reverse(i)) = heap.pop() {
            self.queued[i] = false;
            let (c, ref prow) = self.pivots[i];
            let coef = self.scratch[c];
            if coef == 0 {
                continue;
            }
            let unit = prow
                .iter()
                .find(|&&(cc, _)| cc == c)
                .expect("pivot entry")
                .1;
            let factor = coef * unit;
            for &(cc, v) in prow {
                if self.scratch[cc] == 0 {
                    self.touched.push(cc);
                }
                let delta = factor.checked_mul(v).expect("lattice coefficient overflow");
                self.scratch[cc] = self.scratch[cc]
                    .checked_sub(delta)
                    .expect("lattice coefficient overflow");
                if let Some(j) = self.pivot_of_col[cc] {
                    if j != i && !self.queued[j] && self.scratch[cc] != 0 {
                        self.queued[j] = true;
                        heap.push(Reverse(j));
                    }
                }
            }
        }
        let mut out: SparseRow = Vec::new();
        self.touched.sort_unstable();
        self.touched.dedup();
        for &c in &self.touched {
            if self.scratch[c] != 0 {
                out.push((c, self.scratch[c]));
                self.scratch[c] = 0;
            }
        }
        self.touched.clear();
        out
    }

    fn try_promote(&mut self, row: SparseRow) -> Option<SparseRow> {
        match row.iter().find(|&&(_, v)| v == 1 || v == -1) {
            Some(&(c, _)) => {
                self.pivot_of_col[c] = Some(self.pivots.len());
                self.pivots.push((c, row));
                None
            }
            None => Some(row),
        }
    }

    pub fn add_row(&mut self, row: &[(usize, i64)]) {
        debug_assert!(row.iter().all(|&(c, _)| c < self.ncols));
        let reduced = self.reduce(row);
        if reduced.is_empty() {
            return;
        }
        if let Some(rest) = self.try_promote(reduced) {
            self.residual.push(rest);
        }
    }

    /// Rank of the lattice and torsion of the quotient.
    pub fn finish(mut self) -> (usize, Vec<u64>) {
        loop {
            let pending = std::mem::take(&mut self.residual);
            let before = self.pivots.len();
            let mut kept = Vec::new();
            for row in pending {
                let reduced = self.reduce(&row);
                if reduced.is_empty() {
                    continue;
                }
                if let Some(rest) = self.try_promote(reduced) {
                    kept.push(rest);
                }
            }
            self.residual = kept;
            if self.pivots.len() == before {
                break;
            }
        }
        let mut free_cols: Vec<usize> = self
            .residual
            .iter()
            .flat_map(|r| r.iter().map(|&(c, _)| c))
            .collect();
        free_cols.sort_unstable();
        free_cols.dedup();
        let dense: Vec<Vec<i128>> = self
            .residual
            .iter()
            .map(|r| {
                let mut d = vec![0i128; free_cols.len()];
                for &(c, v) in r {
                    d[free_cols.binary_search(&c).expect("column present")] = v as i128;
                }
                d
            })
            .collect();
        let diag = smith_diagonal(dense);
        let torsion = diag.iter().filter(|&&d| d > 1).map(|&d| d as u64).collect();
        (self.pivots.len() + diag.len(), torsion)
    }
}

/// Invariants of `Z^ncols / span(rows)`.
pub fn quotient_invariants<I, R>(ncols: usize, rows: I) -> AbelianInvariants
where
    I: IntoIterator<Item = R>,
    R: AsRef<[(usize, i64)]>,
{
    let mut red = LatticeReducer::new(ncols);
    for r in rows {
        red.add_row(r.as_ref());
    }
    let (rank, torsion) = red.finish();
    AbelianInvariants {
        free_rank: ncols - rank,
        torsion,
    }
}

/// Nonzero diagonal of the Smith normal form, with `d_i | d_{i+1}`.
pub fn smith_diagonal(mut m: Vec<Vec<i128>>) -> Vec<i128> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0 && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(t, bi);
        for row in m.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let p = m[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let f = m[i][t] / p;
                if f != 0 {
                    for j in t..cols {
                        m[i][j] = m[i][j]
                            .checked_sub(f.checked_mul(m[t][j]).expect("smith overflow"))
                            .expect("smith overflow");
                    }
                }
                if m[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let f = m[t][j] / p;
                if f != 0 {
                    for row in m.iter_mut().skip(t) {
                        row[j] = row[j]
                            .checked_sub(f.checked_mul(row[t]).expect("smith overflow"))
                            .expect("smith overflow");
                    }
                }
                if m[t][j] != 0 {
                    dirty = true;
                }
            }
            if dirty {
                // move the smallest remaining entry of row/column t onto the diagonal
                let mut best = (t, t);
                for i in t..rows {
                    if m[i][t] != 0 && m[i][t].abs() < m[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t..cols {
                    if m[t][j] != 0 && m[t][j].abs() < m[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                m.swap(t, best.0);
                for row in m.iter_mut() {
                    row.swap(t, best.1);
                }
                continue;
            }
            // divisibility of the trailing block by the pivot
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % p != 0));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        m[t][j] += m[i][j];
                    }
                }
                None => break,
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    diag
}
