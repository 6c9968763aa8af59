//! Finite groups as multiplication tables, and finitely presented groups.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{self, GfError, Matrix};
use crate::smith::{quotient_invariants, AbelianInvariants};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error(transparent)]
    Gf(#[from] GfError),
    #[error("{what} of size {size} exceeds budget {budget}")]
    InfeasibleSize {
        what: &'static str,
        size: u128,
        budget: usize,
    },
    #[error("invalid group table: {0}")]
    InvalidTable(String),
    #[error("bad presentation: {0}")]
    BadPresentation(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupTable {
    order: usize,
    mult: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    labels: Vec<String>,
}

impl GroupTable {
    /// Validates closure, identity and inverses; associativity is checked
    /// when `order <= assoc_budget`.
    pub fn new(
        order: usize,
        mult: Vec<usize>,
        labels: Vec<String>,
        assoc_budget: usize,
    ) -> Result<Self, GroupError> {
        if order == 0 {
            return Err(GroupError::InvalidTable("empty group".into()));
        }
        if mult.len() != order * order || labels.len() != order {
            return Err(GroupError::InvalidTable(
                "table or label length mismatch".into(),
            ));
        }
        if let Some(&x) = mult.iter().find(|&&x| x >= order) {
            return Err(GroupError::InvalidTable(format!("entry {x} out of range")));
        }
        let at = |a: usize, b: usize| mult[a * order + b];
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| GroupError::InvalidTable("no identity".into()))?;
        let mut inverse = Vec::with_capacity(order);
        for a in 0..order {
            let inv = (0..order)
                .find(|&b| at(a, b) == identity && at(b, a) == identity)
                .ok_or_else(|| GroupError::InvalidTable(format!("element {a} has no inverse")))?;
            inverse.push(inv);
        }
        if order <= assoc_budget {
            for a in 0..order {
                for b in 0..order {
                    let ab = at(a, b);
                    for c in 0..order {
                        if at(ab, c) != at(a, at(b, c)) {
                            return Err(GroupError::InvalidTable(format!(
                                "not associative at ({a},{b},{c})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(Self {
            order,
            mult,
            identity,
            inverse,
            labels,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Some element generating the whole group, if it is cyclic.
    pub fn cyclic_generator(&self) -> Option<usize> {
        (0..self.order).find(|&a| self.element_order(a) == self.order)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Invariant factors of the abelianization G/[G,G].
    pub fn abelian_invariants(&self) -> AbelianInvariants {
        let comms: Vec<usize> = (0..self.order)
            .flat_map(|a| (0..self.order).map(move |b| (a, b)))
            .map(|(a, b)| self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b))))
            .collect();
        let derived = subgroup_generated(self, &comms);
        let index = self.order / derived.len();
        // cosets of [G,G], then the abelian quotient as a table on coset reps
        let mut coset_of = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for x in 0..self.order {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(x);
            for &d in &derived {
                coset_of[self.mul(x, d)] = id;
            }
        }
        debug_assert_eq!(reps.len(), index);
        let quotient_order = |x: usize| {
            let mut y = x;
            let mut k = 1;
            while coset_of[y] != coset_of[self.identity] {
                y = self.mul(y, x);
                k += 1;
            }
            k
        };
        abelian_from_orders(reps.iter().map(|&r| quotient_order(r)).collect())
    }
}

/// Invariant factors of a finite abelian group from the multiset of element
/// orders: for each prime p, the counts #{x : x^(p^i) = 1} fix the p-part.
fn abelian_from_orders(orders: Vec<usize>) -> AbelianInvariants {
    let n = orders.len();
    let mut primes = Vec::new();
    let mut m = n;
    let mut p = 2;
    while m > 1 {
        if m % p == 0 {
            primes.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    // elementary divisors per prime, as exponents in decreasing order
    let mut elementary: Vec<(usize, Vec<u32>)> = Vec::new();
    for &p in &primes {
        // c_i = log_p #{x : x^(p^i) = 1}
        let mut c = vec![0u32];
        let mut i = 1u32;
        loop {
            let pi = p.pow(i);
            let cnt = orders.iter().filter(|&&o| pi % o == 0).count();
            let mut e = 0;
            let mut t = cnt;
            while t % p == 0 {
                t /= p;
                e += 1;
            }
            c.push(e);
            if e == c[i as usize - 1] {
                c.pop();
                break;
            }
            i += 1;
        }
        // number of cyclic factors of order >= p^i is c_i - c_{i-1}
        let top = c.len() - 1;
        let mut exps = Vec::new();
        for i in (1..=top).rev() {
            let ge_i = c[i] - c[i - 1];
            let ge_next = if i < top { c[i + 1] - c[i] } else { 0 };
            for _ in 0..ge_i - ge_next {
                exps.push(i as u32);
            }
        }
        elementary.push((p, exps));
    }
    let factors = elementary.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    let mut torsion = vec![1u64; factors];
    for (p, exps) in &elementary {
        for (slot, &e) in exps.iter().enumerate() {
            torsion[factors - 1 - slot] *= (*p as u64).pow(e);
        }
    }
    AbelianInvariants {
        free_rank: 0,
        torsion: torsion.into_iter().filter(|&d| d > 1).collect(),
    }
}

/// Closure of `elems` under multiplication (finite, so inverses come free).
pub fn subgroup_generated(g: &GroupTable, elems: &[usize]) -> BTreeSet<usize> {
    let mut set = BTreeSet::from([g.identity()]);
    let mut frontier = vec![g.identity()];
    let gens: Vec<usize> = elems
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    while let Some(x) = frontier.pop() {
        for &s in &gens {
            let y = g.mul(x, s);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set
}

/// Cyclic group F_q^*; index i holds the residue i + 1.
pub fn units_group(q: u32) -> Result<GroupTable, GroupError> {
    gf::check_modulus(q)?;
    let m = (q - 1) as usize;
    let mut mult = Vec::with_capacity(m * m);
    for a in 1..q as u64 {
        for b in 1..q as u64 {
            mult.push((a * b % q as u64) as usize - 1);
        }
    }
    let labels = (1..q).map(|r| r.to_string()).collect();
    GroupTable::new(m, mult, labels, 0)
}

/// GL_k(F_q) with its matrices, in entry-encoding order.
#[derive(Debug, Clone)]
pub struct LinearGroup {
    pub k: usize,
    pub q: u32,
    pub table: GroupTable,
    pub elements: Vec<Matrix>,
    index: HashMap<Matrix, usize>,
}

impl LinearGroup {
    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        self.index.get(m).copied()
    }
}

pub fn gl_order(k: usize, q: u32) -> u128 {
    let qk = (q as u128).pow(k as u32);
    (0..k).map(|i| qk - (q as u128).pow(i as u32)).product()
}

pub fn gl_table(k: usize, q: u32, budget: usize) -> Result<LinearGroup, GroupError> {
    gf::check_modulus(q)?;
    let all = (q as u128).checked_pow((k * k) as u32).unwrap_or(u128::MAX);
    let order = gl_order(k, q);
    if all > budget as u128 || order * order > budget as u128 {
        return Err(GroupError::InfeasibleSize {
            what: "GL table",
            size: order * order,
            budget,
        });
    }
    let elements: Vec<Matrix> = gf::all_matrices(k, k, q)
        .filter(|m| m.rank() == k)
        .collect();
    let index: HashMap<Matrix, usize> = elements
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let m = elements.len();
    let mut mult = Vec::with_capacity(m * m);
    for a in &elements {
        for b in &elements {
            mult.push(index[&(a * b)]);
        }
    }
    let labels = elements.iter().map(Matrix::encode).collect();
    let table = GroupTable::new(m, mult, labels, 0)?;
    Ok(LinearGroup {
        k,
        q,
        table,
        elements,
        index,
    })
}

/// Words use letters `±(i+1)` for generator `i` and its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: usize,
    pub relators: Vec<Vec<i64>>,
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationSize {
    pub generators: usize,
    pub relators: usize,
    pub total_length: usize,
}

impl Presentation {
    pub fn new(
        generators: usize,
        relators: Vec<Vec<i64>>,
        labels: Vec<String>,
    ) -> Result<Self, GroupError> {
        if labels.len() != generators {
            return Err(GroupError::BadPresentation(
                "label count differs from generator count".into(),
            ));
        }
        for r in &relators {
            if let Some(&x) = r
                .iter()
                .find(|&&x| x == 0 || x.unsigned_abs() as usize > generators)
            {
                return Err(GroupError::BadPresentation(format!(
                    "letter {x} out of range"
                )));
            }
        }
        Ok(Self {
            generators,
            relators,
            labels,
        })
    }

    pub fn unlabeled(generators: usize, relators: Vec<Vec<i64>>) -> Result<Self, GroupError> {
        Self::new(
            generators,
            relators,
            (0..generators).map(|i| format!("x{}", i + 1)).collect(),
        )
    }

    pub fn is_trivial_presentation(&self) -> bool {
        self.generators == 0
    }

    pub fn size(&self) -> PresentationSize {
        PresentationSize {
            generators: self.generators,
            relators: self.relators.len(),
            total_length: self.relators.iter().map(Vec::len).sum(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("gens: {}\n", self.generators);
        for r in &self.relators {
            let words: Vec<String> = r.iter().map(i64::to_string).collect();
            s.push_str(&words.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, GroupError> {
        let mut lines = text.lines();
        let head = lines
            .next()
            .ok_or_else(|| GroupError::BadPresentation("empty input".into()))?;
        let n: usize = head
            .strip_prefix("gens:")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| GroupError::BadPresentation(format!("bad header `{head}`")))?;
        let mut relators = Vec::new();
        for line in lines {
            let word: Result<Vec<i64>, _> = line.split_whitespace().map(str::parse).collect();
            relators.push(
                word.map_err(|_| GroupError::BadPresentation(format!("bad relator `{line}`")))?,
            );
        }
        Self::unlabeled(n, relators)
    }
}

fn free_reduce(word: &mut Vec<i64>) {
    let mut out: Vec<i64> = Vec::with_capacity(word.len());
    for &x in word.iter() {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    // cyclic reduction
    let mut lo = 0;
    let mut hi = out.len();
    while hi - lo >= 2 && out[lo] == -out[hi - 1] {
        lo += 1;
        hi -= 1;
    }
    *word = out[lo..hi].to_vec();
}

/// Least rotation of the word or its inverse, so conjugate relators collide.
fn cyclic_canonical(word: &[i64]) -> Vec<i64> {
    let inv: Vec<i64> = word.iter().rev().map(|x| -x).collect();
    let mut best: Option<Vec<i64>> = None;
    for w in [word, &inv[..]] {
        for r in 0..w.len().max(1) {
            let cand: Vec<i64> = w[r..].iter().chain(&w[..r]).copied().collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Image {
    Alive,
    Trivial,
    /// generator = other^sign
    Equal(usize, i64),
}

fn resolve(img: &mut [Image], g: usize) -> Option<(usize, i64)> {
    match img[g] {
        Image::Alive => Some((g, 1)),
        Image::Trivial => None,
        Image::Equal(o, s) => {
            let r = resolve(img, o);
            img[g] = match r {
                None => Image::Trivial,
                Some((root, s2)) => Image::Equal(root, s * s2),
            };
            r.map(|(root, s2)| (root, s * s2))
        }
    }
}

fn rewrite(img: &mut [Image], word: &[i64]) -> Vec<i64> {
    let mut out = Vec::with_capacity(word.len());
    for &x in word {
        let g = x.unsigned_abs() as usize - 1;
        if let Some((root, s)) = resolve(img, g) {
            out.push(x.signum() * s * (root as i64 + 1));
        }
    }
    free_reduce(&mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TietzeOutcome {
    pub presentation: Presentation,
    /// Generator eliminations performed.
    pub moves: usize,
    /// Set when the move budget ran out before a fixpoint.
    pub budget_exceeded: bool,
}

/// Non-lengthening Tietze moves: free and cyclic reduction, removal of empty
/// and duplicate relators, and elimination of generators fixed by relators of
/// length one or two.
pub fn tietze_simplify(p: &Presentation, budget: usize) -> TietzeOutcome {
    let mut img = vec![Image::Alive; p.generators];
    let mut relators = p.relators.clone();
    let mut moves = 0;
    let mut budget_exceeded = false;
    loop {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for r in &relators {
            let w = rewrite(&mut img, r);
            if !w.is_empty() && seen.insert(cyclic_canonical(&w)) {
                next.push(w);
            }
        }
        relators = next;
        if budget_exceeded {
            break;
        }
        let mut progressed = false;
        for r in &relators {
            if moves >= budget {
                budget_exceeded = true;
                break;
            }
            let w = rewrite(&mut img, r);
            match w[..] {
                [x] => {
                    img[x.unsigned_abs() as usize - 1] = Image::Trivial;
                    moves += 1;
                    progressed = true;
                }
                [x, y] if x.abs() != y.abs() => {
                    // x y = 1, so the larger generator becomes a power of the smaller
                    let (gx, gy) = (x.unsigned_abs() as usize - 1, y.unsigned_abs() as usize - 1);
                    let s = -x.signum() * y.signum();
                    if gx > gy {
                        img[gx] = Image::Equal(gy, s);
                    } else {
                        img[gy] = Image::Equal(gx, s);
                    }
                    moves += 1;
                    progressed = true;
                }
                _ => {}
            }
        }
        if !progressed && !budget_exceeded {
            break;
        }
    }
    // compact renumbering of surviving generators
    let mut new_index = vec![usize::MAX; p.generators];
    let mut labels = Vec::new();
    for g in 0..p.generators {
        if img[g] == Image::Alive {
            new_index[g] = labels.len();
            labels.push(p.labels[g].clone());
        }
    }
    let relators = relators
        .into_iter()
        .map(|w| {
            w.into_iter()
                .map(|x| x.signum() * (new_index[x.unsigned_abs() as usize - 1] as i64 + 1))
                .collect()
        })
        .collect();
    TietzeOutcome {
        presentation: Presentation {
            generators: labels.len(),
            relators,
            labels,
        },
        moves,
        budget_exceeded,
    }
}

/// Abelianization via the exponent-sum matrix of the relators.
pub fn abelian_invariants(p: &Presentation) -> AbelianInvariants {
    let rows = p.relators.iter().map(|r| {
        let mut sums: Vec<(usize, i64)> = Vec::new();
        for &x in r {
            let g = x.unsigned_abs() as usize - 1;
            match sums.iter_mut().find(|(c, _)| *c == g) {
                Some(e) => e.1 += x.signum(),
                None => sums.push((g, x.signum())),
            }
        }
        sums.retain(|&(_, v)| v != 0);
        sums.sort_unstable();
        sums
    });
    quotient_invariants(p.generators, rows)
}
