//! Exact sparse linear algebra over the rationals.
//!
//! [`Eliminator`] keeps an echelon basis of inserted vectors together with
//! the combination of inputs that produced each basis vector, so membership
//! queries return either an explicit preimage or a separating functional.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::ring::Q;

/// Sparse vector: index to nonzero value.
pub type SparseVec = BTreeMap<usize, Q>;

/// `a += s·b`, dropping cancelled entries.
pub fn axpy(a: &mut SparseVec, s: &Q, b: &SparseVec) {
    if s.is_zero() {
        return;
    }
    for (&i, v) in b {
        let e = a.entry(i).or_insert_with(Q::zero);
        *e += s * v;
        if e.is_zero() {
            a.remove(&i);
        }
    }
}

pub fn dot(a: &SparseVec, b: &SparseVec) -> Q {
    let (small, big) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    small.iter().filter_map(|(i, x)| big.get(i).map(|y| x * y)).fold(Q::zero(), |acc, v| acc + v)
}

#[derive(Clone, Debug)]
struct Pivot {
    row: SparseVec,
    combo: SparseVec,
}

/// Incremental row echelon form with provenance.
#[derive(Clone, Debug, Default)]
pub struct Eliminator {
    pivots: BTreeMap<usize, Pivot>,
}

/// Outcome of reducing a vector against the current span.
#[derive(Clone, Debug)]
pub enum Membership {
    /// `v = Σ combo[i]·input_i`.
    InSpan(SparseVec),
    /// A functional `y` with `y·input_i = 0` for all inputs and `y·v ≠ 0`.
    NotInSpan(SparseVec),
}

impl Eliminator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduce `v`; returns the residual and the combination subtracted.
    fn reduce(&self, mut v: SparseVec) -> (SparseVec, SparseVec) {
        let mut combo = SparseVec::new();
        let mut from = 0usize;
        loop {
            let next = v.range(from..).find(|(c, _)| self.pivots.contains_key(c)).map(|(&c, x)| (c, x.clone()));
            let Some((c, x)) = next else { break };
            let p = &self.pivots[&c];
            axpy(&mut v, &-x.clone(), &p.row);
            axpy(&mut combo, &x, &p.combo);
            from = c + 1;
        }
        (v, combo)
    }

    /// Insert input vector number `id`. Returns `true` if it raised the rank.
    pub fn insert(&mut self, id: usize, v: SparseVec) -> bool {
        let (res, combo) = self.reduce(v);
        let Some((&lead, lv)) = res.iter().next() else { return false };
        let inv = Q::one() / lv;
        let mut c = SparseVec::new();
        c.insert(id, Q::one());
        axpy(&mut c, &-Q::one(), &combo);
        let row = res.iter().map(|(&i, x)| (i, x * &inv)).collect();
        let combo = c.iter().map(|(&i, x)| (i, x * &inv)).collect();
        self.pivots.insert(lead, Pivot { row, combo });
        true
    }

    /// Like [`Self::insert`], but a dependent input returns the kernel
    /// vector `e_id - combo` over input ids.
    pub fn insert_or_kernel(&mut self, id: usize, v: SparseVec) -> Option<SparseVec> {
        let (res, combo) = self.reduce(v.clone());
        if res.is_empty() {
            let mut k = SparseVec::new();
            k.insert(id, Q::one());
            axpy(&mut k, &-Q::one(), &combo);
            return Some(k);
        }
        self.insert(id, v);
        None
    }

    /// Decide whether `v` lies in the span of the inputs.
    pub fn membership(&self, v: &SparseVec) -> Membership {
        let (res, combo) = self.reduce(v.clone());
        if res.is_empty() {
            return Membership::InSpan(combo);
        }
        // Fully reduce the residual against a reduced echelon basis, then use
        // a non-pivot coordinate c of it: y = e_c - Σ_p (v_p)_c e_p.
        let rref = self.reduced_rows();
        let mut r = res;
        for (&p, row) in &rref {
            if let Some(x) = r.get(&p).cloned() {
                axpy(&mut r, &-x, row);
            }
        }
        let (&c, _) = r.iter().next().expect("nonzero residual");
        let mut y = SparseVec::new();
        y.insert(c, Q::one());
        for (&p, row) in &rref {
            if let Some(x) = row.get(&c) {
                y.insert(p, -x.clone());
            }
        }
        Membership::NotInSpan(y)
    }

    /// Reduced row echelon rows keyed by pivot column.
    fn reduced_rows(&self) -> BTreeMap<usize, SparseVec> {
        let mut rows: BTreeMap<usize, SparseVec> = self.pivots.iter().map(|(&c, p)| (c, p.row.clone())).collect();
        let keys: Vec<usize> = rows.keys().rev().copied().collect();
        for &p in &keys {
            let prow = rows[&p].clone();
            for &other in &keys {
                if other >= p {
                    continue;
                }
                let x = rows[&other].get(&p).cloned();
                if let Some(x) = x {
                    axpy(rows.get_mut(&other).unwrap(), &-x, &prow);
                }
            }
        }
        rows
    }
}

/// Rank of a list of sparse vectors.
pub fn rank(vectors: impl IntoIterator<Item = SparseVec>) -> usize {
    let mut e = Eliminator::new();
    for (i, v) in vectors.into_iter().enumerate() {
        e.insert(i, v);
    }
    e.rank()
}

/// Dense rank by plain Gaussian elimination; an independent cross-check.
pub fn dense_rank(mut m: Vec<Vec<Q>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for j in c..cols {
                    let v = &m[r][j] * &f;
                    m[i][j] -= v;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}
