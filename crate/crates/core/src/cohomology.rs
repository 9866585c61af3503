//! Chevalley–Eilenberg cochains with trivial real coefficients.
//!
//! A p-cochain is stored by its values on canonical basis tuples: even
//! labels strictly increasing, then odd labels non-decreasing (the basis
//! already lists even labels first, so a canonical tuple is just a sorted
//! tuple without repeated even labels). Values on any other tuple follow from
//! graded antisymmetry: swapping neighbours `x, y` multiplies by
//! `-(-1)^{|x||y|}`.
//!
//! The coboundary uses
//! `dω(X_1..X_{p+1}) = Σ_{i<j} (-1)^{i+j} κ_ij ω([X_i, X_j], X_1..X̂_i..X̂_j..)`
//! where `κ_ij` is the Koszul sign of moving `X_i` then `X_j` to the front.
//! With this convention `d(z*) = -p*∧q*` on the Heisenberg algebra.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{Eliminator, Membership, SparseVec};
use crate::ring::{q_to_string, random_q, Ring, Q};
use crate::spacetime::{Flavor, Spacetime};
use crate::superalgebra::{
    build_heisenberg, build_so, build_supertranslation, AlgebraError, GradedElement, LieSuperalgebra, Parity,
};

pub type Tuple = Vec<usize>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CohomologyError {
    #[error("cochains live on different algebras")]
    ParentMismatch,
    #[error("level mismatch: expected {expected}, got {got}")]
    LevelMismatch { expected: usize, got: usize },
    #[error("cochain is not closed")]
    NotClosed,
    #[error("element is not central")]
    NotCentral,
    #[error("size guard exceeded: {0} monomials")]
    TooLarge(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

// ---------------------------------------------------------------- signs

/// Koszul signs for graded permutations.
///
/// `grades[i]` is the parity (or overall grade mod 2) of the i-th element;
/// `perm` lists which original element sits in each new slot, so the
/// permuted tuple is `(x_{perm[0]}, x_{perm[1]}, …)`.
pub struct KoszulSign;

impl KoszulSign {
    /// `ε(σ)`: sign in the free graded-commutative algebra.
    pub fn epsilon(grades: &[u8], perm: &[usize]) -> i32 {
        Self::sort_sign(grades, perm, false)
    }

    /// `χ(σ) = sgn(σ)·ε(σ)`: sign in the free graded-exterior algebra.
    pub fn chi(grades: &[u8], perm: &[usize]) -> i32 {
        Self::sort_sign(grades, perm, true)
    }

    pub fn sgn(perm: &[usize]) -> i32 {
        Self::sort_sign(&vec![0; perm.len()], perm, true)
    }

    fn sort_sign(grades: &[u8], perm: &[usize], alternating: bool) -> i32 {
        let mut p = perm.to_vec();
        let mut s = 1;
        // Bubble sort back to the identity; each neighbour swap of x, y
        // contributes (-1)^{|x||y|}, times -1 in the alternating case.
        for i in 0..p.len() {
            for j in 0..p.len() - 1 - i {
                if p[j] > p[j + 1] {
                    let odd = grades[p[j]] % 2 == 1 && grades[p[j + 1]] % 2 == 1;
                    if odd != alternating {
                        s = -s;
                    }
                    p.swap(j, j + 1);
                }
            }
        }
        s
    }
}

/// Sorts a basis tuple into canonical order, returning the sign, or `None`
/// when an even label repeats (the value is then zero).
pub fn canonicalize(g: &LieSuperalgebra, t: &[usize]) -> Option<(i32, Tuple)> {
    let mut v = t.to_vec();
    let mut s = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] >= v[j] {
            if v[j - 1] == v[j] {
                if !g.parity(v[j]).is_odd() {
                    return None;
                }
                break;
            }
            if !(g.parity(v[j - 1]).is_odd() && g.parity(v[j]).is_odd()) {
                s = -s;
            }
            v.swap(j - 1, j);
            j -= 1;
        }
    }
    // A repeated even label may also surface after sorting finished.
    if v.windows(2).any(|w| w[0] == w[1] && !g.parity(w[0]).is_odd()) {
        return None;
    }
    Some((s, v))
}

/// Inserts `k` into the sorted tuple `rest`; sign of moving it from the front.
fn insert_front(g: &LieSuperalgebra, k: usize, rest: &[usize]) -> Option<(i32, Tuple)> {
    let kodd = g.parity(k).is_odd();
    let mut pos = 0;
    let mut s = 1;
    while pos < rest.len() && rest[pos] <= k {
        if rest[pos] == k && !kodd {
            return None;
        }
        if !(kodd && g.parity(rest[pos]).is_odd()) {
            s = -s;
        }
        pos += 1;
    }
    let mut v = Vec::with_capacity(rest.len() + 1);
    v.extend_from_slice(&rest[..pos]);
    v.push(k);
    v.extend_from_slice(&rest[pos..]);
    Some((s, v))
}

// ---------------------------------------------------------------- cochains

/// A cochain with rational values on canonical basis tuples.
#[derive(Clone, Debug)]
pub struct Cochain {
    alg: Arc<LieSuperalgebra>,
    level: usize,
    coeffs: BTreeMap<Tuple, Q>,
}

impl PartialEq for Cochain {
    fn eq(&self, o: &Self) -> bool {
        self.level == o.level && self.coeffs == o.coeffs && (Arc::ptr_eq(&self.alg, &o.alg) || self.alg == o.alg)
    }
}

impl Cochain {
    pub fn zero(alg: Arc<LieSuperalgebra>, level: usize) -> Self {
        Cochain { alg, level, coeffs: BTreeMap::new() }
    }

    pub fn algebra(&self) -> &Arc<LieSuperalgebra> {
        &self.alg
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn coeffs(&self) -> &BTreeMap<Tuple, Q> {
        &self.coeffs
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Sets the value on an arbitrary basis tuple (adjusting for the sort sign).
    pub fn set(&mut self, t: &[usize], v: Q) {
        assert_eq!(t.len(), self.level, "tuple length");
        let Some((s, c)) = canonicalize(&self.alg, t) else {
            assert!(v.is_zero(), "nonzero value on a repeated even label");
            return;
        };
        let v = if s < 0 { -v } else { v };
        if v.is_zero() {
            self.coeffs.remove(&c);
        } else {
            self.coeffs.insert(c, v);
        }
    }

    /// Adds to the value on an arbitrary basis tuple.
    pub fn add_at(&mut self, t: &[usize], v: &Q) {
        let Some((s, c)) = canonicalize(&self.alg, t) else { return };
        let e = self.coeffs.entry(c.clone()).or_insert_with(Q::zero);
        if s < 0 {
            *e -= v;
        } else {
            *e += v;
        }
        if e.is_zero() {
            self.coeffs.remove(&c);
        }
    }

    /// Value on a basis tuple in any order.
    pub fn value(&self, t: &[usize]) -> Q {
        match canonicalize(&self.alg, t) {
            Some((s, c)) => match self.coeffs.get(&c) {
                Some(v) if s < 0 => -v.clone(),
                Some(v) => v.clone(),
                None => Q::zero(),
            },
            None => Q::zero(),
        }
    }

    fn value_front(&self, k: usize, rest: &[usize]) -> Q {
        match insert_front(&self.alg, k, rest) {
            Some((s, c)) => match self.coeffs.get(&c) {
                Some(v) if s < 0 => -v.clone(),
                Some(v) => v.clone(),
                None => Q::zero(),
            },
            None => Q::zero(),
        }
    }

    pub fn plus(&self, o: &Self) -> Result<Self, CohomologyError> {
        self.check_compat(o)?;
        let mut out = self.clone();
        for (t, v) in &o.coeffs {
            let e = out.coeffs.entry(t.clone()).or_insert_with(Q::zero);
            *e += v;
            if e.is_zero() {
                out.coeffs.remove(t);
            }
        }
        Ok(out)
    }

    pub fn minus(&self, o: &Self) -> Result<Self, CohomologyError> {
        self.plus(&o.scaled(&-Q::one()))
    }

    pub fn scaled(&self, s: &Q) -> Self {
        let coeffs = if s.is_zero() {
            BTreeMap::new()
        } else {
            self.coeffs.iter().map(|(t, v)| (t.clone(), v * s)).collect()
        };
        Cochain { coeffs, ..self.clone() }
    }

    fn check_compat(&self, o: &Self) -> Result<(), CohomologyError> {
        if !(Arc::ptr_eq(&self.alg, &o.alg) || self.alg == o.alg) {
            return Err(CohomologyError::ParentMismatch);
        }
        if self.level != o.level {
            return Err(CohomologyError::LevelMismatch { expected: self.level, got: o.level });
        }
        Ok(())
    }

    /// `(even count, odd count)` of a tuple.
    pub fn bigrade_of(&self, t: &[usize]) -> (usize, usize) {
        let odd = t.iter().filter(|&&i| self.alg.parity(i).is_odd()).count();
        (t.len() - odd, odd)
    }

    /// Bigrades present in the support.
    pub fn bigrades(&self) -> BTreeSet<(usize, usize)> {
        self.coeffs.keys().map(|t| self.bigrade_of(t)).collect()
    }

    /// Even iff every supported tuple has even total parity.
    pub fn parity(&self) -> Option<Parity> {
        let ps: BTreeSet<Parity> = self.coeffs.keys().map(|t| self.tuple_parity(t)).collect();
        match ps.len() {
            0 => Some(Parity::Even),
            1 => ps.into_iter().next(),
            _ => None,
        }
    }

    fn tuple_parity(&self, t: &[usize]) -> Parity {
        t.iter().fold(Parity::Even, |p, &i| p + self.alg.parity(i))
    }

    /// `dω(t)` on one basis tuple.
    pub fn coboundary_at(&self, t: &[usize]) -> Q {
        let g = &*self.alg;
        let odd: Vec<bool> = t.iter().map(|&i| g.parity(i).is_odd()).collect();
        let mut acc = Q::zero();
        let mut rest = Vec::with_capacity(t.len());
        for i in 0..t.len() {
            for j in (i + 1)..t.len() {
                let br = g.bracket_basis(t[i], t[j]);
                if br.is_empty() {
                    continue;
                }
                // Koszul: X_i past X_0..X_{i-1}; X_j past the others before it.
                let before_i = odd[..i].iter().filter(|&&b| b).count();
                let before_j = odd[..j].iter().filter(|&&b| b).count() - usize::from(odd[i]);
                let mut neg = (i + j) % 2 == 1;
                if odd[i] && before_i % 2 == 1 {
                    neg = !neg;
                }
                if odd[j] && before_j % 2 == 1 {
                    neg = !neg;
                }
                rest.clear();
                rest.extend(t.iter().enumerate().filter(|&(l, _)| l != i && l != j).map(|(_, &x)| x));
                for (k, c) in br {
                    let v = self.value_front(*k, &rest);
                    if !v.is_zero() {
                        if neg {
                            acc -= v * c;
                        } else {
                            acc += v * c;
                        }
                    }
                }
            }
        }
        acc
    }

    /// Tuples where `dω` can be nonzero, found from the support of `ω`
    /// through the bracket-preimage index.
    fn coboundary_candidates(&self) -> BTreeSet<Tuple> {
        let g = &*self.alg;
        let pre = g.preimage_index();
        let mut out = BTreeSet::new();
        for m in self.coeffs.keys() {
            let mut seen = BTreeSet::new();
            for (pos, &k) in m.iter().enumerate() {
                if !seen.insert(k) {
                    continue;
                }
                let mut rest = m.clone();
                rest.remove(pos);
                for (i, j, _) in &pre[k] {
                    let mut t = rest.clone();
                    t.push(*i);
                    t.push(*j);
                    t.sort_unstable();
                    if t.windows(2).any(|w| w[0] == w[1] && !g.parity(w[0]).is_odd()) {
                        continue;
                    }
                    out.insert(t);
                }
            }
        }
        out
    }

    /// `dω`, evaluated only where it can be nonzero.
    pub fn coboundary(&self) -> Cochain {
        let cands: Vec<Tuple> = self.coboundary_candidates().into_iter().collect();
        let vals: Vec<(Tuple, Q)> = cands
            .into_par_iter()
            .filter_map(|t| {
                let v = self.coboundary_at(&t);
                (!v.is_zero()).then_some((t, v))
            })
            .collect();
        Cochain { alg: self.alg.clone(), level: self.level + 1, coeffs: vals.into_iter().collect() }
    }

    /// `dω` evaluated on every canonical tuple of level p+1.
    pub fn coboundary_exhaustive(&self) -> Cochain {
        let tuples = canonical_monomials(&self.alg, self.level + 1);
        let vals: Vec<(Tuple, Q)> = tuples
            .into_par_iter()
            .filter_map(|t| {
                let v = self.coboundary_at(&t);
                (!v.is_zero()).then_some((t, v))
            })
            .collect();
        Cochain { alg: self.alg.clone(), level: self.level + 1, coeffs: vals.into_iter().collect() }
    }

    /// Number of canonical tuples on which `dω` was found nonzero by the
    /// exhaustive scan, together with the number scanned.
    pub fn exhaustive_closedness(&self) -> (usize, usize) {
        let tuples = canonical_monomials(&self.alg, self.level + 1);
        let n = tuples.len();
        let bad = tuples.into_par_iter().filter(|t| !self.coboundary_at(t).is_zero()).count();
        (bad, n)
    }

    /// Multilinear evaluation on ring-valued elements with the sign rule
    /// `ω(a_1 v_1, …, a_p v_p) = a_p ⋯ a_1 ω(v_1, …, v_p)`.
    ///
    /// Coefficients on even labels must be central in `R` (true for the
    /// even part of a Grassmann algebra).
    pub fn evaluate<R: Ring>(&self, args: &[GradedElement<R>]) -> R {
        assert_eq!(args.len(), self.level, "argument count");
        let g = &*self.alg;
        let p = self.level;
        if p == 0 {
            return self.coeffs.get(&Vec::new()).map_or_else(R::zero, R::from_q);
        }
        let has_even: Vec<bool> =
            args.iter().map(|a| a.coeffs.iter().enumerate().any(|(l, c)| !g.parity(l).is_odd() && !c.is_zero())).collect();
        let has_odd: Vec<bool> =
            args.iter().map(|a| a.coeffs.iter().enumerate().any(|(l, c)| g.parity(l).is_odd() && !c.is_zero())).collect();
        let mut by_bigrade: BTreeMap<usize, Vec<(&Tuple, &Q)>> = BTreeMap::new();
        for (t, v) in &self.coeffs {
            by_bigrade.entry(self.bigrade_of(t).0).or_default().push((t, v));
        }
        let mut total = R::zero();
        for (&ne, monos) in &by_bigrade {
            for mask in 0u32..(1 << p) {
                if mask.count_ones() as usize != ne {
                    continue;
                }
                let even_slots: Vec<usize> = (0..p).filter(|s| mask >> s & 1 == 1).collect();
                let odd_slots: Vec<usize> = (0..p).filter(|s| mask >> s & 1 == 0).collect();
                if even_slots.iter().any(|&s| !has_even[s]) || odd_slots.iter().any(|&s| !has_odd[s]) {
                    continue;
                }
                // Sign of moving the even slots to the front, keeping order.
                let mut flips = 0;
                for &e in &even_slots {
                    flips += odd_slots.iter().filter(|&&o| o < e).count();
                }
                let pattern_neg = flips % 2 == 1;
                let mut dcache: HashMap<&[usize], R> = HashMap::new();
                let mut scache: HashMap<&[usize], R> = HashMap::new();
                let mut sum = R::zero();
                for (t, v) in monos {
                    let (ev, od) = t.split_at(ne);
                    let d = dcache.entry(ev).or_insert_with(|| even_block(args, &even_slots, ev)).clone();
                    if d.is_zero() {
                        continue;
                    }
                    let s = scache.entry(od).or_insert_with(|| odd_block(args, &odd_slots, od)).clone();
                    if s.is_zero() {
                        continue;
                    }
                    sum.accumulate(&d.times(&s).scaled(v));
                }
                if pattern_neg {
                    sum = sum.negated();
                }
                total.accumulate(&sum);
            }
        }
        total
    }

    /// Evaluation on rational elements.
    pub fn evaluate_q(&self, args: &[Vec<Q>]) -> Q {
        let a: Vec<GradedElement<Q>> = args.iter().map(|x| GradedElement::from_q(x.clone())).collect();
        self.evaluate(&a)
    }

    /// Rebuild on a different (equal) algebra handle.
    pub fn with_algebra(&self, alg: Arc<LieSuperalgebra>) -> Result<Self, CohomologyError> {
        if *alg != *self.alg {
            return Err(CohomologyError::ParentMismatch);
        }
        Ok(Cochain { alg, ..self.clone() })
    }

    /// Monomial map with labels and `"num/den"` values, for reports.
    pub fn to_labeled(&self) -> Vec<(Vec<String>, String)> {
        self.coeffs
            .iter()
            .map(|(t, v)| (t.iter().map(|&i| self.alg.label(i).to_string()).collect(), q_to_string(v)))
            .collect()
    }

    pub fn from_map(alg: Arc<LieSuperalgebra>, level: usize, values: impl IntoIterator<Item = (Tuple, Q)>) -> Self {
        let mut c = Cochain::zero(alg, level);
        for (t, v) in values {
            c.add_at(&t, &v);
        }
        c
    }
}

/// `Σ_π sgn(π) Π_{s} x_s[π(s)]`, the even labels placed into the even slots.
fn even_block<R: Ring>(args: &[GradedElement<R>], slots: &[usize], labels: &[usize]) -> R {
    let n = labels.len();
    let mut total = R::zero();
    for_each_perm(n, &mut |perm, sign| {
        let mut prod = R::one();
        for (i, &s) in slots.iter().enumerate().rev() {
            let c = &args[s].coeffs[labels[perm[i]]];
            if c.is_zero() {
                return;
            }
            prod = prod.times(c);
        }
        if sign < 0 {
            total = total.minus(&prod);
        } else {
            total.accumulate(&prod);
        }
    });
    total
}

/// Sum over distinct arrangements of the odd multiset into the odd slots of
/// `x_{s_q}[·] ⋯ x_{s_1}[·]` (descending slot order).
fn odd_block<R: Ring>(args: &[GradedElement<R>], slots: &[usize], labels: &[usize]) -> R {
    let mut total = R::zero();
    let mut arrangement = labels.to_vec();
    arrangement.sort_unstable();
    loop {
        let mut prod = R::one();
        let mut zero = false;
        for (i, &s) in slots.iter().enumerate().rev() {
            let c = &args[s].coeffs[arrangement[i]];
            if c.is_zero() {
                zero = true;
                break;
            }
            prod = prod.times(c);
        }
        if !zero {
            total.accumulate(&prod);
        }
        if !next_permutation(&mut arrangement) {
            break;
        }
    }
    total
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Calls `f(perm, sign)` for every permutation of `0..n` (Heap's algorithm).
pub fn for_each_perm(n: usize, f: &mut dyn FnMut(&[usize], i32)) {
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut sign = 1;
    f(&a, sign);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            sign = -sign;
            f(&a, sign);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

// ---------------------------------------------------------------- monomials

fn combinations(items: &[usize], k: usize, out: &mut Vec<Vec<usize>>) {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut Vec::new(), out);
}

fn multisets(items: &[usize], k: usize, out: &mut Vec<Vec<usize>>) {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, k, i, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut Vec::new(), out);
}

/// Canonical tuples with `p` even and `q` odd labels.
pub fn canonical_monomials_bigrade(g: &LieSuperalgebra, p: usize, q: usize) -> Vec<Tuple> {
    let mut ev = Vec::new();
    combinations(&g.even_indices(), p, &mut ev);
    let mut od = Vec::new();
    multisets(&g.odd_indices(), q, &mut od);
    let mut out = Vec::with_capacity(ev.len() * od.len());
    for e in &ev {
        for o in &od {
            let mut t = e.clone();
            t.extend_from_slice(o);
            out.push(t);
        }
    }
    out
}

/// All canonical tuples of the given level.
pub fn canonical_monomials(g: &LieSuperalgebra, level: usize) -> Vec<Tuple> {
    (0..=level).flat_map(|p| canonical_monomials_bigrade(g, p, level - p)).collect()
}

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `dim Cᵖ(g)` without enumerating.
pub fn cochain_space_dim(g: &LieSuperalgebra, level: usize) -> u128 {
    let (e, o) = g.super_dim();
    (0..=level).map(|p| binom(e, p) * if o == 0 { u128::from(level == p) } else { binom(o + level - p - 1, level - p) }).sum()
}

// ---------------------------------------------------------------- named cocycles

/// `α(A, ψ, φ) = g([ψ, φ], A)` on the supertranslations of dimension k+2.
pub fn make_alpha(k: usize) -> Result<Cochain, CohomologyError> {
    let g = Arc::new(build_supertranslation(k, Flavor::K2)?);
    let st = Spacetime::new(crate::division_algebra::AlgebraTag::from_dim(k).unwrap(), Flavor::K2);
    Ok(alpha_on(g, &st, 0))
}

/// α on an algebra whose vector labels start at `offset`, spinors right after.
pub fn alpha_on(g: Arc<LieSuperalgebra>, st: &Spacetime, offset: usize) -> Cochain {
    let nv = st.vector_dim();
    let ns = st.spinor_dim();
    let mut c = Cochain::zero(g, 3);
    for a in 0..ns {
        for b in a..ns {
            let br = st.odd_bracket(&unit(ns, a), &unit(ns, b));
            for (i, x) in br.iter().enumerate() {
                if !x.is_zero() {
                    c.set(&[offset + i, offset + nv + a, offset + nv + b], x * &st.metric()[i]);
                }
            }
        }
    }
    c
}

/// `β(𝒜, ℬ, Ψ, Φ) = ⟨Ψ, (𝒜ℬ - ℬ𝒜)Φ⟩` on the supertranslations of dimension k+3.
pub fn make_beta(k: usize) -> Result<Cochain, CohomologyError> {
    let g = Arc::new(build_supertranslation(k, Flavor::K3)?);
    let st = Spacetime::new(crate::division_algebra::AlgebraTag::from_dim(k).unwrap(), Flavor::K3);
    Ok(beta_on(g, &st, 0))
}

/// β on an algebra whose vector labels start at `offset`, spinors right after.
pub fn beta_on(g: Arc<LieSuperalgebra>, st: &Spacetime, offset: usize) -> Cochain {
    let nv = st.vector_dim();
    let pm = st.pairing_matrix();
    let mut c = Cochain::zero(g, 4);
    for a in 0..nv {
        for b in (a + 1)..nv {
            let m = pm.compose(&st.gamma(a).commutator(st.gamma(b)));
            for s in 0..m.rows() {
                for t in s..m.cols() {
                    let v = m.entry(s, t);
                    if !v.is_zero() {
                        c.set(&[offset + a, offset + b, offset + nv + s, offset + nv + t], v.clone());
                    }
                }
            }
        }
    }
    c
}

/// `γ = p*∧q*∧z*` on the Heisenberg algebra.
pub fn make_gamma() -> Cochain {
    let g = Arc::new(build_heisenberg());
    Cochain::from_map(g, 3, [(vec![0, 1, 2], Q::one())])
}

/// `j(X, Y, Z) = ⟨X, [Y, Z]⟩` on `so(n)` with `⟨X, Y⟩ = tr(XY)`.
pub fn make_j(n: usize) -> Result<Cochain, CohomologyError> {
    let g = Arc::new(build_so(n)?);
    let d = g.dim();
    let mut c = Cochain::zero(g.clone(), 3);
    for a in 0..d {
        for b in (a + 1)..d {
            for e in (b + 1)..d {
                let v: Q = g
                    .bracket_basis(b, e)
                    .iter()
                    .filter(|(k, _)| *k == a)
                    .map(|(_, x)| x * crate::superalgebra::so_trace_form(n, a, a))
                    .fold(Q::zero(), |s, x| s + x);
                if !v.is_zero() {
                    c.set(&[a, b, e], v);
                }
            }
        }
    }
    Ok(c)
}

fn unit(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = Q::one();
    v
}

/// Random cochain supported on `terms` random canonical tuples.
pub fn random_cochain(alg: Arc<LieSuperalgebra>, level: usize, terms: usize, rng: &mut impl Rng) -> Cochain {
    let mut c = Cochain::zero(alg.clone(), level);
    let n = alg.dim();
    if n == 0 {
        return c;
    }
    for _ in 0..terms {
        let t: Vec<usize> = (0..level).map(|_| rng.random_range(0..n)).collect();
        let v = random_q(rng, 5, 3);
        c.add_at(&t, &v);
    }
    c
}

/// Random even cochain: only tuples of even total parity.
pub fn random_even_cochain(alg: Arc<LieSuperalgebra>, level: usize, terms: usize, rng: &mut impl Rng) -> Cochain {
    let c = random_cochain(alg, level, terms * 2, rng);
    let coeffs = c.coeffs.iter().filter(|(t, _)| c.tuple_parity(t) == Parity::Even).map(|(t, v)| (t.clone(), v.clone())).collect();
    Cochain { coeffs, ..c }
}

// ---------------------------------------------------------------- exactness

/// Result of [`is_exact`].
#[derive(Clone, Debug)]
pub enum Exactness {
    /// `dθ = ω`.
    Exact { theta: Cochain },
    /// A functional `y` on cochains of level p vanishing on every `dθ` in
    /// the searched space while `y(ω) ≠ 0`.
    NotExact { certificate: BTreeMap<Tuple, Q>, unknowns: usize, equations: usize },
}

impl Exactness {
    pub fn is_exact(&self) -> bool {
        matches!(self, Exactness::Exact { .. })
    }
}

/// Solves `dθ = ω`, searching θ in the given bigrade (or all of `C^{p-1}`).
pub fn is_exact(omega: &Cochain, restrict: Option<(usize, usize)>) -> Result<Exactness, CohomologyError> {
    if !omega.coboundary().is_zero() {
        return Err(CohomologyError::NotClosed);
    }
    let g = omega.alg.clone();
    let p = omega.level;
    if p == 0 {
        return Ok(Exactness::NotExact {
            certificate: omega.coeffs.clone(),
            unknowns: 0,
            equations: omega.coeffs.len(),
        });
    }
    let basis = match restrict {
        Some((a, b)) => {
            if a + b != p - 1 {
                return Err(CohomologyError::LevelMismatch { expected: p - 1, got: a + b });
            }
            canonical_monomials_bigrade(&g, a, b)
        }
        None => canonical_monomials(&g, p - 1),
    };
    let images: Vec<Cochain> = basis
        .par_iter()
        .map(|t| Cochain::from_map(g.clone(), p - 1, [(t.clone(), Q::one())]).coboundary())
        .collect();
    let mut index: BTreeMap<Tuple, usize> = BTreeMap::new();
    for c in images.iter().chain(std::iter::once(omega)) {
        for t in c.coeffs.keys() {
            let n = index.len();
            index.entry(t.clone()).or_insert(n);
        }
    }
    let to_vec = |c: &Cochain| -> SparseVec { c.coeffs.iter().map(|(t, v)| (index[t], v.clone())).collect() };
    let mut elim = Eliminator::new();
    for (i, c) in images.iter().enumerate() {
        elim.insert(i, to_vec(c));
    }
    let equations = index.len();
    match elim.membership(&to_vec(omega)) {
        Membership::InSpan(combo) => {
            let theta = Cochain::from_map(g, p - 1, combo.into_iter().map(|(i, v)| (basis[i].clone(), v)));
            Ok(Exactness::Exact { theta })
        }
        Membership::NotInSpan(y) => {
            let rev: BTreeMap<usize, &Tuple> = index.iter().map(|(t, &i)| (i, t)).collect();
            let certificate = y.into_iter().map(|(i, v)| (rev[&i].clone(), v)).collect();
            Ok(Exactness::NotExact { certificate, unknowns: basis.len(), equations })
        }
    }
}

/// `Σ_t y(t) ω(t)` for a certificate produced by [`is_exact`].
pub fn pair_certificate(y: &BTreeMap<Tuple, Q>, omega: &Cochain) -> Q {
    y.iter().map(|(t, v)| v * omega.coeffs.get(t).cloned().unwrap_or_else(Q::zero)).fold(Q::zero(), |a, b| a + b)
}

/// Default guard on the number of monomials for full rank computations.
pub const DEFAULT_GUARD: u128 = 20_000;

/// `dim Hᵖ(g) = dim Cᵖ - rank d_p - rank d_{p-1}`.
pub fn cohomology_dim(g: Arc<LieSuperalgebra>, p: usize) -> Result<usize, CohomologyError> {
    Ok(cohomology_basis(g, p, DEFAULT_GUARD)?.len())
}

/// Representatives of a basis of `Hᵖ(g)`.
pub fn cohomology_basis(g: Arc<LieSuperalgebra>, p: usize, guard: u128) -> Result<Vec<Cochain>, CohomologyError> {
    for l in [p.saturating_sub(1), p, p + 1] {
        let n = cochain_space_dim(&g, l);
        if n > guard {
            return Err(CohomologyError::TooLarge(n as usize));
        }
    }
    let basis = canonical_monomials(&g, p);
    let pos: BTreeMap<Tuple, usize> = basis.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
    // Kernel of d_p: dependencies among the images of basis cochains.
    let images: Vec<Cochain> =
        basis.par_iter().map(|t| Cochain::from_map(g.clone(), p, [(t.clone(), Q::one())]).coboundary()).collect();
    let mut idx: BTreeMap<Tuple, usize> = BTreeMap::new();
    for c in &images {
        for t in c.coeffs.keys() {
            let n = idx.len();
            idx.entry(t.clone()).or_insert(n);
        }
    }
    let mut kernel: Vec<SparseVec> = Vec::new();
    let mut el = Eliminator::new();
    for (i, c) in images.iter().enumerate() {
        let v: SparseVec = c.coeffs.iter().map(|(t, x)| (idx[t], x.clone())).collect();
        if let Some(k) = el.insert_or_kernel(i, v) {
            kernel.push(k);
        }
    }
    // Boundaries B^p, then add cocycles keeping the independent ones.
    let mut quot = Eliminator::new();
    if p > 0 {
        for (i, t) in canonical_monomials(&g, p - 1).into_iter().enumerate() {
            let d = Cochain::from_map(g.clone(), p - 1, [(t, Q::one())]).coboundary();
            quot.insert(i, d.coeffs.iter().map(|(t, x)| (pos[t], x.clone())).collect());
        }
    }
    let offset = usize::MAX / 2;
    let mut reps = Vec::new();
    for (i, z) in kernel.into_iter().enumerate() {
        if quot.insert(offset + i, z.clone()) {
            reps.push(Cochain::from_map(g.clone(), p, z.into_iter().map(|(j, x)| (basis[j].clone(), x))));
        }
    }
    Ok(reps)
}

// ---------------------------------------------------------------- extension, interior product

/// Outcome of extending a cochain by zero from an ideal.
#[derive(Clone, Debug)]
pub struct Extension {
    /// `ω̃` on the ambient algebra.
    pub extended: Cochain,
    /// `d ω̃`.
    pub d_extended: Cochain,
    /// `eω = d ω̃ - (dω)~`, the failure of equivariance.
    pub defect: Cochain,
}

impl Extension {
    pub fn is_closed(&self) -> bool {
        self.d_extended.is_zero()
    }
}

/// Transports a cochain along an index embedding, zero off the image.
pub fn push_forward(omega: &Cochain, ambient: Arc<LieSuperalgebra>, emb: &[usize]) -> Cochain {
    let vals = omega.coeffs.iter().map(|(t, v)| (t.iter().map(|&i| emb[i]).collect::<Vec<_>>(), v.clone()));
    Cochain::from_map(ambient, omega.level, vals)
}

/// `ω̃`: `ω` on the ideal `emb(h)`, zero whenever an argument lies outside.
pub fn extend_by_zero(omega: &Cochain, ambient: Arc<LieSuperalgebra>, emb: &[usize]) -> Result<Extension, CohomologyError> {
    ambient.check_ideal(&omega.alg, emb)?;
    let extended = push_forward(omega, ambient.clone(), emb);
    let d_extended = extended.coboundary();
    let tilde_d = push_forward(&omega.coboundary(), ambient, emb);
    let defect = d_extended.minus(&tilde_d)?;
    Ok(Extension { extended, d_extended, defect })
}

/// Tuples on which `d ω̃` can differ from `(dω)~`: exactly one label
/// outside the ideal (at least two outside makes both sides vanish).
pub fn extension_check_tuples(ambient: &LieSuperalgebra, emb: &[usize], level: usize) -> usize {
    let inside: BTreeSet<usize> = emb.iter().copied().collect();
    canonical_monomials(ambient, level).iter().filter(|t| t.iter().filter(|i| !inside.contains(i)).count() == 1).count()
}

/// `(i_X ω)(Y_1, …) = ω(X, Y_1, …)` for a central even `X`.
pub fn interior_product(omega: &Cochain, x: &[Q]) -> Result<Cochain, CohomologyError> {
    let g = &*omega.alg;
    for (l, c) in x.iter().enumerate() {
        if !c.is_zero() && g.parity(l).is_odd() {
            return Err(CohomologyError::NotCentral);
        }
    }
    for j in 0..g.dim() {
        let br = g.bracket_q(x, &unit(g.dim(), j));
        if br.iter().any(|c| !c.is_zero()) {
            return Err(CohomologyError::NotCentral);
        }
    }
    if omega.level == 0 {
        return Err(CohomologyError::LevelMismatch { expected: 1, got: 0 });
    }
    let mut out = Cochain::zero(omega.alg.clone(), omega.level - 1);
    for (t, v) in &omega.coeffs {
        for (pos, &l) in t.iter().enumerate() {
            let c = &x[l];
            if c.is_zero() {
                continue;
            }
            // ω(X_l, rest) = (-1)^pos ω(t): X_l is even, so each neighbour swap is -1.
            let mut rest = t.clone();
            rest.remove(pos);
            let s = if pos % 2 == 1 { -(v * c) } else { v * c };
            out.add_at(&rest, &s);
        }
    }
    Ok(out)
}

/// Restriction of a cochain to a sub-basis given by an index map `sub → g`.
pub fn restrict(omega: &Cochain, sub: Arc<LieSuperalgebra>, emb: &[usize]) -> Cochain {
    let inv: BTreeMap<usize, usize> = emb.iter().enumerate().map(|(a, &i)| (i, a)).collect();
    let vals = omega
        .coeffs
        .iter()
        .filter(|(t, _)| t.iter().all(|i| inv.contains_key(i)))
        .map(|(t, v)| (t.iter().map(|i| inv[i]).collect::<Vec<_>>(), v.clone()));
    Cochain::from_map(sub, omega.level, vals)
}

/// JSON-friendly summary of a cochain.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CochainDump {
    pub algebra: String,
    pub level: usize,
    pub monomials: Vec<(Vec<String>, String)>,
}

impl From<&Cochain> for CochainDump {
    fn from(c: &Cochain) -> Self {
        CochainDump { algebra: c.alg.name().to_string(), level: c.level, monomials: c.to_labeled() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{qi, seeded_rng};
    use crate::superalgebra::build_abelian;

    #[test]
    fn koszul_signs() {
        assert_eq!(KoszulSign::chi(&[0, 0], &[0, 1]), 1);
        assert_eq!(KoszulSign::chi(&[0, 0], &[1, 0]), -1);
        assert_eq!(KoszulSign::chi(&[1, 1], &[1, 0]), 1);
        assert_eq!(KoszulSign::epsilon(&[1, 1], &[1, 0]), -1);
        assert_eq!(KoszulSign::epsilon(&[1, 0, 1], &[2, 1, 0]), -1);
        assert_eq!(KoszulSign::sgn(&[1, 2, 0]), 1);
    }

    #[test]
    fn heisenberg_dz_is_minus_pq() {
        let g = Arc::new(build_heisenberg());
        let z = Cochain::from_map(g.clone(), 1, [(vec![2], qi(1))]);
        let pq = Cochain::from_map(g, 2, [(vec![0, 1], qi(1))]);
        assert_eq!(z.coboundary(), pq.scaled(&qi(-1)));
    }

    #[test]
    fn zero_and_d_squared() {
        let g = Arc::new(build_heisenberg());
        assert!(Cochain::zero(g.clone(), 2).coboundary().is_zero());
        let mut rng = seeded_rng(3);
        for level in 1..=3 {
            let w = random_cochain(g.clone(), level, 6, &mut rng);
            assert!(w.coboundary().coboundary().is_zero());
        }
    }

    #[test]
    fn support_driven_matches_exhaustive() {
        let mut rng = seeded_rng(4);
        for k in [1, 2] {
            let t = Arc::new(build_supertranslation(k, Flavor::K2).unwrap());
            for level in 1..=3 {
                let w = random_cochain(t.clone(), level, 8, &mut rng);
                assert_eq!(w.coboundary(), w.coboundary_exhaustive());
            }
        }
        let so = Arc::new(build_so(4).unwrap());
        let w = random_cochain(so, 2, 5, &mut rng);
        assert_eq!(w.coboundary(), w.coboundary_exhaustive());
    }

    #[test]
    fn evaluation_respects_permutations() {
        let g = Arc::new(build_supertranslation(1, Flavor::K3).unwrap());
        let mut rng = seeded_rng(5);
        let w = random_cochain(g.clone(), 3, 20, &mut rng);
        let n = g.dim();
        for _ in 0..30 {
            let t: Vec<usize> = (0..3).map(|_| rng.random_range(0..n)).collect();
            let grades: Vec<u8> = t.iter().map(|&i| g.parity(i).bit()).collect();
            let base = w.value(&t);
            for_each_perm(3, &mut |perm, _| {
                let pt: Vec<usize> = perm.iter().map(|&i| t[i]).collect();
                let chi = KoszulSign::chi(&grades, perm);
                assert_eq!(w.value(&pt), base.clone() * qi(chi as i64));
            });
            let args: Vec<Vec<Q>> = t.iter().map(|&i| unit(n, i)).collect();
            assert_eq!(w.evaluate_q(&args), base);
        }
    }

    #[test]
    fn multilinear_evaluation_matches_naive_sum() {
        let g = Arc::new(build_supertranslation(1, Flavor::K2).unwrap());
        let mut rng = seeded_rng(6);
        let w = random_cochain(g.clone(), 3, 12, &mut rng);
        let n = g.dim();
        let args: Vec<Vec<Q>> = (0..3).map(|_| (0..n).map(|_| random_q(&mut rng, 3, 2)).collect()).collect();
        let mut naive = Q::zero();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    naive += &args[0][a] * &args[1][b] * &args[2][c] * w.value(&[a, b, c]);
                }
            }
        }
        assert_eq!(w.evaluate_q(&args), naive);
    }

    #[test]
    fn abelian_and_heisenberg_cohomology() {
        let a = Arc::new(build_abelian(3, 0));
        assert_eq!(cohomology_dim(a, 1).unwrap(), 3);
        let h = Arc::new(build_heisenberg());
        let dims: Vec<usize> = (0..=3).map(|p| cohomology_dim(h.clone(), p).unwrap()).collect();
        assert_eq!(dims, vec![1, 2, 2, 1]);
    }

    #[test]
    fn exact_random_coboundary_has_witness() {
        let g = Arc::new(build_heisenberg());
        let mut rng = seeded_rng(8);
        let theta = random_cochain(g, 1, 3, &mut rng);
        let w = theta.coboundary();
        match is_exact(&w, None).unwrap() {
            Exactness::Exact { theta: t } => assert_eq!(t.coboundary(), w),
            Exactness::NotExact { .. } => panic!("coboundary must be exact"),
        }
    }

    #[test]
    fn gamma_and_j_are_closed() {
        assert!(make_gamma().coboundary().is_zero());
        for n in 3..=5 {
            let j = make_j(n).unwrap();
            assert!(!j.is_zero());
            assert!(j.coboundary().is_zero());
        }
    }

    #[test]
    fn interior_product_anticommutes_with_d() {
        let g = Arc::new(build_heisenberg());
        let mut rng = seeded_rng(9);
        let z = unit(3, 2);
        for level in 1..=2 {
            let w = random_cochain(g.clone(), level, 4, &mut rng);
            let lhs = interior_product(&w.coboundary(), &z).unwrap();
            let rhs = interior_product(&w, &z).unwrap().coboundary();
            assert!(lhs.plus(&rhs).unwrap().is_zero());
        }
        assert_eq!(interior_product(&make_gamma(), &unit(3, 0)), Err(CohomologyError::NotCentral));
    }
}
