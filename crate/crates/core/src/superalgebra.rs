//! Finite-dimensional Lie superalgebras given by structure constants.
//!
//! Basis labels carry a parity; even labels always precede odd ones. The
//! bracket of basis elements is a sparse list `[X_i, X_j] = Σ c_ij^k X_k`
//! with exact rational constants, stored for every ordered pair.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::division_algebra::AlgebraTag;
use crate::ring::{q_from_str, q_to_string, seeded_rng, Ring, Q};
use crate::spacetime::{Flavor, Spacetime};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn from_bit(b: u8) -> Self {
        if b % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

impl std::ops::Add for Parity {
    type Output = Parity;
    fn add(self, o: Parity) -> Parity {
        Parity::from_bit(self.bit() + o.bit())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("duplicate label {0}")]
    DuplicateLabel(String),
    #[error("unknown label {0}")]
    UnknownLabel(String),
    #[error("bad rational {0:?}")]
    BadRational(String),
    #[error("bracket of an even element with itself must vanish ({0})")]
    EvenSelfBracket(String),
    #[error("parity violation in [{0}, {1}]")]
    Parity(String, String),
    #[error("bracket [{0}, {1}] conflicts with its graded-antisymmetric partner")]
    Antisymmetry(String, String),
    #[error("invalid division algebra dimension {0}")]
    BadK(usize),
    #[error("so(n) needs n >= 3, got {0}")]
    BadN(usize),
    #[error("{0}")]
    Invalid(String),
}

/// Ordered basis labels with parities, even block first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuperBasis {
    labels: Vec<String>,
    parities: Vec<Parity>,
}

impl SuperBasis {
    /// Builds the basis, moving even labels ahead of odd ones (stable).
    pub fn new(entries: Vec<(String, Parity)>) -> Result<Self, AlgebraError> {
        let mut seen = std::collections::HashSet::new();
        for (l, _) in &entries {
            if !seen.insert(l.clone()) {
                return Err(AlgebraError::DuplicateLabel(l.clone()));
            }
        }
        let (mut ev, od): (Vec<_>, Vec<_>) = entries.into_iter().partition(|(_, p)| *p == Parity::Even);
        ev.extend(od);
        let (labels, parities) = ev.into_iter().unzip();
        Ok(SuperBasis { labels, parities })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }
}

/// A Lie superalgebra over the rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct LieSuperalgebra {
    name: String,
    basis: SuperBasis,
    table: Vec<Vec<(usize, Q)>>,
}

/// Element `Σ x_i X_i` with coefficients in a ring.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedElement<R> {
    pub coeffs: Vec<R>,
}

impl<R: Ring> GradedElement<R> {
    pub fn zero(dim: usize) -> Self {
        GradedElement { coeffs: vec![R::zero(); dim] }
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut e = Self::zero(dim);
        e.coeffs[i] = R::one();
        e
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Ring::is_zero)
    }

    pub fn plus(&self, o: &Self) -> Self {
        GradedElement { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.plus(b)).collect() }
    }

    pub fn minus(&self, o: &Self) -> Self {
        GradedElement { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.minus(b)).collect() }
    }

    pub fn negated(&self) -> Self {
        GradedElement { coeffs: self.coeffs.iter().map(Ring::negated).collect() }
    }

    pub fn scaled(&self, s: &Q) -> Self {
        GradedElement { coeffs: self.coeffs.iter().map(|a| a.scaled(s)).collect() }
    }

    /// Multiply every coefficient on the left by `r`.
    pub fn left_mul(&self, r: &R) -> Self {
        GradedElement { coeffs: self.coeffs.iter().map(|a| r.times(a)).collect() }
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> GradedElement<S> {
        GradedElement { coeffs: self.coeffs.iter().map(f).collect() }
    }
}

impl GradedElement<Q> {
    pub fn from_q(coeffs: Vec<Q>) -> Self {
        GradedElement { coeffs }
    }
}

impl LieSuperalgebra {
    /// Abelian algebra on the given basis; brackets are added with [`Self::set_bracket`].
    pub fn new(name: impl Into<String>, basis: SuperBasis) -> Self {
        let n = basis.dim();
        LieSuperalgebra { name: name.into(), basis, table: vec![Vec::new(); n * n] }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.basis.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis.labels.iter().position(|l| l == label)
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.basis.parities[i]
    }

    pub fn parities(&self) -> &[Parity] {
        &self.basis.parities
    }

    /// `(even count, odd count)`.
    pub fn super_dim(&self) -> (usize, usize) {
        let odd = self.basis.parities.iter().filter(|p| p.is_odd()).count();
        (self.dim() - odd, odd)
    }

    pub fn even_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| !self.parity(i).is_odd()).collect()
    }

    pub fn odd_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.parity(i).is_odd()).collect()
    }

    /// `[X_i, X_j]` as sparse `(k, c)` pairs.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[(usize, Q)] {
        &self.table[i * self.dim() + j]
    }

    /// Sets `[X_i, X_j]` and its partner `[X_j, X_i] = -(-1)^{|i||j|}[X_i, X_j]`.
    pub fn set_bracket(&mut self, i: usize, j: usize, value: Vec<(usize, Q)>) -> Result<(), AlgebraError> {
        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
        for (k, c) in value {
            *acc.entry(k).or_insert_with(Q::zero) += c;
        }
        let v: Vec<(usize, Q)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let want = self.parity(i) + self.parity(j);
        if v.iter().any(|(k, _)| self.parity(*k) != want) {
            return Err(AlgebraError::Parity(self.label(i).into(), self.label(j).into()));
        }
        let n = self.dim();
        let sym = self.parity(i).is_odd() && self.parity(j).is_odd();
        if i == j {
            if !sym && !v.is_empty() {
                return Err(AlgebraError::EvenSelfBracket(self.label(i).into()));
            }
            self.table[i * n + i] = v;
            return Ok(());
        }
        let partner: Vec<(usize, Q)> = if sym { v.clone() } else { v.iter().map(|(k, c)| (*k, -c)).collect() };
        self.table[i * n + j] = v;
        self.table[j * n + i] = partner;
        Ok(())
    }

    /// `[x, y] = Σ y_j x_i c_ij^k X_k`. With Grassmann coefficients the
    /// factor order `y_j x_i` is the sign rule for induced maps on A-points.
    pub fn bracket<R: Ring>(&self, x: &GradedElement<R>, y: &GradedElement<R>) -> GradedElement<R> {
        let n = self.dim();
        let mut out: GradedElement<R> = GradedElement::zero(n);
        for (i, xi) in x.coeffs.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.coeffs.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let row = self.bracket_basis(i, j);
                if row.is_empty() {
                    continue;
                }
                let f = yj.times(xi);
                for (k, c) in row {
                    out.coeffs[*k].accumulate(&f.scaled(c));
                }
            }
        }
        out
    }

    pub fn bracket_q(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        self.bracket(&GradedElement { coeffs: x.to_vec() }, &GradedElement { coeffs: y.to_vec() }).coeffs
    }

    fn bracket_sparse(&self, x: &BTreeMap<usize, Q>, y: &BTreeMap<usize, Q>) -> BTreeMap<usize, Q> {
        let mut out = BTreeMap::new();
        for (&i, a) in x {
            for (&j, b) in y {
                for (k, c) in self.bracket_basis(i, j) {
                    let e = out.entry(*k).or_insert_with(Q::zero);
                    *e += a * b * c;
                }
            }
        }
        out.retain(|_, v: &mut Q| !v.is_zero());
        out
    }

    fn unit(i: usize) -> BTreeMap<usize, Q> {
        BTreeMap::from([(i, Q::one())])
    }

    /// Graded Jacobiator of three basis elements:
    /// `Σ_cyc (-1)^{|x||z|} [x, [y, z]]`.
    pub fn jacobiator(&self, i: usize, j: usize, k: usize) -> BTreeMap<usize, Q> {
        let s = |a: usize, b: usize| if self.parity(a).is_odd() && self.parity(b).is_odd() { -Q::one() } else { Q::one() };
        let mut out: BTreeMap<usize, Q> = BTreeMap::new();
        for (x, y, z) in [(i, j, k), (j, k, i), (k, i, j)] {
            let inner = self.bracket_sparse(&Self::unit(y), &Self::unit(z));
            let t = self.bracket_sparse(&Self::unit(x), &inner);
            let sg = s(x, z);
            for (l, v) in t {
                *out.entry(l).or_insert_with(Q::zero) += v * &sg;
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Checks antisymmetry, parity and Jacobi. Jacobi runs on every basis
    /// triple when `dim ≤ full_limit`, otherwise on seeded samples covering
    /// each parity pattern.
    pub fn validate_with(&self, mode: JacobiMode) -> ValidationReport {
        let n = self.dim();
        let mut report = ValidationReport { ok: true, triples_checked: 0, failures: Vec::new() };
        for i in 0..n {
            for j in 0..n {
                let a = self.bracket_basis(i, j);
                let want = self.parity(i) + self.parity(j);
                if a.iter().any(|(k, _)| self.parity(*k) != want) {
                    report.fail(format!("parity of [{}, {}]", self.label(i), self.label(j)));
                }
                let sym = self.parity(i).is_odd() && self.parity(j).is_odd();
                let b = self.bracket_basis(j, i);
                let expect: Vec<(usize, Q)> = if sym { a.to_vec() } else { a.iter().map(|(k, c)| (*k, -c)).collect() };
                if b != expect.as_slice() {
                    report.fail(format!("antisymmetry of [{}, {}]", self.label(i), self.label(j)));
                }
            }
        }
        let triples = self.jacobi_triples(mode);
        report.triples_checked = triples.len();
        let bad: Vec<(usize, usize, usize)> =
            triples.par_iter().filter(|&&(i, j, k)| !self.jacobiator(i, j, k).is_empty()).copied().collect();
        if let Some(&(i, j, k)) = bad.iter().min() {
            report.fail(format!("Jacobi on ({}, {}, {})", self.label(i), self.label(j), self.label(k)));
        }
        report
    }

    pub fn validate(&self) -> ValidationReport {
        self.validate_with(JacobiMode::default())
    }

    fn jacobi_triples(&self, mode: JacobiMode) -> Vec<(usize, usize, usize)> {
        let n = self.dim();
        let full = match mode {
            JacobiMode::Full => true,
            JacobiMode::Auto { full_limit, .. } => n <= full_limit,
        };
        if full {
            let mut v = Vec::new();
            for i in 0..n {
                for j in i..n {
                    for k in j..n {
                        v.push((i, j, k));
                    }
                }
            }
            return v;
        }
        let JacobiMode::Auto { samples_per_pattern, seed, .. } = mode else { unreachable!() };
        let ev = self.even_indices();
        let od = self.odd_indices();
        let mut rng = seeded_rng(seed);
        let mut v = Vec::new();
        for n_odd in 0..=3usize {
            if (n_odd > 0 && od.is_empty()) || (n_odd < 3 && ev.is_empty()) {
                continue;
            }
            for _ in 0..samples_per_pattern {
                let mut t: Vec<usize> = (0..3)
                    .map(|s| {
                        if s < n_odd {
                            od[rng.random_range(0..od.len())]
                        } else {
                            ev[rng.random_range(0..ev.len())]
                        }
                    })
                    .collect();
                t.sort_unstable();
                v.push((t[0], t[1], t[2]));
            }
        }
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `[[X, Y], Z] = 0` for all basis elements.
    pub fn is_two_step_nilpotent(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                self.bracket_basis(i, j).iter().all(|(k, _)| (0..n).all(|l| self.bracket_basis(*k, l).is_empty()))
            })
        })
    }

    /// `(i, j, c)` with `c = c_ij^k ≠ 0` and `i ≤ j`, for every `k`.
    pub fn preimage_index(&self) -> Vec<Vec<(usize, usize, Q)>> {
        let n = self.dim();
        let mut idx = vec![Vec::new(); n];
        for i in 0..n {
            for j in i..n {
                for (k, c) in self.bracket_basis(i, j) {
                    idx[*k].push((i, j, c.clone()));
                }
            }
        }
        idx
    }

    /// Pairs `(i, j)` with `i ≤ j` whose bracket is nonzero.
    pub fn nonzero_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.dim();
        (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).filter(|&(i, j)| !self.bracket_basis(i, j).is_empty()).collect()
    }

    /// Checks that `emb` (indices into `self`) spans an ideal closed under
    /// brackets with everything, and that it is a bracket-preserving copy of `h`.
    pub fn check_ideal(&self, h: &LieSuperalgebra, emb: &[usize]) -> Result<(), AlgebraError> {
        if emb.len() != h.dim() {
            return Err(AlgebraError::Invalid("embedding length".into()));
        }
        let inv: BTreeMap<usize, usize> = emb.iter().enumerate().map(|(a, &i)| (i, a)).collect();
        for (a, &i) in emb.iter().enumerate() {
            if h.parity(a) != self.parity(i) {
                return Err(AlgebraError::Invalid(format!("parity of {}", h.label(a))));
            }
            for x in 0..self.dim() {
                for (k, _) in self.bracket_basis(x, i) {
                    if !inv.contains_key(k) {
                        return Err(AlgebraError::Invalid(format!(
                            "[{}, {}] leaves the ideal",
                            self.label(x),
                            self.label(i)
                        )));
                    }
                }
            }
            for (b, &j) in emb.iter().enumerate() {
                let got: Vec<(usize, Q)> = self.bracket_basis(i, j).iter().map(|(k, c)| (inv[k], c.clone())).collect();
                if got.as_slice() != h.bracket_basis(a, b) {
                    return Err(AlgebraError::Invalid(format!("embedding is not a homomorphism at {}", h.label(a))));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for LieSuperalgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (e, o) = self.super_dim();
        write!(f, "{} ({e}|{o})", self.name)
    }
}

/// How many Jacobi triples [`LieSuperalgebra::validate_with`] examines.
#[derive(Clone, Copy, Debug)]
pub enum JacobiMode {
    Full,
    Auto { full_limit: usize, samples_per_pattern: usize, seed: u64 },
}

impl Default for JacobiMode {
    fn default() -> Self {
        JacobiMode::Auto { full_limit: 48, samples_per_pattern: 400, seed: 0x5eed }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub triples_checked: usize,
    pub failures: Vec<String>,
}

impl ValidationReport {
    fn fail(&mut self, msg: String) {
        self.ok = false;
        if self.failures.len() < 16 {
            self.failures.push(msg);
        }
    }
}

// ---------------------------------------------------------------- builders

fn even(l: impl Into<String>) -> (String, Parity) {
    (l.into(), Parity::Even)
}

fn odd(l: impl Into<String>) -> (String, Parity) {
    (l.into(), Parity::Odd)
}

/// Abelian algebra with the given numbers of even and odd generators.
pub fn build_abelian(n_even: usize, n_odd: usize) -> LieSuperalgebra {
    let mut b: Vec<_> = (0..n_even).map(|i| even(format!("e{i}"))).collect();
    b.extend((0..n_odd).map(|i| odd(format!("f{i}"))));
    LieSuperalgebra::new(format!("abelian({n_even}|{n_odd})"), SuperBasis::new(b).unwrap())
}

/// `[p, q] = z`, `z` central.
pub fn build_heisenberg() -> LieSuperalgebra {
    let mut g = LieSuperalgebra::new("heisenberg", SuperBasis::new(vec![even("p"), even("q"), even("z")]).unwrap());
    g.set_bracket(0, 1, vec![(2, Q::one())]).unwrap();
    g
}

/// Index of `X_ij` (`i < j`) in the `so(n)` basis order `(0,1), (0,2), …`.
pub fn so_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// `so(n)` on `X_ij = E_ij - E_ji`, `i < j`.
pub fn build_so(n: usize) -> Result<LieSuperalgebra, AlgebraError> {
    if n < 3 {
        return Err(AlgebraError::BadN(n));
    }
    let labels: Vec<_> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| even(format!("X{i}{j}")))).collect();
    let mut g = LieSuperalgebra::new(format!("so({n})"), SuperBasis::new(labels).unwrap());
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    // [X_ij, X_kl] = δ_jk X_il - δ_ik X_jl - δ_jl X_ik + δ_il X_jk, with X_ab = -X_ba.
    let x = |a: usize, b: usize| -> Option<(usize, Q)> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some((so_index(n, a, b), Q::one())),
            std::cmp::Ordering::Greater => Some((so_index(n, b, a), -Q::one())),
            std::cmp::Ordering::Equal => None,
        }
    };
    for (u, &(i, j)) in pairs.iter().enumerate() {
        for (v, &(k, l)) in pairs.iter().enumerate().skip(u + 1) {
            let mut out = Vec::new();
            let mut push = |cond: bool, s: i64, a: usize, b: usize| {
                if cond {
                    if let Some((idx, c)) = x(a, b) {
                        out.push((idx, c * Q::from_integer(s.into())));
                    }
                }
            };
            push(j == k, 1, i, l);
            push(i == k, -1, j, l);
            push(j == l, -1, i, k);
            push(i == l, 1, j, k);
            g.set_bracket(u, v, out)?;
        }
    }
    Ok(g)
}

/// Trace form `tr(XY)` on the `so(n)` basis: `-2` on the diagonal.
pub fn so_trace_form(n: usize, a: usize, b: usize) -> Q {
    let _ = n;
    if a == b {
        Q::from_integer((-2).into())
    } else {
        Q::zero()
    }
}

fn vector_labels(st: &Spacetime) -> Vec<(String, Parity)> {
    (0..st.vector_dim()).map(|i| even(format!("v{i}"))).collect()
}

fn spinor_labels(st: &Spacetime) -> Vec<(String, Parity)> {
    (0..st.spinor_dim()).map(|i| odd(format!("s{i}"))).collect()
}

fn unit_vec(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = Q::one();
    v
}

fn sparse(v: &[Q], offset: usize) -> Vec<(usize, Q)> {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i + offset, c.clone())).collect()
}

fn tag_for(k: usize) -> Result<AlgebraTag, AlgebraError> {
    AlgebraTag::from_dim(k).map_err(|_| AlgebraError::BadK(k))
}

/// Name of the supertranslation flavor's spacetime dimension, e.g. `T(3,1)`.
fn sig(k: usize, flavor: Flavor) -> String {
    match flavor {
        Flavor::K2 => format!("{},1", k + 1),
        Flavor::K3 => format!("{},1", k + 2),
    }
}

/// Supertranslations `V ⊕ S₊` (dimension k+2) or `𝒱 ⊕ 𝒮` (k+3): vector
/// coordinates, then spinor coordinates; only odd-odd brackets are nonzero.
pub fn build_supertranslation(k: usize, flavor: Flavor) -> Result<LieSuperalgebra, AlgebraError> {
    let st = Spacetime::new(tag_for(k)?, flavor);
    Ok(supertranslation_from(&st, 0, format!("T({})", sig(k, flavor))))
}

fn supertranslation_from(st: &Spacetime, offset: usize, name: String) -> LieSuperalgebra {
    let nv = st.vector_dim();
    let ns = st.spinor_dim();
    let mut labels: Vec<_> = (0..offset).map(|i| even(format!("m{i}"))).collect();
    labels.extend(vector_labels(st));
    labels.extend(spinor_labels(st));
    let mut g = LieSuperalgebra::new(name, SuperBasis::new(labels).unwrap());
    for a in 0..ns {
        for b in a..ns {
            let v = st.odd_bracket(&unit_vec(ns, a), &unit_vec(ns, b));
            g.set_bracket(offset + nv + a, offset + nv + b, sparse(&v, offset)).unwrap();
        }
    }
    g
}

/// Poincaré superalgebra `so ⋉ T`: Lorentz generators `M_ij = e_i∧e_j`
/// (`i < j`), then the supertranslation basis. `so` acts on vectors by `ρ`
/// and on spinors by `σ`.
pub fn build_poincare(k: usize, flavor: Flavor) -> Result<LieSuperalgebra, AlgebraError> {
    let st = Spacetime::new(tag_for(k)?, flavor);
    let nv = st.vector_dim();
    let ns = st.spinor_dim();
    let pairs: Vec<(usize, usize)> = (0..nv).flat_map(|i| ((i + 1)..nv).map(move |j| (i, j))).collect();
    let m = pairs.len();
    let mut g = supertranslation_from(&st, m, format!("siso({})", sig(k, flavor)));
    let mut labels: Vec<_> = pairs.iter().map(|(i, j)| even(format!("M{i}_{j}"))).collect();
    labels.extend(vector_labels(&st));
    labels.extend(spinor_labels(&st));
    g.basis = SuperBasis::new(labels).unwrap();
    let gens: Vec<_> = pairs.iter().map(|&(i, j)| st.lorentz_generator(&unit_vec(nv, i), &unit_vec(nv, j))).collect();
    let metric = st.metric().to_vec();
    // Entry (i, j), i < j, of a vector operator in so reads off the M_ij coefficient.
    let decompose = |op: &crate::spacetime::SpinorOperator| -> Vec<(usize, Q)> {
        pairs
            .iter()
            .enumerate()
            .filter_map(|(u, &(i, j))| {
                let c = op.entry(i, j) / &metric[j];
                (!c.is_zero()).then_some((u, c))
            })
            .collect()
    };
    for u in 0..m {
        for v in (u + 1)..m {
            let c = gens[u].vector.commutator(&gens[v].vector);
            g.set_bracket(u, v, decompose(&c)).unwrap();
        }
        for a in 0..nv {
            let img = gens[u].vector.apply(&unit_vec(nv, a));
            g.set_bracket(u, m + a, sparse(&img, m)).unwrap();
        }
        let sigma = st.restrict(&gens[u].spinor);
        for a in 0..ns {
            let img = sigma.apply(&unit_vec(ns, a));
            g.set_bracket(u, m + nv + a, sparse(&img, m + nv)).unwrap();
        }
    }
    Ok(g)
}

/// Indices of the supertranslation ideal inside [`build_poincare`]'s output.
pub fn poincare_translation_indices(k: usize, flavor: Flavor) -> Vec<usize> {
    let nv = match flavor {
        Flavor::K2 => k + 2,
        Flavor::K3 => k + 3,
    };
    let ns = match flavor {
        Flavor::K2 => 2 * k,
        Flavor::K3 => 4 * k,
    };
    let m = nv * (nv - 1) / 2;
    (m..m + nv + ns).collect()
}

/// Free 2-step nilpotent Lie algebra on `p` generators: `X1..Xp`, then
/// `[Xi,Xj]` for `i < j`.
pub fn build_free_two_step(p: usize) -> LieSuperalgebra {
    let mut labels: Vec<_> = (1..=p).map(|i| even(format!("X{i}"))).collect();
    for i in 1..=p {
        for j in (i + 1)..=p {
            labels.push(even(format!("[X{i},X{j}]")));
        }
    }
    let mut g = LieSuperalgebra::new(format!("free2({p})"), SuperBasis::new(labels).unwrap());
    let mut idx = p;
    for i in 0..p {
        for j in (i + 1)..p {
            g.set_bracket(i, j, vec![(idx, Q::one())]).unwrap();
            idx += 1;
        }
    }
    g
}

/// Index of `[X_{i+1}, X_{j+1}]` (`i < j`, zero-based) in [`build_free_two_step`].
pub fn free_commutator_index(p: usize, i: usize, j: usize) -> usize {
    p + so_index(p, i, j)
}

/// Heisenberg algebra with a derivation `h`: `[h, p] = p`, `[h, q] = -q`.
/// Heisenberg sits at indices 1..4 as an ideal; `h` acts by an outer
/// derivation that does not preserve every 2-cochain.
pub fn build_heisenberg_with_torus() -> LieSuperalgebra {
    let mut g = LieSuperalgebra::new(
        "heisenberg⋊torus",
        SuperBasis::new(vec![even("h"), even("p"), even("q"), even("z")]).unwrap(),
    );
    g.set_bracket(1, 2, vec![(3, Q::one())]).unwrap();
    g.set_bracket(0, 1, vec![(1, Q::one())]).unwrap();
    g.set_bracket(0, 2, vec![(2, -Q::one())]).unwrap();
    g
}

// ---------------------------------------------------------------- config

/// JSON schema for user-supplied algebras.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraConfig {
    pub name: String,
    pub basis: Vec<BasisEntry>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub label: String,
    pub parity: Parity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketEntry {
    pub x: String,
    pub y: String,
    pub result: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coef: String,
    pub label: String,
}

impl AlgebraConfig {
    /// Builds the algebra. Brackets given for both orders must agree.
    pub fn build(&self) -> Result<LieSuperalgebra, AlgebraError> {
        let basis = SuperBasis::new(self.basis.iter().map(|b| (b.label.clone(), b.parity)).collect())?;
        let mut g = LieSuperalgebra::new(self.name.clone(), basis);
        let mut given: BTreeMap<(usize, usize), Vec<(usize, Q)>> = BTreeMap::new();
        for e in &self.brackets {
            let i = g.index_of(&e.x).ok_or_else(|| AlgebraError::UnknownLabel(e.x.clone()))?;
            let j = g.index_of(&e.y).ok_or_else(|| AlgebraError::UnknownLabel(e.y.clone()))?;
            let mut v = Vec::new();
            for t in &e.result {
                let k = g.index_of(&t.label).ok_or_else(|| AlgebraError::UnknownLabel(t.label.clone()))?;
                let c = q_from_str(&t.coef).ok_or_else(|| AlgebraError::BadRational(t.coef.clone()))?;
                v.push((k, c));
            }
            if given.contains_key(&(j, i)) {
                let before = g.bracket_basis(i, j).to_vec();
                g.set_bracket(i, j, v.clone())?;
                if g.bracket_basis(i, j) != before.as_slice() {
                    return Err(AlgebraError::Antisymmetry(e.x.clone(), e.y.clone()));
                }
            } else {
                g.set_bracket(i, j, v.clone())?;
            }
            given.insert((i, j), v);
        }
        Ok(g)
    }

    /// Inverse of [`Self::build`]: lists each nonzero bracket once.
    pub fn from_algebra(g: &LieSuperalgebra) -> Self {
        let basis =
            (0..g.dim()).map(|i| BasisEntry { label: g.label(i).to_string(), parity: g.parity(i) }).collect();
        let brackets = g
            .nonzero_pairs()
            .into_iter()
            .map(|(i, j)| BracketEntry {
                x: g.label(i).to_string(),
                y: g.label(j).to_string(),
                result: g
                    .bracket_basis(i, j)
                    .iter()
                    .map(|(k, c)| Term { coef: q_to_string(c), label: g.label(*k).to_string() })
                    .collect(),
            })
            .collect();
        AlgebraConfig { name: g.name().to_string(), basis, brackets }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::qi;

    #[test]
    fn abelian_and_heisenberg_validate() {
        assert!(build_abelian(2, 3).validate().ok);
        let h = build_heisenberg();
        assert!(h.validate().ok);
        assert_eq!(h.bracket_basis(0, 1), &[(2, qi(1))]);
        assert_eq!(h.bracket_basis(1, 0), &[(2, qi(-1))]);
        assert!(h.bracket_basis(0, 2).is_empty());
        assert!(h.is_two_step_nilpotent());
    }

    #[test]
    fn injected_bracket_breaks_jacobi() {
        let mut h = build_heisenberg();
        h.set_bracket(0, 2, vec![(0, qi(1))]).unwrap();
        let r = h.validate();
        assert!(!r.ok);
        assert!(r.failures.iter().any(|f| f.contains("Jacobi on (p, q, z)")), "{:?}", r.failures);
    }

    #[test]
    fn so_n_dims_and_jacobi() {
        for n in 3..=6 {
            let g = build_so(n).unwrap();
            assert_eq!(g.dim(), n * (n - 1) / 2);
            assert!(g.validate_with(JacobiMode::Full).ok);
        }
        assert!(build_so(2).is_err());
        assert!(!build_so(3).unwrap().is_two_step_nilpotent());
    }

    #[test]
    fn supertranslation_dims_and_nilpotency() {
        for k in [1, 2, 4, 8] {
            let t = build_supertranslation(k, Flavor::K2).unwrap();
            assert_eq!(t.super_dim(), (k + 2, 2 * k));
            assert!(t.is_two_step_nilpotent());
            assert!(t.validate().ok);
            let t3 = build_supertranslation(k, Flavor::K3).unwrap();
            assert_eq!(t3.super_dim(), (k + 3, 4 * k));
            assert!(t3.is_two_step_nilpotent());
        }
        assert!(build_supertranslation(3, Flavor::K2).is_err());
    }

    #[test]
    fn poincare_small_validates_fully() {
        for k in [1, 2] {
            for flavor in [Flavor::K2, Flavor::K3] {
                let g = build_poincare(k, flavor).unwrap();
                let nv = k + if flavor == Flavor::K2 { 2 } else { 3 };
                assert_eq!(g.even_indices().len(), nv * (nv - 1) / 2 + nv);
                let r = g.validate_with(JacobiMode::Full);
                assert!(r.ok, "{flavor:?} k={k}: {:?}", r.failures);
                let t = build_supertranslation(k, flavor).unwrap();
                g.check_ideal(&t, &poincare_translation_indices(k, flavor)).unwrap();
            }
        }
    }

    #[test]
    fn free_two_step_is_two_step() {
        let f = build_free_two_step(3);
        assert_eq!(f.dim(), 6);
        assert!(f.is_two_step_nilpotent());
        assert!(f.validate().ok);
        assert_eq!(f.bracket_basis(0, 2), &[(free_commutator_index(3, 0, 2), qi(1))]);
    }

    #[test]
    fn config_round_trip() {
        let h = build_heisenberg();
        let c = AlgebraConfig::from_algebra(&h);
        assert_eq!(c.build().unwrap(), h);
        let bad = AlgebraConfig {
            name: "bad".into(),
            basis: vec![BasisEntry { label: "a".into(), parity: Parity::Even }],
            brackets: vec![BracketEntry {
                x: "a".into(),
                y: "a".into(),
                result: vec![Term { coef: "1".into(), label: "a".into() }],
            }],
        };
        assert!(bad.build().is_err());
    }
}
