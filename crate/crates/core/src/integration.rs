//! Integration of Lie algebra cochains to group cochains on 2-step
//! nilpotent exponential groups.
//!
//! A group element is stored as its logarithm, and multiplication is the
//! truncated Baker–Campbell–Hausdorff product `X + Y + ½[X, Y]`. A p-simplex
//! with vertices `1, g₁, g₁g₂, …` is parameterized by the unit cube through
//! `exp(t₁ Z(X₁, t₂ Z(X₂, … t_p X_p)))`. Its left-translated partials are
//! `∂E − ½[E, ∂E]`, so integrating a p-cochain over the cube reduces to
//! integrating polynomial coefficients, with `∫ t^a = Π 1/(a_i + 1)`.
//!
//! Doing this once over the free 2-step algebra on p generators gives an
//! [`IntegralFormula`]: a rational combination of wedges of words
//! `X_i`, `[X_i, X_j]`. Every concrete integral is an evaluation of it.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cohomology::{canonical_monomials, for_each_perm, make_gamma, Cochain, Tuple};
use crate::poly::{Monomial, Poly};
use crate::ring::{q_from_str, q_to_string, random_q, seeded_rng, Ring, Q};
use crate::superalgebra::{build_free_two_step, free_commutator_index, GradedElement, LieSuperalgebra};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegrationError {
    #[error("algebra `{0}` is not 2-step nilpotent")]
    NotTwoStep(String),
    #[error("expected {expected} arguments, got {got}")]
    LevelMismatch { expected: usize, got: usize },
    #[error("group cochains live on different algebras")]
    ParentMismatch,
    #[error("pentagon identity fails at {point:?}: defect {defect}")]
    PentagonFailure { point: Vec<Vec<String>>, defect: String },
    #[error("malformed group cochain dump: {0}")]
    BadDump(String),
}

/// Lie algebra element with polynomial coefficients.
pub type LiePoly = GradedElement<Poly>;

/// `exp(X)`, stored as `X`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement<R> {
    pub log: GradedElement<R>,
}

impl<R: Ring> GroupElement<R> {
    pub fn identity(dim: usize) -> Self {
        GroupElement { log: GradedElement::zero(dim) }
    }

    pub fn exp(x: GradedElement<R>) -> Self {
        GroupElement { log: x }
    }

    pub fn inverse(&self) -> Self {
        GroupElement { log: self.log.negated() }
    }

    pub fn is_identity(&self) -> bool {
        self.log.is_zero()
    }
}

impl GroupElement<Q> {
    pub fn from_q(coords: Vec<Q>) -> Self {
        GroupElement { log: GradedElement::from_q(coords) }
    }
}

/// The simply connected group of a 2-step nilpotent algebra.
#[derive(Clone, Debug)]
pub struct NilpotentGroup {
    alg: Arc<LieSuperalgebra>,
}

impl NilpotentGroup {
    pub fn new(alg: Arc<LieSuperalgebra>) -> Result<Self, IntegrationError> {
        if !alg.is_two_step_nilpotent() {
            return Err(IntegrationError::NotTwoStep(alg.name().to_string()));
        }
        Ok(NilpotentGroup { alg })
    }

    pub fn algebra(&self) -> &Arc<LieSuperalgebra> {
        &self.alg
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    /// `X + Y + ½[X, Y]`.
    pub fn bch2<R: Ring>(&self, x: &GradedElement<R>, y: &GradedElement<R>) -> GradedElement<R> {
        let half = Q::new(1.into(), 2.into());
        x.plus(y).plus(&self.alg.bracket(x, y).scaled(&half))
    }

    /// `exp(X + Y) = exp(X) exp(Y − ½[X, Y])`.
    pub fn zassenhaus_split<R: Ring>(&self, x: &GradedElement<R>, y: &GradedElement<R>) -> (GradedElement<R>, GradedElement<R>) {
        let half = Q::new(1.into(), 2.into());
        (x.clone(), y.minus(&self.alg.bracket(x, y).scaled(&half)))
    }

    pub fn mul<R: Ring>(&self, g: &GroupElement<R>, h: &GroupElement<R>) -> GroupElement<R> {
        GroupElement { log: self.bch2(&g.log, &h.log) }
    }

    pub fn product<R: Ring>(&self, gs: &[GroupElement<R>]) -> GroupElement<R> {
        gs.iter().fold(GroupElement::identity(self.dim()), |acc, g| self.mul(&acc, g))
    }

    /// Exponent `E(t)` of the cube map `g₀ exp(t₁ Z(X₁, t₂ Z(X₂, …)))`,
    /// where `exp(X_i) = g_{i-1}⁻¹ g_i`. Variable `t_i` is `Poly::var(i - 1)`.
    pub fn cube_exponent(&self, vertices: &[GroupElement<Q>]) -> LiePoly {
        let n = self.dim();
        let lift = |x: &GradedElement<Q>| x.map(|c| Poly::constant(c.clone()));
        let Some(g0) = vertices.first() else { return GradedElement::zero(n) };
        let steps: Vec<LiePoly> =
            vertices.windows(2).map(|w| lift(&self.mul(&w[0].inverse(), &w[1]).log)).collect();
        self.cube_exponent_from(&lift(&g0.log), &steps)
    }

    /// Same, from `log g₀` and the edge logarithms `X₁..X_p`.
    pub fn cube_exponent_from(&self, log_g0: &LiePoly, steps: &[LiePoly]) -> LiePoly {
        let n = self.dim();
        let mut inner: LiePoly = GradedElement::zero(n);
        for (i, x) in steps.iter().enumerate().rev() {
            let z = if i + 1 == steps.len() { x.clone() } else { self.bch2(x, &inner) };
            inner = z.left_mul(&Poly::var(i as u32));
        }
        self.bch2(log_g0, &inner)
    }

    /// Left-translated partials `∂_i E − ½[E, ∂_i E]` for variables `0..p`.
    pub fn translated_partials(&self, e: &LiePoly, p: usize) -> Vec<LiePoly> {
        let half = Q::new(1.into(), 2.into());
        (0..p as u32)
            .map(|v| {
                let d = e.map(|c| c.derivative(v));
                d.minus(&self.alg.bracket(e, &d).scaled(&half))
            })
            .collect()
    }
}

/// `X + Y + ½[X, Y]`, checking nilpotency of the parent.
pub fn bch2<R: Ring>(g: &Arc<LieSuperalgebra>, x: &GradedElement<R>, y: &GradedElement<R>) -> Result<GradedElement<R>, IntegrationError> {
    Ok(NilpotentGroup::new(g.clone())?.bch2(x, y))
}

pub fn zassenhaus_split<R: Ring>(
    g: &Arc<LieSuperalgebra>,
    x: &GradedElement<R>,
    y: &GradedElement<R>,
) -> Result<(GradedElement<R>, GradedElement<R>), IntegrationError> {
    Ok(NilpotentGroup::new(g.clone())?.zassenhaus_split(x, y))
}

// ---------------------------------------------------------------- formula

/// `∫ω(exp X₁, …, exp X_p) = Σ c · ω(W₁, …, W_p)` over strictly increasing
/// tuples of words in the free 2-step algebra on `p` generators.
#[derive(Clone, Debug)]
pub struct IntegralFormula {
    p: usize,
    free: Arc<LieSuperalgebra>,
    terms: BTreeMap<Tuple, Q>,
}

/// The universal cube over the free algebra: generators `X_i` as edges.
pub fn universal_partials(p: usize) -> (NilpotentGroup, Vec<LiePoly>) {
    let free = Arc::new(build_free_two_step(p));
    let grp = NilpotentGroup::new(free).expect("free 2-step algebra");
    let n = grp.dim();
    let steps: Vec<LiePoly> = (0..p).map(|i| GradedElement::basis(n, i)).collect();
    let e = grp.cube_exponent_from(&GradedElement::zero(n), &steps);
    let parts = grp.translated_partials(&e, p);
    (grp, parts)
}

/// Expand `ω(P₁, …, P_p)` by antisymmetry into word tuples with polynomial
/// coefficients in `t`.
pub fn integrand(p: usize) -> BTreeMap<Tuple, Poly> {
    let (_, parts) = universal_partials(p);
    let mut acc: BTreeMap<Tuple, Poly> = BTreeMap::from([(Vec::new(), Poly::one())]);
    for part in &parts {
        let mut next: BTreeMap<Tuple, Poly> = BTreeMap::new();
        for (t, c) in &acc {
            for (w, cw) in part.coeffs.iter().enumerate() {
                if cw.is_zero() || t.contains(&w) {
                    continue;
                }
                let above = t.iter().filter(|&&x| x > w).count();
                let mut nt = t.clone();
                nt.insert(t.len() - above, w);
                let mut prod = c.times(cw);
                if above % 2 == 1 {
                    prod = prod.negated();
                }
                next.entry(nt).or_default().accumulate(&prod);
            }
        }
        next.retain(|_, v| !v.is_zero());
        acc = next;
    }
    acc
}

fn formula_cache() -> &'static Mutex<HashMap<usize, Arc<IntegralFormula>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<IntegralFormula>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

impl IntegralFormula {
    /// The formula for level `p`, computed once per process.
    pub fn get(p: usize) -> Arc<IntegralFormula> {
        if let Some(f) = formula_cache().lock().unwrap().get(&p) {
            return f.clone();
        }
        let f = Arc::new(Self::compute(p));
        formula_cache().lock().unwrap().insert(p, f.clone());
        f
    }

    fn compute(p: usize) -> Self {
        let vars: Vec<u32> = (0..p as u32).collect();
        let terms = integrand(p)
            .into_iter()
            .map(|(t, c)| (t, c.integrate_unit(&vars).constant_term()))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        IntegralFormula { p, free: Arc::new(build_free_two_step(p)), terms }
    }

    pub fn level(&self) -> usize {
        self.p
    }

    pub fn free_algebra(&self) -> &Arc<LieSuperalgebra> {
        &self.free
    }

    pub fn terms(&self) -> &BTreeMap<Tuple, Q> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `ω(W₁, …, W_p)`, with words given by free-algebra index.
    pub fn coefficient(&self, words: &[usize]) -> Q {
        let mut t = words.to_vec();
        let mut sign = 1;
        for i in 0..t.len() {
            for j in 0..t.len() - 1 - i {
                if t[j] > t[j + 1] {
                    t.swap(j, j + 1);
                    sign = -sign;
                }
            }
        }
        if t.windows(2).any(|w| w[0] == w[1]) {
            return Q::zero();
        }
        let c = self.terms.get(&t).cloned().unwrap_or_else(Q::zero);
        if sign < 0 { -c } else { c }
    }

    /// Values of every word at `X_i = xs[i]`.
    pub fn words<R: Ring>(&self, g: &LieSuperalgebra, xs: &[GradedElement<R>]) -> Vec<GradedElement<R>> {
        let mut out: Vec<GradedElement<R>> = xs.to_vec();
        out.resize(self.free.dim(), GradedElement::zero(g.dim()));
        for i in 0..self.p {
            for j in (i + 1)..self.p {
                out[free_commutator_index(self.p, i, j)] = g.bracket(&xs[i], &xs[j]);
            }
        }
        out
    }

    /// `(∫ω)(exp x₁, …, exp x_p)` for a cochain on a 2-step algebra.
    pub fn apply<R: Ring + Send + Sync>(&self, omega: &Cochain, xs: &[GradedElement<R>]) -> R {
        let words = self.words(omega.algebra(), xs);
        self.terms
            .par_iter()
            .map(|(t, c)| {
                let args: Vec<GradedElement<R>> = t.iter().map(|&w| words[w].clone()).collect();
                omega.evaluate(&args).scaled(c)
            })
            .reduce(R::zero, |a, b| a.plus(&b))
    }

    /// The formula as a chain in `Λ^p` of a free algebra, after mapping
    /// each generator `X_i` to `images[i]`.
    pub fn push_chain(&self, target: &LieSuperalgebra, images: &[GradedElement<Q>]) -> BTreeMap<Tuple, Q> {
        let words = self.words(target, images);
        let mut out = BTreeMap::new();
        for (t, c) in &self.terms {
            let parts: Vec<&GradedElement<Q>> = t.iter().map(|&w| &words[w]).collect();
            add_wedge(&mut out, &parts, c);
        }
        out.retain(|_, v: &mut Q| !v.is_zero());
        out
    }
}

/// Accumulate `c · v₁∧…∧v_p` into a map of strictly increasing index tuples.
pub fn add_wedge(out: &mut BTreeMap<Tuple, Q>, parts: &[&GradedElement<Q>], c: &Q) {
    let mut acc: BTreeMap<Tuple, Q> = BTreeMap::from([(Vec::new(), c.clone())]);
    for v in parts {
        let mut next: BTreeMap<Tuple, Q> = BTreeMap::new();
        for (t, x) in &acc {
            for (w, cw) in v.coeffs.iter().enumerate() {
                if cw.is_zero() || t.contains(&w) {
                    continue;
                }
                let above = t.iter().filter(|&&y| y > w).count();
                let mut nt = t.clone();
                nt.insert(t.len() - above, w);
                let s = if above % 2 == 1 { -(x * cw) } else { x * cw };
                *next.entry(nt).or_insert_with(Q::zero) += s;
            }
        }
        next.retain(|_, v| !v.is_zero());
        acc = next;
    }
    for (t, x) in acc {
        *out.entry(t).or_insert_with(Q::zero) += x;
    }
}

/// Chevalley–Eilenberg boundary `Λ^{p+1} → Λ^p`, dual to the coboundary:
/// `∂(W₁∧…) = Σ_{i<j} (−1)^{i+j} [W_i, W_j] ∧ W₁ ∧ … (omit i, j)`.
pub fn chain_boundary(g: &LieSuperalgebra, chain: &BTreeMap<Tuple, Q>) -> BTreeMap<Tuple, Q> {
    let n = g.dim();
    let mut out = BTreeMap::new();
    for (t, c) in chain {
        for i in 0..t.len() {
            for j in (i + 1)..t.len() {
                let br = g.bracket(&GradedElement::<Q>::basis(n, t[i]), &GradedElement::basis(n, t[j]));
                if br.is_zero() {
                    continue;
                }
                let rest: Vec<GradedElement<Q>> =
                    t.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, &w)| GradedElement::basis(n, w)).collect();
                let mut parts = vec![&br];
                parts.extend(rest.iter());
                let s = if (i + j) % 2 == 1 { -c.clone() } else { c.clone() };
                add_wedge(&mut out, &parts, &s);
            }
        }
    }
    out.retain(|_, v: &mut Q| !v.is_zero());
    out
}

/// Both sides of the chain-level cochain-map law in `Λ^p F_{p+1}`:
/// `Σ_k (−1)^k φ_k(I_p)` and `∂ I_{p+1}`, where `φ_k` are the face maps.
pub fn chain_map_sides(p: usize) -> (BTreeMap<Tuple, Q>, BTreeMap<Tuple, Q>) {
    let big = IntegralFormula::get(p + 1);
    let small = IntegralFormula::get(p);
    let f = big.free_algebra().clone();
    let grp = NilpotentGroup::new(f.clone()).expect("free algebra");
    let n = f.dim();
    let gen = |i: usize| GradedElement::<Q>::basis(n, i);
    let mut lhs = BTreeMap::new();
    for k in 0..=p + 1 {
        let images: Vec<GradedElement<Q>> = (0..p)
            .map(|i| match k {
                0 => gen(i + 1),
                _ if k == p + 1 => gen(i),
                _ if i + 1 < k => gen(i),
                _ if i + 1 == k => grp.bch2(&gen(i), &gen(i + 1)),
                _ => gen(i + 1),
            })
            .collect();
        let pushed = small.push_chain(&f, &images);
        let sign = if k % 2 == 1 { -Q::one() } else { Q::one() };
        for (t, c) in pushed {
            *lhs.entry(t).or_insert_with(Q::zero) += c * &sign;
        }
    }
    lhs.retain(|_, v: &mut Q| !v.is_zero());
    let rhs = chain_boundary(&f, big.terms());
    (lhs, rhs)
}

// ---------------------------------------------------------------- cochains

/// Inhomogeneous group cochain `f(g₁, …, g_p)`, a polynomial in the
/// coordinates `x_{i·dim + a}` of `log g_{i+1}`. Only even coordinates
/// appear: the group is the body of the supergroup.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupCochain {
    alg: Arc<LieSuperalgebra>,
    level: usize,
    poly: Poly,
}

/// Homogeneous cochain `F(h₀, …, h_p)` in the coordinates of `p + 1` slots.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousCochain {
    alg: Arc<LieSuperalgebra>,
    level: usize,
    poly: Poly,
}

/// Symbolic coordinates of slot `slot`, zero on odd labels.
pub fn slot_coordinates(g: &LieSuperalgebra, slot: usize) -> LiePoly {
    let n = g.dim();
    GradedElement {
        coeffs: (0..n).map(|a| if g.parity(a).is_odd() { Poly::zero() } else { Poly::var((slot * n + a) as u32) }).collect(),
    }
}

fn eval_slots(poly: &Poly, n: usize, gs: &[GroupElement<Q>]) -> Q {
    poly.eval::<Q>(&|v| {
        let (i, a) = (v as usize / n, v as usize % n);
        gs[i].log.coeffs[a].clone()
    })
}

impl GroupCochain {
    pub fn new(alg: Arc<LieSuperalgebra>, level: usize, poly: Poly) -> Self {
        GroupCochain { alg, level, poly }
    }

    pub fn algebra(&self) -> &Arc<LieSuperalgebra> {
        &self.alg
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn minus(&self, o: &Self) -> Result<Self, IntegrationError> {
        if self.alg != o.alg || self.level != o.level {
            return Err(IntegrationError::ParentMismatch);
        }
        Ok(GroupCochain { poly: self.poly.minus(&o.poly), ..self.clone() })
    }

    pub fn evaluate(&self, gs: &[GroupElement<Q>]) -> Result<Q, IntegrationError> {
        if gs.len() != self.level {
            return Err(IntegrationError::LevelMismatch { expected: self.level, got: gs.len() });
        }
        Ok(eval_slots(&self.poly, self.alg.dim(), gs))
    }

    /// `F(h₀, …, h_p) = f(h₀⁻¹h₁, …, h_{p−1}⁻¹h_p)`.
    pub fn to_homogeneous(&self) -> Result<HomogeneousCochain, IntegrationError> {
        let grp = NilpotentGroup::new(self.alg.clone())?;
        let n = self.alg.dim();
        let edges: Vec<LiePoly> = (0..self.level)
            .map(|i| grp.bch2(&slot_coordinates(&self.alg, i).negated(), &slot_coordinates(&self.alg, i + 1)))
            .collect();
        let poly = self.poly.substitute(&|v| Some(edges[v as usize / n].coeffs[v as usize % n].clone()));
        Ok(HomogeneousCochain { alg: self.alg.clone(), level: self.level, poly })
    }

    pub fn to_dump(&self) -> GroupCochainDump {
        GroupCochainDump {
            algebra: self.alg.name().to_string(),
            level: self.level,
            dim: self.alg.dim(),
            terms: self
                .poly
                .terms()
                .map(|(m, c)| (monomial_string(m), q_to_string(c)))
                .collect(),
        }
    }
}

impl HomogeneousCochain {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn evaluate(&self, hs: &[GroupElement<Q>]) -> Result<Q, IntegrationError> {
        if hs.len() != self.level + 1 {
            return Err(IntegrationError::LevelMismatch { expected: self.level + 1, got: hs.len() });
        }
        Ok(eval_slots(&self.poly, self.alg.dim(), hs))
    }

    /// `f(g₁, …, g_p) = F(1, g₁, g₁g₂, …)`.
    pub fn to_inhomogeneous(&self) -> Result<GroupCochain, IntegrationError> {
        let grp = NilpotentGroup::new(self.alg.clone())?;
        let n = self.alg.dim();
        let mut vertices: Vec<LiePoly> = vec![GradedElement::zero(n)];
        for i in 0..self.level {
            let next = grp.bch2(&vertices[i], &slot_coordinates(&self.alg, i));
            vertices.push(next);
        }
        let poly = self.poly.substitute(&|v| Some(vertices[v as usize / n].coeffs[v as usize % n].clone()));
        Ok(GroupCochain { alg: self.alg.clone(), level: self.level, poly })
    }
}

/// JSON form of a group cochain: monomial in the coordinates to rational.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupCochainDump {
    pub algebra: String,
    pub level: usize,
    pub dim: usize,
    pub terms: BTreeMap<String, String>,
}

impl GroupCochainDump {
    /// Rebuilds the cochain on `alg`, which must match the recorded name and dimension.
    pub fn load(&self, alg: Arc<LieSuperalgebra>) -> Result<GroupCochain, IntegrationError> {
        if alg.name() != self.algebra || alg.dim() != self.dim {
            return Err(IntegrationError::ParentMismatch);
        }
        let mut poly = Poly::zero();
        for (m, c) in &self.terms {
            let c = q_from_str(c).ok_or_else(|| IntegrationError::BadDump(format!("coefficient `{c}`")))?;
            poly.add_term(parse_monomial(m)?, &c);
        }
        Ok(GroupCochain { alg, level: self.level, poly })
    }
}

fn parse_monomial(s: &str) -> Result<Monomial, IntegrationError> {
    let bad = || IntegrationError::BadDump(format!("monomial `{s}`"));
    if s == "1" {
        return Ok(Monomial::one());
    }
    let mut m = Monomial::one();
    for factor in s.split('*') {
        let (v, e) = factor.split_once('^').unwrap_or((factor, "1"));
        let v: u32 = v.strip_prefix('x').ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let e: u32 = e.parse().map_err(|_| bad())?;
        for _ in 0..e {
            m = m.mul(&Monomial::var(v));
        }
    }
    Ok(m)
}

fn monomial_string(m: &Monomial) -> String {
    if m.0.is_empty() {
        return "1".into();
    }
    m.0.iter()
        .map(|&(v, e)| if e == 1 { format!("x{v}") } else { format!("x{v}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

/// `∫ω` as a symbolic group cochain on the body of the group.
pub fn integrate_cochain(omega: &Cochain, p: usize) -> Result<GroupCochain, IntegrationError> {
    if omega.level() != p {
        return Err(IntegrationError::LevelMismatch { expected: omega.level(), got: p });
    }
    let g = omega.algebra().clone();
    NilpotentGroup::new(g.clone())?;
    let xs: Vec<LiePoly> = (0..p).map(|i| slot_coordinates(&g, i)).collect();
    let poly = IntegralFormula::get(p).apply(omega, &xs);
    Ok(GroupCochain { alg: g, level: p, poly })
}

/// Eilenberg–MacLane coboundary with trivial coefficients:
/// `δf(g₁…g_{p+1}) = f(g₂…) + Σ_i (−1)^i f(…, g_i g_{i+1}, …) + (−1)^{p+1} f(g₁…g_p)`.
pub fn group_coboundary(f: &GroupCochain) -> Result<GroupCochain, IntegrationError> {
    let g = f.alg.clone();
    let grp = NilpotentGroup::new(g.clone())?;
    let n = g.dim();
    let p = f.level;
    let y = |i: usize| slot_coordinates(&g, i);
    let faces: Vec<(i64, Vec<LiePoly>)> = (0..=p + 1)
        .into_par_iter()
        .map(|k| {
            let args: Vec<LiePoly> = (0..p)
                .map(|i| match k {
                    0 => y(i + 1),
                    _ if k == p + 1 => y(i),
                    _ if i + 1 < k => y(i),
                    _ if i + 1 == k => grp.bch2(&y(i), &y(i + 1)),
                    _ => y(i + 1),
                })
                .collect();
            (if k % 2 == 1 { -1 } else { 1 }, args)
        })
        .collect();
    let poly = faces
        .par_iter()
        .map(|(s, args)| {
            let sub = f.poly.substitute(&|v| Some(args[v as usize / n].coeffs[v as usize % n].clone()));
            if *s < 0 { sub.negated() } else { sub }
        })
        .reduce(Poly::zero, |a, b| a.plus(&b));
    Ok(GroupCochain { alg: g, level: p + 1, poly })
}

/// Van Est differentiation: `DF(e_{a₁}, …, e_{a_p}) = Σ_σ sgn σ · [x_{1,a_σ1} ⋯ x_{p,a_σp}] F`,
/// the antisymmetrized multilinear part, normalized so that `D∫ = id`.
pub fn differentiate_cochain(f: &GroupCochain) -> Cochain {
    let g = f.alg.clone();
    let n = g.dim();
    let p = f.level;
    let mut out = Cochain::zero(g.clone(), p);
    for t in canonical_monomials(&g, p) {
        if t.iter().any(|&a| g.parity(a).is_odd()) {
            continue;
        }
        let mut v = Q::zero();
        for_each_perm(p, &mut |perm, sign| {
            let m = Monomial((0..p).map(|i| ((i * n + t[perm[i]]) as u32, 1)).collect());
            let c = f.poly.coeff(&m);
            if sign < 0 {
                v -= c;
            } else {
                v += c;
            }
        });
        if !v.is_zero() {
            out.set(&t, v);
        }
    }
    out
}

/// Random group element with small rational coordinates on the even labels.
pub fn random_group_element(g: &LieSuperalgebra, rng: &mut impl rand::Rng) -> GroupElement<Q> {
    GroupElement::from_q(
        (0..g.dim()).map(|a| if g.parity(a).is_odd() { Q::zero() } else { random_q(rng, 4, 3) }).collect(),
    )
}

// ---------------------------------------------------------------- 2-group

/// The Heisenberg Lie 2-group: objects `H`, morphisms `H × ℝ`, trivial
/// action, associator `a = ∫γ`.
#[derive(Clone, Debug)]
pub struct Heisenberg2Group {
    pub group: NilpotentGroup,
    pub associator: GroupCochain,
}

/// Outcome of [`Heisenberg2Group::verify_pentagon`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PentagonReport {
    pub quadruples: usize,
    pub symbolic: bool,
}

impl Heisenberg2Group {
    pub fn associator_at(&self, g: &GroupElement<Q>, h: &GroupElement<Q>, k: &GroupElement<Q>) -> Q {
        self.associator.evaluate(&[g.clone(), h.clone(), k.clone()]).expect("three arguments")
    }

    /// `a(g₂,g₃,g₄) − a(g₁g₂,g₃,g₄) + a(g₁,g₂g₃,g₄) − a(g₁,g₂,g₃g₄) + a(g₁,g₂,g₃)`.
    pub fn pentagon_defect(&self, gs: &[GroupElement<Q>; 4]) -> Q {
        let m = |a: &GroupElement<Q>, b: &GroupElement<Q>| self.group.mul(a, b);
        let [g1, g2, g3, g4] = gs;
        self.associator_at(g2, g3, g4) - self.associator_at(&m(g1, g2), g3, g4) + self.associator_at(g1, &m(g2, g3), g4)
            - self.associator_at(g1, g2, &m(g3, g4))
            + self.associator_at(g1, g2, g3)
    }

    /// Pentagon identity at seeded random quadruples, plus the symbolic
    /// check that `δa` vanishes identically.
    pub fn verify_pentagon(&self, samples: usize, seed: u64) -> Result<PentagonReport, IntegrationError> {
        let symbolic = group_coboundary(&self.associator)?.is_zero();
        let mut rng = seeded_rng(seed);
        let g = self.group.algebra().clone();
        for _ in 0..samples {
            let gs: [GroupElement<Q>; 4] = std::array::from_fn(|_| random_group_element(&g, &mut rng));
            let d = self.pentagon_defect(&gs);
            if !d.is_zero() {
                return Err(IntegrationError::PentagonFailure {
                    point: gs.iter().map(|x| x.log.coeffs.iter().map(q_to_string).collect()).collect(),
                    defect: q_to_string(&d),
                });
            }
        }
        Ok(PentagonReport { quadruples: samples, symbolic })
    }
}

/// Package `(H, ℝ, ∫γ)`.
pub fn heisenberg_2group() -> Result<Heisenberg2Group, IntegrationError> {
    let gamma = make_gamma();
    let group = NilpotentGroup::new(gamma.algebra().clone())?;
    let associator = integrate_cochain(&gamma, 3)?;
    Ok(Heisenberg2Group { group, associator })
}
