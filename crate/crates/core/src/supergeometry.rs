//! Grassmann algebras, A-points, and integration of cocycles on
//! supergroups.
//!
//! An A-point of a super vector space `V` is an even element of `A ⊗ V`
//! for a Grassmann algebra `A = ΛRⁿ`: even labels carry even coefficients,
//! odd labels odd ones. On A-points a Lie superalgebra becomes an ordinary
//! Lie algebra over `A₀`, and a cochain `ω` becomes an `A₀`-multilinear
//! form `ω_A` via `ω_A(a₁v₁, …, a_pv_p) = a_p ⋯ a₁ ω(v₁, …, v_p)`.
//!
//! A supergroup cochain is represented as one evaluator that works for
//! every `A`, which makes naturality in `A` a checkable property.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cohomology::{make_alpha, make_beta, Cochain};
use crate::integration::{IntegralFormula, IntegrationError, NilpotentGroup};
use crate::ring::{q_to_string, random_q, seeded_rng, Ring, Q};
use crate::spacetime::Flavor;
use crate::superalgebra::{build_poincare, poincare_translation_indices, so_index, GradedElement, LieSuperalgebra, Parity};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SuperError {
    #[error("A-points live on different algebras")]
    ParentMismatch,
    #[error("A-points use different Grassmann algebras (ΛR^{0} vs ΛR^{1})")]
    GrassmannMismatch(u32, u32),
    #[error("label `{0}` has a coefficient of the wrong parity")]
    ParityViolation(String),
    #[error("coefficient uses a generator outside ΛR^{0}")]
    OutOfRange(u32),
    #[error("image of θ{0} is not odd")]
    NotOdd(u32),
    #[error("expected {expected} arguments, got {got}")]
    Arity { expected: usize, got: usize },
    #[error(transparent)]
    Integration(#[from] IntegrationError),
    #[error("{name}: cocycle identity fails with defect {defect} at {point:?}")]
    CocycleFailure { name: String, defect: String, point: Vec<Vec<String>> },
    #[error("{name}: value {value} at a degenerate simplex")]
    NotNormalized { name: String, value: String },
    #[error("k must be 1, 2, 4 or 8, got {0}")]
    BadK(usize),
}

// ---------------------------------------------------------------- Grassmann

/// Sign of `θ^a θ^b` reordered to `θ^{a∪b}`; `None` if they share a generator.
fn mono_sign(a: u32, b: u32) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    Some(swaps % 2 == 1)
}

/// Element of a Grassmann algebra: monomial bitmask to coefficient.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct GrassmannElement {
    terms: BTreeMap<u32, Q>,
}

impl GrassmannElement {
    pub fn scalar(c: Q) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(mask: u32, c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mask, c);
        }
        GrassmannElement { terms }
    }

    /// Generator `θ_i`, zero-based.
    pub fn theta(i: u32) -> Self {
        Self::monomial(1 << i, Q::one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Q)> {
        self.terms.iter().map(|(&m, c)| (m, c))
    }

    pub fn coeff(&self, mask: u32) -> Q {
        self.terms.get(&mask).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, mask: u32, c: &Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(mask).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&mask);
        }
    }

    /// Coefficient of the empty monomial.
    pub fn body(&self) -> Q {
        self.coeff(0)
    }

    /// Parity if homogeneous; zero counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(|m| m.count_ones() % 2);
        match it.next() {
            None => Some(Parity::Even),
            Some(first) => it.all(|b| b == first).then(|| Parity::from_bit(first as u8)),
        }
    }

    /// Union of generators used.
    pub fn support_mask(&self) -> u32 {
        self.terms.keys().fold(0, |a, m| a | m)
    }
}

impl Ring for GrassmannElement {
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::scalar(Q::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.accumulate(o);
        out
    }
    fn minus(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (&m, c) in &o.terms {
            out.add_term(m, &-c);
        }
        out
    }
    fn times(&self, o: &Self) -> Self {
        let mut out = Self::default();
        for (&a, x) in &self.terms {
            for (&b, y) in &o.terms {
                if let Some(neg) = mono_sign(a, b) {
                    let v = x * y;
                    out.add_term(a | b, &if neg { -v } else { v });
                }
            }
        }
        out
    }
    fn negated(&self) -> Self {
        GrassmannElement { terms: self.terms.iter().map(|(&m, c)| (m, -c)).collect() }
    }
    fn from_q(x: &Q) -> Self {
        Self::scalar(x.clone())
    }
    fn scaled(&self, x: &Q) -> Self {
        if x.is_zero() {
            return Self::default();
        }
        GrassmannElement { terms: self.terms.iter().map(|(&m, c)| (m, c * x)).collect() }
    }
    fn accumulate(&mut self, o: &Self) {
        for (&m, c) in &o.terms {
            self.add_term(m, c);
        }
    }
}

fn mono_string(mask: u32) -> String {
    (0..32).filter(|i| mask >> i & 1 == 1).map(|i| format!("θ{}", i + 1)).collect()
}

impl fmt::Display for GrassmannElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&m, c)| if m == 0 { q_to_string(c) } else { format!("{}·{}", q_to_string(c), mono_string(m)) })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for GrassmannElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `ΛRⁿ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GrassmannAlgebra {
    n: u32,
}

impl GrassmannAlgebra {
    pub fn new(n: u32) -> Self {
        assert!(n <= 24, "Grassmann algebra too large");
        GrassmannAlgebra { n }
    }

    pub fn generators(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn contains(&self, x: &GrassmannElement) -> bool {
        x.support_mask() >> self.n == 0
    }

    /// Monomials of the given parity.
    pub fn monomials(&self, parity: Parity) -> Vec<u32> {
        (0..1u32 << self.n).filter(|m| m.count_ones() % 2 == parity.bit() as u32).collect()
    }

    /// Random element of `A₀` or `A₁` with small rational coefficients on every monomial.
    pub fn random(&self, parity: Parity, rng: &mut impl rand::Rng) -> GrassmannElement {
        let mut x = GrassmannElement::default();
        for m in self.monomials(parity) {
            x.add_term(m, &random_q(rng, 3, 2));
        }
        x
    }
}

/// Superalgebra map `ΛRⁿ → ΛR^m` fixed by odd images of the generators.
#[derive(Clone, Debug, PartialEq)]
pub struct GrassmannHom {
    source: GrassmannAlgebra,
    target: GrassmannAlgebra,
    images: Vec<GrassmannElement>,
}

impl GrassmannHom {
    pub fn new(source: GrassmannAlgebra, target: GrassmannAlgebra, images: Vec<GrassmannElement>) -> Result<Self, SuperError> {
        if images.len() != source.generators() as usize {
            return Err(SuperError::Arity { expected: source.generators() as usize, got: images.len() });
        }
        for (i, x) in images.iter().enumerate() {
            if x.parity() != Some(Parity::Odd) {
                return Err(SuperError::NotOdd(i as u32 + 1));
            }
            if !target.contains(x) {
                return Err(SuperError::OutOfRange(target.generators()));
            }
        }
        Ok(GrassmannHom { source, target, images })
    }

    pub fn identity(a: GrassmannAlgebra) -> Self {
        GrassmannHom { source: a, target: a, images: (0..a.generators()).map(GrassmannElement::theta).collect() }
    }

    pub fn random(source: GrassmannAlgebra, target: GrassmannAlgebra, rng: &mut impl rand::Rng) -> Self {
        let images = (0..source.generators()).map(|_| target.random(Parity::Odd, rng)).collect();
        GrassmannHom { source, target, images }
    }

    pub fn source(&self) -> GrassmannAlgebra {
        self.source
    }

    pub fn target(&self) -> GrassmannAlgebra {
        self.target
    }

    /// `θ^{i₁⋯i_r} ↦ f(θ_{i₁}) ⋯ f(θ_{i_r})`.
    pub fn apply(&self, x: &GrassmannElement) -> GrassmannElement {
        let mut out = GrassmannElement::default();
        for (m, c) in x.terms() {
            let mut t = GrassmannElement::scalar(c.clone());
            for i in (0..32).filter(|i| m >> i & 1 == 1) {
                t = t.times(&self.images[i as usize]);
                if t.is_zero() {
                    break;
                }
            }
            out.accumulate(&t);
        }
        out
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GrassmannHom) -> GrassmannHom {
        GrassmannHom { source: self.source, target: other.target, images: self.images.iter().map(|x| other.apply(x)).collect() }
    }
}

// ---------------------------------------------------------------- A-points

/// Even element of `A ⊗ V` for `A = ΛRⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct APoint {
    alg: Arc<LieSuperalgebra>,
    n: u32,
    x: GradedElement<GrassmannElement>,
}

impl APoint {
    pub fn new(alg: Arc<LieSuperalgebra>, n: u32, x: GradedElement<GrassmannElement>) -> Result<Self, SuperError> {
        if x.dim() != alg.dim() {
            return Err(SuperError::Arity { expected: alg.dim(), got: x.dim() });
        }
        let a = GrassmannAlgebra::new(n);
        for (i, c) in x.coeffs.iter().enumerate() {
            if !a.contains(c) {
                return Err(SuperError::OutOfRange(n));
            }
            if !c.is_zero() && c.parity() != Some(alg.parity(i)) {
                return Err(SuperError::ParityViolation(alg.label(i).to_string()));
            }
        }
        Ok(APoint { alg, n, x })
    }

    pub fn zero(alg: Arc<LieSuperalgebra>, n: u32) -> Self {
        let d = alg.dim();
        APoint { alg, n, x: GradedElement::zero(d) }
    }

    /// A real point of the body; odd coordinates must vanish.
    pub fn from_real(alg: Arc<LieSuperalgebra>, n: u32, v: &[Q]) -> Result<Self, SuperError> {
        let x = GradedElement { coeffs: v.iter().map(|c| GrassmannElement::scalar(c.clone())).collect() };
        Self::new(alg, n, x)
    }

    pub fn random(alg: Arc<LieSuperalgebra>, n: u32, rng: &mut impl rand::Rng) -> Self {
        let a = GrassmannAlgebra::new(n);
        let x = GradedElement { coeffs: (0..alg.dim()).map(|i| a.random(alg.parity(i), rng)).collect() };
        APoint { alg, n, x }
    }

    pub fn algebra(&self) -> &Arc<LieSuperalgebra> {
        &self.alg
    }

    pub fn grassmann(&self) -> GrassmannAlgebra {
        GrassmannAlgebra::new(self.n)
    }

    pub fn coeffs(&self) -> &GradedElement<GrassmannElement> {
        &self.x
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero()
    }

    /// `N_f`: apply a Grassmann homomorphism to every coefficient.
    pub fn map(&self, f: &GrassmannHom) -> Result<APoint, SuperError> {
        if f.source().generators() != self.n {
            return Err(SuperError::GrassmannMismatch(self.n, f.source().generators()));
        }
        Ok(APoint { alg: self.alg.clone(), n: f.target().generators(), x: self.x.map(|c| f.apply(c)) })
    }

    /// Apply a real linear map of `V` (rows are images of coordinates).
    pub fn transform(&self, m: &[Vec<Q>]) -> APoint {
        let d = self.alg.dim();
        let mut out: GradedElement<GrassmannElement> = GradedElement::zero(d);
        for (i, row) in m.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() && !self.x.coeffs[j].is_zero() {
                    out.coeffs[i].accumulate(&self.x.coeffs[j].scaled(c));
                }
            }
        }
        APoint { x: out, ..self.clone() }
    }

    pub fn plus(&self, o: &APoint) -> APoint {
        APoint { x: self.x.plus(&o.x), ..self.clone() }
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.x.coeffs.iter().map(|c| c.to_string()).collect()
    }

    fn compatible(&self, o: &APoint) -> Result<(), SuperError> {
        if self.alg != o.alg && *self.alg != *o.alg {
            return Err(SuperError::ParentMismatch);
        }
        if self.n != o.n {
            return Err(SuperError::GrassmannMismatch(self.n, o.n));
        }
        Ok(())
    }
}

/// `[X, Y]_A`.
pub fn a_bracket(x: &APoint, y: &APoint) -> Result<APoint, SuperError> {
    x.compatible(y)?;
    Ok(APoint { x: x.alg.bracket(&x.x, &y.x), ..x.clone() })
}

/// `exp(X) exp(Y) = exp(X + Y + ½[X, Y]_A)`.
pub fn super_exp_mul(x: &APoint, y: &APoint) -> Result<APoint, SuperError> {
    x.compatible(y)?;
    let grp = NilpotentGroup::new(x.alg.clone())?;
    Ok(APoint { x: grp.bch2(&x.x, &y.x), ..x.clone() })
}

// ---------------------------------------------------------------- ω_A

/// `ω_A`, evaluated by expanding arguments into Grassmann monomials and
/// summing over disjoint monomial choices.
#[derive(Clone, Debug)]
pub struct InducedCochain {
    omega: Cochain,
}

pub fn induced_cochain(omega: &Cochain) -> InducedCochain {
    InducedCochain { omega: omega.clone() }
}

fn components(x: &GradedElement<GrassmannElement>) -> Vec<(u32, Vec<Q>)> {
    let mut by: BTreeMap<u32, Vec<Q>> = BTreeMap::new();
    let d = x.dim();
    for (i, c) in x.coeffs.iter().enumerate() {
        for (m, v) in c.terms() {
            by.entry(m).or_insert_with(|| vec![Q::zero(); d])[i] = v.clone();
        }
    }
    by.into_iter().collect()
}

impl InducedCochain {
    pub fn cochain(&self) -> &Cochain {
        &self.omega
    }

    pub fn eval(&self, points: &[APoint]) -> Result<GrassmannElement, SuperError> {
        if points.len() != self.omega.level() {
            return Err(SuperError::Arity { expected: self.omega.level(), got: points.len() });
        }
        for p in points {
            if **p.algebra() != **self.omega.algebra() {
                return Err(SuperError::ParentMismatch);
            }
        }
        let xs: Vec<GradedElement<GrassmannElement>> = points.iter().map(|p| p.x.clone()).collect();
        Ok(self.eval_raw(&xs))
    }

    /// Fast path on raw coefficient vectors.
    pub fn eval_raw(&self, xs: &[GradedElement<GrassmannElement>]) -> GrassmannElement {
        let comps: Vec<Vec<(u32, Vec<Q>)>> = xs.iter().map(components).collect();
        if comps.iter().any(Vec::is_empty) {
            return GrassmannElement::zero();
        }
        let want = self.omega.parity().map(|p| p.bit() as u32);
        let mut out = GrassmannElement::zero();
        let mut choice = vec![0usize; xs.len()];
        self.walk(&comps, 0, 0, &mut choice, want, &mut out);
        out
    }

    fn walk(&self, comps: &[Vec<(u32, Vec<Q>)>], slot: usize, used: u32, choice: &mut Vec<usize>, want: Option<u32>, out: &mut GrassmannElement) {
        if slot == comps.len() {
            if want.is_some_and(|w| used.count_ones() % 2 != w) {
                return;
            }
            let args: Vec<Vec<Q>> = choice.iter().enumerate().map(|(s, &c)| comps[s][c].1.clone()).collect();
            let v = self.omega.evaluate_q(&args);
            if v.is_zero() {
                return;
            }
            // a_p ⋯ a_1
            let mut acc = 0u32;
            let mut neg = false;
            for s in (0..comps.len()).rev() {
                let m = comps[s][choice[s]].0;
                neg ^= mono_sign(acc, m).expect("disjoint");
                acc |= m;
            }
            out.add_term(acc, &if neg { -v } else { v });
            return;
        }
        for c in 0..comps[slot].len() {
            let m = comps[slot][c].0;
            if m & used != 0 {
                continue;
            }
            choice[slot] = c;
            self.walk(comps, slot + 1, used | m, choice, want, out);
        }
    }

    /// Reference path: the generic evaluator over the Grassmann ring.
    pub fn eval_generic(&self, points: &[APoint]) -> GrassmannElement {
        let xs: Vec<GradedElement<GrassmannElement>> = points.iter().map(|p| p.x.clone()).collect();
        self.omega.evaluate(&xs)
    }

    /// `(dω_A)(x₁, …, x_{p+1}) = Σ_{i<j} (−1)^{i+j} ω_A([x_i, x_j]_A, …)`,
    /// the ordinary Chevalley–Eilenberg formula on the Lie algebra of A-points.
    pub fn coboundary_eval(&self, points: &[APoint]) -> Result<GrassmannElement, SuperError> {
        let p = self.omega.level();
        if points.len() != p + 1 {
            return Err(SuperError::Arity { expected: p + 1, got: points.len() });
        }
        let mut out = GrassmannElement::zero();
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                let mut args = vec![a_bracket(&points[i], &points[j])?];
                args.extend(points.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, x)| x.clone()));
                let v = self.eval(&args)?;
                if (i + j) % 2 == 1 {
                    out = out.minus(&v);
                } else {
                    out.accumulate(&v);
                }
            }
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------- integration

/// `∫ω` on the supergroup, evaluated on A-points for any Grassmann algebra.
#[derive(Clone, Debug)]
pub struct SuperIntegral {
    name: String,
    induced: InducedCochain,
    group: NilpotentGroup,
    formula: Arc<IntegralFormula>,
}

pub fn super_integrate(omega: &Cochain, p: usize) -> Result<SuperIntegral, SuperError> {
    if omega.level() != p {
        return Err(IntegrationError::LevelMismatch { expected: omega.level(), got: p }.into());
    }
    let group = NilpotentGroup::new(omega.algebra().clone())?;
    Ok(SuperIntegral {
        name: format!("∫ω on {}", omega.algebra().name()),
        induced: induced_cochain(omega),
        group,
        formula: IntegralFormula::get(p),
    })
}

impl SuperIntegral {
    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn level(&self) -> usize {
        self.formula.level()
    }

    pub fn algebra(&self) -> &Arc<LieSuperalgebra> {
        self.group.algebra()
    }

    pub fn cochain(&self) -> &Cochain {
        self.induced.cochain()
    }

    /// `(∫ω)_A(exp x₁, …, exp x_p)`.
    pub fn eval(&self, points: &[APoint]) -> Result<GrassmannElement, SuperError> {
        if points.len() != self.level() {
            return Err(SuperError::Arity { expected: self.level(), got: points.len() });
        }
        for w in points.windows(2) {
            w[0].compatible(&w[1])?;
        }
        let xs: Vec<GradedElement<GrassmannElement>> = points.iter().map(|p| p.x.clone()).collect();
        let words = self.formula.words(self.algebra(), &xs);
        Ok(self
            .formula
            .terms()
            .par_iter()
            .map(|(t, c)| {
                let args: Vec<GradedElement<GrassmannElement>> = t.iter().map(|&w| words[w].clone()).collect();
                self.induced.eval_raw(&args).scaled(c)
            })
            .reduce(GrassmannElement::zero, |a, b| a.plus(&b)))
    }

    /// Group coboundary `δ(∫ω)_A(n₁, …, n_{p+1})` with trivial coefficients.
    pub fn coboundary_eval(&self, points: &[APoint]) -> Result<GrassmannElement, SuperError> {
        let p = self.level();
        if points.len() != p + 1 {
            return Err(SuperError::Arity { expected: p + 1, got: points.len() });
        }
        let mut out = GrassmannElement::zero();
        for k in 0..=p + 1 {
            let mut args: Vec<APoint> = Vec::with_capacity(p);
            let mut i = 0;
            while i < p + 1 {
                if i == k {
                    if k == 0 || k == p + 1 {
                        i += 1;
                        continue;
                    }
                }
                if k >= 1 && k <= p && i + 1 == k {
                    args.push(super_exp_mul(&points[i], &points[i + 1])?);
                    i += 2;
                } else {
                    args.push(points[i].clone());
                    i += 1;
                }
            }
            if k == p + 1 {
                args.truncate(p);
            }
            let v = self.eval(&args)?;
            if k % 2 == 1 {
                out = out.minus(&v);
            } else {
                out.accumulate(&v);
            }
        }
        Ok(out)
    }

    /// `f₀((∫ω)_A(n)) − (∫ω)_B(N_f(n))`.
    pub fn naturality_defect(&self, f: &GrassmannHom, points: &[APoint]) -> Result<GrassmannElement, SuperError> {
        let lhs = f.apply(&self.eval(points)?);
        let mapped: Vec<APoint> = points.iter().map(|x| x.map(f)).collect::<Result<_, _>>()?;
        Ok(lhs.minus(&self.eval(&mapped)?))
    }

    /// Homogeneous form `F_A(h₀, …, h_p) = (∫ω)_A(h₀⁻¹h₁, …)`.
    pub fn homogeneous_eval(&self, hs: &[APoint]) -> Result<GrassmannElement, SuperError> {
        if hs.len() != self.level() + 1 {
            return Err(SuperError::Arity { expected: self.level() + 1, got: hs.len() });
        }
        let edges: Vec<APoint> = hs
            .windows(2)
            .map(|w| super_exp_mul(&APoint { x: w[0].x.negated(), ..w[0].clone() }, &w[1]))
            .collect::<Result<_, _>>()?;
        self.eval(&edges)
    }

    /// `(dF)(h₀, …, h_{p+1}) = Σ_i (−1)^i F(h₀, …, ĥ_i, …)`.
    pub fn homogeneous_coboundary_eval(&self, hs: &[APoint]) -> Result<GrassmannElement, SuperError> {
        let mut out = GrassmannElement::zero();
        for i in 0..hs.len() {
            let rest: Vec<APoint> = hs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, h)| h.clone()).collect();
            let v = self.homogeneous_eval(&rest)?;
            if i % 2 == 1 {
                out = out.minus(&v);
            } else {
                out.accumulate(&v);
            }
        }
        Ok(out)
    }
}

/// Result of a seeded cocycle verification.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CocycleReport {
    pub name: String,
    pub k: usize,
    pub grassmann: u32,
    pub level: usize,
    pub samples: usize,
    pub normalization_samples: usize,
}

/// Check `δ(∫ω)_A = 0` at seeded A-points over `ΛRⁿ`, and that `(∫ω)_A`
/// vanishes whenever an argument is the identity.
pub fn verify_group_cocycle(si: &SuperIntegral, k: usize, n: u32, samples: usize, seed: u64) -> Result<CocycleReport, SuperError> {
    let p = si.level();
    let g = si.algebra().clone();
    let mut rng = seeded_rng(seed);
    let draws: Vec<Vec<APoint>> =
        (0..samples).map(|_| (0..=p).map(|_| APoint::random(g.clone(), n, &mut rng)).collect()).collect();
    let holes: Vec<usize> = (0..samples).map(|_| rand::Rng::random_range(&mut rng, 0..p.max(1))).collect();
    draws.par_iter().zip(&holes).try_for_each(|(pts, &hole)| -> Result<(), SuperError> {
        let d = si.coboundary_eval(pts)?;
        if !d.is_zero() {
            return Err(SuperError::CocycleFailure {
                name: si.name().to_string(),
                defect: d.to_string(),
                point: pts.iter().map(APoint::to_strings).collect(),
            });
        }
        if p > 0 {
            let mut args = pts[..p].to_vec();
            args[hole] = APoint::zero(g.clone(), n);
            let v = si.eval(&args)?;
            if !v.is_zero() {
                return Err(SuperError::NotNormalized { name: si.name().to_string(), value: v.to_string() });
            }
        }
        Ok(())
    })?;
    Ok(CocycleReport { name: si.name().to_string(), k, grassmann: n, level: p, samples, normalization_samples: samples })
}

fn check_k(k: usize) -> Result<(), SuperError> {
    if matches!(k, 1 | 2 | 4 | 8) { Ok(()) } else { Err(SuperError::BadK(k)) }
}

/// `∫α` on the supertranslation group of dimension k+2.
pub fn superstring_integral(k: usize) -> Result<SuperIntegral, SuperError> {
    check_k(k)?;
    let alpha = make_alpha(k).map_err(|_| SuperError::BadK(k))?;
    Ok(super_integrate(&alpha, 3)?.with_name(format!("∫α, k={k}")))
}

/// `∫β` on the supertranslation group of dimension k+3.
pub fn twobrane_integral(k: usize) -> Result<SuperIntegral, SuperError> {
    check_k(k)?;
    let beta = make_beta(k).map_err(|_| SuperError::BadK(k))?;
    Ok(super_integrate(&beta, 4)?.with_name(format!("∫β, k={k}")))
}

/// The superstring Lie 2-supergroup cocycle: pentagon identity for `∫α`.
pub fn superstring_cocycle(k: usize, n: u32, samples: usize, seed: u64) -> Result<CocycleReport, SuperError> {
    verify_group_cocycle(&superstring_integral(k)?, k, n, samples, seed)
}

/// The 2-brane Lie 3-supergroup cocycle: pentagonator identity for `∫β`.
pub fn twobrane_cocycle(k: usize, n: u32, samples: usize, seed: u64) -> Result<CocycleReport, SuperError> {
    verify_group_cocycle(&twobrane_integral(k)?, k, n, samples, seed)
}

// ---------------------------------------------------------------- Lorentz action

/// Matrix of `ad(u∧v)` on the supertranslation ideal of the Poincaré
/// superalgebra, in supertranslation coordinates (row = output).
pub fn lorentz_derivation(k: usize, flavor: Flavor, u: &[Q], v: &[Q]) -> Result<Vec<Vec<Q>>, SuperError> {
    check_k(k)?;
    let p = build_poincare(k, flavor).map_err(|_| SuperError::BadK(k))?;
    let t = poincare_translation_indices(k, flavor);
    let nv = u.len();
    let mut m: GradedElement<Q> = GradedElement::zero(p.dim());
    for i in 0..nv {
        for j in (i + 1)..nv {
            let c = &u[i] * &v[j] - &u[j] * &v[i];
            m.coeffs[so_index(nv, i, j)] = c;
        }
    }
    let d = t.len();
    let mut out = vec![vec![Q::zero(); d]; d];
    for (col, &b) in t.iter().enumerate() {
        let img = p.bracket(&m, &GradedElement::basis(p.dim(), b));
        for (row, &a) in t.iter().enumerate() {
            out[row][col] = img.coeffs[a].clone();
        }
    }
    Ok(out)
}

fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| a[i].iter().zip(b).fold(Q::zero(), |s, (x, row)| if x.is_zero() { s } else { s + x * &row[j] }))
                .collect()
        })
        .collect()
}

/// `exp(D)` for a nilpotent matrix, or `None` if `D` is not nilpotent.
pub fn exp_nilpotent(d: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = d.len();
    let mut out: Vec<Vec<Q>> = (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect();
    let mut power = d.to_vec();
    let mut fact = Q::one();
    for j in 1..=n + 1 {
        if power.iter().flatten().all(Ring::is_zero) {
            return Some(out);
        }
        fact /= Q::from_integer(j.into());
        for (r, row) in power.iter().enumerate() {
            for (c, x) in row.iter().enumerate() {
                out[r][c] += x * &fact;
            }
        }
        power = mat_mul(&power, d);
    }
    None
}

/// Finite null rotation `exp(λ (e₀+e₁)∧e₂)` acting on supertranslations.
/// Both the vector and spinor parts of the generator are nilpotent, so
/// the exponential is an exact rational Lorentz transformation.
pub fn null_rotation(k: usize, flavor: Flavor, lambda: &Q) -> Result<Vec<Vec<Q>>, SuperError> {
    let nv = match flavor {
        Flavor::K2 => k + 2,
        Flavor::K3 => k + 3,
    };
    let mut u = vec![Q::zero(); nv];
    u[0] = lambda.clone();
    u[1] = lambda.clone();
    let mut v = vec![Q::zero(); nv];
    v[2] = Q::one();
    let d = lorentz_derivation(k, flavor, &u, &v)?;
    Ok(exp_nilpotent(&d).expect("null rotations are unipotent"))
}

/// `Σ_i ω(v₁, …, D v_i, …, v_p)` for a linear map `D` of the algebra.
pub fn pullback_derivative(omega: &Cochain, d: &[Vec<Q>]) -> Cochain {
    let g = omega.algebra().clone();
    let n = g.dim();
    let p = omega.level();
    let col = |b: usize| -> Vec<Q> { (0..n).map(|a| d[a][b].clone()).collect() };
    let unit = |b: usize| -> Vec<Q> { (0..n).map(|a| if a == b { Q::one() } else { Q::zero() }).collect() };
    let mut out = Cochain::zero(g.clone(), p);
    for t in crate::cohomology::canonical_monomials(&g, p) {
        let mut v = Q::zero();
        for i in 0..p {
            let args: Vec<Vec<Q>> = t.iter().enumerate().map(|(s, &b)| if s == i { col(b) } else { unit(b) }).collect();
            v += omega.evaluate_q(&args);
        }
        if !v.is_zero() {
            out.set(&t, v);
        }
    }
    out
}

/// Real linear map preserving parity and brackets.
pub fn is_automorphism(g: &LieSuperalgebra, m: &[Vec<Q>]) -> bool {
    let n = g.dim();
    let col = |b: usize| -> Vec<Q> { (0..n).map(|a| m[a][b].clone()).collect() };
    for a in 0..n {
        for b in 0..n {
            if g.parity(a) != g.parity(b) && !m[a][b].is_zero() {
                return false;
            }
        }
    }
    for i in 0..n {
        for j in i..n {
            let mut lhs = vec![Q::zero(); n];
            for (k, c) in g.bracket_basis(i, j) {
                for (a, x) in col(*k).iter().enumerate() {
                    lhs[a] += x * c;
                }
            }
            if lhs != g.bracket_q(&col(i), &col(j)) {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------- extension

/// Element `(g, n)` of `G ⋉ N` with `G` acting on `N` by linear automorphisms.
#[derive(Clone, Debug, PartialEq)]
pub struct SemidirectPoint {
    pub g: Vec<Vec<Q>>,
    pub n: APoint,
}

/// `F̃((g₀, n₀), …, (g_p, n_p)) = F(n₀, …, n_p)` for a homogeneous `F` on `N`.
#[derive(Clone, Debug)]
pub struct HomogeneousExtension {
    base: SuperIntegral,
}

pub fn homogeneous_extend(base: &SuperIntegral) -> HomogeneousExtension {
    HomogeneousExtension { base: base.clone() }
}

impl HomogeneousExtension {
    pub fn base(&self) -> &SuperIntegral {
        &self.base
    }

    /// `(g, n)(g', n') = (gg', n · (g·n'))`.
    pub fn mul(&self, a: &SemidirectPoint, b: &SemidirectPoint) -> Result<SemidirectPoint, SuperError> {
        Ok(SemidirectPoint { g: mat_mul(&a.g, &b.g), n: super_exp_mul(&a.n, &b.n.transform(&a.g))? })
    }

    pub fn eval(&self, pts: &[SemidirectPoint]) -> Result<GrassmannElement, SuperError> {
        let ns: Vec<APoint> = pts.iter().map(|p| p.n.clone()).collect();
        self.base.homogeneous_eval(&ns)
    }

    /// `F̃(s·x₀, …, s·x_p) − F̃(x₀, …, x_p)`; zero for all `s` iff `F` is `G`-equivariant.
    pub fn homogeneity_defect(&self, s: &SemidirectPoint, pts: &[SemidirectPoint]) -> Result<GrassmannElement, SuperError> {
        let moved: Vec<SemidirectPoint> = pts.iter().map(|p| self.mul(s, p)).collect::<Result<_, _>>()?;
        Ok(self.eval(&moved)?.minus(&self.eval(pts)?))
    }

    /// `Σ_i (−1)^i F̃(…, x̂_i, …)`.
    pub fn coboundary_eval(&self, pts: &[SemidirectPoint]) -> Result<GrassmannElement, SuperError> {
        let ns: Vec<APoint> = pts.iter().map(|p| p.n.clone()).collect();
        self.base.homogeneous_coboundary_eval(&ns)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{q, qi};
    use crate::superalgebra::build_supertranslation;

    #[test]
    fn grassmann_signs() {
        let t1 = GrassmannElement::theta(0);
        let t2 = GrassmannElement::theta(1);
        assert_eq!(t1.times(&t2), t2.times(&t1).negated());
        assert!(t1.times(&t1).is_zero());
        let t3 = GrassmannElement::theta(2);
        let a = t1.times(&t2).times(&t3);
        assert_eq!(a, t3.times(&t1).times(&t2));
        assert_eq!(a, t2.times(&t1).times(&t3).negated());
        let mut rng = seeded_rng(5);
        let alg = GrassmannAlgebra::new(4);
        for _ in 0..20 {
            let x = alg.random(Parity::Odd, &mut rng);
            assert!(x.times(&x).is_zero());
            let e = alg.random(Parity::Even, &mut rng);
            let y = alg.random(Parity::Odd, &mut rng);
            assert_eq!(e.times(&y), y.times(&e));
        }
    }

    #[test]
    fn odd_bracket_sign() {
        let g = Arc::new(build_supertranslation(1, Flavor::K2).unwrap());
        let s0 = g.index_of("s0").unwrap();
        let mut x: GradedElement<GrassmannElement> = GradedElement::zero(g.dim());
        x.coeffs[s0] = GrassmannElement::theta(0);
        let mut y: GradedElement<GrassmannElement> = GradedElement::zero(g.dim());
        y.coeffs[s0] = GrassmannElement::theta(1);
        let (x, y) = (APoint::new(g.clone(), 2, x).unwrap(), APoint::new(g.clone(), 2, y).unwrap());
        let b = a_bracket(&x, &y).unwrap();
        let real = g.bracket_q(&GradedElement::<Q>::basis(g.dim(), s0).coeffs, &GradedElement::<Q>::basis(g.dim(), s0).coeffs);
        let t21 = GrassmannElement::theta(1).times(&GrassmannElement::theta(0));
        for (i, c) in real.iter().enumerate() {
            assert_eq!(b.coeffs().coeffs[i], t21.scaled(c));
        }
        assert_eq!(a_bracket(&y, &x).unwrap().coeffs(), &b.coeffs().negated());
        // The symmetric spinor bracket survives as [θ₁s, θ₂s] ≠ 0 above, but
        // n_A is an ordinary Lie algebra over A₀, so [z, z] = 0.
        assert!(!b.is_zero());
        let z = x.plus(&y);
        assert!(a_bracket(&z, &z).unwrap().is_zero());
    }

    #[test]
    fn fast_and_generic_induced_cochains_agree() {
        let alpha = make_alpha(2).unwrap();
        let ind = induced_cochain(&alpha);
        let mut rng = seeded_rng(8);
        for n in [0, 2, 3] {
            let pts: Vec<APoint> = (0..3).map(|_| APoint::random(alpha.algebra().clone(), n, &mut rng)).collect();
            assert_eq!(ind.eval(&pts).unwrap(), ind.eval_generic(&pts));
        }
    }

    #[test]
    fn koszul_factor_on_a_mixed_monomial() {
        // α(θ₁θ₂ v, θ₃ s, θ₄ s') = θ₄ θ₃ θ₁θ₂ α(v, s, s').
        let alpha = make_alpha(1).unwrap();
        let g = alpha.algebra().clone();
        let (v, s) = (0, g.index_of("s0").unwrap());
        let mk = |i: usize, c: GrassmannElement| {
            let mut x: GradedElement<GrassmannElement> = GradedElement::zero(g.dim());
            x.coeffs[i] = c;
            APoint::new(g.clone(), 4, x).unwrap()
        };
        let t = GrassmannElement::theta;
        let pts = [mk(v, t(0).times(&t(1))), mk(s, t(2)), mk(s, t(3))];
        let real = alpha.evaluate_q(&[
            GradedElement::<Q>::basis(g.dim(), v).coeffs,
            GradedElement::<Q>::basis(g.dim(), s).coeffs,
            GradedElement::<Q>::basis(g.dim(), s).coeffs,
        ]);
        assert!(!real.is_zero());
        let expect = t(3).times(&t(2)).times(&t(0)).times(&t(1)).scaled(&real);
        assert_eq!(induced_cochain(&alpha).eval(&pts).unwrap(), expect);
    }

    #[test]
    fn exponential_null_rotation_is_an_automorphism() {
        let g = build_supertranslation(1, Flavor::K2).unwrap();
        let m = null_rotation(1, Flavor::K2, &q(3, 2)).unwrap();
        assert!(is_automorphism(&g, &m));
        let g3 = build_supertranslation(2, Flavor::K3).unwrap();
        assert!(is_automorphism(&g3, &null_rotation(2, Flavor::K3, &qi(-2)).unwrap()));
    }
}
