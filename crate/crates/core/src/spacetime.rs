//! Vectors and spinors in dimensions k+2 and k+3 built from a division
//! algebra K of dimension k.
//!
//! Real coordinate layouts, used everywhere a basis is needed:
//!
//! * `VectorK2` `(t, x, y)` is the hermitian matrix `((t+x, y), (y*, t-x))`;
//!   coordinates `[t, x, y_0, ..., y_{k-1}]`, metric `diag(-1, 1, ..., 1)`.
//! * `VectorK3` `(a, A)` is `((a, Ã), (A, -a))`; coordinates
//!   `[t, x, y_0, ..., y_{k-1}, a]`, metric `diag(-1, 1, ..., 1)`. Setting
//!   `a = 0` embeds `VectorK2` as a prefix.
//! * `SpinorK2` is a pair in K²; coordinates are the first entry's then the
//!   second entry's. `SpinorK3` is `S₊ ⊕ S₋`, plus part first.
//!
//! Clifford compositions are done with [`SpinorOperator`]s, real matrices on
//! these coordinates, never as products of K-matrices.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::division_algebra::{AlgebraTag, DAElement, DAMatrix, DivAlgError, DA};
use crate::ring::{q, Q};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpacetimeError {
    #[error("chirality mismatch: {0}")]
    Chirality(String),
    #[error(transparent)]
    Algebra(#[from] DivAlgError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chirality {
    Plus,
    Minus,
}

impl Chirality {
    pub fn flip(self) -> Self {
        match self {
            Chirality::Plus => Chirality::Minus,
            Chirality::Minus => Chirality::Plus,
        }
    }
}

/// Which spacetime a supertranslation algebra lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Flavor {
    /// Dimension k+2: vectors `h₂(K)`, odd part `S₊`.
    K2,
    /// Dimension k+3: vectors `𝒱`, odd part `𝒮 = S₊ ⊕ S₋`.
    K3,
}

/// Normalization of `σ(u∧v)` against the Clifford commutator. Fixed by the
/// equivariance relation `Γ(ρ(X)A) = [σ(X), Γ(A)]`; see the tests.
pub fn lorentz_scale() -> Q {
    q(1, 4)
}

// ---------------------------------------------------------------- operators

/// Exact rational matrix acting on real coordinates.
#[derive(Clone, PartialEq, Debug)]
pub struct SpinorOperator {
    rows: usize,
    cols: usize,
    m: Vec<Q>,
}

impl SpinorOperator {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SpinorOperator { rows, cols, m: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut o = Self::zeros(n, n);
        for i in 0..n {
            o.m[i * n + i] = Q::one();
        }
        o
    }

    /// Matrix whose j-th column is `f(e_j)`.
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(&[Q]) -> Vec<Q>) -> Self {
        let mut o = Self::zeros(rows, cols);
        for j in 0..cols {
            let mut e = vec![Q::zero(); cols];
            e[j] = Q::one();
            let col = f(&e);
            assert_eq!(col.len(), rows);
            for (i, v) in col.into_iter().enumerate() {
                o.m[i * cols + j] = v;
            }
        }
        o
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &Q {
        &self.m[i * self.cols + j]
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Q::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = &self.m[i * self.cols + j];
                    if !Zero::is_zero(a) && !Zero::is_zero(x) {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut o = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self.m[i * self.cols + l];
                if Zero::is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.m[l * other.cols + j];
                    if !Zero::is_zero(b) {
                        o.m[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        o
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let m = self.m.iter().zip(&other.m).map(|(a, b)| a + b).collect();
        SpinorOperator { m, ..*self }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let m = self.m.iter().zip(&other.m).map(|(a, b)| a - b).collect();
        SpinorOperator { m, ..*self }
    }

    pub fn scale(&self, s: &Q) -> Self {
        SpinorOperator { m: self.m.iter().map(|a| a * s).collect(), ..*self }
    }

    pub fn transpose(&self) -> Self {
        let mut o = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                o.m[j * self.rows + i] = self.m[i * self.cols + j].clone();
            }
        }
        o
    }

    /// `self ∘ other - other ∘ self`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.compose(other).sub(&other.compose(self))
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().all(Zero::is_zero)
    }

    /// Copy of the block `rows r0.., cols c0..` of the given size.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut o = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                o.m[i * cols + j] = self.m[(r0 + i) * self.cols + c0 + j].clone();
            }
        }
        o
    }
}

use num_traits::{One, Zero};

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

fn split_k(tag: AlgebraTag, coords: &[Q]) -> Vec<DAElement> {
    coords.chunks(tag.dim()).map(|c| DA::new(tag, c.to_vec()).expect("chunk length")).collect()
}

// ---------------------------------------------------------------- k+2

/// Vector in dimension k+2: the hermitian matrix `((t+x, y), (y*, t-x))`.
#[derive(Clone, PartialEq, Debug)]
pub struct VectorK2 {
    pub t: Q,
    pub x: Q,
    pub y: DAElement,
}

impl VectorK2 {
    pub fn new(t: Q, x: Q, y: DAElement) -> Self {
        VectorK2 { t, x, y }
    }

    pub fn zero(tag: AlgebraTag) -> Self {
        VectorK2 { t: Q::zero(), x: Q::zero(), y: DA::zero(tag) }
    }

    /// The identity matrix, `t = 1`.
    pub fn identity(tag: AlgebraTag) -> Self {
        VectorK2 { t: Q::one(), ..Self::zero(tag) }
    }

    pub fn tag(&self) -> AlgebraTag {
        self.y.tag()
    }

    pub fn dim(tag: AlgebraTag) -> usize {
        tag.dim() + 2
    }

    pub fn coords(&self) -> Vec<Q> {
        let mut v = vec![self.t.clone(), self.x.clone()];
        v.extend(self.y.coords().iter().cloned());
        v
    }

    pub fn from_coords(tag: AlgebraTag, c: &[Q]) -> Self {
        assert_eq!(c.len(), tag.dim() + 2);
        VectorK2 { t: c[0].clone(), x: c[1].clone(), y: DA::new(tag, c[2..].to_vec()).unwrap() }
    }

    pub fn basis(tag: AlgebraTag, i: usize) -> Self {
        let mut c = vec![Q::zero(); tag.dim() + 2];
        c[i] = Q::one();
        Self::from_coords(tag, &c)
    }

    pub fn to_matrix(&self) -> DAMatrix {
        let tag = self.tag();
        let tpx = DA::real(tag, &self.t + &self.x);
        let tmx = DA::real(tag, &self.t - &self.x);
        DAMatrix::new(tag, 2, 2, vec![tpx, self.y.clone(), self.y.conj(), tmx]).unwrap()
    }

    pub fn add(&self, o: &Self) -> Self {
        VectorK2 { t: &self.t + &o.t, x: &self.x + &o.x, y: self.y.add_unchecked(&o.y) }
    }

    pub fn scale(&self, s: &Q) -> Self {
        VectorK2 { t: &self.t * s, x: &self.x * s, y: self.y.scale(s) }
    }

    /// `det` of the hermitian matrix: `t² - x² - |y|²`.
    pub fn det(&self) -> Q {
        &self.t * &self.t - &self.x * &self.x - self.y.norm_sq()
    }

    /// Left multiplication on a pair in K².
    fn act(&self, p: &[DAElement; 2]) -> [DAElement; 2] {
        let tag = self.tag();
        let tpx = DA::real(tag, &self.t + &self.x);
        let tmx = DA::real(tag, &self.t - &self.x);
        let a = tpx.mul_unchecked(&p[0]).add_unchecked(&self.y.mul_unchecked(&p[1]));
        let b = self.y.conj().mul_unchecked(&p[0]).add_unchecked(&tmx.mul_unchecked(&p[1]));
        [a, b]
    }
}

/// `Ã = A - tr(A)·1`, i.e. `(t, x, y) ↦ (-t, x, y)`.
pub fn trace_reversal(a: &VectorK2) -> VectorK2 {
    VectorK2 { t: -a.t.clone(), ..a.clone() }
}

/// `g(A, B) = ½ Re tr(A B̃)`; `g(A, A) = -det A`.
pub fn minkowski_g(a: &VectorK2, b: &VectorK2) -> Q {
    -(&a.t * &b.t) + &a.x * &b.x + a.y.inner(&b.y).expect("same algebra")
}

/// Metric diagonal on the k+2 coordinate basis.
pub fn metric_k2(tag: AlgebraTag) -> Vec<Q> {
    let mut m = vec![Q::one(); tag.dim() + 2];
    m[0] = -Q::one();
    m
}

/// Spinor in `S₊` or `S₋`, a pair of division algebra elements.
#[derive(Clone, PartialEq, Debug)]
pub struct SpinorK2 {
    pub chirality: Chirality,
    pub entries: [DAElement; 2],
}

impl SpinorK2 {
    pub fn new(chirality: Chirality, a: DAElement, b: DAElement) -> Result<Self, SpacetimeError> {
        if a.tag() != b.tag() {
            return Err(DivAlgError::TagMismatch(a.tag(), b.tag()).into());
        }
        Ok(SpinorK2 { chirality, entries: [a, b] })
    }

    pub fn zero(tag: AlgebraTag, chirality: Chirality) -> Self {
        SpinorK2 { chirality, entries: [DA::zero(tag), DA::zero(tag)] }
    }

    pub fn tag(&self) -> AlgebraTag {
        self.entries[0].tag()
    }

    pub fn dim(tag: AlgebraTag) -> usize {
        2 * tag.dim()
    }

    pub fn coords(&self) -> Vec<Q> {
        self.entries.iter().flat_map(|e| e.coords().iter().cloned()).collect()
    }

    pub fn from_coords(tag: AlgebraTag, chirality: Chirality, c: &[Q]) -> Self {
        assert_eq!(c.len(), 2 * tag.dim());
        let parts = split_k(tag, c);
        SpinorK2 { chirality, entries: [parts[0].clone(), parts[1].clone()] }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.chirality, o.chirality);
        SpinorK2 {
            chirality: self.chirality,
            entries: [self.entries[0].add_unchecked(&o.entries[0]), self.entries[1].add_unchecked(&o.entries[1])],
        }
    }

    pub fn scale(&self, s: &Q) -> Self {
        SpinorK2 { chirality: self.chirality, entries: [self.entries[0].scale(s), self.entries[1].scale(s)] }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(DA::is_zero)
    }
}

/// `γ(A)ψ = Aψ` on `S₊`, `γ̃(A)ψ = Ãψ` on `S₋`; the result has the other chirality.
pub fn clifford_act_k2(a: &VectorK2, psi: &SpinorK2) -> Result<SpinorK2, SpacetimeError> {
    if a.tag() != psi.tag() {
        return Err(DivAlgError::TagMismatch(a.tag(), psi.tag()).into());
    }
    let m = match psi.chirality {
        Chirality::Plus => a.clone(),
        Chirality::Minus => trace_reversal(a),
    };
    Ok(SpinorK2 { chirality: psi.chirality.flip(), entries: m.act(&psi.entries) })
}

/// `⟨ψ, φ⟩ = Re(ψ†φ)` for `ψ ∈ S₊`, `φ ∈ S₋`.
pub fn pairing(psi: &SpinorK2, phi: &SpinorK2) -> Result<Q, SpacetimeError> {
    if psi.chirality != Chirality::Plus || phi.chirality != Chirality::Minus {
        return Err(SpacetimeError::Chirality("pairing takes (S₊, S₋)".into()));
    }
    Ok(herm_re(&psi.entries, &phi.entries))
}

fn herm_re(a: &[DAElement; 2], b: &[DAElement; 2]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (u, v)| acc + u.conj().mul_unchecked(v).re())
}

/// `[ψ, φ]`: `(ψφ† + φψ†)~` on `S₊`, `ψφ† + φψ†` on `S₋`.
pub fn bracket_spinors(psi: &SpinorK2, phi: &SpinorK2) -> Result<VectorK2, SpacetimeError> {
    if psi.chirality != phi.chirality {
        return Err(SpacetimeError::Chirality("bracket needs equal chiralities".into()));
    }
    let [p1, p2] = &psi.entries;
    let [f1, f2] = &phi.entries;
    let m11 = p1.mul_unchecked(&f1.conj()).add_unchecked(&f1.mul_unchecked(&p1.conj())).re();
    let m22 = p2.mul_unchecked(&f2.conj()).add_unchecked(&f2.mul_unchecked(&p2.conj())).re();
    let m12 = p1.mul_unchecked(&f2.conj()).add_unchecked(&f1.mul_unchecked(&p2.conj()));
    let half = q(1, 2);
    let v = VectorK2 { t: (&m11 + &m22) * &half, x: (&m11 - &m22) * &half, y: m12 };
    Ok(match psi.chirality {
        Chirality::Plus => trace_reversal(&v),
        Chirality::Minus => v,
    })
}

/// `[ψ, ψ]ψ`, which vanishes identically.
pub fn three_psi(psi: &SpinorK2) -> SpinorK2 {
    let v = bracket_spinors(psi, psi).expect("same chirality");
    clifford_act_k2(&v, psi).expect("same algebra")
}

/// `[ψ, φ]χ + [χ, ψ]φ + [φ, χ]ψ`, the polarized 3-ψ expression.
pub fn check_trilinear_sym(psi: &SpinorK2, phi: &SpinorK2, chi: &SpinorK2) -> Result<SpinorK2, SpacetimeError> {
    let a = clifford_act_k2(&bracket_spinors(psi, phi)?, chi)?;
    let b = clifford_act_k2(&bracket_spinors(chi, psi)?, phi)?;
    let c = clifford_act_k2(&bracket_spinors(phi, chi)?, psi)?;
    Ok(a.add(&b).add(&c))
}

// ---------------------------------------------------------------- k+3

/// Vector in dimension k+3: `((a, Ã), (A, -a))`.
#[derive(Clone, PartialEq, Debug)]
pub struct VectorK3 {
    pub a: Q,
    pub inner: VectorK2,
}

impl VectorK3 {
    pub fn new(a: Q, inner: VectorK2) -> Self {
        VectorK3 { a, inner }
    }

    pub fn zero(tag: AlgebraTag) -> Self {
        VectorK3 { a: Q::zero(), inner: VectorK2::zero(tag) }
    }

    pub fn tag(&self) -> AlgebraTag {
        self.inner.tag()
    }

    pub fn dim(tag: AlgebraTag) -> usize {
        tag.dim() + 3
    }

    pub fn coords(&self) -> Vec<Q> {
        let mut v = self.inner.coords();
        v.push(self.a.clone());
        v
    }

    pub fn from_coords(tag: AlgebraTag, c: &[Q]) -> Self {
        let n = tag.dim() + 2;
        assert_eq!(c.len(), n + 1);
        VectorK3 { a: c[n].clone(), inner: VectorK2::from_coords(tag, &c[..n]) }
    }

    pub fn basis(tag: AlgebraTag, i: usize) -> Self {
        let mut c = vec![Q::zero(); tag.dim() + 3];
        c[i] = Q::one();
        Self::from_coords(tag, &c)
    }

    /// The 4×4 K-matrix `((a, Ã), (A, -a))`.
    pub fn to_matrix(&self) -> DAMatrix {
        let tag = self.tag();
        let a = self.inner.to_matrix();
        let at = trace_reversal(&self.inner).to_matrix();
        let mut m = DAMatrix::zeros(tag, 4, 4);
        for i in 0..2 {
            m.set(i, i, DA::real(tag, self.a.clone()));
            m.set(i + 2, i + 2, DA::real(tag, -self.a.clone()));
            for j in 0..2 {
                m.set(i, j + 2, at.get(i, j).clone());
                m.set(i + 2, j, a.get(i, j).clone());
            }
        }
        m
    }
}

/// `h(𝒜, ℬ) = g(A, B) + ab`.
pub fn minkowski_h(a: &VectorK3, b: &VectorK3) -> Q {
    minkowski_g(&a.inner, &b.inner) + &a.a * &b.a
}

/// Metric diagonal on the k+3 coordinate basis.
pub fn metric_k3(tag: AlgebraTag) -> Vec<Q> {
    let mut m = vec![Q::one(); tag.dim() + 3];
    m[0] = -Q::one();
    m
}

/// Spinor in `𝒮 = S₊ ⊕ S₋`.
#[derive(Clone, PartialEq, Debug)]
pub struct SpinorK3 {
    pub plus: SpinorK2,
    pub minus: SpinorK2,
}

impl SpinorK3 {
    pub fn new(plus: SpinorK2, minus: SpinorK2) -> Result<Self, SpacetimeError> {
        if plus.chirality != Chirality::Plus || minus.chirality != Chirality::Minus {
            return Err(SpacetimeError::Chirality("𝒮 is S₊ ⊕ S₋".into()));
        }
        Ok(SpinorK3 { plus, minus })
    }

    pub fn tag(&self) -> AlgebraTag {
        self.plus.tag()
    }

    pub fn dim(tag: AlgebraTag) -> usize {
        4 * tag.dim()
    }

    pub fn coords(&self) -> Vec<Q> {
        let mut v = self.plus.coords();
        v.extend(self.minus.coords());
        v
    }

    pub fn from_coords(tag: AlgebraTag, c: &[Q]) -> Self {
        let n = 2 * tag.dim();
        assert_eq!(c.len(), 2 * n);
        SpinorK3 {
            plus: SpinorK2::from_coords(tag, Chirality::Plus, &c[..n]),
            minus: SpinorK2::from_coords(tag, Chirality::Minus, &c[n..]),
        }
    }
}

/// `Γ(𝒜)(ψ, φ) = (aψ + Ãφ, Aψ - aφ)`.
pub fn clifford_act_k3(a: &VectorK3, psi: &SpinorK3) -> SpinorK3 {
    let tilde = trace_reversal(&a.inner);
    let ap = psi.plus.scale(&a.a);
    let am = psi.minus.scale(&-a.a.clone());
    let top = SpinorK2 { chirality: Chirality::Plus, entries: tilde.act(&psi.minus.entries) }.add(&ap);
    let bot = SpinorK2 { chirality: Chirality::Minus, entries: a.inner.act(&psi.plus.entries) }.add(&am);
    SpinorK3 { plus: top, minus: bot }
}

/// `⟨Ψ, Φ⟩ = Re(Ψ†Γ⁰Φ)` with `Γ⁰ = ((0, -1), (1, 0))`; skew-symmetric.
pub fn pairing_big(psi: &SpinorK3, phi: &SpinorK3) -> Q {
    herm_re(&psi.minus.entries, &phi.plus.entries) - herm_re(&psi.plus.entries, &phi.minus.entries)
}

/// The vector with `h([Ψ, Φ], 𝒜) = ⟨Ψ, Γ(𝒜)Φ⟩`, by the block formula
/// `V`-part `-[ψ₁, φ₁] + [ψ₂, φ₂]`, extra coordinate `⟨ψ₁, φ₂⟩ + ⟨φ₁, ψ₂⟩`.
pub fn bracket_big(psi: &SpinorK3, phi: &SpinorK3) -> VectorK3 {
    let b1 = bracket_spinors(&psi.plus, &phi.plus).expect("plus");
    let b2 = bracket_spinors(&psi.minus, &phi.minus).expect("minus");
    let inner = b2.add(&b1.scale(&-Q::one()));
    let a = pairing(&psi.plus, &phi.minus).expect("chirality") + pairing(&phi.plus, &psi.minus).expect("chirality");
    VectorK3 { a, inner }
}

/// `[Ψ, [Ψ, Ψ]Ψ]`, which vanishes identically.
pub fn four_psi(psi: &SpinorK3) -> VectorK3 {
    let v = bracket_big(psi, psi);
    let w = clifford_act_k3(&v, psi);
    bracket_big(psi, &w)
}

/// `⟨Ψ, (𝒜ℬ - ℬ𝒜)Φ⟩`, with the products composed as operators.
pub fn star_form(psi: &SpinorK3, phi: &SpinorK3, a: &VectorK3, b: &VectorK3) -> Q {
    let ab = clifford_act_k3(a, &clifford_act_k3(b, phi));
    let ba = clifford_act_k3(b, &clifford_act_k3(a, phi));
    let diff: Vec<Q> = ab.coords().iter().zip(ba.coords()).map(|(x, y)| x - y).collect();
    pairing_big(psi, &SpinorK3::from_coords(psi.tag(), &diff))
}

// ---------------------------------------------------------------- operators per basis

/// Clifford data for one spacetime: metric, `Γ` of every basis vector as an
/// operator on the full spinor space `S₊ ⊕ S₋` (real dimension 4k), and the
/// pairing matrix on the odd part of the supertranslation algebra.
#[derive(Clone, Debug)]
pub struct Spacetime {
    pub tag: AlgebraTag,
    pub flavor: Flavor,
    metric: Vec<Q>,
    gammas: Vec<SpinorOperator>,
}

impl Spacetime {
    pub fn new(tag: AlgebraTag, flavor: Flavor) -> Self {
        let k = tag.dim();
        let metric = match flavor {
            Flavor::K2 => metric_k2(tag),
            Flavor::K3 => metric_k3(tag),
        };
        let n = metric.len();
        let gammas = (0..n)
            .map(|i| {
                let mut c = vec![Q::zero(); k + 3];
                c[i] = Q::one();
                let v = VectorK3::from_coords(tag, &c);
                SpinorOperator::from_fn(4 * k, 4 * k, |x| clifford_act_k3(&v, &SpinorK3::from_coords(tag, x)).coords())
            })
            .collect();
        Spacetime { tag, flavor, metric, gammas }
    }

    pub fn vector_dim(&self) -> usize {
        self.metric.len()
    }

    /// Real dimension of the odd part: `2k` for k+2, `4k` for k+3.
    pub fn spinor_dim(&self) -> usize {
        match self.flavor {
            Flavor::K2 => 2 * self.tag.dim(),
            Flavor::K3 => 4 * self.tag.dim(),
        }
    }

    pub fn metric(&self) -> &[Q] {
        &self.metric
    }

    pub fn g(&self, a: &[Q], b: &[Q]) -> Q {
        a.iter().zip(b).zip(&self.metric).fold(Q::zero(), |acc, ((x, y), m)| acc + x * y * m)
    }

    /// `Γ(e_i)` on `S₊ ⊕ S₋`.
    pub fn gamma(&self, i: usize) -> &SpinorOperator {
        &self.gammas[i]
    }

    /// `Γ(v)` on `S₊ ⊕ S₋` for a coordinate vector.
    pub fn gamma_of(&self, v: &[Q]) -> SpinorOperator {
        let n = 4 * self.tag.dim();
        v.iter().enumerate().fold(SpinorOperator::zeros(n, n), |acc, (i, c)| {
            if Zero::is_zero(c) {
                acc
            } else {
                acc.add(&self.gammas[i].scale(c))
            }
        })
    }

    /// Restriction of an operator on `S₊ ⊕ S₋` to the odd part.
    pub fn restrict(&self, op: &SpinorOperator) -> SpinorOperator {
        let d = self.spinor_dim();
        op.block(0, 0, d, d)
    }

    /// The odd-odd bracket on coordinate spinors, as vector coordinates.
    pub fn odd_bracket(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        match self.flavor {
            Flavor::K2 => {
                let pa = SpinorK2::from_coords(self.tag, Chirality::Plus, a);
                let pb = SpinorK2::from_coords(self.tag, Chirality::Plus, b);
                bracket_spinors(&pa, &pb).unwrap().coords()
            }
            Flavor::K3 => bracket_big(&SpinorK3::from_coords(self.tag, a), &SpinorK3::from_coords(self.tag, b)).coords(),
        }
    }

    /// Matrix `P` with `⟨Ψ, Φ⟩ = Ψᵀ P Φ` on the odd part (k+3), or the
    /// `S₊ × S₋` pairing matrix (k+2, a 2k×2k block).
    pub fn pairing_matrix(&self) -> SpinorOperator {
        let tag = self.tag;
        match self.flavor {
            Flavor::K2 => {
                let n = 2 * tag.dim();
                let mut p = SpinorOperator::zeros(n, n);
                for i in 0..n {
                    for j in 0..n {
                        let mut a = vec![Q::zero(); n];
                        a[i] = Q::one();
                        let mut b = vec![Q::zero(); n];
                        b[j] = Q::one();
                        let v = pairing(
                            &SpinorK2::from_coords(tag, Chirality::Plus, &a),
                            &SpinorK2::from_coords(tag, Chirality::Minus, &b),
                        )
                        .unwrap();
                        p.m[i * n + j] = v;
                    }
                }
                p
            }
            Flavor::K3 => {
                let n = 4 * tag.dim();
                let mut p = SpinorOperator::zeros(n, n);
                for i in 0..n {
                    for j in 0..n {
                        let mut a = vec![Q::zero(); n];
                        a[i] = Q::one();
                        let mut b = vec![Q::zero(); n];
                        b[j] = Q::one();
                        p.m[i * n + j] =
                            pairing_big(&SpinorK3::from_coords(tag, &a), &SpinorK3::from_coords(tag, &b));
                    }
                }
                p
            }
        }
    }

    /// `σ(u∧v)` on `S₊ ⊕ S₋` and `ρ(u∧v)` on vectors.
    pub fn lorentz_generator(&self, u: &[Q], v: &[Q]) -> LorentzGenerator {
        let gu = self.gamma_of(u);
        let gv = self.gamma_of(v);
        let spinor = gu.commutator(&gv).scale(&lorentz_scale());
        let n = self.vector_dim();
        let vector = SpinorOperator::from_fn(n, n, |a| {
            let gva = self.g(v, a);
            let gua = self.g(u, a);
            u.iter().zip(v).map(|(ui, vi)| &gva * ui - &gua * vi).collect()
        });
        LorentzGenerator { spinor, vector }
    }

    /// Value of `α(A, ψ, φ) = g([ψ, φ], A)` on coordinates.
    pub fn alpha(&self, a: &[Q], psi: &[Q], phi: &[Q]) -> Q {
        self.g(&self.odd_bracket(psi, phi), a)
    }

    /// Value of `β(𝒜, ℬ, Ψ, Φ) = ⟨Ψ, (𝒜ℬ - ℬ𝒜)Φ⟩` on coordinates.
    pub fn beta(&self, a: &[Q], b: &[Q], psi: &[Q], phi: &[Q]) -> Q {
        let c = self.gamma_of(a).commutator(&self.gamma_of(b));
        let tag = self.tag;
        pairing_big(&SpinorK3::from_coords(tag, psi), &SpinorK3::from_coords(tag, &c.apply(phi)))
    }
}

/// An infinitesimal Lorentz transformation `u∧v`.
#[derive(Clone, Debug, PartialEq)]
pub struct LorentzGenerator {
    /// `σ(u∧v)` on `S₊ ⊕ S₋`; block diagonal for k+2 vectors.
    pub spinor: SpinorOperator,
    /// `ρ(u∧v)A = g(v, A)u - g(u, A)v`.
    pub vector: SpinorOperator,
}

/// `σ(u∧v)`, `ρ(u∧v)` in dimension k+2. Spinor operator is on `S₊ ⊕ S₋`.
pub fn lorentz_generator_k2(u: &VectorK2, v: &VectorK2) -> LorentzGenerator {
    let st = Spacetime::new(u.tag(), Flavor::K2);
    st.lorentz_generator(&u.coords(), &v.coords())
}

/// `σ(u∧v)`, `ρ(u∧v)` in dimension k+3.
pub fn lorentz_generator_k3(u: &VectorK3, v: &VectorK3) -> LorentzGenerator {
    let st = Spacetime::new(u.tag(), Flavor::K3);
    st.lorentz_generator(&u.coords(), &v.coords())
}

/// `Γ⁰` as a 4×4 K-matrix.
pub fn gamma0(tag: AlgebraTag) -> DAMatrix {
    let mut m = DAMatrix::zeros(tag, 4, 4);
    for i in 0..2 {
        m.set(i, i + 2, DA::real(tag, -Q::one()));
        m.set(i + 2, i, DA::one(tag));
    }
    m
}

pub fn dot_coords(a: &[Q], b: &[Q]) -> Q {
    dot(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{qi, random_q, seeded_rng};
    use rand::Rng;

    fn rv(_tag: AlgebraTag, n: usize, rng: &mut impl Rng) -> Vec<Q> {
        (0..n).map(|_| random_q(rng, 5, 3)).collect()
    }

    fn rk2(tag: AlgebraTag, rng: &mut impl Rng) -> VectorK2 {
        VectorK2::from_coords(tag, &rv(tag, tag.dim() + 2, rng))
    }

    fn rs2(tag: AlgebraTag, c: Chirality, rng: &mut impl Rng) -> SpinorK2 {
        SpinorK2::from_coords(tag, c, &rv(tag, 2 * tag.dim(), rng))
    }

    fn rs3(tag: AlgebraTag, rng: &mut impl Rng) -> SpinorK3 {
        SpinorK3::from_coords(tag, &rv(tag, 4 * tag.dim(), rng))
    }

    #[test]
    fn trace_reversal_examples() {
        let tag = AlgebraTag::C;
        let a = VectorK2::identity(tag);
        assert_eq!(trace_reversal(&a).t, qi(-1));
        let mut rng = seeded_rng(1);
        let b = rk2(tag, &mut rng);
        assert_eq!(trace_reversal(&trace_reversal(&b)), b);
    }

    #[test]
    fn a_times_a_tilde_is_minus_det() {
        let mut rng = seeded_rng(2);
        for tag in AlgebraTag::ALL {
            let a = rk2(tag, &mut rng);
            let p = a.to_matrix().try_mul(&trace_reversal(&a).to_matrix()).unwrap();
            let d = a.det();
            for i in 0..2 {
                for j in 0..2 {
                    let want = if i == j { DA::real(tag, -d.clone()) } else { DA::zero(tag) };
                    assert_eq!(p.get(i, j), &want);
                }
            }
            assert_eq!(minkowski_g(&a, &a), -a.det());
        }
    }

    #[test]
    fn metric_examples() {
        let tag = AlgebraTag::R;
        assert_eq!(minkowski_g(&VectorK2::identity(tag), &VectorK2::identity(tag)), qi(-1));
        let null = VectorK2::new(qi(1), qi(1), DA::zero(tag));
        assert_eq!(minkowski_g(&null, &null), qi(0));
        let x = VectorK3::new(qi(1), VectorK2::zero(tag));
        assert_eq!(minkowski_h(&x, &x), qi(1));
    }

    #[test]
    fn g_is_half_real_trace() {
        let mut rng = seeded_rng(3);
        for tag in AlgebraTag::ALL {
            let a = rk2(tag, &mut rng);
            let b = rk2(tag, &mut rng);
            let p = a.to_matrix().try_mul(&trace_reversal(&b).to_matrix()).unwrap();
            assert_eq!(p.trace().unwrap().re() * q(1, 2), minkowski_g(&a, &b));
        }
    }

    #[test]
    fn h_is_quarter_real_trace() {
        let mut rng = seeded_rng(4);
        for tag in AlgebraTag::ALL {
            let a = VectorK3::from_coords(tag, &rv(tag, tag.dim() + 3, &mut rng));
            let b = VectorK3::from_coords(tag, &rv(tag, tag.dim() + 3, &mut rng));
            let p = a.to_matrix().try_mul(&b.to_matrix()).unwrap();
            assert_eq!(p.trace().unwrap().re() * q(1, 4), minkowski_h(&a, &b));
        }
    }

    #[test]
    fn clifford_relation() {
        let mut rng = seeded_rng(5);
        for tag in AlgebraTag::ALL {
            let a = rk2(tag, &mut rng);
            let psi = rs2(tag, Chirality::Plus, &mut rng);
            let twice = clifford_act_k2(&a, &clifford_act_k2(&a, &psi).unwrap()).unwrap();
            assert_eq!(twice, psi.scale(&minkowski_g(&a, &a)));
            let psi = rs2(tag, Chirality::Minus, &mut rng);
            let twice = clifford_act_k2(&a, &clifford_act_k2(&a, &psi).unwrap()).unwrap();
            assert_eq!(twice, psi.scale(&minkowski_g(&a, &a)));
            let big = VectorK3::from_coords(tag, &rv(tag, tag.dim() + 3, &mut rng));
            let p = rs3(tag, &mut rng);
            let twice = clifford_act_k3(&big, &clifford_act_k3(&big, &p));
            let h = minkowski_h(&big, &big);
            assert_eq!(twice.coords(), p.coords().iter().map(|c| c * &h).collect::<Vec<_>>());
        }
    }

    #[test]
    fn identity_vector_acts_trivially() {
        let mut rng = seeded_rng(6);
        let tag = AlgebraTag::O;
        let psi = rs2(tag, Chirality::Plus, &mut rng);
        let out = clifford_act_k2(&VectorK2::identity(tag), &psi).unwrap();
        assert_eq!(out.entries, psi.entries);
        assert_eq!(out.chirality, Chirality::Minus);
    }

    #[test]
    fn bracket_defining_properties() {
        let mut rng = seeded_rng(7);
        for tag in AlgebraTag::ALL {
            let psi = rs2(tag, Chirality::Plus, &mut rng);
            let phi = rs2(tag, Chirality::Plus, &mut rng);
            let a = rk2(tag, &mut rng);
            let lhs = minkowski_g(&bracket_spinors(&psi, &phi).unwrap(), &a);
            assert_eq!(lhs, pairing(&psi, &clifford_act_k2(&a, &phi).unwrap()).unwrap());
            let psi = rs2(tag, Chirality::Minus, &mut rng);
            let phi = rs2(tag, Chirality::Minus, &mut rng);
            let lhs = minkowski_g(&bracket_spinors(&psi, &phi).unwrap(), &a);
            assert_eq!(lhs, pairing(&clifford_act_k2(&a, &psi).unwrap(), &phi).unwrap());
        }
    }

    #[test]
    fn big_bracket_matches_duality() {
        let mut rng = seeded_rng(8);
        for tag in AlgebraTag::ALL {
            let psi = rs3(tag, &mut rng);
            let phi = rs3(tag, &mut rng);
            let b = bracket_big(&psi, &phi);
            assert_eq!(b, bracket_big(&phi, &psi));
            for i in 0..tag.dim() + 3 {
                let e = VectorK3::basis(tag, i);
                assert_eq!(minkowski_h(&b, &e), pairing_big(&psi, &clifford_act_k3(&e, &phi)));
            }
        }
    }

    #[test]
    fn big_pairing_is_skew_and_reflects() {
        let mut rng = seeded_rng(9);
        for tag in AlgebraTag::ALL {
            let psi = rs3(tag, &mut rng);
            let phi = rs3(tag, &mut rng);
            assert_eq!(pairing_big(&psi, &phi), -pairing_big(&phi, &psi));
            let a = VectorK3::from_coords(tag, &rv(tag, tag.dim() + 3, &mut rng));
            let lhs = pairing_big(&clifford_act_k3(&a, &psi), &clifford_act_k3(&a, &phi));
            assert_eq!(lhs, -minkowski_h(&a, &a) * pairing_big(&psi, &phi));
        }
    }

    #[test]
    fn gamma0_intertwines_adjoint() {
        let mut rng = seeded_rng(10);
        for tag in AlgebraTag::ALL {
            let a = VectorK3::from_coords(tag, &rv(tag, tag.dim() + 3, &mut rng)).to_matrix();
            let g0 = gamma0(tag);
            assert_eq!(a.adjoint().try_mul(&g0).unwrap(), g0.try_mul(&a).unwrap().neg());
        }
    }

    #[test]
    fn lorentz_scale_solves_equivariance() {
        // Solve [σ, Γ(A)] = Γ(ρA) for the scalar on one basis pair, then
        // check the stored constant against it.
        for tag in AlgebraTag::ALL {
            for flavor in [Flavor::K2, Flavor::K3] {
                let st = Spacetime::new(tag, flavor);
                let n = st.vector_dim();
                let e = |i: usize| {
                    let mut v = vec![Q::zero(); n];
                    v[i] = Q::one();
                    v
                };
                let comm = st.gamma(0).commutator(st.gamma(1));
                let rho = SpinorOperator::from_fn(n, n, |a| {
                    let gva = st.g(&e(1), a);
                    let gua = st.g(&e(0), a);
                    e(0).iter().zip(e(1)).map(|(ui, vi)| &gva * ui - &gua * &vi).collect()
                });
                let lhs = comm.commutator(st.gamma(0));
                let rhs = st.gamma_of(&rho.apply(&e(0)));
                let (i, j) = (0..rhs.rows())
                    .flat_map(|i| (0..rhs.cols()).map(move |j| (i, j)))
                    .find(|&(i, j)| !Zero::is_zero(rhs.entry(i, j)))
                    .unwrap();
                let c = rhs.entry(i, j) / lhs.entry(i, j);
                assert_eq!(c, lorentz_scale());
            }
        }
    }

    #[test]
    fn lorentz_equivariance_and_antisymmetry() {
        let mut rng = seeded_rng(12);
        for tag in AlgebraTag::ALL {
            for flavor in [Flavor::K2, Flavor::K3] {
                let st = Spacetime::new(tag, flavor);
                let n = st.vector_dim();
                let u = rv(tag, n, &mut rng);
                let v = rv(tag, n, &mut rng);
                let x = st.lorentz_generator(&u, &v);
                let a = rv(tag, n, &mut rng);
                let b = rv(tag, n, &mut rng);
                let lhs = st.gamma_of(&x.vector.apply(&a));
                assert_eq!(lhs, x.spinor.commutator(&st.gamma_of(&a)));
                let s = st.g(&x.vector.apply(&a), &b) + st.g(&a, &x.vector.apply(&b));
                assert_eq!(s, qi(0));
                let z = st.lorentz_generator(&u, &u);
                assert!(z.spinor.is_zero() && z.vector.is_zero());
            }
        }
    }

    #[test]
    fn spinor_identities_small_sample() {
        let mut rng = seeded_rng(13);
        for tag in AlgebraTag::ALL {
            for c in [Chirality::Plus, Chirality::Minus] {
                let psi = rs2(tag, c, &mut rng);
                assert!(three_psi(&psi).is_zero());
                let v = bracket_spinors(&psi, &psi).unwrap();
                assert_eq!(minkowski_g(&v, &v), qi(0));
            }
            let p = rs3(tag, &mut rng);
            assert_eq!(four_psi(&p), VectorK3::zero(tag));
        }
    }

    #[test]
    fn star_form_symmetries() {
        let mut rng = seeded_rng(14);
        for tag in AlgebraTag::ALL {
            let p = rs3(tag, &mut rng);
            let f = rs3(tag, &mut rng);
            let a = VectorK3::from_coords(tag, &rv(tag, tag.dim() + 3, &mut rng));
            let b = VectorK3::from_coords(tag, &rv(tag, tag.dim() + 3, &mut rng));
            assert_eq!(star_form(&p, &f, &a, &a), qi(0));
            assert_eq!(star_form(&p, &f, &a, &b), star_form(&f, &p, &a, &b));
            assert_eq!(star_form(&p, &f, &a, &b), -star_form(&p, &f, &b, &a));
            let pp = bracket_big(&p, &p);
            assert_eq!(star_form(&p, &p, &a, &pp), qi(0));
        }
    }
}
