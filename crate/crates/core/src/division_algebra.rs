//! The normed division algebras R, C, H, O and real-trace calculus on matrices
//! over them.
//!
//! Multiplication comes from Cayley–Dickson doubling: an element of the doubled
//! algebra is a pair `(a, b)` with
//!
//! ```text
//! (a, b)(c, d) = (ac - d*b, da + bc*)      (a, b)* = (a*, -b)
//! ```
//!
//! Coordinates are on the basis `1, e1, ..., e_{k-1}`; the first half of the
//! coordinates is `a`, the second half `b`. With this layout the quaternion
//! table has `e1 e2 = e3`, and the octonion table has for instance
//! `e1 e2 = e3`, `e1 e4 = e5`, `e2 e4 = e6`, `e3 e4 = e7`. No particular sign
//! in the table matters downstream: every check asserts an identity.
//!
//! Coordinates may live in any commutative [`Ring`].

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ring::{Ring, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DivAlgError {
    #[error("division algebra tags differ: {0:?} vs {1:?}")]
    TagMismatch(AlgebraTag, AlgebraTag),
    #[error("expected {expected} coordinates, got {got}")]
    BadLength { expected: usize, got: usize },
    #[error("no normed division algebra of dimension {0}")]
    BadDimension(usize),
    #[error("matrix shapes do not compose: {0}")]
    Shape(String),
}

/// One of the four normed division algebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AlgebraTag {
    R,
    C,
    H,
    O,
}

impl AlgebraTag {
    pub const ALL: [AlgebraTag; 4] = [AlgebraTag::R, AlgebraTag::C, AlgebraTag::H, AlgebraTag::O];

    /// Real dimension k.
    pub fn dim(self) -> usize {
        match self {
            AlgebraTag::R => 1,
            AlgebraTag::C => 2,
            AlgebraTag::H => 4,
            AlgebraTag::O => 8,
        }
    }

    pub fn from_dim(k: usize) -> Result<Self, DivAlgError> {
        match k {
            1 => Ok(AlgebraTag::R),
            2 => Ok(AlgebraTag::C),
            4 => Ok(AlgebraTag::H),
            8 => Ok(AlgebraTag::O),
            _ => Err(DivAlgError::BadDimension(k)),
        }
    }

    /// Structure constants: `e_i e_j = sign · e_index`.
    pub fn table(self) -> &'static MulTable {
        static TABLES: OnceLock<[MulTable; 4]> = OnceLock::new();
        let all = TABLES.get_or_init(|| {
            [MulTable::build(1), MulTable::build(2), MulTable::build(4), MulTable::build(8)]
        });
        &all[self as usize]
    }
}

impl fmt::Display for AlgebraTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AlgebraTag::R => "R",
            AlgebraTag::C => "C",
            AlgebraTag::H => "H",
            AlgebraTag::O => "O",
        };
        f.write_str(s)
    }
}

/// Multiplication table of basis elements.
#[derive(Clone, Debug)]
pub struct MulTable {
    k: usize,
    entries: Vec<(i8, usize)>,
}

impl MulTable {
    fn build(k: usize) -> Self {
        let mut entries = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                let ei = unit::<Q>(k, i);
                let ej = unit::<Q>(k, j);
                let p = cd_mul(&ei, &ej);
                let (idx, c) = p
                    .iter()
                    .enumerate()
                    .find(|(_, c)| !Ring::is_zero(*c))
                    .expect("product of basis elements is a signed basis element");
                let sign = if *c == <Q as Ring>::one() { 1 } else { -1 };
                entries.push((sign, idx));
            }
        }
        MulTable { k, entries }
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    /// `(sign, index)` with `e_i e_j = sign · e_index`.
    pub fn get(&self, i: usize, j: usize) -> (i8, usize) {
        self.entries[i * self.k + j]
    }
}

fn unit<R: Ring>(k: usize, i: usize) -> Vec<R> {
    let mut v = vec![R::zero(); k];
    v[i] = R::one();
    v
}

/// Cayley–Dickson conjugate on raw coordinates.
pub fn cd_conj<R: Ring>(a: &[R]) -> Vec<R> {
    if a.len() == 1 {
        return a.to_vec();
    }
    let h = a.len() / 2;
    let mut out = cd_conj(&a[..h]);
    out.extend(a[h..].iter().map(R::negated));
    out
}

/// Cayley–Dickson product on raw coordinates (length a power of two).
pub fn cd_mul<R: Ring>(x: &[R], y: &[R]) -> Vec<R> {
    assert_eq!(x.len(), y.len());
    if x.len() == 1 {
        return vec![x[0].times(&y[0])];
    }
    let h = x.len() / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let ac = cd_mul(a, c);
    let dsb = cd_mul(&cd_conj(d), b);
    let da = cd_mul(d, a);
    let bcs = cd_mul(b, &cd_conj(c));
    let mut out: Vec<R> = ac.iter().zip(&dsb).map(|(p, q)| p.minus(q)).collect();
    out.extend(da.iter().zip(&bcs).map(|(p, q)| p.plus(q)));
    out
}

/// Element of R, C, H or O with coordinates in a commutative ring.
#[derive(Clone, PartialEq, Debug)]
pub struct DA<R = Q> {
    tag: AlgebraTag,
    coords: Vec<R>,
}

/// Division algebra element with rational coordinates.
pub type DAElement = DA<Q>;

impl<R: Ring> DA<R> {
    pub fn new(tag: AlgebraTag, coords: Vec<R>) -> Result<Self, DivAlgError> {
        if coords.len() != tag.dim() {
            return Err(DivAlgError::BadLength { expected: tag.dim(), got: coords.len() });
        }
        Ok(DA { tag, coords })
    }

    pub fn zero(tag: AlgebraTag) -> Self {
        DA { tag, coords: vec![R::zero(); tag.dim()] }
    }

    pub fn one(tag: AlgebraTag) -> Self {
        Self::basis(tag, 0)
    }

    /// `e_i`, with `e_0 = 1`.
    pub fn basis(tag: AlgebraTag, i: usize) -> Self {
        DA { tag, coords: unit(tag.dim(), i) }
    }

    pub fn real(tag: AlgebraTag, r: R) -> Self {
        let mut z = Self::zero(tag);
        z.coords[0] = r;
        z
    }

    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }

    pub fn coords(&self) -> &[R] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<R> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(R::is_zero)
    }

    fn check(&self, other: &Self) -> Result<(), DivAlgError> {
        if self.tag != other.tag {
            Err(DivAlgError::TagMismatch(self.tag, other.tag))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, DivAlgError> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, DivAlgError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &Self) -> Self {
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a.plus(b)).collect();
        DA { tag: self.tag, coords }
    }

    pub(crate) fn sub_unchecked(&self, other: &Self) -> Self {
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a.minus(b)).collect();
        DA { tag: self.tag, coords }
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let t = self.tag.table();
        let k = self.tag.dim();
        let mut out = vec![R::zero(); k];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let (s, idx) = t.get(i, j);
                let p = a.times(b);
                if s > 0 {
                    out[idx].accumulate(&p);
                } else {
                    out[idx] = out[idx].minus(&p);
                }
            }
        }
        DA { tag: self.tag, coords: out }
    }

    pub fn neg(&self) -> Self {
        DA { tag: self.tag, coords: self.coords.iter().map(R::negated).collect() }
    }

    pub fn scale(&self, r: &R) -> Self {
        DA { tag: self.tag, coords: self.coords.iter().map(|c| c.times(r)).collect() }
    }

    pub fn conj(&self) -> Self {
        let mut coords = self.coords.clone();
        for c in coords.iter_mut().skip(1) {
            *c = c.negated();
        }
        DA { tag: self.tag, coords }
    }

    /// Real part.
    pub fn re(&self) -> R {
        self.coords[0].clone()
    }

    /// Imaginary part `a - Re(a)`.
    pub fn im(&self) -> Self {
        let mut z = self.clone();
        z.coords[0] = R::zero();
        z
    }

    /// `|a|²`, read off as the real part of `a a*`.
    pub fn norm_sq(&self) -> R {
        self.mul_unchecked(&self.conj()).re()
    }

    /// `Re(a b*)`.
    pub fn inner(&self, other: &Self) -> Result<R, DivAlgError> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.conj()).re())
    }
}

/// `ab`, erroring on tag mismatch.
pub fn multiply<R: Ring>(a: &DA<R>, b: &DA<R>) -> Result<DA<R>, DivAlgError> {
    a.try_mul(b)
}

/// `(ab)c - a(bc)`.
pub fn associator<R: Ring>(a: &DA<R>, b: &DA<R>, c: &DA<R>) -> Result<DA<R>, DivAlgError> {
    a.check(b)?;
    a.check(c)?;
    let left = a.mul_unchecked(b).mul_unchecked(c);
    let right = a.mul_unchecked(&b.mul_unchecked(c));
    Ok(left.sub_unchecked(&right))
}

/// Rectangular matrix with entries in one division algebra.
#[derive(Clone, PartialEq, Debug)]
pub struct DAMatrix<R = Q> {
    tag: AlgebraTag,
    rows: usize,
    cols: usize,
    entries: Vec<DA<R>>,
}

impl<R: Ring> DAMatrix<R> {
    pub fn new(tag: AlgebraTag, rows: usize, cols: usize, entries: Vec<DA<R>>) -> Result<Self, DivAlgError> {
        if entries.len() != rows * cols {
            return Err(DivAlgError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(e) = entries.iter().find(|e| e.tag != tag) {
            return Err(DivAlgError::TagMismatch(tag, e.tag));
        }
        Ok(DAMatrix { tag, rows, cols, entries })
    }

    pub fn zeros(tag: AlgebraTag, rows: usize, cols: usize) -> Self {
        DAMatrix { tag, rows, cols, entries: vec![DA::zero(tag); rows * cols] }
    }

    pub fn identity(tag: AlgebraTag, n: usize) -> Self {
        let mut m = Self::zeros(tag, n, n);
        for i in 0..n {
            m.entries[i * n + i] = DA::one(tag);
        }
        m
    }

    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &DA<R> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: DA<R>) {
        assert_eq!(v.tag, self.tag);
        self.entries[i * self.cols + j] = v;
    }

    /// `(A*)ᵀ`.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.tag, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j * self.rows + i] = self.get(i, j).conj();
            }
        }
        out
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, DivAlgError> {
        if self.tag != other.tag {
            return Err(DivAlgError::TagMismatch(self.tag, other.tag));
        }
        if self.cols != other.rows {
            return Err(DivAlgError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.tag, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = DA::zero(self.tag);
                for l in 0..self.cols {
                    acc = acc.add_unchecked(&self.get(i, l).mul_unchecked(other.get(l, j)));
                }
                out.entries[i * other.cols + j] = acc;
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, DivAlgError> {
        if self.tag != other.tag {
            return Err(DivAlgError::TagMismatch(self.tag, other.tag));
        }
        if self.shape() != other.shape() {
            return Err(DivAlgError::Shape("addition of different shapes".into()));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.add_unchecked(b)).collect();
        Ok(DAMatrix { entries, ..self.clone() })
    }

    pub fn neg(&self) -> Self {
        DAMatrix { entries: self.entries.iter().map(DA::neg).collect(), ..self.clone() }
    }

    pub fn trace(&self) -> Result<DA<R>, DivAlgError> {
        if self.rows != self.cols {
            return Err(DivAlgError::Shape("trace of a non-square matrix".into()));
        }
        let mut acc = DA::zero(self.tag);
        for i in 0..self.rows {
            acc = acc.add_unchecked(self.get(i, i));
        }
        Ok(acc)
    }
}

/// `Re tr((AB)C)`; equal to `Re tr(A(BC))` and invariant under cyclic shifts.
pub fn re_trace<R: Ring>(a: &DAMatrix<R>, b: &DAMatrix<R>, c: &DAMatrix<R>) -> Result<R, DivAlgError> {
    let ab = a.try_mul(b)?;
    let abc = ab.try_mul(c)?;
    Ok(abc.trace()?.re())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{qi, random_q, seeded_rng};

    fn rand_el(tag: AlgebraTag, rng: &mut impl rand::Rng) -> DAElement {
        DA::new(tag, (0..tag.dim()).map(|_| random_q(rng, 9, 4)).collect()).unwrap()
    }

    #[test]
    fn table_matches_recursive_product() {
        let mut rng = seeded_rng(11);
        for tag in AlgebraTag::ALL {
            for _ in 0..20 {
                let a = rand_el(tag, &mut rng);
                let b = rand_el(tag, &mut rng);
                assert_eq!(a.try_mul(&b).unwrap().coords, cd_mul(&a.coords, &b.coords));
            }
        }
    }

    #[test]
    fn documented_table_entries() {
        let h = AlgebraTag::H.table();
        assert_eq!(h.get(1, 2), (1, 3));
        let o = AlgebraTag::O.table();
        assert_eq!(o.get(1, 2), (1, 3));
        assert_eq!(o.get(1, 4), (1, 5));
        assert_eq!(o.get(2, 4), (1, 6));
        assert_eq!(o.get(3, 4), (1, 7));
        for i in 1..8 {
            assert_eq!(o.get(i, i), (-1, 0));
        }
    }

    #[test]
    fn unit_and_mismatch() {
        let a = DA::new(AlgebraTag::H, vec![qi(1), qi(2), qi(3), qi(4)]).unwrap();
        assert_eq!(multiply(&DA::one(AlgebraTag::H), &a).unwrap(), a);
        assert_eq!(multiply(&a, &DA::one(AlgebraTag::H)).unwrap(), a);
        let c = DA::<Q>::one(AlgebraTag::C);
        assert!(matches!(multiply(&a, &c), Err(DivAlgError::TagMismatch(..))));
        assert!(DA::<Q>::new(AlgebraTag::O, vec![qi(1)]).is_err());
    }

    #[test]
    fn octonions_are_not_associative() {
        let e = |i| DA::<Q>::basis(AlgebraTag::O, i);
        let a = associator(&e(1), &e(2), &e(4)).unwrap();
        // (e1 e2) e4 = e3 e4 = e7 and e1 (e2 e4) = e1 e6 = -e7 in this table.
        assert_eq!(a, DA::basis(AlgebraTag::O, 7).scale(&qi(2)));
    }

    #[test]
    fn imaginary_conjugates_to_negative() {
        let mut rng = seeded_rng(3);
        for tag in AlgebraTag::ALL {
            let a = rand_el(tag, &mut rng).im();
            assert_eq!(a.conj(), a.neg());
        }
        assert_eq!(DA::<Q>::one(AlgebraTag::O).conj(), DA::one(AlgebraTag::O));
    }

    #[test]
    fn re_trace_of_identities() {
        let i = DAMatrix::<Q>::identity(AlgebraTag::R, 1);
        assert_eq!(re_trace(&i, &i, &i).unwrap(), qi(1));
        let z = DAMatrix::<Q>::zeros(AlgebraTag::O, 2, 3);
        let b = DAMatrix::<Q>::zeros(AlgebraTag::O, 3, 2);
        let c = DAMatrix::<Q>::identity(AlgebraTag::O, 2);
        assert_eq!(re_trace(&z, &b, &c).unwrap(), qi(0));
        assert!(re_trace(&z, &z, &c).is_err());
    }
}
