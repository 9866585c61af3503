//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Variables are plain `u32` indices; a monomial is the sorted list of
//! `(variable, exponent)` pairs with positive exponents. Zero coefficients
//! are never stored, so equality is structural.

use std::collections::BTreeMap;
use std::fmt;

use crate::ring::{q_to_string, Ring, Q};

/// Sorted `(variable, exponent)` pairs, exponents positive.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial(pub Vec<(u32, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: u32) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: u32) -> u32 {
        self.0.iter().find(|&&(w, _)| w == v).map_or(0, |&(_, e)| e)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    fn without(&self, v: u32) -> Self {
        Monomial(self.0.iter().copied().filter(|&(w, _)| w != v).collect())
    }
}

/// Polynomial in formal variables with rational coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn constant(c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    pub fn var(v: u32) -> Self {
        Self::term(Monomial::var(v), Q::one())
    }

    pub fn term(m: Monomial, c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&Monomial::one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.0.is_empty())
    }

    pub fn add_term(&mut self, m: Monomial, c: &Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Poly, s: &Q) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), &(c * s));
        }
    }

    /// Variables that occur with a nonzero coefficient.
    pub fn variables(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.terms.keys().flat_map(|m| m.0.iter().map(|&(x, _)| x)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn derivative(&self, v: u32) -> Poly {
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let mut rest = m.without(v);
            if e > 1 {
                rest = rest.mul(&Monomial(vec![(v, e - 1)]));
            }
            out.add_term(rest, &(c * Q::from_integer(e.into())));
        }
        out
    }

    /// `∫₀¹ dt_v` for each listed variable: `t^a ↦ 1/(a+1)`.
    pub fn integrate_unit(&self, vars: &[u32]) -> Poly {
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            let mut f = c.clone();
            let mut rest = m.clone();
            for &v in vars {
                let e = rest.exponent(v);
                f /= Q::from_integer((e + 1).into());
                rest = rest.without(v);
            }
            out.add_term(rest, &f);
        }
        out
    }

    /// Coefficient polynomial of `x_v^e` when viewed as a polynomial in `x_v`.
    pub fn coefficient_of(&self, v: u32, e: u32) -> Poly {
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            if m.exponent(v) == e {
                out.add_term(m.without(v), c);
            }
        }
        out
    }

    /// Substitute polynomials for variables; unlisted variables stay.
    pub fn substitute(&self, sub: &dyn Fn(u32) -> Option<Poly>) -> Poly {
        let mut cache: BTreeMap<(u32, u32), Poly> = BTreeMap::new();
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(c.clone());
            for &(v, e) in &m.0 {
                let f = match cache.get(&(v, e)) {
                    Some(f) => f.clone(),
                    None => {
                        let base = sub(v).unwrap_or_else(|| Poly::var(v));
                        let mut p = Poly::constant(Q::one());
                        for _ in 0..e {
                            p = p.times(&base);
                        }
                        cache.insert((v, e), p.clone());
                        p
                    }
                };
                acc = acc.times(&f);
            }
            out = out.plus(&acc);
        }
        out
    }

    /// Evaluate with every variable replaced by a ring value.
    pub fn eval<R: Ring>(&self, val: &dyn Fn(u32) -> R) -> R {
        let mut out = R::zero();
        for (m, c) in &self.terms {
            let mut t = R::from_q(c);
            for &(v, e) in &m.0 {
                let x = val(v);
                for _ in 0..e {
                    t = t.times(&x);
                }
            }
            out.accumulate(&t);
        }
        out
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }
}

impl Ring for Poly {
    fn zero() -> Self {
        Poly::default()
    }
    fn one() -> Self {
        Poly::constant(Q::one())
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
        out.add_scaled(o, &-Q::one());
        out
    }
    fn times(&self, o: &Self) -> Self {
        let mut out = Poly::default();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), &(c1 * c2));
            }
        }
        out
    }
    fn negated(&self) -> Self {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
    fn from_q(x: &Q) -> Self {
        Poly::constant(x.clone())
    }
    fn scaled(&self, x: &Q) -> Self {
        if x.is_zero() {
            return Poly::default();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * x)).collect() }
    }
    fn accumulate(&mut self, o: &Self) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c);
        }
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", q_to_string(c))?;
            for &(v, e) in &m.0 {
                if e == 1 {
                    write!(f, "·x{v}")?;
                } else {
                    write!(f, "·x{v}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{q, qi};

    #[test]
    fn product_and_derivative() {
        let s = Poly::var(0);
        let t = Poly::var(1);
        let p = s.plus(&t).times(&s.minus(&t));
        assert_eq!(p.coeff(&Monomial(vec![(0, 2)])), qi(1));
        assert_eq!(p.coeff(&Monomial(vec![(0, 1), (1, 1)])), qi(0));
        assert_eq!(p.derivative(0), s.scaled(&qi(2)));
        assert!(Poly::constant(qi(3)).derivative(0).is_zero());
    }

    #[test]
    fn cube_integral() {
        let p = Poly::term(Monomial(vec![(0, 2), (1, 1)]), qi(6));
        assert_eq!(p.integrate_unit(&[0, 1]), Poly::constant(qi(1)));
        assert_eq!(p.integrate_unit(&[0]), Poly::term(Monomial::var(1), qi(2)));
    }

    #[test]
    fn substitution_and_eval() {
        let p = Poly::var(0).times(&Poly::var(0)).plus(&Poly::var(1));
        let r = p.substitute(&|v| (v == 0).then(|| Poly::var(2).plus(&Poly::one())));
        assert_eq!(r.eval::<Q>(&|v| if v == 2 { qi(2) } else { q(1, 2) }), q(19, 2));
    }
}
