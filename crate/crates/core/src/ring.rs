//! Exact scalars and the coefficient-ring abstraction shared by every module.
//!
//! `Q` is an arbitrary-precision rational. Anything that can stand in for a
//! coefficient (rationals, polynomials, Grassmann elements, dual numbers)
//! implements [`Ring`]. Rings are not assumed commutative: where order matters
//! the callers document which side each factor sits on.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar.
pub type Q = BigRational;

/// `n/d` as an exact rational. Panics on `d == 0`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as an exact rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Render as `"num/den"` (denominator always present).
pub fn q_to_string(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parse `"num/den"` or a bare integer.
pub fn q_from_str(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Q::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

/// Coefficient ring. Addition is commutative; multiplication need not be.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn from_q(x: &Q) -> Self;

    fn scaled(&self, x: &Q) -> Self {
        self.times(&Self::from_q(x))
    }

    fn accumulate(&mut self, other: &Self) {
        *self = self.plus(other);
    }
}

impl Ring for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn from_q(x: &Q) -> Self {
        x.clone()
    }
    fn scaled(&self, x: &Q) -> Self {
        self * x
    }
    fn accumulate(&mut self, other: &Self) {
        *self += other;
    }
}

/// Dual numbers `a + b·ε` with `ε² = 0`, used for first-order variation checks.
#[derive(Clone, PartialEq, Debug)]
pub struct Dual<R> {
    pub re: R,
    pub eps: R,
}

impl<R: Ring> Ring for Dual<R> {
    fn zero() -> Self {
        Dual { re: R::zero(), eps: R::zero() }
    }
    fn one() -> Self {
        Dual { re: R::one(), eps: R::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.eps.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        Dual { re: self.re.plus(&o.re), eps: self.eps.plus(&o.eps) }
    }
    fn minus(&self, o: &Self) -> Self {
        Dual { re: self.re.minus(&o.re), eps: self.eps.minus(&o.eps) }
    }
    fn times(&self, o: &Self) -> Self {
        Dual {
            re: self.re.times(&o.re),
            eps: self.re.times(&o.eps).plus(&self.eps.times(&o.re)),
        }
    }
    fn negated(&self) -> Self {
        Dual { re: self.re.negated(), eps: self.eps.negated() }
    }
    fn from_q(x: &Q) -> Self {
        Dual { re: R::from_q(x), eps: R::zero() }
    }
}

/// Sign of a rational as -1, 0, 1.
pub fn signum(x: &Q) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Seeded random small rational with numerator in `[-m, m]` and denominator in `[1, d]`.
pub fn random_q<G: rand::Rng>(rng: &mut G, m: i64, d: i64) -> Q {
    let n = rng.random_range(-m..=m);
    let den = rng.random_range(1..=d);
    q(n, den)
}

/// Deterministic RNG from a 64-bit seed.
pub fn seeded_rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn string_round_trip() {
        for x in [q(3, 4), q(-7, 2), qi(0), qi(5)] {
            assert_eq!(q_from_str(&q_to_string(&x)), Some(x));
        }
        assert_eq!(q_from_str("12"), Some(qi(12)));
        assert_eq!(q_from_str("1/0"), None);
        assert_eq!(q_to_string(&qi(2)), "2/1");
    }

    #[test]
    fn dual_numbers_square_epsilon_to_zero() {
        let e = Dual { re: qi(0), eps: qi(1) };
        assert!(e.times(&e).is_zero());
        let x = Dual { re: qi(2), eps: qi(3) };
        let y = Dual { re: qi(5), eps: qi(7) };
        assert_eq!(x.times(&y), Dual { re: qi(10), eps: qi(29) });
    }
}
