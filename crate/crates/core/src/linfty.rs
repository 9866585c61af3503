//! Slim Lie n-superalgebras and a checker for the generalized Jacobi identity.
//!
//! `build_slim(g, n, ω)` packages a Lie superalgebra `g` in degree 0, the
//! trivial module `R = ℝ` in degree `n-1`, the bracket `l₂` of `g`, and the
//! top bracket `l_{n+1} = ω` for a cochain `ω` of level `n+1`. This is the
//! "(n+1)-cocycle gives a Lie n-superalgebra" convention; a statement that
//! names the top bracket `l_{n+2}` counts one more argument.
//!
//! For such data the identity at arity `m` only has the terms
//! `l₂(l₂(…), …)` (arity 3) and `l_{n+1}(l₂(…), …)`, `l₂(l_{n+1}(…), …)`
//! (arity `n+2`). The last one vanishes because `g` acts trivially on `R`,
//! so the identity at arity `n+2` is exactly `dω = 0`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cohomology::{canonicalize, cochain_space_dim, canonical_monomials, Cochain, KoszulSign};
use crate::linalg::{axpy, SparseVec};
use crate::ring::{q_to_string, seeded_rng, Ring, Q};
use crate::superalgebra::{LieSuperalgebra, Parity};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinftyError {
    #[error("top cochain must be even")]
    OddCochain,
    #[error("top cochain has level {got}, expected {expected}")]
    Level { expected: usize, got: usize },
    #[error("need n >= 2, got {0}")]
    SmallN(usize),
    #[error("unshuffle range: need 1 <= j <= n-1, got j={j}, n={n}")]
    Range { j: usize, n: usize },
}

/// A `(j, n-j)` unshuffle: `perm[0..j]` and `perm[j..]` are each increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unshuffle {
    pub j: usize,
    pub perm: Vec<usize>,
}

impl Unshuffle {
    pub fn is_valid(&self) -> bool {
        let (a, b) = self.perm.split_at(self.j);
        a.windows(2).all(|w| w[0] < w[1]) && b.windows(2).all(|w| w[0] < w[1])
    }

    pub fn chi(&self, grades: &[u8]) -> i32 {
        KoszulSign::chi(grades, &self.perm)
    }
}

/// All `(j, n-j)` unshuffles, in lexicographic order of the first block.
pub fn unshuffles(j: usize, n: usize) -> Result<Vec<Unshuffle>, LinftyError> {
    if j < 1 || j + 1 > n {
        return Err(LinftyError::Range { j, n });
    }
    Ok(unshuffles_unchecked(j, n))
}

fn unshuffles_unchecked(j: usize, n: usize) -> Vec<Unshuffle> {
    let mut out = Vec::new();
    let mut pick = Vec::with_capacity(j);
    fn rec(n: usize, j: usize, start: usize, pick: &mut Vec<usize>, out: &mut Vec<Unshuffle>) {
        if pick.len() == j {
            let mut perm = pick.clone();
            perm.extend((0..n).filter(|i| !pick.contains(i)));
            out.push(Unshuffle { j, perm });
            return;
        }
        for i in start..n {
            pick.push(i);
            rec(n, j, i + 1, pick, out);
            pick.pop();
        }
    }
    rec(n, j, 0, &mut pick, &mut out);
    out
}

/// Slim L∞-superalgebra data: `g ⊕ R[n-1]`, `l₂ = [−,−]`, `l_{n+1} = ω`.
#[derive(Clone, Debug)]
pub struct LInftyData {
    g: Arc<LieSuperalgebra>,
    n: usize,
    omega: Cochain,
}

/// Packages `(g, R, trivial action, ω)`.
pub fn build_slim(g: Arc<LieSuperalgebra>, n: usize, omega: Cochain) -> Result<LInftyData, LinftyError> {
    if n < 2 {
        return Err(LinftyError::SmallN(n));
    }
    if omega.level() != n + 1 {
        return Err(LinftyError::Level { expected: n + 1, got: omega.level() });
    }
    if omega.parity() != Some(Parity::Even) {
        return Err(LinftyError::OddCochain);
    }
    let omega = omega.with_algebra(g.clone()).map_err(|_| LinftyError::Level { expected: n + 1, got: omega.level() })?;
    Ok(LInftyData { g, n, omega })
}

impl LInftyData {
    pub fn algebra(&self) -> &Arc<LieSuperalgebra> {
        &self.g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Arity of the top bracket, `n + 1`.
    pub fn top(&self) -> usize {
        self.n + 1
    }

    pub fn omega(&self) -> &Cochain {
        &self.omega
    }

    /// `(g, dim R, degree of R, ω)`; the action on R is always trivial.
    pub fn extract(&self) -> (Arc<LieSuperalgebra>, usize, usize, Cochain) {
        (self.g.clone(), 1, self.n - 1, self.omega.clone())
    }

    /// Basis of the underlying graded space: `g` then the generator of `R`.
    pub fn dim(&self) -> usize {
        self.g.dim() + 1
    }

    fn r_index(&self) -> usize {
        self.g.dim()
    }

    /// Overall grade mod 2: parity plus degree.
    pub fn grade(&self, i: usize) -> u8 {
        if i == self.r_index() {
            ((self.n - 1) % 2) as u8
        } else {
            self.g.parity(i).bit()
        }
    }

    /// `l_k` on basis elements.
    pub fn l(&self, k: usize, args: &[usize]) -> SparseVec {
        let mut out = SparseVec::new();
        if args.iter().any(|&a| a == self.r_index()) {
            return out;
        }
        if k == 2 {
            for (c, v) in self.g.bracket_basis(args[0], args[1]) {
                out.insert(*c, v.clone());
            }
        }
        if k == self.top() {
            let v = self.omega.value(args);
            if !v.is_zero() {
                out.insert(self.r_index(), v);
            }
        }
        out
    }

    /// Contribution of `(i, j)` to the generalized Jacobi sum on a tuple:
    /// `Σ_σ χ(σ) (-1)^{i(j-1)} l_j(l_i(x_σ(1..i)), x_σ(i+1..m))`.
    pub fn contribution(&self, i: usize, j: usize, x: &[usize]) -> SparseVec {
        let m = x.len();
        let mut out = SparseVec::new();
        if !self.bracket_nonzero(i) || !self.bracket_nonzero(j) || i > m {
            return out;
        }
        let grades: Vec<u8> = x.iter().map(|&a| self.grade(a)).collect();
        let outer = if (i * (j - 1)) % 2 == 1 { -Q::one() } else { Q::one() };
        let mut args = Vec::with_capacity(j);
        for u in unshuffles_unchecked(i, m) {
            let inner_args: Vec<usize> = u.perm[..i].iter().map(|&p| x[p]).collect();
            let inner = self.l(i, &inner_args);
            if inner.is_empty() {
                continue;
            }
            let s = &outer * Q::from_integer(u.chi(&grades).into());
            for (c, v) in &inner {
                args.clear();
                args.push(*c);
                args.extend(u.perm[i..].iter().map(|&p| x[p]));
                let val = self.l(j, &args);
                axpy(&mut out, &(v * &s), &val);
            }
        }
        out
    }

    fn bracket_nonzero(&self, k: usize) -> bool {
        k == 2 || k == self.top()
    }

    /// The full generalized Jacobi sum at a tuple, and per-`(i, j)` parts.
    pub fn jacobi_sum(&self, x: &[usize]) -> (SparseVec, BTreeMap<(usize, usize), SparseVec>) {
        let m = x.len();
        let mut total = SparseVec::new();
        let mut parts = BTreeMap::new();
        for i in 1..=m {
            let j = m + 1 - i;
            let c = self.contribution(i, j, x);
            if !c.is_empty() {
                axpy(&mut total, &Q::one(), &c);
                parts.insert((i, j), c);
            }
        }
        (total, parts)
    }
}

/// Per-arity outcome of [`check_linfty`].
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ArityReport {
    pub arity: usize,
    pub tuples_checked: usize,
    pub exhaustive: bool,
    pub failures: usize,
    /// Labels and value of the first failing tuple, if any.
    pub first_failure: Option<(Vec<String>, Vec<(String, String)>)>,
    /// `(i, j)` pairs that contributed nonzero terms on some tuple.
    pub nonzero_pairs: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct LinftyReport {
    pub pass: bool,
    pub arities: Vec<ArityReport>,
}

impl LinftyReport {
    pub fn first_failing_arity(&self) -> Option<usize> {
        self.arities.iter().find(|a| a.failures > 0).map(|a| a.arity)
    }
}

/// Sampling knobs for [`check_linfty_with`].
#[derive(Clone, Copy, Debug)]
pub struct CheckConfig {
    /// Scan every canonical tuple when there are at most this many.
    pub budget: u128,
    /// Number of seeded tuples otherwise.
    pub samples: usize,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { budget: 200_000, samples: 3_000, seed: 0x11f7 }
    }
}

pub fn check_linfty(data: &LInftyData, max_arity: usize) -> LinftyReport {
    check_linfty_with(data, max_arity, CheckConfig::default())
}

/// Evaluates the generalized Jacobi identity at every arity `1..=max_arity`.
pub fn check_linfty_with(data: &LInftyData, max_arity: usize, cfg: CheckConfig) -> LinftyReport {
    let mut arities = Vec::new();
    for m in 1..=max_arity {
        let (tuples, exhaustive) = tuples_for(data, m, cfg);
        let results: Vec<(usize, SparseVec, Vec<(usize, usize)>)> = tuples
            .par_iter()
            .enumerate()
            .map(|(idx, t)| {
                let (total, parts) = data.jacobi_sum(t);
                (idx, total, parts.into_keys().collect())
            })
            .collect();
        let mut failures = 0;
        let mut first = None;
        let mut pairs = std::collections::BTreeSet::new();
        for (idx, total, ps) in results {
            pairs.extend(ps);
            if !total.is_empty() {
                failures += 1;
                if first.is_none() {
                    let labels = tuples[idx].iter().map(|&a| label(data, a)).collect();
                    let val = total.iter().map(|(c, v)| (label(data, *c), q_to_string(v))).collect();
                    first = Some((labels, val));
                }
            }
        }
        arities.push(ArityReport {
            arity: m,
            tuples_checked: tuples.len(),
            exhaustive,
            failures,
            first_failure: first,
            nonzero_pairs: pairs.into_iter().collect(),
        });
    }
    LinftyReport { pass: arities.iter().all(|a| a.failures == 0), arities }
}

fn label(data: &LInftyData, a: usize) -> String {
    if a == data.g.dim() {
        "r".to_string()
    } else {
        data.g.label(a).to_string()
    }
}

/// Canonical tuples of `g`-labels plus, when small, tuples with one `R` slot.
fn tuples_for(data: &LInftyData, m: usize, cfg: CheckConfig) -> (Vec<Vec<usize>>, bool) {
    let g = &*data.g;
    if cochain_space_dim(g, m) <= cfg.budget {
        let mut ts = canonical_monomials(g, m);
        if m >= 1 && cochain_space_dim(g, m - 1) <= cfg.budget / 4 {
            for mut t in canonical_monomials(g, m - 1) {
                t.push(data.r_index());
                ts.push(t);
            }
        }
        return (ts, true);
    }
    let mut rng = seeded_rng(cfg.seed ^ (m as u64).wrapping_mul(0x9e37_79b9));
    let n = g.dim();
    let mut set = std::collections::BTreeSet::new();
    let mut attempts = 0;
    while set.len() < cfg.samples && attempts < cfg.samples * 20 {
        attempts += 1;
        let t: Vec<usize> = (0..m).map(|_| rng.random_range(0..n)).collect();
        if let Some((_, c)) = canonicalize(g, &t) {
            set.insert(c);
        }
    }
    (set.into_iter().collect(), false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::make_gamma;
    use crate::ring::qi;

    #[test]
    fn unshuffle_counts() {
        assert_eq!(unshuffles(1, 2).unwrap().len(), 2);
        assert_eq!(unshuffles(2, 4).unwrap().len(), 6);
        assert!(unshuffles(0, 3).is_err());
        assert!(unshuffles(3, 3).is_err());
        for u in unshuffles(2, 5).unwrap() {
            assert!(u.is_valid());
        }
        let id = &unshuffles(2, 4).unwrap()[0];
        assert_eq!(id.perm, vec![0, 1, 2, 3]);
        assert_eq!(id.chi(&[1, 0, 1, 1]), 1);
    }

    #[test]
    fn heisenberg_two_algebra_passes() {
        let gamma = make_gamma();
        let data = build_slim(gamma.algebra().clone(), 2, gamma.clone()).unwrap();
        let r = check_linfty(&data, 5);
        assert!(r.pass, "{r:?}");
        let (g, rdim, deg, w) = data.extract();
        assert_eq!((rdim, deg), (1, 1));
        assert_eq!(w, gamma);
        assert_eq!(*g, **gamma.algebra());
    }

    #[test]
    fn non_cocycle_fails_at_arity_level_plus_one() {
        let gamma = make_gamma();
        let g = gamma.algebra().clone();
        // Every 3-cochain on the Heisenberg algebra is closed, so the
        // perturbation lives on so(4).
        let so = Arc::new(crate::superalgebra::build_so(4).unwrap());
        let w = Cochain::from_map(so.clone(), 3, [(vec![0, 1, 5], qi(1)), (vec![2, 3, 4], qi(2))]);
        assert!(!w.coboundary().is_zero());
        let data = build_slim(so, 2, w).unwrap();
        let r = check_linfty(&data, 5);
        assert!(!r.pass);
        assert_eq!(r.first_failing_arity(), Some(4));
        let a4 = &r.arities[3];
        assert_eq!(a4.nonzero_pairs, vec![(2, 3)]);
        assert!(check_linfty(&build_slim(g.clone(), 2, Cochain::zero(g, 3)).unwrap(), 5).pass);
    }
}
