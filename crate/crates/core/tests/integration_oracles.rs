//! Independent checks on group-cochain integration.

use std::sync::Arc;

use brane_core::cohomology::{make_gamma, random_cochain, Cochain};
use brane_core::integration::{
    differentiate_cochain, group_coboundary, heisenberg_2group, integrate_cochain, integrand, random_group_element,
    universal_partials, GroupElement, LiePoly,
};
use brane_core::poly::{Monomial, Poly};
use brane_core::ring::seeded_rng;
use brane_core::spacetime::Flavor;
use brane_core::superalgebra::{build_heisenberg, build_supertranslation, GradedElement};
use brane_core::{q, qi, Ring, Q};

type M3 = [[f64; 3]; 3];

fn mat_mul(a: &M3, b: &M3) -> M3 {
    let mut c = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

/// exp of the strictly upper triangular `[[0,a,c],[0,0,b],[0,0,0]]`.
fn heis_exp(a: f64, b: f64, c: f64) -> M3 {
    [[1.0, a, c + a * b / 2.0], [0.0, 1.0, b], [0.0, 0.0, 1.0]]
}

fn heis_log(m: &M3) -> (f64, f64, f64) {
    let (a, b) = (m[0][1], m[1][2]);
    (a, b, m[0][2] - a * b / 2.0)
}

fn heis_inv(m: &M3) -> M3 {
    let (a, b, c) = heis_log(m);
    heis_exp(-a, -b, -c)
}

/// The 2-simplex `exp(s · log(exp X exp(tY)))` in 3×3 matrices.
fn simplex(s: f64, t: f64) -> M3 {
    let m = mat_mul(&heis_exp(1.0, 0.0, 0.0), &heis_exp(0.0, t, 0.0));
    let (a, b, c) = heis_log(&m);
    heis_exp(s * a, s * b, s * c)
}

#[test]
fn quadrature_oracle_for_p_wedge_q() {
    // Midpoint rule on the translated partials obtained by finite differences.
    let n = 200;
    let h = 1e-5;
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            let (s, t) = ((i as f64 + 0.5) / n as f64, (j as f64 + 0.5) / n as f64);
            let inv = heis_inv(&simplex(s, t));
            let ds = {
                let (p, m) = (simplex(s + h, t), simplex(s - h, t));
                heis_log(&mat_mul(&inv, &p)).0 - heis_log(&mat_mul(&inv, &m)).0
            };
            let dsq = {
                let (p, m) = (simplex(s + h, t), simplex(s - h, t));
                heis_log(&mat_mul(&inv, &p)).1 - heis_log(&mat_mul(&inv, &m)).1
            };
            let (dt, dtq) = {
                let (p, m) = (simplex(s, t + h), simplex(s, t - h));
                let (lp, lm) = (heis_log(&mat_mul(&inv, &p)), heis_log(&mat_mul(&inv, &m)));
                (lp.0 - lm.0, lp.1 - lm.1)
            };
            let det = (ds * dtq - dsq * dt) / (4.0 * h * h);
            total += det / (n * n) as f64;
        }
    }
    assert!((total - 0.5).abs() < 1e-4, "quadrature {total}");

    let g = Arc::new(build_heisenberg());
    let w = Cochain::from_map(g.clone(), 2, [(vec![0, 1], qi(1))]);
    let f = integrate_cochain(&w, 2).unwrap();
    let p = GroupElement::from_q(vec![qi(1), qi(0), qi(0)]);
    let qq = GroupElement::from_q(vec![qi(0), qi(1), qi(0)]);
    assert_eq!(f.evaluate(&[p, qq]).unwrap(), q(1, 2));
}

fn lp(terms: &[(usize, Q, &[(u32, u32)])]) -> LiePoly {
    let mut e: LiePoly = GradedElement::zero(6);
    for (w, c, m) in terms {
        e.coeffs[*w].add_term(Monomial(m.to_vec()), c);
    }
    e
}

#[test]
fn three_simplex_partials_match_the_displayed_triple() {
    // X=0 Y=1 Z=2 [X,Y]=3 [X,Z]=4 [Y,Z]=5; s=0 t=1 u=2.
    let (_, parts) = universal_partials(3);
    let h = q(1, 2);
    let ps = lp(&[
        (0, qi(1), &[]),
        (1, qi(1), &[(1, 1)]),
        (2, qi(1), &[(1, 1), (2, 1)]),
        (3, h.clone(), &[(1, 1)]),
        (5, h.clone(), &[(1, 1), (2, 1)]),
        (4, h.clone(), &[(1, 1), (2, 1)]),
    ]);
    let pt = lp(&[
        (1, qi(1), &[(0, 1)]),
        (2, qi(1), &[(0, 1), (2, 1)]),
        (3, h.clone(), &[(0, 1)]),
        (3, -h.clone(), &[(0, 2)]),
        (5, h.clone(), &[(0, 1), (2, 1)]),
        (4, h.clone(), &[(0, 1), (2, 1)]),
        (4, -h.clone(), &[(0, 2), (2, 1)]),
    ]);
    let pu = lp(&[
        (2, qi(1), &[(0, 1), (1, 1)]),
        (5, h.clone(), &[(0, 1), (1, 1)]),
        (5, -h.clone(), &[(0, 2), (1, 2)]),
        (4, h.clone(), &[(0, 1), (1, 1)]),
        (4, -h.clone(), &[(0, 2), (1, 1)]),
    ]);
    assert_eq!(parts, vec![ps, pt, pu]);

    let xyz = &integrand(3)[&vec![0, 1, 2]];
    assert_eq!(*xyz, Poly::term(Monomial(vec![(0, 2), (1, 1)]), qi(1)));
}

#[test]
fn two_simplex_partials() {
    let (_, parts) = universal_partials(2);
    let mut pt: LiePoly = GradedElement::zero(3);
    pt.coeffs[1] = Poly::var(0);
    pt.coeffs[2].add_term(Monomial(vec![(0, 1)]), &q(1, 2));
    pt.coeffs[2].add_term(Monomial(vec![(0, 2)]), &q(-1, 2));
    assert_eq!(parts[1], pt);
}

#[test]
fn symbolic_cochain_map_law() {
    let mut rng = seeded_rng(2024);
    let mut algs = vec![Arc::new(build_heisenberg())];
    for k in [1, 2] {
        algs.push(Arc::new(build_supertranslation(k, Flavor::K2).unwrap()));
        algs.push(Arc::new(build_supertranslation(k, Flavor::K3).unwrap()));
    }
    for g in algs {
        for level in 1..=3 {
            for _ in 0..3 {
                let w = random_cochain(g.clone(), level, 6, &mut rng);
                let lhs = group_coboundary(&integrate_cochain(&w, level).unwrap()).unwrap();
                let rhs = integrate_cochain(&w.coboundary(), level + 1).unwrap();
                assert_eq!(lhs, rhs, "{} level {level}", g.name());
            }
        }
    }
}

#[test]
fn non_cocycle_negative_control() {
    // Every 2-cochain on the Heisenberg algebra is closed, so the control
    // is the 1-cochain z*, with dz* = -p*∧q*.
    let g = Arc::new(build_heisenberg());
    let z = Cochain::from_map(g.clone(), 1, [(vec![2], qi(1))]);
    assert!(!z.coboundary().is_zero());
    let d = group_coboundary(&integrate_cochain(&z, 1).unwrap()).unwrap();
    let p = GroupElement::from_q(vec![qi(1), qi(0), qi(0)]);
    let qq = GroupElement::from_q(vec![qi(0), qi(1), qi(0)]);
    assert_eq!(d.evaluate(&[p, qq]).unwrap(), q(-1, 2));
}

#[test]
fn heisenberg_two_group() {
    let two = heisenberg_2group().unwrap();
    let report = two.verify_pentagon(100, 7).unwrap();
    assert!(report.symbolic);
    assert_eq!(report.quadruples, 100);

    let g = two.group.algebra().clone();
    let one = GroupElement::identity(3);
    let mut rng = seeded_rng(99);
    for _ in 0..20 {
        let a = random_group_element(&g, &mut rng);
        let b = random_group_element(&g, &mut rng);
        assert!(two.associator_at(&one, &a, &b).is_zero());
        assert!(two.associator_at(&a, &one, &b).is_zero());
        assert!(two.associator_at(&a, &b, &one).is_zero());
    }
    assert!(two.associator_at(&one, &one, &one).is_zero());
    assert_eq!(differentiate_cochain(&two.associator), make_gamma());
}

#[test]
fn group_cochain_dump_is_json() {
    let f = integrate_cochain(&make_gamma(), 3).unwrap();
    let dump = f.to_dump();
    let s = serde_json::to_string(&dump).unwrap();
    let back: brane_core::integration::GroupCochainDump = serde_json::from_str(&s).unwrap();
    assert_eq!(back, dump);
    assert!(dump.terms.values().all(|v| v.contains('/') || v.parse::<i64>().is_ok()));
}

#[test]
fn group_cochain_dump_loads_back() {
    let f = integrate_cochain(&make_gamma(), 3).unwrap();
    let back = f.to_dump().load(f.algebra().clone()).unwrap();
    assert_eq!(back, f);
    let other = Arc::new(build_supertranslation(1, Flavor::K2).unwrap());
    assert!(f.to_dump().load(other).is_err());
}
