//! Property tests for the algebraic axioms the engines rely on.

use std::sync::Arc;

use brane_core::division_algebra::{associator, multiply, AlgebraTag, DA};
use brane_core::integration::{GroupElement, NilpotentGroup};
use brane_core::ring::seeded_rng;
use brane_core::spacetime::{three_psi, Chirality, SpinorK2};
use brane_core::superalgebra::{build_free_two_step, build_heisenberg, Parity};
use brane_core::supergeometry::{super_exp_mul, APoint, GrassmannAlgebra};
use brane_core::{q, Ring, Q};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Q> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| q(n, d))
}

fn octonion() -> impl Strategy<Value = DA> {
    prop::collection::vec(rational(), 8).prop_map(|c| DA::new(AlgebraTag::O, c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn octonions_are_alternative_and_normed(a in octonion(), b in octonion(), c in octonion()) {
        prop_assert!(associator(&a, &a, &b).unwrap().is_zero());
        prop_assert!(associator(&a, &b, &b).unwrap().is_zero());
        prop_assert!(associator(&a, &b, &c).unwrap().re().is_zero());
        prop_assert_eq!(multiply(&a, &b).unwrap().norm_sq(), a.norm_sq() * b.norm_sq());
        // Moufang: (aba)c = a(b(ac)).
        let m = |x: &DA, y: &DA| multiply(x, y).unwrap();
        prop_assert_eq!(m(&m(&m(&a, &b), &a), &c), m(&a, &m(&b, &m(&a, &c))));
    }

    #[test]
    fn quaternion_spinors_obey_three_psi(c in prop::collection::vec(rational(), 8), minus in any::<bool>()) {
        let chir = if minus { Chirality::Minus } else { Chirality::Plus };
        prop_assert!(three_psi(&SpinorK2::from_coords(AlgebraTag::H, chir, &c)).is_zero());
    }

    #[test]
    fn grassmann_algebra_laws(seed in any::<u64>(), n in 1u32..=5) {
        let a = GrassmannAlgebra::new(n);
        let mut rng = seeded_rng(seed);
        let (x, y) = (a.random(Parity::Odd, &mut rng), a.random(Parity::Odd, &mut rng));
        let (e, f) = (a.random(Parity::Even, &mut rng), a.random(Parity::Even, &mut rng));
        prop_assert!(x.times(&x).is_zero());
        prop_assert_eq!(x.times(&y), y.times(&x).negated());
        prop_assert_eq!(e.times(&f), f.times(&e));
        prop_assert_eq!(e.times(&x), x.times(&e));
        prop_assert_eq!(x.times(&y).times(&e), x.times(&y.times(&e)));
        prop_assert_eq!(x.times(&y).parity(), Some(Parity::Even));
    }

    #[test]
    fn two_step_groups_are_groups(seed in any::<u64>(), p in 2usize..=4) {
        let g = Arc::new(build_free_two_step(p));
        let grp = NilpotentGroup::new(g.clone()).unwrap();
        let mut rng = seeded_rng(seed);
        let el = |rng: &mut _| brane_core::integration::random_group_element(&g, rng);
        let (a, b, c) = (el(&mut rng), el(&mut rng), el(&mut rng));
        prop_assert_eq!(grp.mul(&grp.mul(&a, &b), &c), grp.mul(&a, &grp.mul(&b, &c)));
        prop_assert!(grp.mul(&a, &a.inverse()).is_identity());
        prop_assert_eq!(grp.mul(&a, &GroupElement::identity(g.dim())), a);
    }

    #[test]
    fn super_exp_mul_is_associative(seed in any::<u64>(), n in 0u32..=3) {
        let g = Arc::new(build_heisenberg());
        let mut rng = seeded_rng(seed);
        let pts: Vec<APoint> = (0..3).map(|_| APoint::random(g.clone(), n, &mut rng)).collect();
        let m = |x: &APoint, y: &APoint| super_exp_mul(x, y).unwrap();
        prop_assert_eq!(m(&m(&pts[0], &pts[1]), &pts[2]), m(&pts[0], &m(&pts[1], &pts[2])));
    }
}
