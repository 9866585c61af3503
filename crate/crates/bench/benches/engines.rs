//! Timings for the hot paths of each engine at octonionic size.

use std::hint::black_box;
use std::sync::Arc;

use brane_core::cohomology::{make_alpha, make_beta};
use brane_core::division_algebra::{associator, AlgebraTag, DA};
use brane_core::integration::{integrate_cochain, IntegralFormula};
use brane_core::ring::{random_q, seeded_rng};
use brane_core::spacetime::{four_psi, three_psi, Chirality, SpinorK2, SpinorK3};
use brane_core::supergeometry::{superstring_integral, twobrane_integral, APoint};
use criterion::{criterion_group, criterion_main, Criterion};

fn division(c: &mut Criterion) {
    let mut rng = seeded_rng(1);
    let mut el = || DA::new(AlgebraTag::O, (0..8).map(|_| random_q(&mut rng, 9, 4)).collect()).unwrap();
    let (a, b, d) = (el(), el(), el());
    c.bench_function("octonion associator", |bn| bn.iter(|| associator(black_box(&a), &b, &d).unwrap()));
}

fn spinor(c: &mut Criterion) {
    let mut rng = seeded_rng(2);
    let psi: Vec<_> = (0..16).map(|_| random_q(&mut rng, 5, 3)).collect();
    let psi = SpinorK2::from_coords(AlgebraTag::O, Chirality::Plus, &psi);
    c.bench_function("three_psi k=8", |bn| bn.iter(|| three_psi(black_box(&psi))));
    let big: Vec<_> = (0..32).map(|_| random_q(&mut rng, 5, 3)).collect();
    let big = SpinorK3::from_coords(AlgebraTag::O, &big);
    c.bench_function("four_psi k=8", |bn| bn.iter(|| four_psi(black_box(&big))));
}

fn cohomology(c: &mut Criterion) {
    let alpha = make_alpha(8).unwrap();
    let beta = make_beta(8).unwrap();
    let mut g = c.benchmark_group("coboundary");
    g.sample_size(20);
    g.bench_function("d alpha k=8", |bn| bn.iter(|| alpha.coboundary()));
    g.bench_function("d beta k=8", |bn| bn.iter(|| beta.coboundary()));
    g.finish();
}

fn integration(c: &mut Criterion) {
    let mut g = c.benchmark_group("integration");
    g.sample_size(20);
    g.bench_function("formula p=4 (cached)", |bn| bn.iter(|| IntegralFormula::get(black_box(4)).len()));
    let gamma = brane_core::cohomology::make_gamma();
    g.bench_function("integrate gamma", |bn| bn.iter(|| integrate_cochain(&gamma, 3).unwrap()));
    g.finish();
}

fn supergroup(c: &mut Criterion) {
    let alpha = superstring_integral(8).unwrap();
    let beta = twobrane_integral(8).unwrap();
    let mut rng = seeded_rng(3);
    let pts = |g: &Arc<_>, n: usize, rng: &mut _| (0..n).map(|_| APoint::random(Arc::clone(g), 2, rng)).collect::<Vec<_>>();
    let pa = pts(alpha.algebra(), 4, &mut rng);
    let pb = pts(beta.algebra(), 5, &mut rng);
    let mut g = c.benchmark_group("supergroup");
    g.sample_size(10);
    g.bench_function("pentagon defect k=8 n=2", |bn| bn.iter(|| alpha.coboundary_eval(black_box(&pa)).unwrap()));
    g.bench_function("pentagonator defect k=8 n=2", |bn| bn.iter(|| beta.coboundary_eval(black_box(&pb)).unwrap()));
    g.finish();
}

criterion_group!(benches, division, spinor, cohomology, integration, supergroup);
criterion_main!(benches);
