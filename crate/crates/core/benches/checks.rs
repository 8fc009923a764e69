//! Sequential against parallel strategies on the heavier checks.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use skewhom::cohomology::check_d_squared_with;
use skewhom::constructions::{alpha_zero, block_diagonal, build_gl_alpha, build_semi_euclidean, GlContext};
use skewhom::representation::{search_representation, Representation, SearchConfig};
use skewhom::scalar::{int, rat, Rational};
use skewhom::semi_euclidean::check_vstar_closure;
use skewhom::{HomAlgebra, Matrix, Strategy};

fn strategies() -> [(&'static str, Strategy); 2] {
    [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)]
}

fn hom_jacobi(c: &mut Criterion) {
    let gl4 = build_gl_alpha(&GlContext::new(block_diagonal(&alpha_zero::<Rational>(&()), 2)).unwrap()).unwrap();
    let mut group = c.benchmark_group("hom_jacobi_gl4");
    group.sample_size(10);
    for (name, s) in strategies() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &s, |b, &s| {
            b.iter(|| assert!(gl4.check_hom_jacobi_with(s).passed))
        });
    }
    group.finish();
}

fn d_squared(c: &mut Criterion) {
    let (g, _) = build_semi_euclidean(&rat(1, 2)).unwrap();
    let rep = Representation::zero(g.clone(), Matrix::identity(4, g.ctx())).unwrap();
    let gl = Representation::negated_identity(&GlContext::new(alpha_zero::<Rational>(&())).unwrap()).unwrap();
    let mut group = c.benchmark_group("d_squared");
    group.sample_size(10);
    for (name, s) in strategies() {
        group.bench_with_input(BenchmarkId::new("se4_k2_s1", name), &s, |b, &s| {
            b.iter(|| assert!(check_d_squared_with(&rep, 2, 1, s).passed))
        });
        group.bench_with_input(BenchmarkId::new("gl2_neg_k2_s0", name), &s, |b, &s| {
            b.iter(|| assert!(check_d_squared_with(&gl, 2, 0, s).passed))
        });
    }
    group.finish();
}

fn closure(c: &mut Criterion) {
    let mut group = c.benchmark_group("vstar_closure_200");
    group.sample_size(10);
    for (name, s) in strategies() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &s, |b, &s| {
            b.iter(|| assert!(check_vstar_closure(&int(1), 200, 7, s).unwrap().passed))
        });
    }
    group.finish();
}

fn search(c: &mut Criterion) {
    let g = HomAlgebra::from_upper(2, [], alpha_zero::<Rational>(&())).unwrap();
    let mut group = c.benchmark_group("search_abelian_m3");
    group.sample_size(10);
    for (name, s) in strategies() {
        let cfg = SearchConfig { budget: 20_000, seed: 7, nonzero: true, strategy: s };
        group.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| {
            b.iter(|| assert!(search_representation(&g, 3, cfg).is_some()))
        });
    }
    group.finish();
}

criterion_group!(benches, hom_jacobi, d_squared, closure, search);
criterion_main!(benches);
