use std::hint::black_box;

use affina_bench::{folded_cusp, generic_surface};
use affina_core::bde::{zero_set, ContourConfig};
use affina_core::{classify_surface, curvature_bde, discriminant, integrate_foliation, point_frame, Jet2, TraceConfig, Var, Window};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn jets(c: &mut Criterion) {
    let mut g = c.benchmark_group("jet");
    for order in [4usize, 6, 8] {
        let a = &Jet2::var(order, Var::U) + &Jet2::constant(order, 1.5);
        let b = &Jet2::var(order, Var::V).scale(0.3) + &Jet2::constant(order, 2.0);
        g.bench_with_input(BenchmarkId::new("mul", order), &order, |bch, _| bch.iter(|| black_box(&a) * black_box(&b)));
        g.bench_with_input(BenchmarkId::new("pow", order), &order, |bch, _| bch.iter(|| black_box(&b).pow(-0.25).unwrap()));
        g.bench_with_input(BenchmarkId::new("shift", order), &order, |bch, _| bch.iter(|| black_box(&a).shift(0.1, -0.2)));
    }
    g.finish();
}

fn geometry(c: &mut Criterion) {
    let s = generic_surface(6);
    c.bench_function("point_frame", |b| b.iter(|| point_frame(black_box(&s), 0.1, -0.05).unwrap()));
    let bde = curvature_bde(&s);
    c.bench_function("curvature_bde/coeffs", |b| b.iter(|| bde.coeffs(black_box(0.1), black_box(-0.05))));
    c.bench_function("curvature_bde/build", |b| b.iter(|| curvature_bde(black_box(&s))));
    c.bench_function("classify/folded_cusp", |b| {
        let f = folded_cusp();
        b.iter(|| classify_surface(black_box(&f)))
    });
}

fn tracing(c: &mut Criterion) {
    let mut g = c.benchmark_group("trace");
    g.sample_size(20);
    let s = generic_surface(6);
    let bde = curvature_bde(&s);
    let cfg = TraceConfig::new(Window::square(0.3));
    g.bench_function("leaf", |b| b.iter(|| integrate_foliation(&bde, black_box([0.05, 0.1]), 1, &cfg).unwrap()));
    let folded = curvature_bde(&folded_cusp());
    let fcfg = TraceConfig::new(Window::square(0.4));
    g.bench_function("lifted_leaf", |b| b.iter(|| integrate_foliation(&folded, black_box([0.1, -0.2]), 1, &fcfg).unwrap()));
    let contour = ContourConfig::new(Window::square(0.4));
    let delta = |u: f64, v: f64| discriminant(&folded, u, v);
    g.bench_function("discriminant_zero_set", |b| b.iter(|| zero_set(&delta, 32, &contour)));
    g.finish();
}

criterion_group!(benches, jets, geometry, tracing);
criterion_main!(benches);
