use criterion::{black_box, criterion_group, criterion_main, Criterion};
use seminorm_core::geometry::whitney_decompose;
use seminorm_core::harmonic::cosine_log_integrals;
use seminorm_core::seminorm::seminorm_ladder;
use seminorm_core::{Domain, ExponentPair, Kernel, QuadratureConfig, TestFunction};

fn interval_ladder(c: &mut Criterion) {
    let f = TestFunction::CappedReciprocal { n: 64.0 };
    let k = Kernel::stable(1, 1.0).unwrap();
    let cfg = QuadratureConfig::default();
    c.bench_function("ladder_interval_capped_reciprocal", |b| {
        b.iter(|| {
            seminorm_ladder(
                black_box(&f),
                &Domain::unit_interval(),
                &k,
                &ExponentPair::hilbert(),
                &[0.25, 0.5, 1.0],
                &cfg,
            )
            .unwrap()
        })
    });
}

fn whitney_square(c: &mut Criterion) {
    let dom = Domain::unit_square();
    c.bench_function("whitney_unit_square_depth_8", |b| {
        b.iter(|| whitney_decompose(black_box(&dom), 8, None).unwrap())
    });
}

fn cosine_integrals(c: &mut Criterion) {
    c.bench_function("cosine_log_integrals_4096", |b| b.iter(|| cosine_log_integrals(black_box(4096))));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = interval_ladder, whitney_square, cosine_integrals
}
criterion_main!(benches);
