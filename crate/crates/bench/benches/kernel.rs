//! Measurements of the heavy kernels: the Hochschild pipeline from algebra
//! to homology table, homology of random complexes, normal ordering in the
//! deformed plane, and the underlying echelon-form linear algebra.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nhom_core::{
    hochschild_ncomplex, random_ncomplex, seeded, DqElement, DqParams, FinDimAlgebra, QContext,
};

/// Build the deformed Hochschild complex of the dual numbers and take its
/// full homology table; the level dimensions grow geometrically with the
/// window top, so this sweeps the dominant cost of the verification runs.
fn hochschild_pipeline(c: &mut Criterion) {
    let ctx = QContext::auto(3).expect("frozen context");
    let a = FinDimAlgebra::dual_numbers(ctx.modulus());
    let mut group = c.benchmark_group("hochschild_homology");
    for top in [4usize, 6, 8] {
        group.bench_with_input(BenchmarkId::from_parameter(top), &top, |b, &top| {
            b.iter(|| {
                let complex = hochschild_ncomplex(&a, &ctx, top).expect("valid algebra");
                complex.homology_table()
            })
        });
    }
    group.finish();
}

/// Homology tables of random conjugated complexes, per nilpotency order.
fn random_complex_homology(c: &mut Criterion) {
    let mut group = c.benchmark_group("random_complex_homology");
    for order in [3u32, 5] {
        let ctx = QContext::auto(order).expect("frozen context");
        let mut rng = seeded(0xBE);
        let complex = random_ncomplex(&mut rng, &ctx, 8, 4, 3);
        group.bench_with_input(
            BenchmarkId::from_parameter(order),
            &complex,
            |b, complex| b.iter(|| complex.homology_table()),
        );
    }
    group.finish();
}

/// Normal ordering in the deformed plane: expand (X + Y)^e into the
/// canonical X-before-Y form.
fn normal_ordering(c: &mut Criterion) {
    let params = DqParams::new(11, 4).expect("valid parameters");
    let xy = DqElement::x(params).add(&DqElement::y(params));
    let mut group = c.benchmark_group("normal_ordering");
    for e in [8u32, 16, 24] {
        group.bench_with_input(BenchmarkId::from_parameter(e), &e, |b, &e| {
            b.iter(|| xy.pow(e))
        });
    }
    group.finish();
}

/// Kernel extraction (echelon form) on a dense random square matrix, the
/// innermost primitive of every homology computation.
fn echelon_kernel(c: &mut Criterion) {
    let mut group = c.benchmark_group("echelon_kernel");
    for n in [32usize, 64, 128] {
        let mut rng = seeded(0xEC);
        let m = nhom_core::sample::random_matrix(&mut rng, n, n, 101);
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| m.kernel())
        });
    }
    group.finish();
}

criterion_group!(
    kernels,
    hochschild_pipeline,
    random_complex_homology,
    normal_ordering,
    echelon_kernel
);
criterion_main!(kernels);
