//! Compares the data-parallel build (default, rayon) against the sequential
//! fallback. Run twice and diff the reports:
//!
//! ```text
//! cargo bench --bench parallel
//! cargo bench --bench parallel --no-default-features
//! ```
//!
//! Bench ids carry the active mode so both runs land side by side in the
//! criterion report directory.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use schottky::{fractal, io};
use std::hint::black_box;

const MODE: &str = if cfg!(feature = "parallel") { "parallel" } else { "sequential" };

fn bench_poincare(c: &mut Criterion) {
    let group = io::preset("sym2").unwrap().build().unwrap();
    let z = Complex64::new(0.0, 1.0);
    let mut g = c.benchmark_group("poincare_differential");
    for lmax in [5usize, 7] {
        g.bench_with_input(BenchmarkId::new(MODE, lmax), &lmax, |b, &lmax| {
            b.iter(|| fractal::poincare_differential(black_box(&group), 0, z, lmax).unwrap())
        });
    }
    g.finish();
}

fn bench_period_integral(c: &mut Criterion) {
    let group = io::preset("sym2").unwrap().build().unwrap();
    let mut g = c.benchmark_group("period_integral");
    for m in [64usize, 256] {
        g.bench_with_input(BenchmarkId::new(MODE, m), &m, |b, &m| {
            b.iter(|| fractal::period_integral(black_box(&group), 0, 0, 6, m).unwrap())
        });
    }
    g.finish();
}

fn bench_transfer_leading(c: &mut Criterion) {
    let group = io::preset("sym2").unwrap().build().unwrap();
    let mut g = c.benchmark_group("transfer_leading");
    for depth in [6usize, 8] {
        let tree = fractal::cylinder_tree(&group, depth).unwrap();
        g.bench_with_input(BenchmarkId::new(MODE, depth), &depth, |b, _| {
            b.iter(|| fractal::transfer_leading(black_box(&group), &tree, 0.31).unwrap())
        });
    }
    g.finish();
}

fn bench_cylinder_tree(c: &mut Criterion) {
    let group = io::preset("sym2").unwrap().build().unwrap();
    let mut g = c.benchmark_group("cylinder_tree");
    for depth in [6usize, 9] {
        g.bench_with_input(BenchmarkId::new(MODE, depth), &depth, |b, &depth| {
            b.iter(|| fractal::cylinder_tree(black_box(&group), depth).unwrap())
        });
    }
    g.finish();
}

criterion_group!(
    benches,
    bench_poincare,
    bench_period_integral,
    bench_transfer_leading,
    bench_cylinder_tree
);
criterion_main!(benches);
