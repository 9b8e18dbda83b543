//! Data-parallel kernels against the sequential fallback.
//!
//! Run with `cargo bench -p fnls-core`. The `Par` entries fall back to the
//! sequential path when the crate is built without the `parallel` feature,
//! so the comparison is meaningful only with default features.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use fnls_core::dynamics::{strang_step, NonlinearitySpec};
use fnls_core::field::Field;
use fnls_core::grid::Grid;
use fnls_core::norms::spatial_lq;
use fnls_core::par::{self, Exec};
use fnls_core::symbol::RadialSymbol;
use fnls_core::Cx;

fn test_values(len: usize) -> Vec<Cx> {
    (0..len)
        .map(|i| Cx::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
        .collect()
}

fn bench_fft(c: &mut Criterion) {
    let mut group = c.benchmark_group("fft_forward");
    group.sample_size(10);
    for &(d, n) in &[(1usize, 4096usize), (3, 32), (5, 16)] {
        let grid = Grid::new_tau(d, n).unwrap();
        let src = test_values(grid.len());
        let mut dst = vec![Cx::new(0.0, 0.0); grid.len()];
        for exec in [Exec::Seq, Exec::Par] {
            group.bench_with_input(
                BenchmarkId::new(format!("{exec:?}"), format!("{n}^{d}")),
                &exec,
                |b, &exec| {
                    b.iter(|| grid.fft().forward_into_with(&src, &mut dst, exec));
                },
            );
        }
    }
    group.finish();
}

fn bench_reduction(c: &mut Criterion) {
    let mut group = c.benchmark_group("l2_reduction");
    let data = test_values(1 << 20);
    for exec in [Exec::Seq, Exec::Par] {
        group.bench_with_input(
            BenchmarkId::new(format!("{exec:?}"), "2^20"),
            &exec,
            |b, &exec| {
                b.iter(|| par::sum_elems(exec, &data, |_, v| v.norm_sqr()));
            },
        );
    }
    group.finish();
}

fn bench_symbol_apply(c: &mut Criterion) {
    let mut group = c.benchmark_group("apply_i_symbol");
    group.sample_size(10);
    let grid = Grid::new_tau(5, 16).unwrap();
    let field = Field::from_spectral(&grid, test_values(grid.len()));
    let symbol = RadialSymbol::i_operator(2.0, 1.8).unwrap();
    for exec in [Exec::Seq, Exec::Par] {
        group.bench_with_input(
            BenchmarkId::new(format!("{exec:?}"), "16^5"),
            &exec,
            |b, &exec| {
                b.iter(|| field.apply_symbol_with(&symbol, exec).unwrap());
            },
        );
    }
    group.finish();
}

fn bench_solver_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("strang_step");
    group.sample_size(10);
    let grid = Grid::new_tau(5, 16).unwrap();
    let spec = NonlinearitySpec::new(5).unwrap();
    let mut coeffs = vec![Cx::new(0.0, 0.0); grid.len()];
    for (i, r) in grid.xi_radius().iter().enumerate() {
        if *r <= 2.0 {
            coeffs[i] = Cx::new(1e-3, 5e-4);
        }
    }
    let mut field = Field::from_spectral(&grid, coeffs);
    field.to_physical();
    // normalizing keeps the benchmark state physically sensible
    let norm = spatial_lq(&field, 2.0).unwrap();
    let field = field.scale(Cx::new(1.0 / norm, 0.0));
    group.bench_function("default_exec/16^5", |b| {
        b.iter(|| strang_step(&field, 1e-3, &spec));
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_fft,
    bench_reduction,
    bench_symbol_apply,
    bench_solver_step
);
criterion_main!(benches);
