use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nmkdv_core::asymptotics::{sweep, AsymOptions};
use nmkdv_core::exec::Execution;
use nmkdv_core::scattering::{scatter_grid, ScatterOptions, StepProfile};
use nmkdv_core::soliton::{one_soliton, SolitonParams};
use nmkdv_core::spectral::{DeltaOptions, SpectralBuildOptions, SpectralData};
use nmkdv_core::validation::{pde_residual, symmetric_axis, FieldGrid};
use std::hint::black_box;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn scatter(c: &mut Criterion) {
    let profile = StepProfile::bump_step(2.0, -0.8, -1.0, 0.4);
    let ks: Vec<f64> = (0..64).map(|j| 0.05 + 0.3 * j as f64).collect();
    let mut g = c.benchmark_group("scatter_grid_bump_64k");
    g.sample_size(10);
    for (name, ex) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| scatter_grid(&profile, black_box(&ks), &ScatterOptions::default(), ex).unwrap()));
    }
    g.finish();
}

fn residual(c: &mut Criterion) {
    let p = SolitonParams::new(1.0, -1.0).unwrap();
    let ax = symmetric_axis(10.0, 0.025);
    let field = FieldGrid::from_fn(ax.clone(), ax, |x, t| one_soliton(&p, x, t), Execution::Parallel).unwrap();
    let mut g = c.benchmark_group("pde_residual_801x801");
    for (name, ex) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| pde_residual(black_box(&field), 1.0, ex).unwrap()));
    }
    g.finish();
}

fn asym_sweep(c: &mut Criterion) {
    let sd = SpectralData::pure_step(2.0, &SpectralBuildOptions::default()).unwrap();
    let pts: Vec<(f64, f64)> = [-0.5, -1.0, -2.0, -4.0].iter().flat_map(|&xi| (1..=50).map(move |j| (12.0 * xi * j as f64, j as f64))).collect();
    let mut g = c.benchmark_group("asym_sweep_4rays");
    g.sample_size(10);
    for (name, ex) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| sweep(black_box(&pts), &sd, &AsymOptions::default(), DeltaOptions::default(), ex).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, scatter, residual, asym_sweep);
criterion_main!(benches);
