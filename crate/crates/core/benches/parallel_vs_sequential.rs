use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ehybrid_core::noise::{dipole_field_noise, IntegrationOptions, SurfaceGeometry};
use ehybrid_core::par::Exec;
use ehybrid_core::scenario::{builtin, parse_value, sweep};
use ehybrid_core::trap::{stability_scan, StabilityOptions, TrapFieldModel};

const MODES: [(Exec, &str); 2] = [(Exec::Sequential, "sequential"), (Exec::Parallel, "parallel")];

fn stability(c: &mut Criterion) {
    let grid: Vec<(f64, f64)> = (0..16).map(|i| (0.0, 0.1 + 0.06 * i as f64)).collect();
    let opts = StabilityOptions {
        secular_periods: 50.0,
        ..Default::default()
    };
    let rf = 2.0 * PI * 1e9;
    let mut g = c.benchmark_group("stability_scan");
    g.sample_size(10);
    for (exec, name) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| stability_scan(exec, black_box(&grid), |a, q| TrapFieldModel::mathieu(a, q, rf), &opts).unwrap())
        });
    }
    g.finish();
}

fn surface(c: &mut Criterion) {
    let ring = SurfaceGeometry::ring(100e-6, 20e-6);
    let opts = IntegrationOptions {
        tolerance: 1e-4,
        max_level: 7,
    };
    let mut g = c.benchmark_group("dipole_field_noise");
    g.sample_size(10);
    for (exec, name) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| dipole_field_noise(exec, black_box(&ring), ring.reference_point(), &opts).unwrap())
        });
    }
    g.finish();
}

fn scenario_sweep(c: &mut Criterion) {
    let spec = builtin("noise-tip-factor").unwrap();
    let values: Vec<_> = ["30 um", "50 um", "70 um", "90 um"].into_iter().map(parse_value).collect();
    let mut g = c.benchmark_group("sweep");
    g.sample_size(10);
    for (exec, name) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| sweep(exec, black_box(&spec), "r0", &values).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, stability, surface, scenario_sweep);
criterion_main!(benches);
