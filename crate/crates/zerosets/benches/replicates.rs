//! Replicate-parallel throughput: rayon pools of several sizes against the
//! sequential fallback, on the two inner loops that dominate experiment
//! runtime (path sampling + solver, and the slln slope pipeline).

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use zerosets::bessel::{last_zero, scheme_for, slln_path_slope, SllnParams};
use zerosets::parallel::{map_replicates, map_serial, Workers};
use zerosets::paths::{BrownianPath, GridSpec};
use zerosets::rng::derive_seed;

fn disjoint_replicate(seed: u64, level: u32) -> f64 {
    let grid = GridSpec::from_times(0.0, 1.0, level).unwrap();
    let path = BrownianPath::sample(grid, seed).unwrap();
    let g1 = last_zero(&path, 0.5, 0.0, 1.0, scheme_for(0.5), 0.0).unwrap();
    let g2 = last_zero(&path, 1.5, 0.0, 1.0, scheme_for(1.5), 0.0).unwrap();
    g1 - g2
}

fn bench_disjoint(c: &mut Criterion) {
    let mut group = c.benchmark_group("disjoint-replicates");
    group.sample_size(10);
    let n = 64;
    let level = 14;
    group.bench_function("serial", |b| {
        b.iter(|| map_serial(n, |r| disjoint_replicate(derive_seed(1, r as u64), level)))
    });
    for threads in [1usize, 2, 4, 8] {
        group.bench_with_input(
            BenchmarkId::new("rayon", threads),
            &threads,
            |b, &threads| {
                b.iter(|| {
                    map_replicates(Workers::from_count(threads), n, |r| {
                        disjoint_replicate(derive_seed(1, r as u64), level)
                    })
                })
            },
        );
    }
    group.finish();
}

fn bench_slln(c: &mut Criterion) {
    let mut group = c.benchmark_group("slln-replicates");
    group.sample_size(10);
    let params = SllnParams::new(1.0, 12, 4, 10);
    let n = 32;
    group.bench_function("serial", |b| {
        b.iter(|| {
            map_serial(n, |r| {
                slln_path_slope(derive_seed(2, r as u64), &params).unwrap()
            })
        })
    });
    for threads in [2usize, 4] {
        group.bench_with_input(
            BenchmarkId::new("rayon", threads),
            &threads,
            |b, &threads| {
                b.iter(|| {
                    map_replicates(Workers::from_count(threads), n, |r| {
                        slln_path_slope(derive_seed(2, r as u64), &params).unwrap()
                    })
                })
            },
        );
    }
    group.finish();
}

criterion_group!(benches, bench_disjoint, bench_slln);
criterion_main!(benches);
