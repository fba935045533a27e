use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use pillowcase::oracle::{correlator_crosscheck, image_table_check, rh_uniqueness_check, sl2_orbit_representatives};
use pillowcase::orbi::{total_count_series_with, MarkingPermutation};
use pillowcase::potential::assemble_potential_with;
use pillowcase::Exec;

fn strategies() -> Vec<(&'static str, Exec)> {
    let mut v = vec![("sequential", Exec::Sequential)];
    if Exec::default().is_parallel() {
        v.push(("parallel", Exec::Parallel));
    }
    v
}

fn bench(c: &mut Criterion) {
    let mut g = c.benchmark_group("sweeps");
    g.sample_size(10);
    for (name, exec) in strategies() {
        g.bench_with_input(BenchmarkId::new("sl2_orbits_d12", name), &exec, |b, &e| {
            b.iter(|| sl2_orbit_representatives(black_box(12), e).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("rh_d9", name), &exec, |b, &e| {
            b.iter(|| rh_uniqueness_check(black_box(9), false, e).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("image_table_200", name), &exec, |b, &e| {
            b.iter(|| image_table_check(black_box(200), false, e))
        });
        g.bench_with_input(BenchmarkId::new("crosscheck_200", name), &exec, |b, &e| {
            b.iter(|| correlator_crosscheck(black_box(200), &MarkingPermutation::ALL, e))
        });
        g.bench_with_input(BenchmarkId::new("total_count_400", name), &exec, |b, &e| {
            b.iter(|| total_count_series_with(black_box(400), e))
        });
        g.bench_with_input(BenchmarkId::new("potential_200", name), &exec, |b, &e| {
            b.iter(|| assemble_potential_with(black_box(200), e).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
