use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use leakbound_bench::{distinct_instance, shared_instance};
use leakbound_core::bounds::{
    bound_leakage_distinct, bound_leakage_shared, identity_joint_gain, support_ratios,
};
use leakbound_core::compose::{par_distinct_n, par_shared_n};
use leakbound_core::measures::min_entropy_leakage;
use leakbound_core::TUPLE_SEP;
use std::hint::black_box;

fn shared(c: &mut Criterion) {
    let mut group = c.benchmark_group("shared_10x10");
    group.sample_size(10);
    for n in [1usize, 2, 3, 4, 5, 6] {
        let (pi, cs, _) = shared_instance(10, n, 1);
        let refs: Vec<_> = cs.iter().collect();
        group.bench_with_input(BenchmarkId::new("exact", n), &n, |b, _| {
            b.iter(|| min_entropy_leakage(&pi, &par_shared_n(black_box(&refs)).unwrap()).unwrap())
        });
    }
    for n in [1usize, 2, 4, 8, 16, 32, 64] {
        let (pi, cs, g) = shared_instance(10, n, 1);
        let refs: Vec<_> = cs.iter().collect();
        group.bench_with_input(BenchmarkId::new("bound", n), &n, |b, _| {
            b.iter(|| bound_leakage_shared(&pi, black_box(&refs), &g).unwrap())
        });
    }
    group.finish();
}

fn distinct(c: &mut Criterion) {
    let mut group = c.benchmark_group("distinct_5x5");
    group.sample_size(10);
    for n in [2usize, 3, 4] {
        let (pi, cs) = distinct_instance(5, n, 2);
        let refs: Vec<_> = cs.iter().collect();
        let g = identity_joint_gain(&pi).unwrap();
        group.bench_with_input(BenchmarkId::new("exact", n), &n, |b, _| {
            b.iter(|| {
                let composed = par_distinct_n(black_box(&refs)).unwrap();
                let flat = pi.flatten(TUPLE_SEP);
                let composed = composed
                    .relabeled(flat.labels().to_vec(), composed.outputs().to_vec())
                    .unwrap();
                min_entropy_leakage(&flat, &composed).unwrap()
            })
        });
        group.bench_with_input(BenchmarkId::new("bound", n), &n, |b, _| {
            b.iter(|| bound_leakage_distinct(&pi, black_box(&refs), &g).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("support_ratios", n), &n, |b, _| {
            b.iter(|| support_ratios(black_box(&pi), &g).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, shared, distinct);
criterion_main!(benches);
