//! Wall-clock cost of the simulator itself: how fast each kernel runs under
//! miss accounting. Miss counts are measured by `iomodel bench`, not here.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use iomodel::harness::{bench_instance, measure};
use iomodel::recurrence::{classify, numeric_unroll, parse_recurrence};

fn kernels(c: &mut Criterion) {
    let cases: &[(&str, usize, usize, usize)] = &[
        ("scan", 1 << 16, 1024, 16),
        ("ext_sort", 1 << 14, 1024, 16),
        ("ov_recursive", 512, 1024, 16),
        ("hitting_set_blocked", 512, 1024, 16),
        ("three_sum_baseline", 512, 1024, 16),
        ("minplus_blocked", 64, 256, 8),
        ("zero_triangle_blocked", 64, 256, 8),
        ("mm_strassen", 64, 256, 8),
        ("diameter_2v3_cache_aware", 1024, 512, 8),
    ];
    let mut g = c.benchmark_group("simulated");
    g.sample_size(10);
    for &(algo, n, m, b) in cases {
        let inst = bench_instance(algo, n, 1).unwrap();
        g.bench_with_input(BenchmarkId::new(algo, n), &inst, |bch, inst| {
            bch.iter(|| measure(algo, m, b, None, black_box(inst)).unwrap().stats.misses)
        });
    }
    g.finish();
}

fn recurrences(c: &mut Criterion) {
    let spec = parse_recurrence("T(n)=7T(n/2)+n^2/B; base(sqrtM)=M/B").unwrap();
    c.bench_function("classify", |b| b.iter(|| classify(black_box(&spec)).unwrap()));
    c.bench_function("numeric_unroll", |b| b.iter(|| numeric_unroll(black_box(&spec), 2f64.powi(40), 65536.0, 16.0)));
}

criterion_group!(benches, kernels, recurrences);
criterion_main!(benches);
