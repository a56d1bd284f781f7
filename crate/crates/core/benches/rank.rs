use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use koszul_core::algebra::{rank_with, PrimeField, RankOptions};
use koszul_core::koszul::complex::build_differential_with;
use koszul_core::koszul::GradedModule;

const PRIME: u64 = 1_000_003;

fn modules() -> Vec<(String, GradedModule, i64)> {
    let f = PrimeField::new(PRIME).unwrap();
    vec![
        ("rnc8".into(), GradedModule::rational_normal_curve(f, 8, 2), 4),
        ("quad7".into(), GradedModule::random_quadratic(f, 7, 20, 1).unwrap(), 3),
        ("quad9".into(), GradedModule::random_quadratic(f, 9, 24, 1).unwrap(), 4),
    ]
}

fn differentials(c: &mut Criterion) {
    let mut g = c.benchmark_group("build_differential");
    g.sample_size(10);
    for (name, m, p) in modules() {
        for parallel in [false, true] {
            let mode = if parallel { "parallel" } else { "sequential" };
            g.bench_with_input(BenchmarkId::new(mode, &name), &m, |b, m| {
                b.iter(|| build_differential_with(m, p, 1, parallel).unwrap())
            });
        }
    }
    g.finish();
}

fn ranks(c: &mut Criterion) {
    let mut g = c.benchmark_group("rank");
    g.sample_size(10);
    for (name, m, p) in modules() {
        let d = build_differential_with(&m, p, 1, false).unwrap();
        for parallel in [false, true] {
            let mode = if parallel { "parallel" } else { "sequential" };
            let opts = RankOptions {
                parallel,
                ..RankOptions::default()
            };
            g.bench_with_input(BenchmarkId::new(mode, &name), &d, |b, d| b.iter(|| rank_with(d, &opts)));
        }
    }
    g.finish();
}

criterion_group!(benches, differentials, ranks);
criterion_main!(benches);
