use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use synchrokit::pairgraph::PairDigraph;
use synchrokit::sync::{potential_lower_bound_with, reset_threshold_exact_with, ExactOptions};
use synchrokit::{families, Exec, StateSet};

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn exact_bfs(c: &mut Criterion) {
    let mut g = c.benchmark_group("exact_bfs");
    g.sample_size(10);
    for n in [14, 18] {
        let d = families::cerny(n).unwrap();
        for (name, exec) in MODES {
            let opts = ExactOptions {
                exec,
                ..ExactOptions::default()
            };
            g.bench_with_input(BenchmarkId::new(name, n), &d, |b, d| {
                b.iter(|| reset_threshold_exact_with(black_box(d), &opts).unwrap())
            });
        }
    }
    g.finish();
}

fn pair_diameter(c: &mut Criterion) {
    let mut g = c.benchmark_group("pair_diameter");
    g.sample_size(10);
    for n in [31, 51] {
        let pd = PairDigraph::new(&families::f(n).unwrap()).unwrap();
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, n), &pd, |b, pd| {
                b.iter(|| black_box(pd).diameter(exec))
            });
        }
    }
    g.finish();
}

fn potential(c: &mut Criterion) {
    let mut g = c.benchmark_group("potential");
    g.sample_size(10);
    for n in [14, 18] {
        let d = families::v(n).unwrap();
        let weights: Vec<u64> = (0..n as u64).collect();
        let target = StateSet::from_states(n, &[0]).unwrap();
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, n), &d, |b, d| {
                b.iter(|| {
                    potential_lower_bound_with(black_box(d), &weights, &target, exec).unwrap()
                })
            });
        }
    }
    g.finish();
}

criterion_group!(benches, exact_bfs, pair_diameter, potential);
criterion_main!(benches);
