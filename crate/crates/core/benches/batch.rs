use std::hint::black_box;

use atsp_core::generate::gen_random;
use atsp_core::par;
use atsp_core::{solve, Heuristic, Instance, ModelConfig, Relax, SolveConfig};
use criterion::{criterion_group, criterion_main, Criterion};

fn batch() -> Vec<Instance> {
    (0..32).map(|seed| gen_random(10, seed, (1, 100), 0.6, 1 + (seed as usize % 3))).collect()
}

fn run(inst: &Instance) -> u64 {
    let cfg = SolveConfig {
        heuristic: Heuristic::EnforceSparse,
        model: ModelConfig::All,
        relax: Relax::Tree,
        ..SolveConfig::default()
    };
    solve(inst, &cfg).nodes
}

fn bench_batch(c: &mut Criterion) {
    let instances = batch();
    let mut g = c.benchmark_group("batch_solve");
    g.sample_size(10);
    g.bench_function("sequential", |b| b.iter(|| par::map_sequential(black_box(&instances), run)));
    #[cfg(feature = "parallel")]
    g.bench_function("parallel", |b| b.iter(|| par::map_parallel(black_box(&instances), run)));
    g.finish();
}

criterion_group!(benches, bench_batch);
criterion_main!(benches);
