use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use epsilon_core::ars::{exhaustive_sweep, fuzz_sweep};
use epsilon_core::check::{check_corpus, CheckConfig};
use epsilon_core::exec::Exec;
use epsilon_core::gen::{corpus, GenConfig};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("exhaustive_sweep_3_nodes");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| exhaustive_sweep(3, 8, exec)));
    }
    g.finish();
}

fn fuzz(c: &mut Criterion) {
    let mut g = c.benchmark_group("fuzz_sweep_20k");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| fuzz_sweep(7, 20_000, 4, 7, exec)));
    }
    g.finish();
}

fn corpus_check(c: &mut Criterion) {
    let formulas = corpus(42, 200, &GenConfig::default(), Exec::Sequential);
    let cfg = CheckConfig::default();
    let mut g = c.benchmark_group("check_corpus_200");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| check_corpus(&formulas, &cfg, exec)));
    }
    g.finish();
}

criterion_group!(benches, sweep, fuzz, corpus_check);
criterion_main!(benches);
