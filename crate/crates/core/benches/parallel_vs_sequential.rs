use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rhomnk::harness::{run_sweep, SweepConfig};
use rhomnk::landscape::sample_objective_correlation;
use rhomnk::rng::{RandomStream, Substream};
use rhomnk::{Execution, InstanceParams, RhoMnkInstance, Solution};

fn modes() -> [(&'static str, Execution); 2] {
    [
        ("sequential", Execution::Sequential),
        ("parallel", Execution::with_threads(None)),
    ]
}

fn batch_evaluation(c: &mut Criterion) {
    let inst = RhoMnkInstance::generate(InstanceParams::new(256, 3, 8, -0.2, 1)).unwrap();
    let mut rng = RandomStream::new(1, Substream::Sampling);
    let batch: Vec<Solution> = (0..20_000).map(|_| Solution::random(256, &mut rng)).collect();
    let mut group = c.benchmark_group("evaluate_batch");
    for (name, exec) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| inst.evaluate_batch(&batch, &exec).unwrap())
        });
    }
    group.finish();
}

fn objective_correlation(c: &mut Criterion) {
    let inst = RhoMnkInstance::generate(InstanceParams::new(64, 2, 4, 0.4, 2)).unwrap();
    let mut group = c.benchmark_group("objective_correlation");
    for (name, exec) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                let mut rng = RandomStream::new(2, Substream::Sampling);
                sample_objective_correlation(&inst, 10_000, &mut rng, &exec).unwrap()
            })
        });
    }
    group.finish();
}

fn small_sweep(c: &mut Criterion) {
    let config = SweepConfig {
        n_values: vec![32],
        m_values: vec![2],
        k_values: vec![2, 6],
        rho_values: vec![-0.4, 0.4],
        mu: 10,
        walk_length: 500,
        replicates: 4,
        ..SweepConfig::default()
    };
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for (name, exec) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| run_sweep(&config, &exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, batch_evaluation, objective_correlation, small_sweep);
criterion_main!(benches);
