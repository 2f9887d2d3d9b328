use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ngi_core::sweep::{run_sweep_with, Axis, Execution, Grid, Quantity, SpecSource, SweepRequest};

fn request(quantity: Quantity, preset: &str, side: usize) -> SweepRequest {
    let grid = Grid {
        lambda: Axis::new(0.05, 0.95, side),
        tau: Axis::new(0.05, 0.95, side),
        phi: Axis::point(0.01),
    };
    SweepRequest::new(quantity, SpecSource::preset(preset).unwrap(), grid).unwrap()
}

fn sequential_vs_parallel(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for (quantity, preset) in [
        (Quantity::WeightedMerit, "sym-pa-1"),
        (Quantity::Qfi, "sym-pc-2"),
    ] {
        let req = request(quantity, preset, 16);
        for exec in [Execution::Sequential, Execution::Parallel] {
            let id = BenchmarkId::new(format!("{quantity}/{preset}"), format!("{exec:?}"));
            group.bench_with_input(id, &req, |b, req| {
                b.iter(|| run_sweep_with(req, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, sequential_vs_parallel);
criterion_main!(benches);
