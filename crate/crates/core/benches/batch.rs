use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qgrav::bodies::bundled_planets;
use qgrav::calibration::sweep_delta;
use qgrav::numeric::measure_batch;
use qgrav::{Constants, Execution, QuantumRule};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn sweep(c: &mut Criterion) {
    let consts = Constants::default();
    let mercury = bundled_planets().remove(0);
    let mut group = c.benchmark_group("sweep_delta_100k");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                sweep_delta(&consts, &mercury, 0.0, 0.1, 100_000, QuantumRule::default(), exec).unwrap()
            })
        });
    }
    group.finish();
}

fn integration(c: &mut Criterion) {
    let consts = Constants::default();
    let planets: Vec<_> = std::iter::repeat_n(bundled_planets(), 4).flatten().collect();
    let mut group = c.benchmark_group("measured_precession_12x10_orbits");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                measure_batch(&consts, &planets, 0.0398, QuantumRule::default(), 10, 1e-12, exec).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, sweep, integration);
criterion_main!(benches);
