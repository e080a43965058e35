use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lpf_core::aggregate::{weighted_tail, AggregateConfig, Method};
use lpf_core::bounds::{region_integral_mc, BoundParams, Delta, Region};
use lpf_core::empirical::{factor_range, RangeJob};
use lpf_core::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn second_bound_tail(c: &mut Criterion) {
    let mut g = c.benchmark_group("second_bound_tail_133_160");
    g.sample_size(10);
    for (name, exec) in MODES {
        let cfg = AggregateConfig {
            execution: exec,
            ..AggregateConfig::default()
        };
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| weighted_tail(&cfg, 133, 160, Method::Second).unwrap())
        });
    }
    g.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let p = BoundParams::new(12, Delta::new(1, 8).unwrap(), 3, 5).unwrap();
    let region = Region::Maximal { lower_constraint: true };
    let mut g = c.benchmark_group("region_mc_1e6");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| region_integral_mc(&p, region, 1_000_000, 1, exec).unwrap())
        });
    }
    g.finish();
}

fn factorisation(c: &mut Criterion) {
    let job = RangeJob {
        x_min: 100_000,
        x_max: 120_000,
        threshold: 1000,
        h: 3,
        segment_size: 4096,
    };
    let mut g = c.benchmark_group("factor_range_20k");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| factor_range(&job, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, second_bound_tail, monte_carlo, factorisation);
criterion_main!(benches);
