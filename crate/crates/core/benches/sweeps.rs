//! Sequential versus parallel execution of the two data-parallel workloads:
//! error-pattern sweeps and exhaustive induced-code audits.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use dpe_codec::double::DoubleScheme;
use dpe_codec::metric::Metric;
use dpe_codec::oracle::{enumerate_induced_code, induced_min_distance};
use dpe_codec::par::Exec;
use dpe_codec::single::SingleScheme;
use dpe_codec::sweep::{sweep, Pattern, SweepConfig};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    let dec = DoubleScheme::dec(2, 3, 31).unwrap();
    let sec = SingleScheme::sec(2, 3, 15).unwrap();
    for (name, exec) in MODES {
        let cfg = SweepConfig {
            words: 4,
            seed: 1,
            pattern: Pattern::l1_up_to(2),
            exec,
        };
        group.bench_with_input(BenchmarkId::new("dec-p31-weight2", name), &cfg, |b, cfg| {
            b.iter(|| sweep(&dec, cfg).unwrap())
        });
        let cfg = SweepConfig {
            words: 64,
            seed: 1,
            pattern: Pattern::l1_up_to(1),
            exec,
        };
        group.bench_with_input(BenchmarkId::new("sec-n15-weight1", name), &cfg, |b, cfg| {
            b.iter(|| sweep(&sec, cfg).unwrap())
        });
    }
    group.finish();
}

fn min_distance(c: &mut Criterion) {
    let mut group = c.benchmark_group("induced-min-distance");
    group.sample_size(10);
    let s = DoubleScheme::dec(2, 2, 11).unwrap();
    let words = enumerate_induced_code(&s).unwrap();
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("dec-p11", name), &exec, |b, &exec| {
            b.iter(|| induced_min_distance(&words, Metric::L1, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, sweeps, min_distance);
criterion_main!(benches);
