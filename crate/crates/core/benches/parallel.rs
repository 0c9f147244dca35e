use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use shifted_graver::analysis::{count_scan, differential_test, Method};
use shifted_graver::oracle::graver_oracle_with;
use shifted_graver::{Execution, SemigroupInstance, ShiftedFamily};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("graver_oracle");
    let inst = SemigroupInstance::from_generators(307, 319, 334).unwrap();
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, inst.t()), &exec, |b, &exec| {
            b.iter(|| graver_oracle_with(&inst, exec).unwrap())
        });
    }
    g.finish();
}

fn scan(c: &mut Criterion) {
    let mut g = c.benchmark_group("count_scan");
    let fam = ShiftedFamily::new(3, 4, 2).unwrap();
    for (name, exec) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| count_scan(&fam, 1, 400, Method::Oracle, exec).unwrap())
        });
    }
    g.finish();
}

fn differential(c: &mut Criterion) {
    let mut g = c.benchmark_group("differential");
    g.sample_size(10);
    let fams: Vec<ShiftedFamily> = [(2, 3, 1), (3, 4, 2), (2, 5, 3)]
        .into_iter()
        .map(|(a, b, d)| ShiftedFamily::new(a, b, d).unwrap())
        .collect();
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| differential_test(&fams, 1, exec)));
    }
    g.finish();
}

criterion_group!(benches, oracle, scan, differential);
criterion_main!(benches);
