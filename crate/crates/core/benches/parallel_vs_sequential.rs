use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use comblab::bench::run;
use comblab::exec::Exec;
use comblab::generators::{generate, Scenario};
use comblab::overlay::{marked_faces_complexity, single_face_overlay};

fn overlay(c: &mut Criterion) {
    let sc = Scenario::Random { n: 160, t: 8, k: 6, size: 60, length: 12 };
    let inst = generate(&sc, 3).expect("scenario generates");
    let p = inst.points[0].clone();
    let mut group = c.benchmark_group("single_face");
    group.sample_size(10);
    for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| single_face_overlay(&inst, &p, exec).expect("face"))
        });
    }
    group.finish();

    let mut group = c.benchmark_group("marked_faces");
    group.sample_size(10);
    for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| marked_faces_complexity(&inst, exec).expect("complexities"))
        });
    }
    group.finish();

    let scenarios: Vec<Scenario> = (0..4).map(|i| Scenario::Stabber { n: 16 + 4 * i, size: 20 }).collect();
    let mut group = c.benchmark_group("trials");
    group.sample_size(10);
    for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| run(&scenarios, 2, 1, exec))
        });
    }
    group.finish();
}

criterion_group!(benches, overlay);
criterion_main!(benches);
