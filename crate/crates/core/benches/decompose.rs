use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use secview::decompose::{decompose, decompose_reference, DecomposeOptions};
use secview::exec::Execution;
use secview::synth::{random_instance, Instance, InstanceShape};

fn instance(shape: InstanceShape, seed: u64) -> Instance {
    random_instance(&shape, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn wide(arity: usize) -> Instance {
    instance(
        InstanceShape {
            max_sets: 5,
            max_fds: arity,
            cross_relation_fds: false,
            ..InstanceShape::single_relation(arity)
        },
        arity as u64,
    )
}

fn reference_vs_optimized(c: &mut Criterion) {
    let mut group = c.benchmark_group("single_relation");
    group.sample_size(10);
    for arity in [12, 16, 18] {
        let inst = wide(arity);
        let opts = DecomposeOptions::default();
        group.bench_with_input(BenchmarkId::new("reference", arity), &inst, |b, inst| {
            b.iter(|| decompose_reference(&inst.schema, &inst.policy, &opts).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("optimized", arity), &inst, |b, inst| {
            b.iter(|| decompose(&inst.schema, &inst.policy, &opts).unwrap())
        });
    }
    group.finish();
}

fn sequential_vs_parallel(c: &mut Criterion) {
    let mut group = c.benchmark_group("execution");
    group.sample_size(10);
    let many = instance(
        InstanceShape {
            max_relations: 12,
            min_arity: 10,
            max_arity: 14,
            max_sets: 12,
            max_fds: 40,
            ..InstanceShape::default()
        },
        3,
    );
    let single = wide(18);
    for (label, inst) in [("many_relations", &many), ("reference_sweep_18", &single)] {
        for execution in [Execution::Sequential, Execution::Parallel] {
            let opts = DecomposeOptions {
                execution,
                ..DecomposeOptions::default()
            };
            let id = BenchmarkId::new(label, format!("{execution:?}"));
            if label == "many_relations" {
                group.bench_function(id, |b| b.iter(|| decompose(&inst.schema, &inst.policy, &opts).unwrap()));
            } else {
                group.bench_function(id, |b| {
                    b.iter(|| decompose_reference(&inst.schema, &inst.policy, &opts).unwrap())
                });
            }
        }
    }
    group.finish();
}

criterion_group!(benches, reference_vs_optimized, sequential_vs_parallel);
criterion_main!(benches);
