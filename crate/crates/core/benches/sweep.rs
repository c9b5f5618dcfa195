use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use moncomp_core::gen::{case_rng, random_tree, ProgramGen};
use moncomp_core::grading::NatInf;
use moncomp_core::machine::{encode_program, run, universal_program, Program};
use moncomp_core::sweep::{map_par, map_seq};
use moncomp_core::Tree;

fn workload(n: u64) -> Vec<(Program, Tree)> {
    (0..n)
        .map(|i| {
            let mut rng = case_rng(42, i);
            (
                ProgramGen::default().terminating(&mut rng),
                random_tree(&mut rng, 8),
            )
        })
        .collect()
}

/// Interpret each program through the universal program.
fn interpret(case: &(Program, Tree)) -> Option<u64> {
    let arg = Tree::cons(encode_program(&case.0), case.1.clone());
    run(universal_program(), arg, NatInf::Fin(10_000_000)).time()
}

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("universal_sweep");
    group.sample_size(10);
    for n in [16u64, 64] {
        let cases = workload(n);
        group.bench_with_input(BenchmarkId::new("sequential", n), &cases, |b, cases| {
            b.iter(|| map_seq(cases, interpret))
        });
        group.bench_with_input(BenchmarkId::new("parallel", n), &cases, |b, cases| {
            b.iter(|| map_par(cases, interpret))
        });
    }
    group.finish();
}

criterion_group!(benches, sweep);
criterion_main!(benches);
