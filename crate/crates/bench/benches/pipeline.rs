use criterion::{criterion_group, criterion_main, Criterion};
use derham_bench::random_batch;
use derham_core::corpus;
use derham_core::derham_decompose::decompose;
use derham_core::oracle::crosscheck;

fn bench_decompose(c: &mut Criterion) {
    let mut group = c.benchmark_group("decompose");
    for inst in corpus::all() {
        group.bench_function(&inst.name, |b| b.iter(|| decompose(&inst.rep, 0)));
    }
    group.finish();
}

fn bench_duality(c: &mut Criterion) {
    let reps = random_batch(32);
    c.bench_function("duality_batch_32", |b| {
        b.iter(|| {
            for rep in &reps {
                let fixed = rep.fixed_space();
                let moved = rep.moved_span();
                assert_eq!(fixed, rep.space().orth_complement(&moved));
            }
        })
    });
}

fn bench_oracle(c: &mut Criterion) {
    let inst = corpus::wu_factor();
    let report = decompose(&inst.rep, 0);
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    group.bench_function("crosscheck_wu_factor_mod_5", |b| {
        b.iter(|| crosscheck(&inst.rep, &report, &[5]))
    });
    group.finish();
}

criterion_group!(benches, bench_decompose, bench_duality, bench_oracle);
criterion_main!(benches);
