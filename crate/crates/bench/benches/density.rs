use criterion::{criterion_group, criterion_main, Criterion};
use ndschaos::sequence::density_one_witness_with;
use ndschaos::{relative_density, IndexSequence};
use std::hint::black_box;

fn relative(c: &mut Criterion) {
    let p = IndexSequence::arithmetic(0, 3).unwrap();
    let q = IndexSequence::arithmetic(1, 1).unwrap();
    c.bench_function("relative_density_1e5", |b| {
        b.iter(|| relative_density(&p, &q, black_box(100_000), 10_000).unwrap())
    });
}

fn witness(c: &mut Criterion) {
    let fams = vec![
        IndexSequence::arithmetic(0, 1).unwrap(),
        IndexSequence::powers(2).unwrap(),
    ];
    c.bench_function("density_one_witness", |b| {
        b.iter(|| density_one_witness_with(&fams, &[10, 100], 1 << 22).unwrap())
    });
}

criterion_group!(benches, relative, witness);
criterion_main!(benches);
