use cluster_forge::batches::{separation_batch, separation_cases};
use cluster_forge::corpus::seed_fixture;
use cluster_forge::gfan::{enumerate_gfan, DEFAULT_DEPTH};
use cluster_forge::seeds::{ClusterSeed, ExchangeData, YSeed};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn fixture(name: &str) -> ExchangeData {
    seed_fixture(name).unwrap().exchange_data().unwrap()
}

fn mutation(c: &mut Criterion) {
    let a3 = fixture("a3");
    let path = [0, 1, 2, 0, 1, 2, 0, 1];
    c.bench_function("y-pattern principal A3 length 8", |b| {
        b.iter(|| YSeed::principal(&a3, "y", "p").mutate_path(black_box(&path)).unwrap())
    });
    c.bench_function("cluster principal A3 length 8", |b| {
        b.iter(|| ClusterSeed::principal(&a3, "x", "p").mutate_path(black_box(&path)).unwrap())
    });
}

fn enumeration(c: &mut Criterion) {
    let a3 = fixture("a3");
    let g2 = fixture("g2");
    c.bench_function("enumerate g-fan A3", |b| b.iter(|| enumerate_gfan(black_box(&a3), &[], DEFAULT_DEPTH).unwrap()));
    c.bench_function("enumerate g-fan G2", |b| b.iter(|| enumerate_gfan(black_box(&g2), &[], DEFAULT_DEPTH).unwrap()));
}

fn separation(c: &mut Criterion) {
    let cases = separation_cases(None, 20, 6, 0);
    c.bench_function("separation 20 pool paths", |b| b.iter(|| separation_batch(black_box(&cases)).unwrap()));
}

criterion_group!(benches, mutation, enumeration, separation);
criterion_main!(benches);
