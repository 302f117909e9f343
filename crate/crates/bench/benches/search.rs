use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use posetrace::poset::{butterfly, chain};
use posetrace::search::{arrow, count_downsets, solve_la, solve_tr, DownsetFilter};
use posetrace::SearchBudget;

fn tr_butterfly(c: &mut Criterion) {
    let budget = SearchBudget::default().with_workers(1);
    let b = butterfly();
    let mut group = c.benchmark_group("tr_butterfly");
    group.sample_size(10);
    for n in [4, 5, 6] {
        group.bench_function(format!("n={n}"), |bench| bench.iter(|| solve_tr(black_box(n), &b, &budget).unwrap()));
    }
    group.finish();
}

fn la_chain(c: &mut Criterion) {
    let budget = SearchBudget::default().with_workers(1);
    let p3 = chain(3).unwrap();
    c.bench_function("la_p3_n5", |bench| bench.iter(|| solve_la(black_box(5), &p3, &budget).unwrap()));
}

fn arrows(c: &mut Criterion) {
    let budget = SearchBudget::default().with_workers(1);
    c.bench_function("arrow_6_11_5_9", |bench| bench.iter(|| arrow(6, black_box(11), 5, 9, &budget).unwrap()));
    c.bench_function("arrow_7_12_5_9", |bench| bench.iter(|| arrow(7, black_box(12), 5, 9, &budget).unwrap()));
}

fn downsets(c: &mut Criterion) {
    c.bench_function("count_downsets_n5", |bench| {
        bench.iter(|| count_downsets(black_box(5), DownsetFilter::default()).unwrap())
    });
}

criterion_group!(benches, tr_butterfly, la_chain, arrows, downsets);
criterion_main!(benches);
