use criterion::{black_box, criterion_group, criterion_main, Criterion};

use negacirc_bench::first_self_dual_generator;
use negacirc_core::census::{census_double, exhaustive_double, make_crt_context, DoubleMode};
use negacirc_core::field::field_of_order;
use negacirc_core::nega::min_distance;
use negacirc_core::poly::factorize;
use negacirc_core::{classify, Poly};

fn factorization(c: &mut Criterion) {
    let mut group = c.benchmark_group("factorize");
    for (q, n) in [(3u64, 22usize), (7, 22), (9, 38), (3, 94)] {
        let f = Poly::xn_plus_one(&field_of_order(q).unwrap(), n);
        group.bench_function(format!("x^{n}+1 over F_{q}"), |b| b.iter(|| factorize(black_box(&f)).unwrap()));
    }
    group.finish();
}

fn census(c: &mut Criterion) {
    let mut group = c.benchmark_group("census");
    group.sample_size(10);
    let f11 = field_of_order(11).unwrap();
    group.bench_function("exhaustive q=11 n=6", |b| b.iter(|| exhaustive_double(black_box(&f11), 6).unwrap()));
    let f3 = field_of_order(3).unwrap();
    group.bench_function("exhaustive q=3 n=14", |b| b.iter(|| exhaustive_double(black_box(&f3), 14).unwrap()));
    let ctx = make_crt_context(&classify(7, 3).unwrap()).unwrap();
    group.bench_function("constructive p=7 q=3", |b| b.iter(|| census_double(&ctx, DoubleMode::Constructive).unwrap()));
    group.finish();
}

fn distance(c: &mut Criterion) {
    let mut group = c.benchmark_group("min_distance");
    group.sample_size(10);
    for (q, n) in [(11u64, 6usize), (3, 14)] {
        let g = first_self_dual_generator(q, n);
        group.bench_function(format!("[{}, {n}] over F_{q}", 2 * n), |b| b.iter(|| min_distance(black_box(&g), None).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, factorization, census, distance);
criterion_main!(benches);
