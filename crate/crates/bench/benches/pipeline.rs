use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nested_backdoor::{
    branch_search_backdoor, count_nested, exact_smallest_backdoor, is_nested, solve, SolveOptions,
};
use nested_backdoor_bench::{grid, grid_plus_x, nested_suite, unions};

fn recognition(c: &mut Criterion) {
    let mut group = c.benchmark_group("is_nested");
    for (n, f) in nested_suite(&[10, 40, 160]) {
        group.bench_with_input(BenchmarkId::new("nested", n), &f, |b, f| {
            b.iter(|| is_nested(black_box(f)))
        });
    }
    for n in [4, 8, 16] {
        let f = grid(n);
        group.bench_with_input(BenchmarkId::new("grid", n), &f, |b, f| {
            b.iter(|| is_nested(black_box(f)))
        });
    }
    group.finish();
}

fn counting(c: &mut Criterion) {
    let mut group = c.benchmark_group("count_nested");
    for (n, f) in nested_suite(&[10, 40, 160]) {
        group.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| {
            b.iter(|| count_nested(black_box(f)).unwrap())
        });
    }
    group.finish();
}

fn search(c: &mut Criterion) {
    let mut group = c.benchmark_group("backdoor");
    group.sample_size(20);
    let gx = grid_plus_x(4);
    group.bench_function("branching/grid_plus_x_4", |b| {
        b.iter(|| branch_search_backdoor(black_box(&gx), 1).unwrap())
    });
    group.bench_function("exact/grid_plus_x_4", |b| {
        b.iter(|| exact_smallest_backdoor(black_box(&gx), 1).unwrap())
    });
    for n in 1..=3 {
        let f = unions(n);
        group.bench_with_input(BenchmarkId::new("branching/unions", n), &f, |b, f| {
            b.iter(|| branch_search_backdoor(black_box(f), n).unwrap())
        });
    }
    group.finish();
}

fn end_to_end(c: &mut Criterion) {
    let options = SolveOptions {
        count: true,
        ..SolveOptions::default()
    };
    let f = grid_plus_x(6);
    c.bench_function("solve/grid_plus_x_6", |b| {
        b.iter(|| solve(black_box(&f), &options).unwrap())
    });
}

criterion_group!(benches, recognition, counting, search, end_to_end);
criterion_main!(benches);
