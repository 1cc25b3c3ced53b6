use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use owc_bench::point;
use owc_core::collection::Bounds;
use owc_core::interleave::{free_owc, initial_owc};
use owc_core::oracle::oracle_shapes;
use owc_core::pasting::{enumerate_trees, substitute, LabelledDiagram, PastingDiagram};

fn trees(c: &mut Criterion) {
    let mut group = c.benchmark_group("trees");
    for size in [7, 9, 11] {
        group.bench_with_input(BenchmarkId::new("enumerate", size), &size, |b, &n| {
            b.iter(|| enumerate_trees(2, n).len())
        });
        group.bench_with_input(BenchmarkId::new("oracle", size), &size, |b, &n| b.iter(|| oracle_shapes(2, n).len()));
    }
    group.finish();
}

fn substitution(c: &mut Criterion) {
    let shape = PastingDiagram::columns(&[2, 0, 1]);
    let labelled = LabelledDiagram::from_fn(shape, |a| PastingDiagram::unit_tree(a.dim()));
    c.bench_function("substitute/units", |b| b.iter(|| substitute(black_box(&labelled)).unwrap()));
}

fn construction(c: &mut Criterion) {
    let mut group = c.benchmark_group("construction");
    group.sample_size(10);
    for bounds in [Bounds::new(2, 5, 1), Bounds::new(2, 5, 2), Bounds::new(3, 5, 1)] {
        let id = format!("{}-{}-{}", bounds.max_dim, bounds.max_arity_size, bounds.max_term_size);
        group.bench_with_input(BenchmarkId::new("initial", &id), &bounds, |b, &bounds| {
            b.iter(|| initial_owc(bounds).unwrap().count(bounds.max_dim))
        });
    }
    let bounds = Bounds::new(1, 5, 2);
    group.bench_function("free-on-a-point/1-5-2", |b| b.iter(|| free_owc(&point(), bounds).unwrap().count(1)));
    group.finish();
}

criterion_group!(benches, trees, substitution, construction);
criterion_main!(benches);
