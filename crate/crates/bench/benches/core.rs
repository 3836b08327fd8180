//! Timings of the main algorithms on representative inputs.

use std::hint::black_box;
use std::sync::Arc;

use buildinglab::counting::count_flat;
use buildinglab::coxeter::{convex_hull, root_data, slope_system, Alcove, Kind, Point};
use buildinglab::prolim::line_model;
use buildinglab::rational::q;
use buildinglab::treeconv::{elementary_extensions, random_complex, RandomShape};
use buildinglab::verify::{self, Suite};
use buildinglab::Thickness;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn point(a: i64, b: i64) -> Point {
    Point::new(q(a, 1), q(b, 1))
}

fn hull(c: &mut Criterion) {
    let mut group = c.benchmark_group("convex_hull");
    for kind in Kind::ALL {
        let rs = root_data(kind);
        let pts = [point(0, 0), point(4, 1), point(-2, 3), point(1, -3)];
        group.bench_with_input(BenchmarkId::from_parameter(kind), &pts, |b, pts| {
            b.iter(|| convex_hull(&rs, black_box(pts), 40).unwrap())
        });
    }
    group.finish();
}

fn counting(c: &mut Criterion) {
    let mut group = c.benchmark_group("count_flat");
    for kind in Kind::ALL {
        let rs = root_data(kind);
        let th = Thickness::uniform(kind, 2);
        let source = convex_hull(&rs, &Alcove::fundamental(&rs).vertices, 40).unwrap();
        let target =
            convex_hull(&rs, &[point(-2, -1), point(3, 2)], 40).unwrap().join(&rs, &source.vertices(&rs)).unwrap();
        group.bench_function(BenchmarkId::from_parameter(kind), |b| {
            b.iter(|| count_flat(&rs, black_box(&source), black_box(&target), &th).unwrap())
        });
    }
    group.finish();
}

fn extensions(c: &mut Criterion) {
    let mut group = c.benchmark_group("elementary_extensions");
    for kind in Kind::ALL {
        let slopes = Arc::new(slope_system(&root_data(kind), 1).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let complexes: Vec<_> =
            (0..16).map(|_| random_complex(slopes.clone(), &RandomShape::default(), &mut rng).unwrap()).collect();
        group.bench_function(BenchmarkId::from_parameter(kind), |b| {
            b.iter(|| complexes.iter().map(|c| elementary_extensions(c).unwrap().len()).sum::<usize>())
        });
    }
    group.finish();
}

fn measures(c: &mut Criterion) {
    c.bench_function("line_model(2,3,4)", |b| b.iter(|| line_model(black_box(2), 3, 4).unwrap()));
}

fn suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    for suite in [Suite::RootData, Suite::Hull, Suite::Prolim] {
        group.bench_function(suite.name(), |b| b.iter(|| verify::run(&[suite], 7, 1).passed));
    }
    group.finish();
}

criterion_group!(benches, hull, counting, extensions, measures, suites);
criterion_main!(benches);
