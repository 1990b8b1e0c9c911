use criterion::{black_box, criterion_group, criterion_main, Criterion};

use parcel_core::cubical::{homology, projective_plane, torus, CubicalComplex, ElementaryCube, EmbeddedComplex};
use parcel_core::exterior::{cross, wedge};
use parcel_core::flows::{mean_curvature, Grid, ScalarGridField, DEFAULT_GRADIENT_EPS};
use parcel_core::forms::{stokes_check, FnForm, StokesMode};
use parcel_core::{OrderedSubset, VectorSystem};

fn square(k: i64) -> CubicalComplex {
    let cubes = (0..k)
        .flat_map(|i| (0..k).map(move |j| ElementaryCube::from_parts(&[i, j], &[1, 2]).unwrap()))
        .collect();
    EmbeddedComplex::new(2, cubes)
        .and_then(|e| e.with_scale(1.0 / k as f64))
        .unwrap()
        .into()
}

fn bench_homology(c: &mut Criterion) {
    let mut t = torus();
    for axis in [1, 2, 1, 2, 1, 2] {
        t = t.subdivide(axis).unwrap();
    }
    c.bench_function("homology torus 8x8", |b| b.iter(|| homology(black_box(&t)).unwrap()));
    let rp = projective_plane(6);
    c.bench_function("homology projective 6x6", |b| b.iter(|| homology(black_box(&rp)).unwrap()));
}

fn bench_products(c: &mut Criterion) {
    let rows: Vec<Vec<f64>> = (0..5)
        .map(|i| (0..6).map(|j| ((i * 7 + j * 3) % 11) as f64 - 5.0).collect())
        .collect();
    let vs = VectorSystem::new(6, rows).unwrap();
    c.bench_function("wedge 5 vectors in R^6", |b| b.iter(|| wedge(black_box(&vs)).unwrap()));
    c.bench_function("cross 5 vectors in R^6", |b| b.iter(|| cross(black_box(&vs)).unwrap()));
}

fn bench_stokes(c: &mut Criterion) {
    let region = square(64);
    let a = FnForm::new(2, 1, |x: &[f64], j: &OrderedSubset| {
        if j.indices() == [2] {
            x[0] * x[0] * x[1]
        } else {
            (x[0] * x[1]).sin()
        }
    })
    .unwrap();
    c.bench_function("stokes discrete 64x64", |b| {
        b.iter(|| stokes_check(&a, black_box(&region), StokesMode::Discrete).unwrap())
    });
    c.bench_function("stokes analytic 64x64", |b| {
        b.iter(|| stokes_check(&a, black_box(&region), StokesMode::AnalyticFd).unwrap())
    });
}

fn bench_curvature(c: &mut Criterion) {
    let g = Grid::centered(&[1.0, 0.0, 0.0], 0.02, 32).unwrap();
    let phi = ScalarGridField::sample(g, |x| x.iter().map(|v| v * v).sum());
    c.bench_function("mean curvature 32^3", |b| {
        b.iter(|| mean_curvature(black_box(&phi), DEFAULT_GRADIENT_EPS))
    });
}

criterion_group!(benches, bench_homology, bench_products, bench_stokes, bench_curvature);
criterion_main!(benches);
