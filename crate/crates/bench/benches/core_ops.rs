//! Benchmarks for the hot paths: subspace calculus, relation parts and
//! spectra, and the banded classification kernels.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use relspec::banded::{BandedModel, LaurentSymbol, Rect, RegionOptions, SpaceKind};
use relspec::relation::Relation;
use relspec::spectra::{spectrum, weyl_correction};
use relspec::subspace::{Subspace, DEFAULT_TOL};

fn random_matrix(rng: &mut ChaCha8Rng, nrows: usize, ncols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(nrows, ncols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    })
}

fn bench_subspace(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = random_matrix(&mut rng, 32, 12);
    let b = random_matrix(&mut rng, 32, 12);
    let sa = Subspace::span_mat(&a, DEFAULT_TOL).unwrap();
    let sb = Subspace::span_mat(&b, DEFAULT_TOL).unwrap();
    c.bench_function("subspace_span_32x12", |bench| {
        bench.iter(|| Subspace::span_mat(std::hint::black_box(&a), DEFAULT_TOL).unwrap())
    });
    c.bench_function("subspace_intersect_32", |bench| {
        bench.iter(|| sa.intersect(std::hint::black_box(&sb)).unwrap())
    });
}

fn bench_relation(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let a = random_matrix(&mut rng, 10, 10);
    let t = Relation::from_operator(&a, DEFAULT_TOL).unwrap();
    c.bench_function("relation_parts_dim10", |bench| {
        bench.iter(|| std::hint::black_box(&t).parts())
    });
    c.bench_function("relation_spectrum_dim10", |bench| {
        bench.iter(|| spectrum(std::hint::black_box(&t)).unwrap())
    });
    let lambda = match spectrum(&t).unwrap() {
        relspec::spectra::Spectrum::Points(p) => p[0],
        _ => unreachable!("operator spectrum is finite"),
    };
    c.bench_function("weyl_correction_dim10", |bench| {
        bench.iter(|| weyl_correction(std::hint::black_box(&t), lambda).unwrap())
    });
}

fn bench_banded(c: &mut Criterion) {
    let symbol = LaurentSymbol::from_terms(&[(-1, 0.5, 0.0), (0, -1.5, 0.0), (2, 1.0, 0.0)]).unwrap();
    let model = BandedModel::new(SpaceKind::Toeplitz, symbol.clone()).unwrap();
    let lambda = Complex64::new(0.4, 0.3);
    c.bench_function("symbol_winding_1024", |bench| {
        bench.iter(|| symbol.winding(std::hint::black_box(lambda), 1024).unwrap())
    });
    c.bench_function("fredholm_classify", |bench| {
        bench.iter(|| model.fredholm_classify(std::hint::black_box(lambda)).unwrap())
    });
    c.bench_function("truncation_smallest_svs_200", |bench| {
        bench.iter(|| model.truncation_smallest_svs(lambda, 200, 1).unwrap())
    });
    let bounds = Rect::new(-2.5, 2.5, -2.5, 2.5).unwrap();
    let opts = RegionOptions {
        detect_eigenvalues: false,
        trunc_sizes: vec![],
        curve_samples: 2048,
    };
    let mut group = c.benchmark_group("grid");
    group.sample_size(10);
    group.bench_function("essential_region_32x32", |bench| {
        bench.iter_batched(
            || model.clone(),
            |m| relspec::banded::essential_region(&m, &bounds, (32, 32), &opts).unwrap(),
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

fn bench_singular_sequence(c: &mut Criterion) {
    let model = BandedModel::new(
        SpaceKind::Laurent,
        LaurentSymbol::from_terms(&[(1, 1.0, 0.0)]).unwrap(),
    )
    .unwrap();
    c.bench_function("singular_sequence_n256", |bench| {
        bench.iter(|| model.singular_sequence(Complex64::new(1.0, 0.0), 256).unwrap())
    });
}

criterion_group!(
    benches,
    bench_subspace,
    bench_relation,
    bench_banded,
    bench_singular_sequence
);
criterion_main!(benches);
