use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use iboss_bench::simulated;
use iboss_core::lasso::{build_path, cv_fit, fit_path, lambda_max, lasso_fit, CvParams, PathParams, SolverOptions, Strategy};
use iboss_core::sim::DesignDist;
use iboss_core::standardize;

fn single_lambda(c: &mut Criterion) {
    let d = simulated(DesignDist::T2, 1000, 50, 11);
    let (std, _) = standardize(&d).unwrap();
    let lambda = 0.05 * lambda_max(&std);
    let mut group = c.benchmark_group("lasso_fit/n=1000,p=50");
    for strategy in [Strategy::Naive, Strategy::Covariance] {
        let opts = SolverOptions {
            strategy,
            ..SolverOptions::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(format!("{strategy:?}")), &opts, |b, opts| {
            b.iter(|| lasso_fit(black_box(&d), lambda, None, opts).unwrap())
        });
    }
    group.finish();
}

fn warm_path(c: &mut Criterion) {
    let mut group = c.benchmark_group("fit_path");
    group.sample_size(10);
    for (n, p) in [(1000, 50), (500, 500)] {
        let d = simulated(DesignDist::T2, n, p, 12);
        let (std, _) = standardize(&d).unwrap();
        let params = PathParams::default();
        let path = build_path(lambda_max(&std), params.epsilon, params.c_count).unwrap();
        group.bench_function(format!("n={n},p={p}"), |b| {
            b.iter(|| fit_path(black_box(&d), &path, &SolverOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn cross_validation(c: &mut Criterion) {
    let d = simulated(DesignDist::T2, 1000, 50, 13);
    let mut group = c.benchmark_group("cv_fit");
    group.sample_size(10);
    group.bench_function("n=1000,p=50,folds=10", |b| {
        b.iter(|| cv_fit(black_box(&d), &CvParams::default()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, single_lambda, warm_path, cross_validation);
criterion_main!(benches);
