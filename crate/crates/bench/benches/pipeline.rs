//! Benchmarks for the main computational stages: BV axiom checking,
//! homotopy transfer, the trivialization operators, and the ternary
//! operations on cohomology.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use bvhycom::bv::{check_bv, check_ddelta, BVAlgebra};
use bvhycom::hodge::build_transfer;
use bvhycom::hycom::{build_trivialization, HycomOps, ThetaConvention};
use bvhycom::models::{complex_torus, iwasawa_full, iwasawa_sigma_invariant, kodaira_thurston};
use bvhycom::scalar::Scalar;

fn kt_algebra() -> BVAlgebra {
    let bundle = kodaira_thurston().unwrap();
    let d = bundle.op("dbar").unwrap().clone();
    let delta = bundle.op("del").unwrap().clone();
    BVAlgebra::new(bundle.model, d, delta).unwrap()
}

fn orbifold_algebra() -> BVAlgebra {
    let bundle = iwasawa_sigma_invariant().unwrap();
    let d = bundle.op("dbar").unwrap().clone();
    let delta = bundle.op("del").unwrap().dagger().scale(&-Scalar::i());
    BVAlgebra::new(bundle.model, d, delta).unwrap()
}

fn bench_check_bv(c: &mut Criterion) {
    let kt = kt_algebra();
    c.bench_function("check_bv/kodaira-thurston", |b| {
        b.iter(|| check_bv(black_box(&kt)))
    });

    let full = iwasawa_full().unwrap();
    let alg = BVAlgebra::new(
        full.model.clone(),
        full.op("dbar").unwrap().clone(),
        full.op("del").unwrap().clone(),
    )
    .unwrap();
    c.bench_function("check_bv/iwasawa-full", |b| {
        b.iter(|| check_bv(black_box(&alg)))
    });
}

fn bench_ddelta(c: &mut Criterion) {
    let full = iwasawa_full().unwrap();
    let alg = BVAlgebra::new(
        full.model.clone(),
        full.op("dbar").unwrap().clone(),
        full.op("del").unwrap().dagger().scale(&-Scalar::i()),
    )
    .unwrap();
    c.bench_function("check_ddelta/iwasawa-full", |b| {
        b.iter(|| check_ddelta(black_box(&alg)))
    });
}

fn bench_transfer(c: &mut Criterion) {
    let kt = kt_algebra();
    c.bench_function("build_transfer/kodaira-thurston", |b| {
        b.iter(|| build_transfer(black_box(&kt.model), black_box(&kt.d)).unwrap())
    });

    let torus = complex_torus(3).unwrap();
    let alg = BVAlgebra::new(
        torus.model.clone(),
        torus.op("dbar").unwrap().clone(),
        torus.op("del").unwrap().clone(),
    )
    .unwrap();
    c.bench_function("build_transfer/torus-3", |b| {
        b.iter(|| build_transfer(black_box(&alg.model), black_box(&alg.d)).unwrap())
    });
}

fn bench_trivialization(c: &mut Criterion) {
    let alg = orbifold_algebra();
    let t = build_transfer(&alg.model, &alg.d).unwrap();
    c.bench_function("build_trivialization/order-4/iwasawa-orbifold", |b| {
        b.iter(|| build_trivialization(black_box(&t), black_box(&alg.delta), 4))
    });
}

fn bench_m3_sweep(c: &mut Criterion) {
    let alg = orbifold_algebra();
    let t = build_transfer(&alg.model, &alg.d).unwrap();
    let triv = build_trivialization(&t, &alg.delta, 1);
    let ops = HycomOps {
        model: &alg.model,
        t: &t,
        phi1: triv.phis[0].clone(),
        convention: ThetaConvention::calibrated(),
    };
    let n = ops.t.cohomology_dim();
    let unit = |i: usize| {
        let mut v = vec![Scalar::zero(); n];
        v[i] = Scalar::one();
        v
    };
    c.bench_function("m3_sweep/iwasawa-orbifold", |b| {
        b.iter(|| {
            for i in 0..n {
                for j in i..n {
                    for k in j..n {
                        black_box(ops.m3(&unit(i), &unit(j), &unit(k)).unwrap());
                    }
                }
            }
        })
    });
}

criterion_group!(
    benches,
    bench_check_bv,
    bench_ddelta,
    bench_transfer,
    bench_trivialization,
    bench_m3_sweep
);
criterion_main!(benches);
