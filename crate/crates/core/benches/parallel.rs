//! One worker thread against the default pool on the data-parallel kernels.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use monogauge::arrangement::{
    build_monomial, planar_points_auto, rank2_flats, Arrangement, Family, G23_H3_ARRANGEMENT,
};
use monogauge::engine::analyze_h1;
use monogauge::oracle::{
    build_eval_matrix, character_targets, check_interpolation_bound, random_configuration,
};
use monogauge::par;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const POOLS: [(&str, Option<usize>); 2] = [("1-thread", Some(1)), ("default", None)];

fn flats(c: &mut Criterion) {
    let a = build_monomial(4, 6).unwrap();
    let mut g = c.benchmark_group("rank2_flats A(4,4,6)");
    for (name, threads) in POOLS {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| par::install(threads, || black_box(rank2_flats(&a))))
        });
    }
    g.finish();
}

fn h1(c: &mut Criterion) {
    let p = Family::Monomial { m: 12, n: 4 }.profile().unwrap();
    let mut g = c.benchmark_group("analyze_h1 A(12,12,4)");
    for (name, threads) in POOLS {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| par::install(threads, || black_box(analyze_h1(&p, false).unwrap())))
        });
    }
    g.finish();
}

fn eval_matrix(c: &mut Criterion) {
    let lines = Arrangement::from_text(G23_H3_ARRANGEMENT).unwrap();
    let (p, _) = planar_points_auto(&lines, 23).unwrap();
    let targets = character_targets(&p, 3).unwrap();
    let mut g = c.benchmark_group("eval matrix G23 k=3");
    for (name, threads) in POOLS {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                par::install(threads, || {
                    black_box(build_eval_matrix(9, &targets).unwrap())
                })
            })
        });
    }
    g.finish();
}

fn interpolation_configs(c: &mut Criterion) {
    let seeds: Vec<u64> = (0..16).collect();
    let mut g = c.benchmark_group("16 random fat-point configurations");
    g.sample_size(10);
    for (name, threads) in POOLS {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                par::install(threads, || {
                    par::map_slice(&seeds, |&s| {
                        let t = random_configuration(&mut ChaCha8Rng::seed_from_u64(s), 5, 4);
                        check_interpolation_bound(&t).unwrap()
                    })
                })
            })
        });
    }
    g.finish();
}

criterion_group!(benches, flats, h1, eval_matrix, interpolation_configs);
criterion_main!(benches);
