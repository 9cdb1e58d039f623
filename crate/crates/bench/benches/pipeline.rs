use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use oilab_bench::{affine_family, ramp_state, sd_instance};
use oilab_core::circuit::enumerate_distribution;
use oilab_core::invseq::{reduce_sd_to_sisd, sequence_output_distribution};
use oilab_core::lattice::{closest_vector, sample_uniform};
use oilab_core::quantum::{ci_vector, oi_vector};
use oilab_core::seed::rng_from_seed;
use oilab_core::solver::build_output_state;
use oilab_core::{Caps, LweParams, OiQuery, SolverConfig};

fn enumeration(c: &mut Criterion) {
    let caps = Caps::default();
    let mut group = c.benchmark_group("enumerate_distribution");
    for k_in in [8, 12, 16] {
        let inst = sd_instance(k_in, 4, 1);
        group.bench_with_input(BenchmarkId::from_parameter(k_in), &inst, |b, inst| {
            b.iter(|| enumerate_distribution(black_box(inst.c0()), &caps).unwrap())
        });
    }
    group.finish();
}

fn reduction(c: &mut Criterion) {
    let caps = Caps::default();
    let inst = sd_instance(4, 3, 2);
    c.bench_function("reduce_sd_to_sisd/4x3", |b| {
        b.iter(|| reduce_sd_to_sisd(black_box(&inst)).unwrap())
    });
    let red = reduce_sd_to_sisd(&inst).unwrap();
    c.bench_function("sequence_output_distribution/4x3", |b| {
        b.iter(|| sequence_output_distribution(black_box(red.seq0()), &caps).unwrap())
    });
}

fn oracles(c: &mut Criterion) {
    let caps = Caps::default();
    let mut group = c.benchmark_group("oi_vector");
    for m in [3, 4, 5, 6] {
        let q = OiQuery::new(affine_family(6, m), ramp_state(6), 100).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(m), &q, |b, q| {
            b.iter(|| oi_vector(black_box(q), &caps).unwrap())
        });
    }
    group.finish();
    let family = affine_family(10, 2);
    let psi = ramp_state(10);
    c.bench_function("ci_vector/n10_m2", |b| {
        b.iter(|| ci_vector(black_box(&family), &psi).unwrap())
    });
}

fn state_building(c: &mut Criterion) {
    let cfg = SolverConfig::default();
    let mut group = c.benchmark_group("build_output_state");
    for (k_in, k_out) in [(2, 2), (4, 3), (5, 4)] {
        let red = reduce_sd_to_sisd(&sd_instance(k_in, k_out, 3)).unwrap();
        group.bench_function(
            BenchmarkId::from_parameter(format!("{k_in}x{k_out}")),
            |b| {
                let mut rng = rng_from_seed(7);
                b.iter(|| build_output_state(black_box(red.seq0()), &cfg, &mut rng).unwrap())
            },
        );
    }
    group.finish();
}

fn cvp(c: &mut Criterion) {
    let caps = Caps::default();
    let mut group = c.benchmark_group("closest_vector");
    for (n, q) in [(2u32, 101u64), (3, 31)] {
        let p = LweParams::new(n as usize, q, 8, 0.02).unwrap();
        let inst = sample_uniform(&p, &mut rng_from_seed(5)).unwrap();
        let target: Vec<i64> = inst.b().iter().map(|&x| x as i64).collect();
        group.bench_function(BenchmarkId::from_parameter(format!("n{n}_q{q}_m8")), |b| {
            b.iter(|| closest_vector(q, black_box(inst.matrix()), &target, &caps).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    enumeration,
    reduction,
    oracles,
    state_building,
    cvp
);
criterion_main!(benches);
