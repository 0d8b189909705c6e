// Copyright 2026 The qgd Authors
// SPDX-License-Identifier: Apache-2.0

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use qgd_core::compiler::{compile_cnot, CompileOptions};
use qgd_core::equivalence::{kak_decompose, makhlin_invariants};
use qgd_core::qmat::{expm_hermitian, propagate, PiecewiseHamiltonian, StepPolicy};
use qgd_core::random::{haar_unitary, random_hermitian};
use qgd_core::{rot_frame_matrix, RotFrameParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bench_expm(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    c.bench_function("expm_hermitian", |b| {
        b.iter_batched(
            || random_hermitian(&mut rng, 3.0),
            |h| expm_hermitian(&h, black_box(0.7)),
            BatchSize::SmallInput,
        )
    });
}

fn bench_propagate(c: &mut Criterion) {
    let p = RotFrameParams::new(0.6, -0.3, 0.2).unwrap();
    let h = rot_frame_matrix(&p);
    let ph = PiecewiseHamiltonian::new()
        .sampled(move |t: f64| h * qgd_core::qmat::C64::from(t.sin()), 2.0, StepPolicy::default())
        .unwrap();
    c.bench_function("propagate_sampled", |b| b.iter(|| propagate(black_box(&ph))));
}

fn bench_equivalence(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    c.bench_function("makhlin_invariants", |b| {
        b.iter_batched(|| haar_unitary(&mut rng), |u| makhlin_invariants(&u), BatchSize::SmallInput)
    });
    c.bench_function("kak_decompose", |b| {
        b.iter_batched(|| haar_unitary(&mut rng), |u| kak_decompose(&u), BatchSize::SmallInput)
    });
}

fn bench_compile(c: &mut Criterion) {
    let p = RotFrameParams::new(0.3, 0.5, -0.4).unwrap();
    let opts = CompileOptions::default();
    c.bench_function("compile_cnot_general", |b| b.iter(|| compile_cnot(black_box(&p), &opts)));
}

criterion_group!(kernels, bench_expm, bench_propagate, bench_equivalence, bench_compile);
criterion_main!(kernels);
