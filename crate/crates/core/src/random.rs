// Copyright 2026 The qgd Authors
// SPDX-License-Identifier: Apache-2.0

//! Random matrices for property tests and benchmarks.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::qmat::{kron, Mat2, Mat4, C64};

fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-distributed element of U(4): QR of a complex Ginibre matrix, with the
/// phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R) -> Mat4 {
    let z = Mat4::from_fn(|_, _| gaussian_c64(rng));
    let qr = z.qr();
    let (mut q, r) = qr.unpack();
    for k in 0..4 {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for row in 0..4 {
            q[(row, k)] *= phase;
        }
    }
    q
}

/// Haar-distributed element of SU(2), from a uniform point on S³.
pub fn random_su2<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    let mut v = [0.0f64; 4];
    let mut norm = 0.0;
    while norm < 1e-12 {
        for x in v.iter_mut() {
            *x = rng.sample(StandardNormal);
        }
        norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    }
    let [a, b, cc, d] = v.map(|x| x / norm);
    let alpha = C64::new(a, b);
    let beta = C64::new(cc, d);
    Mat2::new(alpha, -beta.conj(), beta, alpha.conj())
}

/// Random element of SU(2)⊗SU(2).
pub fn random_local<R: Rng + ?Sized>(rng: &mut R) -> Mat4 {
    let a = random_su2(rng);
    let b = random_su2(rng);
    kron(&a, &b)
}

/// Random Hermitian 4×4 with entries of order `scale`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Mat4 {
    let z = Mat4::from_fn(|_, _| gaussian_c64(rng));
    (z + z.adjoint()) * C64::from(0.5 * scale)
}
