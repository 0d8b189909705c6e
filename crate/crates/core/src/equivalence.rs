// Copyright 2026 The qgd Authors
// SPDX-License-Identifier: Apache-2.0

//! Local equivalence of two-qubit gates.
//!
//! Everything here works in the magic basis
//!
//! ```text
//! Q = 1/√2 · [[1, 0, 0,  i],
//!             [0, i, 1,  0],
//!             [0, i, −1, 0],
//!             [1, 0, 0, −i]]
//! ```
//!
//! where SU(2)⊗SU(2) becomes SO(4) and the entangler generators σxσx, σyσy,
//! σzσz are diagonal with signs (+,+,−,−), (−,+,−,+), (+,−,−,+).

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

use nalgebra::{Matrix4, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::entangler::{canonical_entangler, EntanglerCoords};
use crate::error::{Error, Result};
use crate::qmat::{ensure_unitary, kron, Mat2, Mat4, C64, ONE, ZERO};
use crate::wire::{mat2_from_json, mat2_to_json, pair, ComplexPair, MatrixJson};

/// Default tolerance for [`locally_equivalent`].
pub const EQUIVALENCE_TOL: f64 = 1e-9;
/// Unitarity required of inputs.
pub const INPUT_UNITARY_TOL: f64 = 1e-10;

const SIGN_XX: [f64; 4] = [1.0, 1.0, -1.0, -1.0];
const SIGN_YY: [f64; 4] = [-1.0, 1.0, -1.0, 1.0];
const SIGN_ZZ: [f64; 4] = [1.0, -1.0, -1.0, 1.0];

pub fn magic_basis() -> Mat4 {
    let s = C64::from(FRAC_1_SQRT_2);
    let i = C64::new(0.0, 1.0);
    Mat4::new(
        ONE, ZERO, ZERO, i, //
        ZERO, i, ONE, ZERO, //
        ZERO, i, -ONE, ZERO, //
        ONE, ZERO, ZERO, -i,
    ) * s
}

fn to_magic(u: &Mat4) -> Mat4 {
    let q = magic_basis();
    q.adjoint() * u * q
}

fn from_magic(m: &Mat4) -> Mat4 {
    let q = magic_basis();
    q * m * q.adjoint()
}

/// Makhlin's local invariants. `G1` is complex, `G2` real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MakhlinInvariants {
    pub g1: C64,
    pub g2: f64,
}

#[derive(Serialize, Deserialize)]
struct MakhlinJson {
    #[serde(rename = "G1")]
    g1: ComplexPair,
    #[serde(rename = "G2")]
    g2: f64,
}

impl Serialize for MakhlinInvariants {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MakhlinJson { g1: pair(self.g1), g2: self.g2 }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MakhlinInvariants {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MakhlinJson::deserialize(d)?;
        Ok(Self { g1: C64::new(j.g1[0], j.g1[1]), g2: j.g2 })
    }
}

impl MakhlinInvariants {
    /// `max(|ΔG1|, |ΔG2|)`.
    pub fn distance(&self, other: &Self) -> f64 {
        (self.g1 - other.g1).norm().max((self.g2 - other.g2).abs())
    }
}

/// `G1 = tr²(m) / (16 det U)`, `G2 = (tr²(m) − tr(m²)) / (4 det U)` with
/// `m = U_Bᵀ U_B` and `U_B` the gate in the magic basis.
pub fn makhlin_invariants(u: &Mat4) -> Result<MakhlinInvariants> {
    ensure_unitary(u, INPUT_UNITARY_TOL)?;
    let ub = to_magic(u);
    let m = ub.transpose() * ub;
    let tr = m.trace();
    let tr_sq = (m * m).trace();
    let det = u.determinant();
    let g1 = tr * tr / (det * 16.0);
    let g2 = (tr * tr - tr_sq) / (det * 4.0);
    // G2 is real for unitary input; a residual means the input was not.
    if g2.im.abs() > 1e-8 {
        return Err(Error::NotUnitary(g2.im.abs()));
    }
    Ok(MakhlinInvariants { g1, g2: g2.re })
}

/// True iff the Makhlin invariants of `u` and `v` agree within `tol`.
pub fn locally_equivalent(u: &Mat4, v: &Mat4, tol: f64) -> Result<bool> {
    Ok(makhlin_invariants(u)?.distance(&makhlin_invariants(v)?) < tol)
}

/// `U = e^{iφ} (post₁ ⊗ post₂) A(x, y, z) (pre₁ ⊗ pre₂)` with every local
/// factor in SU(2).
#[derive(Debug, Clone, PartialEq)]
pub struct KakFactors {
    pub phase: f64,
    pub u_post: [Mat2; 2],
    pub coords: EntanglerCoords,
    pub u_pre: [Mat2; 2],
}

impl KakFactors {
    pub fn reconstruct(&self) -> Mat4 {
        kron(&self.u_post[0], &self.u_post[1])
            * canonical_entangler(&self.coords)
            * kron(&self.u_pre[0], &self.u_pre[1])
            * C64::from_polar(1.0, self.phase)
    }
}

#[derive(Serialize, Deserialize)]
struct KakJson {
    phase: f64,
    coords: [f64; 3],
    u_pre: [MatrixJson; 2],
    u_post: [MatrixJson; 2],
}

impl Serialize for KakFactors {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        KakJson {
            phase: self.phase,
            coords: self.coords.to_array(),
            u_pre: [mat2_to_json(&self.u_pre[0]), mat2_to_json(&self.u_pre[1])],
            u_post: [mat2_to_json(&self.u_post[0]), mat2_to_json(&self.u_post[1])],
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for KakFactors {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = KakJson::deserialize(d)?;
        let m = |v: &MatrixJson| {
            let value = serde_json::to_value(v).map_err(D::Error::custom)?;
            mat2_from_json(&value).map_err(D::Error::custom)
        };
        Ok(Self {
            phase: j.phase,
            coords: j.coords.into(),
            u_pre: [m(&j.u_pre[0])?, m(&j.u_pre[1])?],
            u_post: [m(&j.u_post[0])?, m(&j.u_post[1])?],
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KakOptions {
    /// Seed for the random real combinations used to split degenerate
    /// eigenvalue clusters.
    pub seed: u64,
}

impl Default for KakOptions {
    fn default() -> Self {
        Self { seed: 0x6b61_6b00 }
    }
}

const DIAG_TOL: f64 = 1e-12;
const MAX_DIAG_ATTEMPTS: usize = 100;

/// Orthogonal `P` (det +1) and unit-modulus `d` with `m = P diag(d) Pᵀ`, for a
/// symmetric unitary `m`.
///
/// `Re m` and `Im m` commute, so a generic real combination of the two shares
/// their eigenvectors; a combination that merges distinct clusters is caught
/// by the residual check and redrawn.
fn diagonalize_symmetric_unitary(m: &Mat4, seed: u64) -> (Matrix4<f64>, [C64; 4]) {
    let re = m.map(|z| z.re);
    let im = m.map(|z| z.im);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, Matrix4<f64>, [C64; 4])> = None;
    for _ in 0..MAX_DIAG_ATTEMPTS {
        let a: f64 = StandardNormal.sample(&mut rng);
        let b: f64 = StandardNormal.sample(&mut rng);
        let combo = re * a + im * b;
        let combo = (combo + combo.transpose()) * 0.5;
        let p = SymmetricEigen::new(combo).eigenvectors;
        let pc = p.map(C64::from);
        let d = pc.transpose() * m * pc;
        let off_diag = (0..4)
            .flat_map(|r| (0..4).map(move |col| (r, col)))
            .filter(|(r, col)| r != col)
            .map(|idx| d[idx].norm())
            .fold(0.0, f64::max);
        let diag = [d[(0, 0)], d[(1, 1)], d[(2, 2)], d[(3, 3)]];
        if best.as_ref().map_or(true, |(res, ..)| off_diag < *res) {
            best = Some((off_diag, p, diag));
        }
        if off_diag < DIAG_TOL {
            break;
        }
    }
    let (_, mut p, diag) = best.expect("at least one attempt");
    if p.determinant() < 0.0 {
        p.column_mut(3).neg_mut();
    }
    (p, diag)
}

/// Splits `m ≈ e^{iφ}(a ⊗ b)` into SU(2) factors and the residual phase.
fn split_local(m: &Mat4) -> (Mat2, Mat2, f64) {
    let (mut best, mut arg) = (0.0, (0, 0));
    for r in 0..4 {
        for col in 0..4 {
            if m[(r, col)].norm() > best {
                best = m[(r, col)].norm();
                arg = (r, col);
            }
        }
    }
    let (i0, k0, j0, l0) = (arg.0 / 2, arg.0 % 2, arg.1 / 2, arg.1 % 2);
    let mut a = Mat2::from_fn(|i, j| m[(2 * i + k0, 2 * j + l0)]);
    let mut b = Mat2::from_fn(|k, l| m[(2 * i0 + k, 2 * j0 + l)]);
    a /= a.determinant().sqrt();
    b /= b.determinant().sqrt();
    let overlap = (kron(&a, &b).adjoint() * m).trace() / 4.0;
    (a, b, overlap.arg())
}

pub fn kak_decompose(u: &Mat4) -> Result<KakFactors> {
    kak_decompose_with(u, &KakOptions::default())
}

/// KAK decomposition. Coordinates are reported in the principal cell
/// `(−π, π]³`, not restricted to a Weyl chamber.
pub fn kak_decompose_with(u: &Mat4, options: &KakOptions) -> Result<KakFactors> {
    ensure_unitary(u, INPUT_UNITARY_TOL)?;
    let base_phase = u.determinant().arg() / 4.0;
    let v = u * C64::from_polar(1.0, -base_phase);
    let vb = to_magic(&v);
    let m = vb.transpose() * vb;
    let (p, d) = diagonalize_symmetric_unitary(&m, options.seed);

    // Square roots of d with Σθ = 0 so that the remaining factor is in SO(4).
    let mut theta = d.map(|z| z.arg() / 2.0);
    let half_turns = (theta.iter().sum::<f64>() / PI).round() as i64;
    if half_turns.rem_euclid(2) == 1 {
        theta[0] += PI;
    }
    let full_turns = (theta.iter().sum::<f64>() / (2.0 * PI)).round();
    theta[3] -= 2.0 * PI * full_turns;

    // A in the magic basis is diag(e^{−iλ}) with λ = x·s_xx + y·s_yy + z·s_zz.
    let lambda = theta.map(|t| -t);
    let project = |signs: &[f64; 4]| signs.iter().zip(&lambda).map(|(s, l)| s * l).sum::<f64>() / 4.0;
    let coords = EntanglerCoords::new(project(&SIGN_XX), project(&SIGN_YY), project(&SIGN_ZZ));

    let pc = p.map(C64::from);
    let s_inv = Mat4::from_diagonal(&nalgebra::Vector4::from(theta.map(|t| C64::from_polar(1.0, -t))));
    let k_post = vb * pc * s_inv;
    let (post1, post2, post_phase) = split_local(&from_magic(&k_post));
    let (pre1, pre2, pre_phase) = split_local(&from_magic(&pc.transpose()));

    Ok(KakFactors {
        phase: crate::entangler::wrap_angle(base_phase + post_phase + pre_phase),
        u_post: [post1, post2],
        coords: coords.normalized(),
        u_pre: [pre1, pre2],
    })
}

const CHAMBER_TOL: f64 = 1e-12;

fn reduce_quarter(a: f64) -> f64 {
    let r = a.rem_euclid(FRAC_PI_2);
    if r > FRAC_PI_4 + CHAMBER_TOL {
        r - FRAC_PI_2
    } else {
        r
    }
}

/// Weyl-chamber representative `π/4 ≥ x ≥ y ≥ |z|`, with `z ≥ 0` on the
/// face `x = π/4` where `(π/4, y, z)` and `(π/4, y, −z)` coincide.
///
/// Uses the local symmetries of `A`: shifting one coordinate by π/2,
/// permuting coordinates, and negating two coordinates at once.
pub fn weyl_canonicalize(c: &EntanglerCoords) -> EntanglerCoords {
    let mut v = [reduce_quarter(c.x), reduce_quarter(c.y), reduce_quarter(c.z)];
    v.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
    if v[0] < 0.0 {
        v[0] = -v[0];
        v[2] = -v[2];
    }
    if v[1] < 0.0 {
        v[1] = -v[1];
        v[2] = -v[2];
    }
    if (v[0] - FRAC_PI_4).abs() <= CHAMBER_TOL && v[2] < 0.0 {
        v[2] = -v[2];
    }
    let v = v.map(|a| if a.abs() < 1e-15 { 0.0 } else { a });
    EntanglerCoords::from(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::{named_gate, NamedGate};
    use crate::qmat::{distance, identity4};
    use crate::random::{haar_unitary, random_local};
    use proptest::prelude::*;
    use rand::Rng;

    fn inv(u: &Mat4) -> MakhlinInvariants {
        makhlin_invariants(u).unwrap()
    }

    /// Independent evaluation for the diagonal-in-magic-basis case:
    /// m = diag(e^{−2iλ}), det U = 1.
    fn invariants_from_coords(c: &EntanglerCoords) -> (C64, C64) {
        let l: Vec<f64> = (0..4).map(|k| c.x * SIGN_XX[k] + c.y * SIGN_YY[k] + c.z * SIGN_ZZ[k]).collect();
        let tr: C64 = l.iter().map(|&x| C64::from_polar(1.0, -2.0 * x)).sum();
        let tr_sq: C64 = l.iter().map(|&x| C64::from_polar(1.0, -4.0 * x)).sum();
        (tr * tr / 16.0, (tr * tr - tr_sq) / 4.0)
    }

    #[test]
    fn magic_basis_is_unitary_and_diagonalizes_generators() {
        let q = magic_basis();
        assert!(distance(&(q.adjoint() * q), &identity4(), false) < 1e-15);
        let c = EntanglerCoords::new(0.3, -0.7, 1.1);
        let ab = to_magic(&canonical_entangler(&c));
        for r in 0..4 {
            for col in 0..4 {
                if r != col {
                    assert!(ab[(r, col)].norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn local_gates_are_real_in_magic_basis() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let o = to_magic(&random_local(&mut rng));
            assert!(o.iter().all(|z| z.im.abs() < 1e-14));
        }
    }

    #[test]
    fn golden_invariants() {
        let cnot = inv(&named_gate(&NamedGate::Cnot));
        assert!(cnot.g1.norm() < 1e-12 && (cnot.g2 - 1.0).abs() < 1e-12);
        let id = inv(&identity4());
        assert!((id.g1 - 1.0).norm() < 1e-12 && (id.g2 - 3.0).abs() < 1e-12);
        let swap = inv(&named_gate(&NamedGate::Swap));
        assert!((swap.g1 + 1.0).norm() < 1e-12 && (swap.g2 + 3.0).abs() < 1e-12);
    }

    #[test]
    fn invariants_match_coordinate_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let c = EntanglerCoords::new(
                rng.random_range(-3.0..3.0),
                rng.random_range(-3.0..3.0),
                rng.random_range(-3.0..3.0),
            );
            let got = inv(&canonical_entangler(&c));
            let (g1, g2) = invariants_from_coords(&c);
            assert!((got.g1 - g1).norm() < 1e-12);
            assert!((got.g2 - g2.re).abs() < 1e-12 && g2.im.abs() < 1e-12);
        }
    }

    #[test]
    fn non_unitary_rejected() {
        let m = identity4() * C64::from(1.1);
        assert!(matches!(makhlin_invariants(&m), Err(Error::NotUnitary(_))));
        assert!(matches!(kak_decompose(&m), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn equivalence_examples() {
        let cz = named_gate(&NamedGate::Cz);
        let cnot = named_gate(&NamedGate::Cnot);
        assert!(locally_equivalent(&cz, &cnot, EQUIVALENCE_TOL).unwrap());
        let theta = 0.7;
        let a = canonical_entangler(&EntanglerCoords::new(theta / 4.0, 0.0, 0.0));
        assert!(locally_equivalent(&a, &named_gate(&NamedGate::Ctheta(theta)), EQUIVALENCE_TOL).unwrap());
        assert!(!locally_equivalent(&cnot, &named_gate(&NamedGate::Swap), EQUIVALENCE_TOL).unwrap());
    }

    #[test]
    fn invariant_under_locals_and_phase() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let u = haar_unitary(&mut rng);
            let w =
                random_local(&mut rng) * u * random_local(&mut rng) * C64::from_polar(1.0, rng.random_range(-PI..PI));
            assert!(inv(&u).distance(&inv(&w)) < 1e-10);
        }
    }

    fn assert_kak(u: &Mat4) -> KakFactors {
        let k = kak_decompose(u).unwrap();
        let err = distance(&k.reconstruct(), u, false);
        assert!(err < 1e-9, "reconstruction error {err}");
        for f in k.u_pre.iter().chain(&k.u_post) {
            assert!((f.determinant() - ONE).norm() < 1e-12);
        }
        let c = k.coords;
        assert!([c.x, c.y, c.z].iter().all(|a| *a > -PI && *a <= PI));
        k
    }

    #[test]
    fn kak_of_entangler() {
        let c = EntanglerCoords::new(0.3, 0.2, 0.1);
        let k = assert_kak(&canonical_entangler(&c));
        assert!(weyl_canonicalize(&k.coords).max_abs_diff(&c) < 1e-12);
    }

    #[test]
    fn kak_of_named_gates() {
        for gate in [NamedGate::Cnot, NamedGate::Cz, NamedGate::Swap, NamedGate::SwapCnot, NamedGate::CnotSwap] {
            let u = named_gate(&gate);
            let k = assert_kak(&u);
            assert!(locally_equivalent(&canonical_entangler(&k.coords), &u, 1e-9).unwrap());
        }
        let k = assert_kak(&named_gate(&NamedGate::Cnot));
        assert!(weyl_canonicalize(&k.coords).max_abs_diff(&EntanglerCoords::new(FRAC_PI_4, 0.0, 0.0)) < 1e-12);
        assert_kak(&identity4());
        assert_kak(&(identity4() * C64::from_polar(1.0, 2.9)));
    }

    #[test]
    fn kak_degenerate_locals() {
        // Local gates and local-times-SWAP give fully or pairwise degenerate spectra.
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let swap = named_gate(&NamedGate::Swap);
        for _ in 0..100 {
            assert_kak(&random_local(&mut rng));
            assert_kak(&(random_local(&mut rng) * swap * random_local(&mut rng)));
            let c = EntanglerCoords::new(rng.random_range(-1.0..1.0), 0.0, 0.0);
            assert_kak(&(random_local(&mut rng) * canonical_entangler(&c) * random_local(&mut rng)));
        }
    }

    #[test]
    fn kak_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = random_local(&mut rng);
        assert_eq!(kak_decompose(&u).unwrap(), kak_decompose(&u).unwrap());
    }

    #[test]
    fn kak_haar_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..1000 {
            let u = haar_unitary(&mut rng);
            let k = assert_kak(&u);
            assert!(inv(&canonical_entangler(&k.coords)).distance(&inv(&u)) < 1e-9);
        }
    }

    #[test]
    fn kak_json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let k = kak_decompose(&haar_unitary(&mut rng)).unwrap();
        let text = serde_json::to_string(&k).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(v["coords"].as_array().unwrap().len() == 3);
        assert!(v["u_pre"][0][1][0].as_array().unwrap().len() == 2);
        let back: KakFactors = serde_json::from_str(&text).unwrap();
        assert_eq!(back, k);
    }

    #[test]
    fn weyl_examples() {
        let q = FRAC_PI_4;
        let expected = EntanglerCoords::new(q, 0.0, 0.0);
        for c in [(0.0, 0.0, q), (q, 0.0, 0.0), (-q, 0.0, 0.0), (0.0, -q, 0.0)] {
            let got = weyl_canonicalize(&c.into());
            assert!(got.max_abs_diff(&expected) < 1e-15, "{c:?} -> {got:?}");
        }
        let swap_like = weyl_canonicalize(&EntanglerCoords::new(q, q, -q));
        assert!(swap_like.max_abs_diff(&EntanglerCoords::new(q, q, q)) < 1e-15);
        // chirality is kept away from the x = π/4 face
        let got = weyl_canonicalize(&EntanglerCoords::new(0.5, 0.3, -0.1));
        assert!(got.max_abs_diff(&EntanglerCoords::new(0.5, 0.3, -0.1)) < 1e-15);
    }

    impl From<(f64, f64, f64)> for EntanglerCoords {
        fn from((x, y, z): (f64, f64, f64)) -> Self {
            EntanglerCoords::new(x, y, z)
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn weyl_idempotent_and_invariant(x in -7.0f64..7.0, y in -7.0f64..7.0, z in -7.0f64..7.0) {
            let c = EntanglerCoords::new(x, y, z);
            let w = weyl_canonicalize(&c);
            prop_assert!(weyl_canonicalize(&w).max_abs_diff(&w) < 1e-12);
            prop_assert!(FRAC_PI_4 + 1e-12 >= w.x && w.x >= w.y && w.y >= w.z.abs() - 1e-15);
            let d = inv(&canonical_entangler(&c)).distance(&inv(&canonical_entangler(&w)));
            prop_assert!(d < 1e-10, "{:?} -> {:?}: {}", c, w, d);
        }
    }
}
