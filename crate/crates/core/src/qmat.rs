// Copyright 2026 The qgd Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense 2×2 / 4×4 complex algebra for two-qubit work.
//!
//! Basis order is `|00⟩, |01⟩, |10⟩, |11⟩` with qubit 1 as the left tensor
//! factor. Matrices are nalgebra fixed-size matrices of [`Complex64`].

use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix2, Matrix4, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type Mat2 = Matrix2<C64>;
pub type Mat4 = Matrix4<C64>;

/// Tolerance for exact algebraic identities.
pub const ALGEBRAIC_TOL: f64 = 1e-12;
/// Default numerical tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default `‖H‖·step` bound for sampled generators.
pub const DEFAULT_NORM_STEP: f64 = 0.01;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity2() -> Mat2 {
    Mat2::identity()
}

pub fn identity4() -> Mat4 {
    Mat4::identity()
}

pub fn pauli_x() -> Mat2 {
    Mat2::new(ZERO, ONE, ONE, ZERO)
}

pub fn pauli_y() -> Mat2 {
    Mat2::new(ZERO, -I, I, ZERO)
}

pub fn pauli_z() -> Mat2 {
    Mat2::new(ONE, ZERO, ZERO, -ONE)
}

/// Kronecker product `a ⊗ b`; `a` acts on qubit 1.
pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    Mat4::from_fn(|r, col| a[(r / 2, col / 2)] * b[(r % 2, col % 2)])
}

/// `e^{iθ}·I₄`.
pub fn global_phase(theta: f64) -> Mat4 {
    Mat4::from_diagonal_element(C64::from_polar(1.0, theta))
}

pub fn max_abs(m: &Mat4) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entry of `|h − h†|`.
pub fn hermiticity_defect(h: &Mat4) -> f64 {
    max_abs(&(h - h.adjoint()))
}

/// Largest entry of `|U†U − I|`.
pub fn unitarity_defect(u: &Mat4) -> f64 {
    max_abs(&(u.adjoint() * u - identity4()))
}

pub fn is_unitary(u: &Mat4, tol: f64) -> bool {
    unitarity_defect(u) < tol
}

pub fn ensure_unitary(u: &Mat4, tol: f64) -> Result<()> {
    let defect = unitarity_defect(u);
    if defect < tol && u.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NotUnitary(defect))
    }
}

fn ensure_hermitian(h: &Mat4) -> Result<()> {
    let defect = hermiticity_defect(h);
    let scale = max_abs(h).max(1.0);
    if defect <= ALGEBRAIC_TOL * scale && h.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonHermitianInput(defect))
    }
}

fn expm_unchecked(h: &Mat4, t: f64) -> Mat4 {
    let eig = SymmetricEigen::new(*h);
    let phases = Mat4::from_diagonal(&eig.eigenvalues.map(|lambda| C64::from_polar(1.0, -lambda * t)));
    eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}

/// `e^{−i h t}` for Hermitian `h`, computed from the eigendecomposition of `h`.
pub fn expm_hermitian(h: &Mat4, t: f64) -> Result<Mat4> {
    ensure_hermitian(h)?;
    if !t.is_finite() {
        return Err(Error::InvalidInput(format!("non-finite time {t}")));
    }
    Ok(expm_unchecked(h, t))
}

/// Distance between two unitaries.
///
/// With `up_to_global_phase` this is `min_θ ‖u − e^{iθ}v‖_F`, which for
/// unitaries equals `√(8 − 2|tr(u†v)|)`; otherwise the plain Frobenius norm
/// of `u − v`.
pub fn distance(u: &Mat4, v: &Mat4, up_to_global_phase: bool) -> f64 {
    if up_to_global_phase {
        // Evaluated at the optimal phase directly; the closed form loses
        // half the digits near zero.
        let overlap = (v.adjoint() * u).trace();
        let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { ONE };
        (u - v * phase).norm()
    } else {
        (u - v).norm()
    }
}

/// A time-dependent Hermitian generator `H(t)`.
pub trait Generator: Send + Sync {
    fn at(&self, t: f64) -> Mat4;
}

impl<F> Generator for F
where
    F: Fn(f64) -> Mat4 + Send + Sync,
{
    fn at(&self, t: f64) -> Mat4 {
        self(t)
    }
}

/// Step selection for sampled segments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepPolicy {
    /// Choose the step so that `‖H‖·step ≤ bound`.
    NormBound(f64),
    /// Fixed step; rounded down so the grid ends exactly on the segment end.
    Fixed(f64),
}

impl Default for StepPolicy {
    fn default() -> Self {
        StepPolicy::NormBound(DEFAULT_NORM_STEP)
    }
}

#[derive(Clone)]
#[allow(clippy::large_enum_variant)]
pub enum Segment {
    Constant {
        generator: Mat4,
        duration: f64,
    },
    /// Sampled at segment midpoints; `H` is evaluated at absolute time.
    Sampled {
        generator: Arc<dyn Generator>,
        duration: f64,
        step: StepPolicy,
    },
}

impl Segment {
    pub fn duration(&self) -> f64 {
        match self {
            Segment::Constant { duration, .. } | Segment::Sampled { duration, .. } => *duration,
        }
    }
}

impl fmt::Debug for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Segment::Constant { duration, .. } => f.debug_struct("Constant").field("duration", duration).finish(),
            Segment::Sampled { duration, step, .. } => {
                f.debug_struct("Sampled").field("duration", duration).field("step", step).finish()
            }
        }
    }
}

/// Integration rule for sampled segments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    /// `e^{−iH(t_mid)h}` per step; global error `O(h²)`.
    Midpoint,
    /// Fourth-order Magnus expansion on two Gauss–Legendre nodes; global
    /// error `O(h⁴)`.
    #[default]
    Magnus4,
}

/// Ordered generator segments; later segments act on the left.
#[derive(Debug, Clone, Default)]
pub struct PiecewiseHamiltonian {
    segments: Vec<Segment>,
    scheme: Scheme,
}

fn check_duration(duration: f64) -> Result<()> {
    if duration.is_finite() && duration >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("segment duration must be finite and >= 0, got {duration}")))
    }
}

impl PiecewiseHamiltonian {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn constant(mut self, generator: Mat4, duration: f64) -> Result<Self> {
        check_duration(duration)?;
        ensure_hermitian(&generator)?;
        self.segments.push(Segment::Constant { generator, duration });
        Ok(self)
    }

    pub fn sampled(mut self, generator: impl Generator + 'static, duration: f64, step: StepPolicy) -> Result<Self> {
        check_duration(duration)?;
        match step {
            StepPolicy::NormBound(s) | StepPolicy::Fixed(s) if !(s.is_finite() && s > 0.0) => {
                return Err(Error::InvalidInput(format!("step must be positive, got {s}")));
            }
            _ => {}
        }
        self.segments.push(Segment::Sampled { generator: Arc::new(generator), duration, step });
        Ok(self)
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(Segment::duration).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }
}

fn step_count(generator: &dyn Generator, start: f64, duration: f64, step: StepPolicy, refine: usize) -> usize {
    if duration == 0.0 {
        return 0;
    }
    let base = match step {
        StepPolicy::Fixed(h) => (duration / h).ceil(),
        StepPolicy::NormBound(bound) => {
            // Frobenius norm bounds the spectral norm from above.
            let norm = [0.0, 0.5, 1.0].iter().map(|&f| generator.at(start + f * duration).norm()).fold(0.0, f64::max);
            (norm * duration / bound).ceil()
        }
    };
    (base.max(1.0) as usize) * refine
}

const GAUSS_LO: f64 = 0.5 - 0.288_675_134_594_812_9;
const GAUSS_HI: f64 = 0.5 + 0.288_675_134_594_812_9;

/// Effective Hermitian generator of one step from two node samples:
/// `(H₁ + H₂)/2 − i(√3/12)·h·[H₂, H₁]`. Equal samples give the sample.
fn magnus_generator(samples: &[Mat4; 2], h: f64) -> Mat4 {
    let [h1, h2] = samples;
    if h1 == h2 {
        return *h1;
    }
    let commutator = h2 * h1 - h1 * h2;
    (h1 + h2) * C64::from(0.5) - commutator * C64::new(0.0, 3f64.sqrt() / 12.0 * h)
}

fn propagate_refined(ph: &PiecewiseHamiltonian, refine: usize) -> Result<Mat4> {
    let mut u = identity4();
    let mut start = 0.0;
    for segment in &ph.segments {
        match segment {
            Segment::Constant { generator, duration } => {
                u = expm_unchecked(generator, *duration) * u;
            }
            Segment::Sampled { generator, duration, step } => {
                let n = step_count(generator.as_ref(), start, *duration, *step, refine);
                let h = duration / n as f64;
                let mut cached: Option<([Mat4; 2], Mat4)> = None;
                for k in 0..n {
                    let t0 = start + k as f64 * h;
                    let samples = match ph.scheme {
                        Scheme::Midpoint => {
                            let mid = generator.at(t0 + 0.5 * h);
                            [mid, mid]
                        }
                        Scheme::Magnus4 => [generator.at(t0 + GAUSS_LO * h), generator.at(t0 + GAUSS_HI * h)],
                    };
                    let factor = match &cached {
                        Some((prev, factor)) if *prev == samples => *factor,
                        _ => {
                            ensure_hermitian(&samples[0])?;
                            ensure_hermitian(&samples[1])?;
                            let factor = expm_unchecked(&magnus_generator(&samples, h), h);
                            cached = Some((samples, factor));
                            factor
                        }
                    };
                    u = factor * u;
                }
            }
        }
        start += segment.duration();
    }
    Ok(u)
}

/// Time-ordered product of the segment exponentials.
///
/// An empty schedule gives `I₄`. Sampled segments use the configured
/// [`Scheme`].
pub fn propagate(ph: &PiecewiseHamiltonian) -> Result<Mat4> {
    propagate_refined(ph, 1)
}

/// Propagates at the configured step and at half that step; fails with
/// [`Error::StepTooCoarse`] if the two differ by more than `tol` (Frobenius).
/// Returns the finer result.
pub fn propagate_checked(ph: &PiecewiseHamiltonian, tol: f64) -> Result<Mat4> {
    let coarse = propagate_refined(ph, 1)?;
    let fine = propagate_refined(ph, 2)?;
    let change = distance(&coarse, &fine, false);
    if change > tol {
        return Err(Error::StepTooCoarse(change));
    }
    Ok(fine)
}

/// Propagation with the step for every sampled segment divided by `refine`.
pub fn propagate_with_refinement(ph: &PiecewiseHamiltonian, refine: usize) -> Result<Mat4> {
    propagate_refined(ph, refine.max(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{haar_unitary, random_hermitian};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn kron_examples() {
        assert_eq!(kron(&identity2(), &identity2()), identity4());
        let zz = kron(&pauli_z(), &pauli_z());
        assert_eq!(zz, Mat4::from_diagonal(&nalgebra::Vector4::new(ONE, -ONE, -ONE, ONE)));
        let xx = kron(&pauli_x(), &pauli_x());
        for r in 0..4 {
            for col in 0..4 {
                let expected = if r + col == 3 { ONE } else { ZERO };
                assert_eq!(xx[(r, col)], expected);
            }
        }
    }

    #[test]
    fn expm_zero_generator_is_identity() {
        let u = expm_hermitian(&Mat4::zeros(), 3.7).unwrap();
        assert!(distance(&u, &identity4(), false) < ALGEBRAIC_TOL);
    }

    #[test]
    fn expm_diagonal_phases() {
        let h = kron(&pauli_z(), &identity2());
        // e^{-iπλ} with λ = ±1 is -1 on every entry.
        let u = expm_hermitian(&h, PI).unwrap();
        assert!(distance(&u, &(-identity4()), false) < ALGEBRAIC_TOL);
        let u = expm_hermitian(&h, PI / 2.0).unwrap();
        let expected = Mat4::from_diagonal(&nalgebra::Vector4::new(-I, -I, I, I));
        assert!(distance(&u, &expected, false) < ALGEBRAIC_TOL);
    }

    #[test]
    fn expm_rejects_non_hermitian() {
        let mut h = Mat4::zeros();
        h[(0, 1)] = ONE;
        assert!(matches!(expm_hermitian(&h, 1.0), Err(Error::NonHermitianInput(_))));
    }

    #[test]
    fn expm_unitary_and_semigroup() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let h = random_hermitian(&mut rng, 10.0);
            let (t1, t2) = (0.37, 1.9);
            let u1 = expm_hermitian(&h, t1).unwrap();
            let u2 = expm_hermitian(&h, t2).unwrap();
            let u12 = expm_hermitian(&h, t1 + t2).unwrap();
            assert!(unitarity_defect(&u12) < 1e-12);
            assert!(distance(&(u1 * u2), &u12, false) < 1e-11);
        }
    }

    #[test]
    fn expm_unitary_at_large_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let h = random_hermitian(&mut rng, 1.0);
            let scale = 100.0 / h.norm();
            let u = expm_hermitian(&h, scale).unwrap();
            assert!(unitarity_defect(&u) < 1e-12);
        }
    }

    #[test]
    fn propagate_empty_and_single() {
        assert_eq!(propagate(&PiecewiseHamiltonian::new()).unwrap(), identity4());
        let h = kron(&pauli_x(), &pauli_y());
        let ph = PiecewiseHamiltonian::new().constant(h, 0.8).unwrap();
        let u = propagate(&ph).unwrap();
        assert!(distance(&u, &expm_hermitian(&h, 0.8).unwrap(), false) < ALGEBRAIC_TOL);
    }

    #[test]
    fn propagate_orders_later_segments_on_the_left() {
        let a = kron(&pauli_x(), &identity2());
        let b = kron(&pauli_z(), &identity2());
        let ph = PiecewiseHamiltonian::new().constant(a, 0.3).unwrap().constant(b, 0.9).unwrap();
        let expected = expm_hermitian(&b, 0.9).unwrap() * expm_hermitian(&a, 0.3).unwrap();
        assert!(distance(&propagate(&ph).unwrap(), &expected, false) < ALGEBRAIC_TOL);
    }

    #[test]
    fn commuting_segments_sum_generators() {
        let zz = kron(&pauli_z(), &pauli_z());
        let xx = kron(&pauli_x(), &pauli_x());
        let yy = kron(&pauli_y(), &pauli_y());
        let ph = PiecewiseHamiltonian::new()
            .constant(xx, 0.4)
            .unwrap()
            .constant(zz, 1.1)
            .unwrap()
            .constant(yy + zz, 0.25)
            .unwrap();
        let total = xx * C64::from(0.4) + zz * C64::from(1.1) + (yy + zz) * C64::from(0.25);
        let expected = expm_hermitian(&total, 1.0).unwrap();
        assert!(distance(&propagate(&ph).unwrap(), &expected, false) < DEFAULT_TOL);
        let reversed = PiecewiseHamiltonian::new()
            .constant(yy + zz, 0.25)
            .unwrap()
            .constant(zz, 1.1)
            .unwrap()
            .constant(xx, 0.4)
            .unwrap();
        assert!(distance(&propagate(&reversed).unwrap(), &expected, false) < DEFAULT_TOL);
    }

    #[test]
    fn negative_duration_rejected() {
        assert!(PiecewiseHamiltonian::new().constant(Mat4::zeros(), -1.0).is_err());
    }

    fn driven_reference() -> PiecewiseHamiltonian {
        let z1 = kron(&pauli_z(), &identity2());
        let x1 = kron(&pauli_x(), &identity2());
        let xx = kron(&pauli_x(), &pauli_x());
        let generator =
            move |t: f64| z1 * C64::from(-0.5) + x1 * C64::from(0.3 * (1.0 * t).cos()) + xx * C64::from(0.05);
        PiecewiseHamiltonian::new().sampled(generator, 5.0, StepPolicy::Fixed(0.05)).unwrap()
    }

    #[test]
    fn richardson_error_shrinks_with_step() {
        for (scheme, min_ratio) in [(Scheme::Midpoint, 3.0), (Scheme::Magnus4, 12.0)] {
            let ph = driven_reference().with_scheme(scheme);
            let reference = propagate_with_refinement(&ph, 64).unwrap();
            let e1 = distance(&propagate_with_refinement(&ph, 1).unwrap(), &reference, false);
            let e2 = distance(&propagate_with_refinement(&ph, 2).unwrap(), &reference, false);
            assert!(e2 < e1, "{scheme:?}: {e2} !< {e1}");
            assert!(e1 / e2 > min_ratio, "{scheme:?}: ratio {}", e1 / e2);
        }
    }

    #[test]
    fn schemes_agree_on_piecewise_constant_generators() {
        let z1 = kron(&pauli_z(), &identity2());
        let xx = kron(&pauli_x(), &pauli_x());
        let step = move |t: f64| if t < 1.0 { z1 } else { xx };
        let exact = expm_hermitian(&xx, 1.0).unwrap() * expm_hermitian(&z1, 1.0).unwrap();
        for scheme in [Scheme::Midpoint, Scheme::Magnus4] {
            let ph =
                PiecewiseHamiltonian::new().sampled(step, 2.0, StepPolicy::Fixed(0.25)).unwrap().with_scheme(scheme);
            assert!(distance(&propagate(&ph).unwrap(), &exact, false) < 1e-12);
        }
    }

    #[test]
    fn default_step_converges_to_tolerance() {
        let z1 = kron(&pauli_z(), &identity2());
        let xx = kron(&pauli_x(), &pauli_x());
        let ramp = move |t: f64| z1 * C64::from(-0.5) + xx * C64::from(0.02 * t);
        let ph = PiecewiseHamiltonian::new().sampled(ramp, 2.0, StepPolicy::default()).unwrap();
        let fine = propagate_with_refinement(&ph, 2).unwrap();
        let coarse = propagate(&ph).unwrap();
        assert!(distance(&fine, &coarse, false) < DEFAULT_TOL, "{}", distance(&fine, &coarse, false));
        assert!(propagate_checked(&ph, DEFAULT_TOL).is_ok());
    }

    #[test]
    fn coarse_step_reported() {
        let ph = driven_reference();
        assert!(matches!(propagate_checked(&ph, 1e-14), Err(Error::StepTooCoarse(_))));
    }

    #[test]
    fn distance_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = haar_unitary(&mut rng);
        assert!(distance(&u, &u, false) < ALGEBRAIC_TOL);
        assert!(distance(&u, &u, true) < ALGEBRAIC_TOL);
        let shifted = u * C64::from_polar(1.0, PI / 7.0);
        assert!(distance(&u, &shifted, true) < ALGEBRAIC_TOL);
        let cnot =
            Mat4::new(ONE, ZERO, ZERO, ZERO, ZERO, ONE, ZERO, ZERO, ZERO, ZERO, ZERO, ONE, ZERO, ZERO, ONE, ZERO);
        assert!((distance(&identity4(), &cnot, false) - 2.0).abs() < ALGEBRAIC_TOL);
    }

    #[test]
    fn distance_is_a_metric() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let (a, b, d) = (haar_unitary(&mut rng), haar_unitary(&mut rng), haar_unitary(&mut rng));
            for phase in [false, true] {
                let ab = distance(&a, &b, phase);
                assert!((ab - distance(&b, &a, phase)).abs() < 1e-12);
                assert!(ab <= distance(&a, &d, phase) + distance(&d, &b, phase) + 1e-12);
            }
        }
    }
}
