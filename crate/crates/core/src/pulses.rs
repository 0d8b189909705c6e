// Copyright 2026 The qgd Authors
// SPDX-License-Identifier: Apache-2.0

//! Pulse schedules in the rotating frame.
//!
//! A schedule is stored in application order (first-applied first). Single
//! qubit rotations `R_a(θ) = e^{−iθσ^a/2}` are instantaneous; entangling
//! intervals evolve under the rotating-frame Hamiltonian for their duration.
//! [`fmt::Display`] renders a schedule right to left, as an operator product.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::equivalence::{makhlin_invariants, EQUIVALENCE_TOL};
use crate::error::{Error, Result};
use crate::hamiltonian::{rot_frame_matrix, RotFrameParams};
use crate::qmat::{
    distance, ensure_unitary, expm_hermitian, global_phase, identity2, kron, max_abs, pauli_x, pauli_y, pauli_z, Mat2,
    Mat4, C64,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn pauli(self) -> Mat2 {
        match self {
            Axis::X => pauli_x(),
            Axis::Y => pauli_y(),
            Axis::Z => pauli_z(),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

/// Qubit index, serialized as `1` or `2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Qubit {
    One,
    Two,
}

impl TryFrom<u8> for Qubit {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Qubit::One),
            2 => Ok(Qubit::Two),
            _ => Err(Error::InvalidInput(format!("qubit index must be 1 or 2, got {v}"))),
        }
    }
}

impl From<Qubit> for u8 {
    fn from(q: Qubit) -> u8 {
        match q {
            Qubit::One => 1,
            Qubit::Two => 2,
        }
    }
}

impl Qubit {
    pub fn other(self) -> Qubit {
        match self {
            Qubit::One => Qubit::Two,
            Qubit::Two => Qubit::One,
        }
    }
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum PulseOp {
    Rotate {
        axis: Axis,
        angle: f64,
        qubit: Qubit,
        /// Commutes with, and may run simultaneously with, the previous op.
        #[serde(default, skip_serializing_if = "is_false")]
        with_previous: bool,
    },
    Entangle {
        duration: f64,
    },
    Phase {
        angle: f64,
    },
}

impl PulseOp {
    pub fn rotate(axis: Axis, angle: f64, qubit: Qubit) -> Self {
        PulseOp::Rotate { axis, angle, qubit, with_previous: false }
    }

    pub fn rotate_with_previous(axis: Axis, angle: f64, qubit: Qubit) -> Self {
        PulseOp::Rotate { axis, angle, qubit, with_previous: true }
    }

    pub fn entangle(duration: f64) -> Self {
        PulseOp::Entangle { duration }
    }

    pub fn phase(angle: f64) -> Self {
        PulseOp::Phase { angle }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            PulseOp::Entangle { duration } if !(duration.is_finite() && duration >= 0.0) => {
                Err(Error::InvalidInput(format!("entangling duration must be finite and >= 0, got {duration}")))
            }
            PulseOp::Rotate { angle, .. } | PulseOp::Phase { angle } if !angle.is_finite() => {
                Err(Error::InvalidInput(format!("angle must be finite, got {angle}")))
            }
            _ => Ok(()),
        }
    }

    pub fn matrix(&self, p: &RotFrameParams) -> Result<Mat4> {
        self.validate()?;
        match *self {
            PulseOp::Rotate { axis, angle, qubit, .. } => Ok(rotation_matrix(axis, angle, qubit)),
            PulseOp::Entangle { duration } => expm_hermitian(&rot_frame_matrix(p), duration),
            PulseOp::Phase { angle } => Ok(global_phase(angle)),
        }
    }

    fn with_previous(&self) -> bool {
        matches!(self, PulseOp::Rotate { with_previous: true, .. })
    }
}

impl fmt::Display for PulseOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PulseOp::Rotate { axis, angle, qubit, .. } => write!(f, "R{axis}({angle:.6})_{}", u8::from(*qubit)),
            PulseOp::Entangle { duration } => write!(f, "exp(-iH·{duration:.6})"),
            PulseOp::Phase { angle } => write!(f, "e^(i·{angle:.6})"),
        }
    }
}

/// Ordered operations, first-applied first. Serializes as a bare JSON array.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PulseSchedule {
    ops: Vec<PulseOp>,
}

impl PulseSchedule {
    pub fn new(ops: Vec<PulseOp>) -> Self {
        Self { ops }
    }

    pub fn ops(&self) -> &[PulseOp] {
        &self.ops
    }

    pub fn push(&mut self, op: PulseOp) {
        self.ops.push(op);
    }

    pub fn extend(&mut self, ops: impl IntoIterator<Item = PulseOp>) {
        self.ops.extend(ops);
    }

    /// `self` followed by `later`.
    pub fn then(&self, later: &PulseSchedule) -> PulseSchedule {
        let mut ops = self.ops.clone();
        ops.extend_from_slice(&later.ops);
        PulseSchedule { ops }
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn total_entangling_time(&self) -> f64 {
        self.ops
            .iter()
            .map(|op| match op {
                PulseOp::Entangle { duration } => *duration,
                _ => 0.0,
            })
            .sum()
    }

    pub fn entangling_intervals(&self) -> Vec<f64> {
        self.ops
            .iter()
            .filter_map(|op| match op {
                PulseOp::Entangle { duration } => Some(*duration),
                _ => None,
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        self.ops.iter().try_for_each(PulseOp::validate)
    }
}

impl fmt::Display for PulseSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ops.is_empty() {
            return f.write_str("I");
        }
        let mut groups: Vec<Vec<&PulseOp>> = Vec::new();
        for op in &self.ops {
            match groups.last_mut() {
                Some(group) if op.with_previous() => group.push(op),
                _ => groups.push(vec![op]),
            }
        }
        let rendered: Vec<String> = groups
            .iter()
            .rev()
            .map(|g| {
                let inner: Vec<String> = g.iter().rev().map(|op| op.to_string()).collect();
                if g.len() > 1 {
                    format!("[{}]", inner.join(" "))
                } else {
                    inner.join(" ")
                }
            })
            .collect();
        f.write_str(&rendered.join(" "))
    }
}

/// `e^{−iθσ^a/2}` on one qubit.
pub fn rotation_2x2(axis: Axis, angle: f64) -> Mat2 {
    let (s, c) = (angle / 2.0).sin_cos();
    identity2() * C64::from(c) - axis.pauli() * C64::new(0.0, s)
}

/// `e^{−iθσ^a/2}` on `qubit`, identity on the other.
pub fn rotation_matrix(axis: Axis, angle: f64, qubit: Qubit) -> Mat4 {
    let r = rotation_2x2(axis, angle);
    match qubit {
        Qubit::One => kron(&r, &identity2()),
        Qubit::Two => kron(&identity2(), &r),
    }
}

/// `H = i R_x(π) R_y(π/2)` on `qubit`, in application order.
pub fn hadamard_ops(qubit: Qubit) -> [PulseOp; 3] {
    [
        PulseOp::rotate(Axis::Y, std::f64::consts::FRAC_PI_2, qubit),
        PulseOp::rotate(Axis::X, std::f64::consts::PI, qubit),
        PulseOp::phase(std::f64::consts::FRAC_PI_2),
    ]
}

/// Product of the schedule's operations, the last op leftmost.
pub fn simulate_schedule(s: &PulseSchedule, p: &RotFrameParams) -> Result<Mat4> {
    let mut u = Mat4::identity();
    for op in s.ops() {
        u = op.matrix(p)? * u;
    }
    Ok(u)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyMode {
    Exact,
    ExactUpToPhase,
    LocalClass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub target: String,
    pub mode: VerifyMode,
    pub tol: f64,
    /// Frobenius distance including global phase.
    pub distance: f64,
    /// Frobenius distance minimized over global phase.
    pub distance_up_to_phase: f64,
    /// `max(|ΔG1|, |ΔG2|)` between schedule and target.
    pub invariant_distance: f64,
    pub pass_exact: bool,
    pub pass_exact_up_to_phase: bool,
    pub pass_class: bool,
    /// Pass flag of the selected mode.
    pub passed: bool,
    pub total_entangling_time: f64,
}

pub fn verify_schedule(
    s: &PulseSchedule,
    p: &RotFrameParams,
    target: &Mat4,
    target_name: &str,
    mode: VerifyMode,
    tol: f64,
) -> Result<VerificationReport> {
    ensure_unitary(target, crate::equivalence::INPUT_UNITARY_TOL)?;
    let u = simulate_schedule(s, p)?;
    let exact = distance(&u, target, false);
    let up_to_phase = distance(&u, target, true);
    let invariant_distance = makhlin_invariants(&u)?.distance(&makhlin_invariants(target)?);
    let pass_exact = exact < tol;
    let pass_exact_up_to_phase = up_to_phase < tol;
    // Equal up to phase is locally equivalent whatever the invariant roundoff.
    let pass_class = invariant_distance < tol || pass_exact_up_to_phase;
    let passed = match mode {
        VerifyMode::Exact => pass_exact,
        VerifyMode::ExactUpToPhase => pass_exact_up_to_phase,
        VerifyMode::LocalClass => pass_class,
    };
    Ok(VerificationReport {
        target: target_name.to_string(),
        mode,
        tol,
        distance: exact,
        distance_up_to_phase: up_to_phase,
        invariant_distance,
        pass_exact,
        pass_exact_up_to_phase,
        pass_class,
        passed,
        total_entangling_time: s.total_entangling_time(),
    })
}

/// Default verification tolerance.
pub const VERIFY_TOL: f64 = EQUIVALENCE_TOL;

/// Checks the rotation sign convention: `i R_x(π) R_y(π/2)` must be the
/// Hadamard gate, and a π rotation about x on qubit 1 must map the
/// rotating-frame Hamiltonian to `J(σxσx − σyσy) − J_zz σzσz`.
pub fn convention_self_test() -> Result<()> {
    let h = rotation_2x2(Axis::X, std::f64::consts::PI)
        * rotation_2x2(Axis::Y, std::f64::consts::FRAC_PI_2)
        * C64::new(0.0, 1.0);
    let s = C64::from(std::f64::consts::FRAC_1_SQRT_2);
    let hadamard = Mat2::new(s, s, s, -s);
    let defect = (h - hadamard).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if defect > 1e-12 {
        return Err(Error::InvalidInput(format!("rotation convention broken: Hadamard identity off by {defect:.3e}")));
    }
    let p = RotFrameParams::new(0.83, -0.41, 0.0)?;
    let defect = max_abs(&(reflected_hamiltonian_check(&p) - reflected_hamiltonian(&p)));
    if defect > 1e-12 {
        return Err(Error::InvalidInput(format!(
            "rotation convention broken: refocusing identity off by {defect:.3e}"
        )));
    }
    Ok(())
}

/// `R_x(π)₁† 𝓗 R_x(π)₁`.
pub fn reflected_hamiltonian_check(p: &RotFrameParams) -> Mat4 {
    let r = rotation_matrix(Axis::X, std::f64::consts::PI, Qubit::One);
    r.adjoint() * rot_frame_matrix(p) * r
}

/// `J(σxσx − σyσy) − J_zz σzσz`, the rotating-frame Hamiltonian (J' = 0)
/// after refocusing.
pub fn reflected_hamiltonian(p: &RotFrameParams) -> Mat4 {
    let (x, y, z) = (pauli_x(), pauli_y(), pauli_z());
    (kron(&x, &x) - kron(&y, &y)) * C64::from(p.j) - kron(&z, &z) * C64::from(p.j_zz)
}
