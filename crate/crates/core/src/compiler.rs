// Copyright 2026 The qgd Authors
// SPDX-License-Identifier: Apache-2.0

//! CNOT synthesis from rotating-frame parameters.
//!
//! Every returned schedule has been simulated and checked against its target
//! gate, including global phase.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::RotFrameParams;
use crate::pulses::{
    hadamard_ops, verify_schedule, Axis, PulseOp, PulseSchedule, Qubit, VerificationReport, VerifyMode,
};
use crate::qmat::{Mat4, C64};

/// Gates with a fixed matrix. Qubit 1 is the control and the most
/// significant bit of the basis index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NamedGate {
    Identity,
    Cnot,
    Cz,
    Swap,
    /// `SWAP · CNOT`: CNOT first, then SWAP.
    SwapCnot,
    /// `CNOT · SWAP`: SWAP first, then CNOT.
    CnotSwap,
    /// Controlled phase `diag(1, 1, 1, e^{iθ})`.
    Ctheta(f64),
}

fn permutation(p: [usize; 4]) -> Mat4 {
    Mat4::from_fn(|r, c| if p[c] == r { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
}

pub fn named_gate(g: &NamedGate) -> Mat4 {
    let cnot = permutation([0, 1, 3, 2]);
    let swap = permutation([0, 2, 1, 3]);
    match *g {
        NamedGate::Identity => Mat4::identity(),
        NamedGate::Cnot => cnot,
        NamedGate::Cz => Mat4::from_diagonal(&[1.0, 1.0, 1.0, -1.0].map(C64::from).into()),
        NamedGate::Swap => swap,
        NamedGate::SwapCnot => swap * cnot,
        NamedGate::CnotSwap => cnot * swap,
        NamedGate::Ctheta(theta) => {
            Mat4::from_diagonal(&[C64::from(1.0), C64::from(1.0), C64::from(1.0), C64::from_polar(1.0, theta)].into())
        }
    }
}

impl fmt::Display for NamedGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedGate::Identity => f.write_str("I"),
            NamedGate::Cnot => f.write_str("CNOT"),
            NamedGate::Cz => f.write_str("CZ"),
            NamedGate::Swap => f.write_str("SWAP"),
            NamedGate::SwapCnot => f.write_str("SWAP_CNOT"),
            NamedGate::CnotSwap => f.write_str("CNOT_SWAP"),
            NamedGate::Ctheta(t) => write!(f, "CTHETA({t})"),
        }
    }
}

/// Case-insensitive: `I`, `CNOT`, `CZ`, `SWAP`, `SWAP_CNOT`, `CNOT_SWAP`,
/// `CTHETA(θ)` or `C(θ)`.
impl FromStr for NamedGate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_uppercase();
        let name = if norm.contains('(') { norm.clone() } else { norm.replace(['-', '·', '*'], "_") };
        let gate = match name.as_str() {
            "I" | "ID" | "IDENTITY" => NamedGate::Identity,
            "CNOT" | "CX" => NamedGate::Cnot,
            "CZ" => NamedGate::Cz,
            "SWAP" => NamedGate::Swap,
            "SWAP_CNOT" | "SWAPCNOT" => NamedGate::SwapCnot,
            "CNOT_SWAP" | "CNOTSWAP" => NamedGate::CnotSwap,
            _ => {
                let arg = norm
                    .strip_prefix("CTHETA(")
                    .or_else(|| norm.strip_prefix("C("))
                    .and_then(|rest| rest.strip_suffix(')'))
                    .ok_or_else(|| Error::UnknownGate(s.to_string()))?;
                let theta: f64 = arg.trim().parse().map_err(|_| Error::UnknownGate(s.to_string()))?;
                if !theta.is_finite() {
                    return Err(Error::UnknownGate(s.to_string()));
                }
                NamedGate::Ctheta(theta)
            }
        };
        Ok(gate)
    }
}

/// Which CNOT-class target to aim for when the exchange coupling allows a
/// single-shot `SWAP · CNOT`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Prefer {
    #[default]
    Auto,
    Cnot,
    SwapCnot,
}

impl FromStr for Prefer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "auto" => Ok(Prefer::Auto),
            "cnot" => Ok(Prefer::Cnot),
            "swap_cnot" => Ok(Prefer::SwapCnot),
            _ => Err(Error::UnknownGate(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `J = J' = 0`: one interval of `J_zz σzσz`.
    IsingSingleShot,
    /// `J_zz = J' = 0`: one interval of XY exchange, yielding `SWAP · CNOT`.
    XySingleShotSwapCnot,
    /// `J' = 0`: two intervals around a π refocusing pulse.
    TwoShotRefocus,
    /// `J' ≠ 0`: two-shot refocusing in a frame rotated by `φ`.
    GeneralJprime,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompileOptions {
    pub prefer: Prefer,
    /// Qubit receiving the π refocusing pulse in two-interval branches.
    pub refocus_qubit: Qubit,
    /// Use the `J'` branch even when `J' = 0`.
    pub force_general: bool,
    /// Tolerance of the exact verification of the result.
    pub tol: f64,
}

impl Default for CompileOptions {
    fn default() -> Self {
        Self { prefer: Prefer::Auto, refocus_qubit: Qubit::One, force_general: false, tol: crate::pulses::VERIFY_TOL }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompileResult {
    pub params: RotFrameParams,
    pub branch: Branch,
    pub target: String,
    /// Length of each entangling interval.
    pub delta_t: f64,
    pub total_entangling_time: f64,
    pub schedule: PulseSchedule,
    pub verification: VerificationReport,
}

impl CompileResult {
    pub fn target_gate(&self) -> Result<NamedGate> {
        self.target.parse()
    }
}

fn sign(v: f64) -> f64 {
    if v < 0.0 {
        -1.0
    } else {
        1.0
    }
}

fn ising(p: &RotFrameParams) -> (PulseSchedule, f64) {
    let s = sign(p.j_zz);
    let dt = PI / (4.0 * p.j_zz.abs());
    let mut ops = PulseSchedule::default();
    ops.extend(hadamard_ops(Qubit::Two));
    ops.push(PulseOp::entangle(dt));
    ops.push(PulseOp::rotate(Axis::Z, -s * FRAC_PI_2, Qubit::Two));
    ops.push(PulseOp::rotate_with_previous(Axis::Z, -s * FRAC_PI_2, Qubit::One));
    ops.extend(hadamard_ops(Qubit::Two));
    ops.push(PulseOp::phase(-s * FRAC_PI_4));
    (ops, dt)
}

fn xy_swap_cnot(p: &RotFrameParams) -> (PulseSchedule, f64) {
    let s = sign(p.j);
    let dt = PI / (4.0 * p.j.abs());
    let ops = PulseSchedule::new(vec![
        PulseOp::rotate(Axis::Y, -FRAC_PI_2, Qubit::Two),
        PulseOp::entangle(dt),
        PulseOp::rotate(Axis::X, -FRAC_PI_2, Qubit::Two),
        PulseOp::rotate(Axis::Y, FRAC_PI_2, Qubit::One),
        PulseOp::rotate_with_previous(Axis::Y, s * FRAC_PI_2, Qubit::Two),
        PulseOp::rotate(Axis::X, s * FRAC_PI_2, Qubit::One),
        PulseOp::rotate_with_previous(Axis::X, FRAC_PI_2, Qubit::Two),
        PulseOp::phase(s * FRAC_PI_2),
    ]);
    (ops, dt)
}

/// Wraps a core equal to `A(sπ/4, 0, 0)` into CNOT.
fn refocus_wrapper(s: f64, core: Vec<PulseOp>) -> PulseSchedule {
    let mut ops = PulseSchedule::new(vec![PulseOp::rotate(Axis::Y, FRAC_PI_2, Qubit::One)]);
    ops.extend(core);
    ops.extend([
        PulseOp::rotate(Axis::X, -s * FRAC_PI_2, Qubit::One),
        PulseOp::rotate_with_previous(Axis::X, -s * FRAC_PI_2, Qubit::Two),
        PulseOp::rotate(Axis::Y, -FRAC_PI_2, Qubit::One),
        PulseOp::phase(-s * FRAC_PI_4),
    ]);
    ops
}

fn two_shot(p: &RotFrameParams, refocus: Qubit) -> (PulseSchedule, f64) {
    let s = sign(p.j);
    let dt = PI / (8.0 * p.j.abs());
    let core = vec![
        PulseOp::entangle(dt),
        PulseOp::rotate(Axis::X, PI, refocus),
        PulseOp::entangle(dt),
        PulseOp::rotate(Axis::X, -PI, refocus),
    ];
    (refocus_wrapper(s, core), dt)
}

fn general(p: &RotFrameParams, refocus: Qubit) -> (PulseSchedule, f64) {
    let phi = p.phi();
    let dt = PI / (8.0 * p.exchange_magnitude());
    let ops = match refocus {
        Qubit::One => PulseSchedule::new(vec![
            PulseOp::rotate(Axis::Y, FRAC_PI_2, Qubit::One),
            PulseOp::rotate_with_previous(Axis::Z, phi, Qubit::Two),
            PulseOp::entangle(dt),
            PulseOp::rotate(Axis::X, PI, Qubit::One),
            PulseOp::entangle(dt),
            PulseOp::rotate(Axis::X, FRAC_PI_2, Qubit::One),
            PulseOp::rotate_with_previous(Axis::Z, -phi, Qubit::Two),
            PulseOp::rotate(Axis::Y, -FRAC_PI_2, Qubit::One),
            PulseOp::rotate_with_previous(Axis::X, -FRAC_PI_2, Qubit::Two),
            PulseOp::phase(3.0 * FRAC_PI_4),
        ]),
        Qubit::Two => {
            // The core below equals A(π/4, 0, 0) for every φ.
            let core = vec![
                PulseOp::rotate(Axis::Z, -phi, Qubit::One),
                PulseOp::entangle(dt),
                PulseOp::rotate(Axis::X, PI, Qubit::Two),
                PulseOp::entangle(dt),
                PulseOp::rotate(Axis::X, -PI, Qubit::Two),
                PulseOp::rotate(Axis::Z, phi, Qubit::One),
            ];
            refocus_wrapper(1.0, core)
        }
    };
    (ops, dt)
}

fn is_zero(v: f64, scale: f64) -> bool {
    v.abs() <= 1e-12 * scale
}

/// Chooses a branch for `p` and returns a verified schedule.
///
/// Errors: [`Error::ZeroCoupling`] when all parameters vanish,
/// [`Error::UnsupportedTarget`] when `SWAP · CNOT` is requested but
/// `J_zz` or `J'` is nonzero, [`Error::VerificationFailed`] if the simulated
/// schedule misses the target.
pub fn compile_cnot(p: &RotFrameParams, opts: &CompileOptions) -> Result<CompileResult> {
    let p = RotFrameParams::new(p.j, p.j_zz, p.j_prime)?;
    let scale = p.j.abs().max(p.j_zz.abs()).max(p.j_prime.abs());
    if scale == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    let exchange_zero = is_zero(p.j, scale) && is_zero(p.j_prime, scale);
    let jprime_zero = is_zero(p.j_prime, scale);
    let jzz_zero = is_zero(p.j_zz, scale);

    let branch = if opts.force_general {
        if exchange_zero {
            return Err(Error::UnsupportedTarget("the J' branch needs a nonzero exchange coupling".into()));
        }
        if opts.prefer == Prefer::SwapCnot {
            return Err(Error::UnsupportedTarget("SWAP_CNOT is only compiled in the XY branch".into()));
        }
        Branch::GeneralJprime
    } else if exchange_zero {
        if opts.prefer == Prefer::SwapCnot {
            return Err(Error::UnsupportedTarget("SWAP_CNOT needs XY exchange coupling".into()));
        }
        Branch::IsingSingleShot
    } else if !jprime_zero {
        if opts.prefer == Prefer::SwapCnot {
            return Err(Error::UnsupportedTarget("SWAP_CNOT needs J' = 0".into()));
        }
        Branch::GeneralJprime
    } else {
        match opts.prefer {
            Prefer::SwapCnot if !jzz_zero => {
                return Err(Error::UnsupportedTarget("SWAP_CNOT needs J_zz = 0".into()));
            }
            Prefer::SwapCnot => Branch::XySingleShotSwapCnot,
            Prefer::Auto if jzz_zero => Branch::XySingleShotSwapCnot,
            _ => Branch::TwoShotRefocus,
        }
    };

    let (schedule, delta_t) = match branch {
        Branch::IsingSingleShot => ising(&p),
        Branch::XySingleShotSwapCnot => xy_swap_cnot(&p),
        Branch::TwoShotRefocus => two_shot(&p, opts.refocus_qubit),
        Branch::GeneralJprime => general(&p, opts.refocus_qubit),
    };
    let target = match branch {
        Branch::XySingleShotSwapCnot => NamedGate::SwapCnot,
        _ => NamedGate::Cnot,
    };
    let name = target.to_string();
    let verification = verify_schedule(&schedule, &p, &named_gate(&target), &name, VerifyMode::Exact, opts.tol)?;
    if !verification.passed {
        return Err(Error::VerificationFailed { target: name, distance: verification.distance });
    }
    Ok(CompileResult {
        params: p,
        branch,
        target: name,
        delta_t,
        total_entangling_time: schedule.total_entangling_time(),
        schedule,
        verification,
    })
}
