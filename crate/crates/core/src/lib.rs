// Copyright 2026 The qgd Authors
// SPDX-License-Identifier: Apache-2.0

//! Gate design for weakly coupled qubit pairs.
//!
//! The crate models a tuned, weakly coupled pair of qubits in the rotating
//! frame, where any coupling tensor reduces to three parameters
//! `(J, J_zz, J')`. On top of that model it provides:
//!
//! * [`qmat`]: 2×2 / 4×4 complex algebra, Hermitian exponentials and
//!   time-ordered propagation.
//! * [`hamiltonian`]: lab-frame and rotating-frame Hamiltonians and the
//!   rotating-wave check.
//! * [`entangler`]: the canonical entangler `A(x, y, z)` and closed-form
//!   entangler-space trajectories.
//! * [`equivalence`]: Makhlin invariants, KAK decomposition and Weyl-chamber
//!   canonicalization.
//! * [`pulses`]: pulse schedules, their simulation and verification.
//! * [`compiler`]: CNOT (and SWAP·CNOT) schedule synthesis.
//!
//! Units: ħ = 1, couplings are angular frequencies, all angles in radians.

pub mod compiler;
pub mod entangler;
pub mod equivalence;
mod error;
pub mod hamiltonian;
pub mod pulses;
pub mod qmat;
pub mod random;
pub mod wire;

pub use compiler::{compile_cnot, named_gate, Branch, CompileOptions, CompileResult, NamedGate, Prefer};
pub use entangler::{canonical_entangler, coords_from_area, trajectory, EntanglerCoords, Trajectory};
pub use equivalence::{
    kak_decompose, locally_equivalent, makhlin_invariants, weyl_canonicalize, KakFactors, MakhlinInvariants,
};
pub use error::{Error, Result};
pub use hamiltonian::{reduce_coupling, rot_frame_matrix, CouplingTensor, QubitParams, RotFrameParams};
pub use pulses::{
    simulate_schedule, verify_schedule, Axis, PulseOp, PulseSchedule, Qubit, VerificationReport, VerifyMode,
};
pub use qmat::{distance, expm_hermitian, kron, propagate, Mat2, Mat4, PiecewiseHamiltonian};
