// Copyright 2026 The qgd Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by the gate-design routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("generator is not Hermitian (max asymmetry {0:.3e})")]
    NonHermitianInput(f64),
    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("integrator did not converge: halving the step changed the result by {0:.3e}")]
    StepTooCoarse(f64),
    #[error("unsupported schedule operation: {0}")]
    UnsupportedOp(String),
    #[error("closed-form trajectories require J' = 0 (got J' = {0})")]
    NonzeroJPrime(f64),
    #[error("all coupling parameters are zero")]
    ZeroCoupling,
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("requested construction is not available for these couplings: {0}")]
    UnsupportedTarget(String),
    #[error("compiled schedule failed verification against {target} (distance {distance:.3e})")]
    VerificationFailed { target: String, distance: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
