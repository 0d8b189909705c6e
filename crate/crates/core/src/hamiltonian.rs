// Copyright 2026 The qgd Authors
// SPDX-License-Identifier: Apache-2.0

//! Lab-frame and rotating-frame Hamiltonians of a coupled qubit pair.
//!
//! In the frame co-rotating with tuned qubits, only the excitation-conserving
//! part of the coupling tensor survives the rotating-wave approximation:
//!
//! ```text
//! 𝓗 = J (σxσx + σyσy) + J_zz σzσz + J' (σxσy − σyσx)
//! J = (J_xx + J_yy)/2,   J' = (J_xy − J_yx)/2
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{
    self, distance, expm_hermitian, identity2, kron, pauli_x, pauli_y, pauli_z, Generator, Mat2, Mat4,
    PiecewiseHamiltonian, StepPolicy, C64, ZERO,
};

const AXES: [char; 3] = ['x', 'y', 'z'];

fn pauli(index: usize) -> Mat2 {
    match index {
        0 => pauli_x(),
        1 => pauli_y(),
        _ => pauli_z(),
    }
}

/// The 3×3 real coupling tensor `J_{μν}` multiplying `σ₁^μ ⊗ σ₂^ν`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CouplingTensorJson", into = "CouplingTensorJson")]
pub struct CouplingTensor {
    /// `j[μ][ν]` with indices in x, y, z order.
    pub j: [[f64; 3]; 3],
    /// Informational unit label.
    pub unit: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[allow(non_snake_case)]
#[serde(deny_unknown_fields)]
struct CouplingTensorJson {
    Jxx: f64,
    Jxy: f64,
    Jxz: f64,
    Jyx: f64,
    Jyy: f64,
    Jyz: f64,
    Jzx: f64,
    Jzy: f64,
    Jzz: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    unit: Option<String>,
}

impl TryFrom<CouplingTensorJson> for CouplingTensor {
    type Error = Error;

    fn try_from(v: CouplingTensorJson) -> Result<Self> {
        CouplingTensor::new([[v.Jxx, v.Jxy, v.Jxz], [v.Jyx, v.Jyy, v.Jyz], [v.Jzx, v.Jzy, v.Jzz]], v.unit)
    }
}

impl From<CouplingTensor> for CouplingTensorJson {
    fn from(ct: CouplingTensor) -> Self {
        let [[xx, xy, xz], [yx, yy, yz], [zx, zy, zz]] = ct.j;
        CouplingTensorJson {
            Jxx: xx,
            Jxy: xy,
            Jxz: xz,
            Jyx: yx,
            Jyy: yy,
            Jyz: yz,
            Jzx: zx,
            Jzy: zy,
            Jzz: zz,
            unit: ct.unit,
        }
    }
}

impl CouplingTensor {
    pub fn new(j: [[f64; 3]; 3], unit: Option<String>) -> Result<Self> {
        if j.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("coupling tensor entries must be finite".into()));
        }
        Ok(Self { j, unit })
    }

    pub fn zero() -> Self {
        Self { j: [[0.0; 3]; 3], unit: None }
    }

    /// `g·(σ·σ)`.
    pub fn heisenberg(g: f64) -> Self {
        Self::diagonal(g, g, g)
    }

    /// `g·σzσz`.
    pub fn ising(g: f64) -> Self {
        Self::diagonal(0.0, 0.0, g)
    }

    pub fn diagonal(xx: f64, yy: f64, zz: f64) -> Self {
        Self { j: [[xx, 0.0, 0.0], [0.0, yy, 0.0], [0.0, 0.0, zz]], unit: None }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { j: self.j.map(|row| row.map(|v| v * factor)), unit: self.unit.clone() }
    }

    /// `Σ_{μν} J_{μν} σ₁^μ ⊗ σ₂^ν`.
    pub fn operator(&self) -> Mat4 {
        let mut h = Mat4::zeros();
        for (mu, row) in self.j.iter().enumerate() {
            for (nu, &value) in row.iter().enumerate() {
                if value != 0.0 {
                    h += kron(&pauli(mu), &pauli(nu)) * C64::from(value);
                }
            }
        }
        h
    }

    /// Sum of squares of the coupling combinations dropped by the rotating-wave
    /// approximation: `(J_xx − J_yy)/2`, `(J_xy + J_yx)/2` and the four
    /// components mixing z with x or y.
    pub fn rwa_discarded_weight(&self) -> f64 {
        let j = &self.j;
        let counter_rotating = [(j[0][0] - j[1][1]) / 2.0, (j[0][1] + j[1][0]) / 2.0];
        let z_mixing = [j[0][2], j[2][0], j[1][2], j[2][1]];
        counter_rotating.iter().chain(z_mixing.iter()).map(|v| v * v).sum()
    }

    pub fn component_name(mu: usize, nu: usize) -> String {
        format!("J{}{}", AXES[mu], AXES[nu])
    }
}

/// Drive and splitting parameters of the two qubits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitParams {
    pub eps: [f64; 2],
    pub omega: [f64; 2],
    pub phi: [f64; 2],
}

impl QubitParams {
    pub fn tuned(eps: f64) -> Result<Self> {
        Self::new([eps, eps], [0.0, 0.0], [0.0, 0.0])
    }

    pub fn new(eps: [f64; 2], omega: [f64; 2], phi: [f64; 2]) -> Result<Self> {
        let finite = eps.iter().chain(&omega).chain(&phi).all(|v| v.is_finite());
        if !finite || eps.iter().any(|&e| e <= 0.0) || omega.iter().any(|&o| o < 0.0) {
            return Err(Error::InvalidInput(format!(
                "qubit parameters need eps > 0 and omega >= 0 (eps = {eps:?}, omega = {omega:?})"
            )));
        }
        Ok(Self { eps, omega, phi })
    }
}

/// Rotating-frame parameters `(J, J_zz, J')`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotFrameParams {
    #[serde(rename = "J")]
    pub j: f64,
    #[serde(rename = "Jzz")]
    pub j_zz: f64,
    #[serde(rename = "Jprime")]
    pub j_prime: f64,
}

impl RotFrameParams {
    pub fn new(j: f64, j_zz: f64, j_prime: f64) -> Result<Self> {
        if !(j.is_finite() && j_zz.is_finite() && j_prime.is_finite()) {
            return Err(Error::InvalidInput("rotating-frame parameters must be finite".into()));
        }
        Ok(Self { j, j_zz, j_prime })
    }

    /// `γ = 2(J + iJ')`.
    pub fn gamma(&self) -> C64 {
        C64::new(2.0 * self.j, 2.0 * self.j_prime)
    }

    /// `arg(J + iJ')` in `(−π, π]`.
    pub fn phi(&self) -> f64 {
        let phi = self.j_prime.atan2(self.j);
        if phi <= -std::f64::consts::PI {
            phi + 2.0 * std::f64::consts::PI
        } else {
            phi
        }
    }

    /// `√(J² + J'²)`, half of `|γ|`.
    pub fn exchange_magnitude(&self) -> f64 {
        self.j.hypot(self.j_prime)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { j: self.j * factor, j_zz: self.j_zz * factor, j_prime: self.j_prime * factor }
    }

    /// Operator form `J(σxσx + σyσy) + J_zz σzσz + J'(σxσy − σyσx)`.
    pub fn operator_form(&self) -> Mat4 {
        let (x, y, z) = (pauli_x(), pauli_y(), pauli_z());
        (kron(&x, &x) + kron(&y, &y)) * C64::from(self.j)
            + kron(&z, &z) * C64::from(self.j_zz)
            + (kron(&x, &y) - kron(&y, &x)) * C64::from(self.j_prime)
    }
}

/// Keeps the RWA-surviving combinations of the tensor.
pub fn reduce_coupling(ct: &CouplingTensor) -> RotFrameParams {
    let j = &ct.j;
    RotFrameParams { j: (j[0][0] + j[1][1]) / 2.0, j_zz: j[2][2], j_prime: (j[0][1] - j[1][0]) / 2.0 }
}

/// Matrix of `𝓗` in the computational basis.
pub fn rot_frame_matrix(p: &RotFrameParams) -> Mat4 {
    let gamma = p.gamma();
    let zz = C64::from(p.j_zz);
    Mat4::new(
        zz,
        ZERO,
        ZERO,
        ZERO, //
        ZERO,
        -zz,
        gamma,
        ZERO, //
        ZERO,
        gamma.conj(),
        -zz,
        ZERO, //
        ZERO,
        ZERO,
        ZERO,
        zz,
    )
}

/// Lab-frame Hamiltonian
/// `H(t) = Σ_i [−(ε_i/2)σ_i^z + Ω_i cos(ε_i t + φ_i) σ_i^x] + Σ J_{μν} σ₁^μ σ₂^ν`.
#[derive(Debug, Clone)]
pub struct LabFrameGenerator {
    static_part: Mat4,
    drive: [Mat4; 2],
    qubits: QubitParams,
    drive_on: bool,
}

impl LabFrameGenerator {
    pub fn drift(&self) -> Mat4 {
        let q = &self.qubits;
        kron(&pauli_z(), &identity2()) * C64::from(-q.eps[0] / 2.0)
            + kron(&identity2(), &pauli_z()) * C64::from(-q.eps[1] / 2.0)
    }
}

impl Generator for LabFrameGenerator {
    fn at(&self, t: f64) -> Mat4 {
        if !self.drive_on {
            return self.static_part;
        }
        let q = &self.qubits;
        let mut h = self.static_part;
        for i in 0..2 {
            if q.omega[i] != 0.0 {
                h += self.drive[i] * C64::from(q.omega[i] * (q.eps[i] * t + q.phi[i]).cos());
            }
        }
        h
    }
}

pub fn lab_frame_generator(ct: &CouplingTensor, qp: &QubitParams, drive_on: bool) -> LabFrameGenerator {
    let mut generator = LabFrameGenerator {
        static_part: ct.operator(),
        drive: [kron(&pauli_x(), &identity2()), kron(&identity2(), &pauli_x())],
        qubits: *qp,
        drive_on,
    };
    generator.static_part += generator.drift();
    generator
}

/// Integrator settings for [`rwa_infidelity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RwaConfig {
    pub step: StepPolicy,
    /// Allowed change when the step is halved.
    pub convergence_tol: f64,
}

impl Default for RwaConfig {
    fn default() -> Self {
        Self { step: StepPolicy::default(), convergence_tol: qmat::DEFAULT_TOL }
    }
}

/// Phase-insensitive distance between the lab-frame evolution, moved into the
/// frame rotating with `H₀ = −(ε/2)(σ₁^z + σ₂^z)`, and the RWA evolution
/// `e^{−i𝓗T}`. Tuned qubits, no drive.
pub fn rwa_infidelity(ct: &CouplingTensor, eps: f64, duration: f64, config: &RwaConfig) -> Result<f64> {
    if !(duration.is_finite() && duration > 0.0) {
        return Err(Error::InvalidInput(format!("evolution time must be > 0, got {duration}")));
    }
    let qubits = QubitParams::tuned(eps)?;
    let lab = lab_frame_generator(ct, &qubits, false);
    let drift = lab.drift();
    let ph = PiecewiseHamiltonian::new().sampled(lab, duration, config.step)?;
    let u_lab = qmat::propagate_checked(&ph, config.convergence_tol)?;
    let u_rot = expm_hermitian(&drift, -duration)? * u_lab;
    let rwa = expm_hermitian(&rot_frame_matrix(&reduce_coupling(ct)), duration)?;
    Ok(distance(&u_rot, &rwa, true))
}
