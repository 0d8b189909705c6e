// Copyright 2026 The qgd Authors
// SPDX-License-Identifier: Apache-2.0

//! The canonical entangler `A(x, y, z) = exp(−i(x σxσx + y σyσy + z σzσz))`
//! and closed-form entangler-space trajectories for `J' = 0`.
//!
//! The three generators commute, so `A` is periodic with period 2π in each
//! coordinate and the coordinates live on a 3-torus. With `J' = 0` the
//! rotating-frame Hamiltonian commutes with itself at all times, and an
//! interval of evolution lands on `A(∫J, ∫J, ∫J_zz)`.

use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::RotFrameParams;
use crate::pulses::{Axis, PulseOp, PulseSchedule};
use crate::qmat::{Mat4, C64, ZERO};
use crate::wire::fmt_significant;

/// Maps an angle into `(−π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Entangler coordinates `r = (x, y, z)`, serialized as `[x, y, z]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct EntanglerCoords {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<[f64; 3]> for EntanglerCoords {
    fn from([x, y, z]: [f64; 3]) -> Self {
        Self { x, y, z }
    }
}

impl From<EntanglerCoords> for [f64; 3] {
    fn from(c: EntanglerCoords) -> Self {
        [c.x, c.y, c.z]
    }
}

impl EntanglerCoords {
    pub const ORIGIN: EntanglerCoords = EntanglerCoords { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn to_array(self) -> [f64; 3] {
        self.into()
    }

    /// Representative in the principal cell `(−π, π]³`.
    pub fn normalized(self) -> Self {
        Self::new(wrap_angle(self.x), wrap_angle(self.y), wrap_angle(self.z))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.x - other.x).abs().max((self.y - other.y).abs()).max((self.z - other.z).abs())
    }
}

impl std::ops::Add for EntanglerCoords {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

/// `A(x, y, z)` in closed form.
///
/// The `{|00⟩, |11⟩}` block sees `z + (x − y)σx` and the `{|01⟩, |10⟩}` block
/// sees `−z + (x + y)σx`.
pub fn canonical_entangler(c: &EntanglerCoords) -> Mat4 {
    let outer = C64::from_polar(1.0, -c.z);
    let inner = C64::from_polar(1.0, c.z);
    let (sd, cd) = (c.x - c.y).sin_cos();
    let (ss, cs) = (c.x + c.y).sin_cos();
    let minus_i = C64::new(0.0, -1.0);
    let (o_diag, o_off) = (outer * cd, outer * minus_i * sd);
    let (i_diag, i_off) = (inner * cs, inner * minus_i * ss);
    Mat4::new(
        o_diag, ZERO, ZERO, o_off, //
        ZERO, i_diag, i_off, ZERO, //
        ZERO, i_off, i_diag, ZERO, //
        o_off, ZERO, ZERO, o_diag,
    )
}

fn trapezoid(profile: &[(f64, f64)]) -> Result<f64> {
    let mut total = 0.0;
    for pair in profile.windows(2) {
        let ((t0, v0), (t1, v1)) = (pair[0], pair[1]);
        if t1 <= t0 || t1.is_nan() || t0.is_nan() || !v0.is_finite() || !v1.is_finite() {
            return Err(Error::InvalidInput("profile samples must have finite values and increasing times".into()));
        }
        total += 0.5 * (v0 + v1) * (t1 - t0);
    }
    Ok(total)
}

/// Coordinates `(∫J, ∫J, ∫J_zz)` reached by `J' = 0` evolution with the given
/// sampled coupling profiles (`(t, value)` pairs, trapezoidal rule),
/// normalized to the principal cell.
pub fn coords_from_area(j_profile: &[(f64, f64)], jzz_profile: &[(f64, f64)]) -> Result<EntanglerCoords> {
    let j_area = trapezoid(j_profile)?;
    let jzz_area = trapezoid(jzz_profile)?;
    Ok(EntanglerCoords::new(j_area, j_area, jzz_area).normalized())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub t: f64,
    /// Unwrapped coordinates; continuous along the path.
    pub raw: EntanglerCoords,
    /// Principal-cell coordinates.
    pub wrapped: EntanglerCoords,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
}

impl Trajectory {
    pub fn endpoint(&self) -> EntanglerCoords {
        self.samples.last().map_or(EntanglerCoords::ORIGIN, |s| s.raw)
    }

    pub const CSV_HEADER: &'static str = "t,x,y,z,x_wrapped,y_wrapped,z_wrapped";

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        for s in &self.samples {
            let fields = [s.t, s.raw.x, s.raw.y, s.raw.z, s.wrapped.x, s.wrapped.y, s.wrapped.z];
            let row: Vec<String> = fields.iter().map(|&v| fmt_significant(v, 12)).collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

struct Interval {
    start: f64,
    end: f64,
    rates: [f64; 3],
}

fn is_pi_rotation(angle: f64) -> bool {
    let turns = angle / PI;
    let nearest = turns.round();
    (turns - nearest).abs() < 1e-12 && (nearest as i64).rem_euclid(2) == 1
}

/// Entangler-space path of a schedule built from entangling intervals and
/// refocusing π rotations.
///
/// Intervals advance `(x, y, z)` at rates `(J, J, J_zz)` times the current
/// sign state. A π rotation about axis `a` (on either qubit) negates the
/// sign of the two other axes for all later intervals; `R_x(π)` thus turns
/// the rates into `(J, −J, −J_zz)`.
///
/// The path is sampled at `samples` evenly spaced times plus every interval
/// boundary, so kinks are always resolved.
pub fn trajectory(p: &RotFrameParams, schedule: &PulseSchedule, samples: usize) -> Result<Trajectory> {
    let scale = p.j.abs().max(p.j_zz.abs());
    if p.j_prime.abs() > 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NonzeroJPrime(p.j_prime));
    }

    let mut signs = [1.0f64; 3];
    let mut intervals = Vec::new();
    let mut clock = 0.0;
    for op in schedule.ops() {
        match *op {
            PulseOp::Entangle { duration } => {
                if duration > 0.0 {
                    let rates = [p.j * signs[0], p.j * signs[1], p.j_zz * signs[2]];
                    intervals.push(Interval { start: clock, end: clock + duration, rates });
                    clock += duration;
                }
            }
            PulseOp::Rotate { axis, angle, .. } => {
                if !is_pi_rotation(angle) {
                    return Err(Error::UnsupportedOp(format!(
                        "trajectory accepts only π rotations, got R{axis}({angle})"
                    )));
                }
                let keep = match axis {
                    Axis::X => 0,
                    Axis::Y => 1,
                    Axis::Z => 2,
                };
                for (k, s) in signs.iter_mut().enumerate() {
                    if k != keep {
                        *s = -*s;
                    }
                }
            }
            PulseOp::Phase { .. } => {}
        }
    }

    let origin = TrajectorySample { t: 0.0, raw: EntanglerCoords::ORIGIN, wrapped: EntanglerCoords::ORIGIN };
    let total = clock;
    if total == 0.0 {
        return Ok(Trajectory { samples: vec![origin] });
    }

    let n = samples.max(2);
    let mut times: Vec<f64> = (0..n).map(|k| total * k as f64 / (n - 1) as f64).collect();
    times.extend(intervals.iter().map(|iv| iv.end));
    times.sort_by(f64::total_cmp);
    times.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * total);

    let at = |t: f64| {
        let mut r = [0.0f64; 3];
        for iv in &intervals {
            let dt = (t.min(iv.end) - iv.start).max(0.0);
            for (acc, rate) in r.iter_mut().zip(iv.rates) {
                *acc += rate * dt;
            }
        }
        EntanglerCoords::from(r)
    };
    let samples = times
        .into_iter()
        .map(|t| {
            let raw = at(t);
            TrajectorySample { t, raw, wrapped: raw.normalized() }
        })
        .collect();
    Ok(Trajectory { samples })
}
