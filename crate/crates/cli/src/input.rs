// Copyright 2026 The qgd Authors
// SPDX-License-Identifier: Apache-2.0

//! Reading gates, couplings and schedules from files or flags.

use std::fs;
use std::io::Read;
use std::path::Path;

use qgd_core::compiler::{named_gate, NamedGate};
use qgd_core::wire::mat4_from_json;
use qgd_core::{reduce_coupling, CouplingTensor, Error, Mat4, PulseSchedule, RotFrameParams};
use serde_json::Value;

/// Reads a JSON document from `path`, or from stdin when `path` is `-`.
pub fn read_json(path: &Path) -> Result<Value, Error> {
    let text = if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf).map_err(|e| Error::InvalidInput(format!("reading stdin: {e}")))?;
        buf
    } else {
        fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("reading {}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: invalid JSON: {e}", path.display())))
}

/// A gate given as a name, `{"gate": name}`, or a 4×4 matrix of `[re, im]`
/// pairs.
pub fn gate_from_json(value: &Value) -> Result<(String, Mat4), Error> {
    match value {
        Value::String(name) => named(name),
        Value::Object(map) => match map.get("gate") {
            Some(Value::String(name)) => named(name),
            _ => match map.get("matrix") {
                Some(m) => Ok(("matrix".into(), mat4_from_json(m)?)),
                None => Err(Error::InvalidInput("expected a gate name, {\"gate\": ...} or a 4x4 matrix".into())),
            },
        },
        _ => Ok(("matrix".into(), mat4_from_json(value)?)),
    }
}

pub fn named(name: &str) -> Result<(String, Mat4), Error> {
    let gate: NamedGate = name.parse()?;
    Ok((gate.to_string(), named_gate(&gate)))
}

pub fn gate_input(gate: Option<&str>, input: Option<&Path>) -> Result<(String, Mat4), Error> {
    match (gate, input) {
        (Some(name), None) => named(name),
        (None, Some(path)) => gate_from_json(&read_json(path)?),
        _ => Err(Error::InvalidInput("give exactly one of --gate or --input".into())),
    }
}

/// Rotating-frame parameters, or a full coupling tensor reduced to them.
/// A `CompileResult` document is accepted through its `params` field.
pub fn params_from_json(value: &Value) -> Result<RotFrameParams, Error> {
    let invalid = |e: serde_json::Error| Error::InvalidInput(format!("coupling: {e}"));
    let Value::Object(map) = value else {
        return Err(Error::InvalidInput("coupling must be a JSON object".into()));
    };
    if map.contains_key("Jxx") {
        let tensor: CouplingTensor = serde_json::from_value(value.clone()).map_err(invalid)?;
        return Ok(reduce_coupling(&tensor));
    }
    if let Some(params) = map.get("params") {
        return params_from_json(params);
    }
    let p: RotFrameParams = serde_json::from_value(value.clone()).map_err(invalid)?;
    RotFrameParams::new(p.j, p.j_zz, p.j_prime)
}

pub fn tensor_from_json(value: &Value) -> Result<CouplingTensor, Error> {
    serde_json::from_value(value.clone()).map_err(|e| Error::InvalidInput(format!("coupling tensor: {e}")))
}

/// A bare schedule array, or any object carrying a `schedule` field.
pub fn schedule_from_json(value: &Value) -> Result<PulseSchedule, Error> {
    let raw = match value {
        Value::Object(map) => {
            map.get("schedule").ok_or_else(|| Error::InvalidInput("object has no \"schedule\" field".into()))?
        }
        other => other,
    };
    let schedule: PulseSchedule =
        serde_json::from_value(raw.clone()).map_err(|e| Error::InvalidInput(format!("schedule: {e}")))?;
    schedule.validate()?;
    Ok(schedule)
}
