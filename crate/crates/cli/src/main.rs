// Copyright 2026 The qgd Authors
// SPDX-License-Identifier: Apache-2.0

//! `qgd`: gate design for weakly coupled qubit pairs.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | usage, parse or I/O failure |
//! | 2 | input matrix is not unitary |
//! | 3 | all couplings vanish |
//! | 4 | trajectory requested with J' ≠ 0 |
//! | 5 | schedule op not supported by the trajectory model |
//! | 6 | integrator step too coarse |
//! | 7 | generator not Hermitian |
//! | 8 | unknown gate or unsupported target |
//! | 9 | verification failed |
//! | 10 | rotation convention self-test failed |

mod input;

use std::f64::consts::FRAC_PI_8;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qgd_core::compiler::{compile_cnot, CompileOptions, Prefer};
use qgd_core::equivalence::{kak_decompose_with, weyl_canonicalize, KakOptions};
use qgd_core::hamiltonian::{rwa_infidelity, CouplingTensor, RwaConfig};
use qgd_core::pulses::{convention_self_test, verify_schedule, VerifyMode, VERIFY_TOL};
use qgd_core::qmat::{distance, StepPolicy, DEFAULT_NORM_STEP};
use qgd_core::wire::{fmt_significant, mat4_to_json};
use qgd_core::{makhlin_invariants, simulate_schedule, trajectory, Error, Qubit};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(name = "qgd", version, about = "Two-qubit gate design for weakly coupled qubits")]
struct Cli {
    /// Verification / equivalence tolerance.
    #[arg(long, global = true, env = "QGD_TOL", value_parser = positive)]
    tol: Option<f64>,
    /// Integrator step bound ‖H‖·h for time-dependent propagation.
    #[arg(long, global = true, value_parser = positive)]
    step: Option<f64>,
    /// Seed for randomized internals.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PreferArg {
    Auto,
    Cnot,
    #[value(name = "swap_cnot", alias = "swap-cnot")]
    SwapCnot,
}

impl From<PreferArg> for Prefer {
    fn from(p: PreferArg) -> Prefer {
        match p {
            PreferArg::Auto => Prefer::Auto,
            PreferArg::Cnot => Prefer::Cnot,
            PreferArg::SwapCnot => Prefer::SwapCnot,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Phase,
    Class,
}

impl From<ModeArg> for VerifyMode {
    fn from(m: ModeArg) -> VerifyMode {
        match m {
            ModeArg::Exact => VerifyMode::Exact,
            ModeArg::Phase => VerifyMode::ExactUpToPhase,
            ModeArg::Class => VerifyMode::LocalClass,
        }
    }
}

#[derive(Debug, Args)]
struct GateArgs {
    /// Named gate: I, CNOT, CZ, SWAP, SWAP_CNOT, CNOT_SWAP, CTHETA(θ).
    #[arg(long, conflicts_with = "input")]
    gate: Option<String>,
    /// JSON file with a 4×4 matrix of [re, im] pairs or a gate name (`-` for stdin).
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Makhlin invariants of a gate.
    Invariants(GateArgs),
    /// KAK decomposition of a gate.
    Kak(GateArgs),
    /// Compile a CNOT schedule for the given couplings.
    Compile {
        /// Coupling JSON: {"J","Jzz","Jprime"} or a full tensor {"Jxx",...,"Jzz"}.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        prefer: PreferArg,
        /// Qubit receiving the refocusing π pulse.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        refocus_qubit: u8,
        /// Use the J' construction even when J' = 0.
        #[arg(long)]
        force_general: bool,
    },
    /// Simulate a schedule and verify it against a target gate.
    Simulate {
        /// Compile output, or any JSON with "params" (or couplings) and "schedule".
        #[arg(long)]
        input: PathBuf,
        /// Schedule file overriding the one in --input.
        #[arg(long)]
        schedule: Option<PathBuf>,
        /// Target gate; defaults to the "target" field of --input.
        #[arg(long)]
        gate: Option<String>,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
    },
    /// Entangler-space trajectory of a schedule (J' = 0 only).
    Trajectory {
        /// Coupling JSON.
        #[arg(long)]
        input: PathBuf,
        /// Schedule JSON (a bare array or an object with "schedule").
        #[arg(long)]
        schedule: PathBuf,
        #[arg(long, default_value_t = 101)]
        samples: usize,
    },
    /// Rotating-wave error for a sweep of coupling-to-splitting ratios.
    RwaScan {
        /// Coupling tensor JSON, rescaled so its largest entry is g; default σxσx.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Values of g/ε (ε = 1).
        #[arg(long, value_delimiter = ',', default_values_t = [1e-1, 1e-2, 1e-3])]
        ratios: Vec<f64>,
        /// Fixed product g·T.
        #[arg(long, default_value_t = FRAC_PI_8, value_parser = positive)]
        gt: f64,
    },
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        Ok(v) => Err(format!("must be a finite positive number, got {v}")),
        Err(e) => Err(e.to_string()),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_) => 1,
        Error::NotUnitary(_) => 2,
        Error::ZeroCoupling => 3,
        Error::NonzeroJPrime(_) => 4,
        Error::UnsupportedOp(_) => 5,
        Error::StepTooCoarse(_) => 6,
        Error::NonHermitianInput(_) => 7,
        Error::UnknownGate(_) | Error::UnsupportedTarget(_) => 8,
        Error::VerificationFailed { .. } => 9,
    }
}

/// Rounds to 12 decimals so exact golden values print exactly.
fn round12(v: f64) -> f64 {
    let r = (v * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn emit_json(value: &impl Serialize) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::InvalidInput(e.to_string()))?;
    writeln!(io::stdout().lock(), "{text}").map_err(|e| Error::InvalidInput(format!("writing output: {e}")))
}

fn emit_text(text: &str) -> Result<(), Error> {
    io::stdout().lock().write_all(text.as_bytes()).map_err(|e| Error::InvalidInput(format!("writing output: {e}")))
}

fn csv_unsupported(command: &str) -> Error {
    Error::InvalidInput(format!("{command} has no CSV output"))
}

fn run(cli: Cli) -> Result<(), Error> {
    let tol = cli.tol.unwrap_or(VERIFY_TOL);
    match cli.command {
        Command::Invariants(g) => {
            let (_, u) = input::gate_input(g.gate.as_deref(), g.input.as_deref())?;
            let inv = makhlin_invariants(&u)?;
            let (re, im, g2) = (round12(inv.g1.re), round12(inv.g1.im), round12(inv.g2));
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => emit_json(&json!({ "G1": [re, im], "G2": g2 })),
                Format::Csv => emit_text(&format!("G1_re,G1_im,G2\n{re},{im},{g2}\n")),
            }
        }
        Command::Kak(g) => {
            if cli.format == Some(Format::Csv) {
                return Err(csv_unsupported("kak"));
            }
            let (name, u) = input::gate_input(g.gate.as_deref(), g.input.as_deref())?;
            let k = kak_decompose_with(&u, &KakOptions { seed: cli.seed })?;
            let mut out = serde_json::to_value(&k).map_err(|e| Error::InvalidInput(e.to_string()))?;
            let weyl = weyl_canonicalize(&k.coords);
            out["gate"] = json!(name);
            out["weyl_coords"] = json!(weyl.to_array());
            out["reconstruction_error"] = json!(distance(&k.reconstruct(), &u, false));
            emit_json(&out)
        }
        Command::Compile { input, prefer, refocus_qubit, force_general } => {
            if cli.format == Some(Format::Csv) {
                return Err(csv_unsupported("compile"));
            }
            let p = input::params_from_json(&input::read_json(&input)?)?;
            let opts = CompileOptions {
                prefer: prefer.into(),
                refocus_qubit: if refocus_qubit == 2 { Qubit::Two } else { Qubit::One },
                force_general,
                tol,
            };
            emit_json(&compile_cnot(&p, &opts)?)
        }
        Command::Simulate { input, schedule, gate, mode } => {
            if cli.format == Some(Format::Csv) {
                return Err(csv_unsupported("simulate"));
            }
            let doc = input::read_json(&input)?;
            let p = input::params_from_json(&doc)?;
            let s = match schedule {
                Some(path) => input::schedule_from_json(&input::read_json(&path)?)?,
                None => input::schedule_from_json(&doc)?,
            };
            let target_name = match (&gate, doc.get("target")) {
                (Some(g), _) => Some(g.clone()),
                (None, Some(Value::String(t))) => Some(t.clone()),
                _ => None,
            };
            let u = simulate_schedule(&s, &p)?;
            let mut out = json!({ "params": p, "unitary": mat4_to_json(&u) });
            let mut failed = None;
            if let Some(name) = target_name {
                let (name, target) = input::named(&name)?;
                let report = verify_schedule(&s, &p, &target, &name, mode.into(), tol)?;
                if !report.passed {
                    failed = Some(Error::VerificationFailed { target: name, distance: report.distance });
                }
                out["verification"] = serde_json::to_value(&report).map_err(|e| Error::InvalidInput(e.to_string()))?;
            }
            emit_json(&out)?;
            failed.map_or(Ok(()), Err)
        }
        Command::Trajectory { input, schedule, samples } => {
            let p = input::params_from_json(&input::read_json(&input)?)?;
            let s = input::schedule_from_json(&input::read_json(&schedule)?)?;
            let path = trajectory(&p, &s, samples)?;
            match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut buf = Vec::new();
                    path.write_csv(&mut buf).map_err(|e| Error::InvalidInput(e.to_string()))?;
                    emit_text(&String::from_utf8_lossy(&buf))
                }
                Format::Json => emit_json(&path),
            }
        }
        Command::RwaScan { input, ratios, gt } => {
            let base = match input {
                Some(path) => input::tensor_from_json(&input::read_json(&path)?)?,
                None => CouplingTensor::diagonal(1.0, 0.0, 0.0),
            };
            let largest = base.j.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
            if largest == 0.0 {
                return Err(Error::ZeroCoupling);
            }
            if let Some(bad) = ratios.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
                return Err(Error::InvalidInput(format!("ratios must be positive, got {bad}")));
            }
            let config = RwaConfig {
                step: StepPolicy::NormBound(cli.step.unwrap_or(DEFAULT_NORM_STEP)),
                ..RwaConfig::default()
            };
            let rows: Vec<(f64, f64, f64)> = ratios
                .par_iter()
                .map(|&g| {
                    let duration = gt / g;
                    rwa_infidelity(&base.scaled(g / largest), 1.0, duration, &config).map(|v| (g, duration, v))
                })
                .collect::<Result<_, _>>()?;
            match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut text = String::from("g_over_eps,duration,infidelity\n");
                    for (g, t, v) in rows {
                        text.push_str(&format!(
                            "{},{},{}\n",
                            fmt_significant(g, 12),
                            fmt_significant(t, 12),
                            fmt_significant(v, 12)
                        ));
                    }
                    emit_text(&text)
                }
                Format::Json => emit_json(
                    &rows
                        .iter()
                        .map(|(g, t, v)| json!({ "g_over_eps": g, "duration": t, "infidelity": v }))
                        .collect::<Vec<_>>(),
                ),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Err(e) = convention_self_test() {
        eprintln!("error: {e}");
        return ExitCode::from(10);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
