// Copyright 2026 The qgd Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

use qgd_core::compiler::{compile_cnot, named_gate, Branch, CompileOptions, CompileResult, Prefer};
use qgd_core::entangler::{canonical_entangler, trajectory, EntanglerCoords};
use qgd_core::equivalence::{kak_decompose, locally_equivalent, weyl_canonicalize};
use qgd_core::hamiltonian::{reduce_coupling, CouplingTensor};
use qgd_core::pulses::{simulate_schedule, verify_schedule, Axis, PulseOp, PulseSchedule, Qubit, VerifyMode};
use qgd_core::qmat::distance;
use qgd_core::Error;

#[test]
fn coupling_json_to_verified_cnot() {
    let text = r#"{"Jxx":0.4,"Jxy":0.25,"Jxz":0.9,"Jyx":-0.25,"Jyy":0.4,"Jyz":-0.3,"Jzx":0.1,"Jzy":0.2,"Jzz":-0.7,"unit":"MHz"}"#;
    let ct: CouplingTensor = serde_json::from_str(text).unwrap();
    let p = reduce_coupling(&ct);
    assert!((p.j - 0.4).abs() < 1e-15 && (p.j_zz + 0.7).abs() < 1e-15 && (p.j_prime - 0.25).abs() < 1e-15);

    let r = compile_cnot(&p, &CompileOptions::default()).unwrap();
    assert_eq!(r.branch, Branch::GeneralJprime);
    let json = serde_json::to_string_pretty(&r).unwrap();
    let back: CompileResult = serde_json::from_str(&json).unwrap();
    let report = verify_schedule(
        &back.schedule,
        &back.params,
        &named_gate(&back.target_gate().unwrap()),
        &back.target,
        VerifyMode::Exact,
        1e-9,
    )
    .unwrap();
    assert!(report.passed, "{report:?}");
}

#[test]
fn every_branch_lands_in_its_target_class() {
    let cases = [
        (0.0, 1.3, 0.0, Prefer::Auto),
        (0.7, 0.0, 0.0, Prefer::Auto),
        (0.7, 0.0, 0.0, Prefer::Cnot),
        (-0.7, 2.0, 0.0, Prefer::Auto),
        (0.2, -0.4, -0.6, Prefer::Auto),
    ];
    for (j, jzz, jp, prefer) in cases {
        let p = qgd_core::RotFrameParams::new(j, jzz, jp).unwrap();
        let r = compile_cnot(&p, &CompileOptions { prefer, ..Default::default() }).unwrap();
        let u = simulate_schedule(&r.schedule, &p).unwrap();
        let target = named_gate(&r.target_gate().unwrap());
        assert!(locally_equivalent(&u, &target, 1e-9).unwrap(), "{:?}", r.branch);
        assert_eq!(r.target == "CNOT", r.branch != Branch::XySingleShotSwapCnot);
        let coords = weyl_canonicalize(&kak_decompose(&u).unwrap().coords);
        let expected = match r.branch {
            Branch::XySingleShotSwapCnot => EntanglerCoords::new(FRAC_PI_4, FRAC_PI_4, 0.0),
            _ => EntanglerCoords::new(FRAC_PI_4, 0.0, 0.0),
        };
        assert!(coords.max_abs_diff(&expected) < 1e-9, "{coords:?}");
    }
}

#[test]
fn two_shot_trajectory_matches_simulation() {
    let g = 0.9;
    for jzz in [-1.1, 0.0, 0.35] {
        let p = qgd_core::RotFrameParams::new(g, jzz, 0.0).unwrap();
        let s = PulseSchedule::new(vec![
            PulseOp::entangle(FRAC_PI_8 / g),
            PulseOp::rotate(Axis::X, std::f64::consts::PI, Qubit::One),
            PulseOp::entangle(FRAC_PI_8 / g),
            PulseOp::rotate(Axis::X, -std::f64::consts::PI, Qubit::One),
        ]);
        let path = trajectory(&p, &s, 64).unwrap();
        let end = path.endpoint();
        assert!(end.max_abs_diff(&EntanglerCoords::new(FRAC_PI_4, 0.0, 0.0)) < 1e-12);
        let u = simulate_schedule(&s, &p).unwrap();
        assert!(distance(&u, &canonical_entangler(&end), false) < 1e-12);
    }
}

#[test]
fn impossible_requests_fail_cleanly() {
    let p = qgd_core::RotFrameParams::new(0.0, 0.0, 0.0).unwrap();
    assert!(matches!(compile_cnot(&p, &CompileOptions::default()), Err(Error::ZeroCoupling)));
    let p = qgd_core::RotFrameParams::new(1.0, 0.0, 0.5).unwrap();
    let s = PulseSchedule::new(vec![PulseOp::entangle(1.0)]);
    assert!(matches!(trajectory(&p, &s, 10), Err(Error::NonzeroJPrime(_))));
}
