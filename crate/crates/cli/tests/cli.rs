use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use ssb_cli::gridio::{read_grid_file, GridPayload};
use ssb_cli::{emit_report, parse_model_file, parse_report};
use ssb_core::electroweak::{build_model, ElectroweakParams};
use ssb_core::higgs::potential_value;
use ssb_core::lie::random_multiplet;

fn model_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models/electroweak.model")
}

fn ssb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ssb"))
        .args(args)
        .env_remove("SSB_SPECTRUM_SEED")
        .output()
        .expect("ssb binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn shipped_model_matches_the_builtin_electroweak_model() {
    let file = parse_model_file(&fs::read_to_string(model_path()).unwrap()).unwrap();
    let reference = build_model(&ElectroweakParams::default()).unwrap();
    assert_eq!(file.model.gens.generators(), reference.gens.generators());
    assert_eq!(file.model.gens.factors(), reference.gens.factors());
    assert_eq!(file.model.vacuum(), reference.vacuum());
    for seed in 0..10 {
        let v = random_multiplet(2, seed);
        assert_eq!(
            potential_value(file.model.potential.as_ref(), &v),
            potential_value(reference.potential.as_ref(), &v)
        );
    }
    let p = ElectroweakParams::default();
    assert_eq!(
        file.representation("left").unwrap().generators(),
        ssb_core::electroweak::left_lepton_doublet(&p).generators()
    );
    assert_eq!(
        file.yukawa.unwrap().tensor.data(),
        ssb_core::chiral::electroweak_yukawa_tensor().data()
    );
}

#[test]
fn electroweak_preset_reports_closed_form_values() {
    let out = ssb(&["electroweak", "--g", "2", "--gp", "1", "--mu", "2", "--lambda", "1", "--format", "machine"]);
    assert!(out.status.success());
    let report = parse_report(&stdout(&out)).unwrap();
    let ew = report.electroweak.as_ref().unwrap();
    assert_eq!(ew.weinberg_angle, 0.5f64.atan());
    let spec = report.spectrum.as_ref().unwrap();
    let want = [2.5f64.sqrt(), 2f64.sqrt(), 2f64.sqrt(), 0.0];
    for (m, w) in spec.boson_masses.iter().zip(want) {
        assert!((m - w).abs() < 1e-9);
    }
    assert!((spec.higgs_masses[0] - 2f64.sqrt()).abs() < 1e-9);
    assert_eq!(ew.charges["higgs"], vec![1.0, 0.0]);
    assert_eq!(emit_report(&report), stdout(&out));
}

#[test]
fn zero_vacuum_gives_unbroken_report() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(model_path())
        .unwrap()
        .replace("vector = [[0.0, 0.0], [1.0, 0.0]]", "vector = [[0.0, 0.0], [0.0, 0.0]]");
    let path = dir.path().join("zero.model");
    fs::write(&path, text).unwrap();
    let out = ssb(&["spectrum", "--model", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("unbroken: H = G, d = 0"));
}

#[test]
fn model_errors_exit_nonzero_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.model");
    fs::write(&empty, "").unwrap();
    let out = ssb(&["spectrum", "--model", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing [algebra]"));

    let bad = dir.path().join("bad.model");
    let text = fs::read_to_string(model_path()).unwrap().replacen("[[0.0, 1.0], [0.0, 0.0]]],", "[[0.0, 1.0]]],", 1);
    fs::write(&bad, text).unwrap();
    let out = ssb(&["validate", "--model", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("[algebra] generators[0] row 1") && err.contains("line 8"), "{err}");
}

#[test]
fn failed_tolerance_sets_exit_status() {
    let model = model_path();
    let out = ssb(&["gauge-check", "--model", model.to_str().unwrap(), "--refine", "1", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("result: FAIL"));
}

#[test]
fn gauge_check_orders_are_second_order() {
    let model = model_path();
    let out = ssb(&["gauge-check", "--model", model.to_str().unwrap(), "--grid", "16", "--refine", "2", "--format", "machine"]);
    assert!(out.status.success(), "{}", stdout(&out));
    let report = parse_report(&stdout(&out)).unwrap();
    let orders = report.checks.iter().filter(|c| c.name.contains("order")).count();
    assert_eq!(orders, 4);
}

#[test]
fn seed_falls_back_to_environment() {
    let model = model_path();
    let out = Command::new(env!("CARGO_BIN_EXE_ssb"))
        .args(["spectrum", "--model", model.to_str().unwrap(), "--format", "machine"])
        .env("SSB_SPECTRUM_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(parse_report(&stdout(&out)).unwrap().seed, Some(9));
    let out = ssb(&["spectrum", "--model", model.to_str().unwrap(), "--seed", "4", "--format", "machine"]);
    assert_eq!(parse_report(&stdout(&out)).unwrap().seed, Some(4));
}

#[test]
fn unitary_gauge_writes_grid_files_that_read_back() {
    let dir = tempfile::tempdir().unwrap();
    let model = model_path();
    let (out_a, sigma) = (dir.path().join("phi.grid"), dir.path().join("sigma.grid"));
    let out = ssb(&[
        "unitary-gauge",
        "--model",
        model.to_str().unwrap(),
        "--grid",
        "8",
        "--output",
        out_a.to_str().unwrap(),
        "--sigma-output",
        sigma.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    let gf = read_grid_file(fs::File::open(&out_a).unwrap()).unwrap();
    assert_eq!(gf.grid.shape(), &[8, 8]);
    let GridPayload::Multiplet(phi) = gf.payload else { panic!("expected a multiplet field") };
    for v in phi.values() {
        assert!(v[0].norm() < 1e-10 && v[1].im.abs() < 1e-10 && v[1].re > 0.0);
    }
    assert!(matches!(read_grid_file(fs::File::open(&sigma).unwrap()).unwrap().payload, GridPayload::Transform(_)));

    // A field already in unitary gauge is left in place.
    let again = dir.path().join("again.grid");
    let out = ssb(&[
        "unitary-gauge",
        "--model",
        model.to_str().unwrap(),
        "--input",
        out_a.to_str().unwrap(),
        "--output",
        again.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let GridPayload::Multiplet(back) = read_grid_file(fs::File::open(&again).unwrap()).unwrap().payload else {
        panic!("expected a multiplet field")
    };
    assert!(back.max_distance(&phi) < 1e-10);
}

#[test]
fn yukawa_subcommand_reports_electron_mass() {
    let model = model_path();
    let out = ssb(&["yukawa", "--model", model.to_str().unwrap(), "--format", "machine"]);
    assert!(out.status.success());
    let report = parse_report(&stdout(&out)).unwrap();
    let rows = &report.tables[0].rows;
    assert_eq!(rows[0].values[0], 0.0);
    assert!((rows[1].values[0] - 1.0).abs() < 1e-12);
    assert!(report.summary[0].ends_with(": 0"));
}
