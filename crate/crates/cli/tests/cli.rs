//! End-to-end checks of the command-line surface: flag handling, exit
//! codes, output schemas, and the documented reference values.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dsmzi"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn dsmzi")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout must be valid JSON")
}

fn tmp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("dsmzi-cli-{}-{name}", std::process::id()))
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["report", "--alpha", "1"]).status.code(), Some(2));
    assert_eq!(
        run(&["sweep", "--preset", "fig9"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["sweep"]).status.code(), Some(2));
    assert_eq!(
        run(&["sweep", "--var", "phi", "--lo", "0.1", "--hi", "1.0"]).status.code(),
        Some(2)
    );
    // eta outside (0, 1] is a parameter error
    assert_eq!(
        run(&["report", "--alpha", "1", "--r1", "0.5", "--phi", "1.0", "--eta", "0"]).status.code(),
        Some(2)
    );
    // sweeping and optimizing the same variable is contradictory
    assert_eq!(
        run(&[
            "sweep", "--var", "phi", "--lo", "0.1", "--hi", "1.0", "--points", "5",
            "--optimize", "phi"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "wigner", "--alpha", "1", "--r1", "0.5", "--phi", "1.0", "--resolution", "1"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn report_shot_noise_reference() {
    let out = run(&["report", "--alpha", "1", "--r1", "0", "--phi", "1.5708"]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    let dphi = doc["delta_phi_detection"].as_f64().unwrap();
    assert!((dphi - 1.0).abs() < 1e-9, "shot-noise point gave {dphi}");
    assert_eq!(doc["diverged"], serde_json::json!(false));
    for key in [
        "delta_phi_detection",
        "delta_phi_bound",
        "scaled",
        "saturability",
        "n_bar",
        "diverged",
        "config",
    ] {
        assert!(doc.get(key).is_some(), "missing field {key}");
    }
}

#[test]
fn report_balanced_reference_value() {
    let out = run(&["report", "--alpha", "1", "--r1", "0.5", "--phi", "1.5708"]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    let dphi = doc["delta_phi_detection"].as_f64().unwrap();
    assert!((dphi - 0.825_422_122_118_603).abs() < 1e-9);
}

#[test]
fn report_divergence_and_strict_mode() {
    // exactly at the equal-intensity point the slope vanishes
    let args = [
        "report",
        "--alpha",
        "3.1622776601683795",
        "--r1",
        "1.8685511210994623",
        "--r2",
        "0",
        "--phi",
        "1.5707963267948966",
    ];
    let out = run(&args);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["diverged"], serde_json::json!(true));
    assert!(doc["delta_phi_detection"].is_null());
    assert!(doc["saturability"].as_f64().unwrap() == 0.0);

    let mut strict_args = args.to_vec();
    strict_args.push("--strict");
    assert_eq!(run(&strict_args).status.code(), Some(1));

    // a hair away from the exact point: enormous but finite
    let out = run(&[
        "report", "--alpha", "3.1623", "--r1", "1.87", "--r2", "0", "--phi", "1.5708",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["diverged"], serde_json::json!(false));
    let ratio = doc["delta_phi_detection"].as_f64().unwrap()
        / doc["delta_phi_bound"].as_f64().unwrap();
    assert!(ratio > 100.0, "near-divergent ratio only {ratio}");
}

#[test]
fn sweep_point_count_contract() {
    let out = run(&[
        "sweep", "--var", "phi", "--lo", "0.1", "--hi", "3.0", "--points", "2", "--alpha", "1",
        "--r1", "0.3",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3, "header plus exactly two data rows");
    assert!(lines[0].starts_with("phi,delta_phi,"));
    assert!(text.ends_with('\n'));
    assert!(!text.contains('\r'));
}

#[test]
fn sweep_preset_columns() {
    let out = run(&["sweep", "--preset", "fig2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("r,scaled_caves,scaled_ds,scaled_bound,phi_opt_ds\n"));
    assert_eq!(text.lines().count(), 122);

    let out = run(&["sweep", "--preset", "fig4b"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("r1,r2_opt_eta1.0,r2_opt_eta0.9,r2_opt_eta0.8\n"));
}

#[test]
fn sweep_encodes_divergence_as_inf_rows() {
    // conventional scheme swept from exactly the equal-intensity point:
    // the first grid sample sits on the signal zero
    let out = run(&[
        "sweep", "--var", "r", "--lo", "1.8685511210994623", "--hi", "1.89", "--points", "12",
        "--alpha", "3.1622776601683795", "--r2", "0", "--phi", "1.5707963267948966",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains(",inf,"), "missing inf sentinel:\n{text}");
    assert_eq!(text.lines().count(), 13, "divergences must not drop rows");
}

#[test]
fn sweep_json_mode() {
    let out = run(&[
        "sweep", "--var", "phi", "--lo", "0.5", "--hi", "2.5", "--points", "3", "--alpha", "1",
        "--r1", "0.5", "--json",
    ]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["columns"][0], "phi");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn optimize_shot_noise_reference() {
    let out = run(&["optimize", "--alpha", "1", "--r1", "0"]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    let phi = doc["phi_opt"].as_f64().unwrap();
    assert!((phi - std::f64::consts::FRAC_PI_2).abs() < 1e-4);
    let dphi = doc["report"]["delta_phi_detection"].as_f64().unwrap();
    assert!((dphi - 1.0).abs() < 1e-9);
    assert!(doc.get("r2_opt").is_none());
}

#[test]
fn optimize_joint_offset_reference() {
    let out = run(&[
        "optimize", "--alpha", "3.1622776601683795", "--r1", "1.87", "--joint",
    ]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    let r2 = doc["r2_opt"].as_f64().unwrap();
    assert!((r2 - 1.87 - 0.29).abs() < 0.05, "offset {}", r2 - 1.87);
    let phi = doc["phi_opt"].as_f64().unwrap();
    assert!(phi > 2.5 && phi < std::f64::consts::PI);
}

#[test]
fn wigner_vacuum_peak_and_manifest() {
    let data = tmp_path("wigner.csv");
    let out = bin()
        .args(["wigner", "--alpha", "0", "--r1", "0", "--phi", "0", "--resolution", "11"])
        .args(["--xmin", "-3", "--xmax", "3", "--pmin", "-3", "--pmax", "3", "--out"])
        .arg(&data)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&data).unwrap();
    assert!(text.starts_with("x,p,w\n"));
    assert_eq!(text.lines().count(), 1 + 11 * 11);
    let peak: f64 = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap())
        .fold(0.0, f64::max);
    assert!((peak - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-9);

    let manifest_path = PathBuf::from(format!("{}.manifest.json", data.display()));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&manifest_path).unwrap()).unwrap();
    let ia = manifest["extra"]["i_a"].as_f64().unwrap();
    let ib = manifest["extra"]["i_b"].as_f64().unwrap();
    assert!((ia - 0.5).abs() < 1e-12 && (ib - 0.5).abs() < 1e-12);
    std::fs::remove_file(&data).ok();
    std::fs::remove_file(&manifest_path).ok();
}

#[test]
fn wigner_equal_intensity_manifests() {
    // at α² = sinh²r the conventional scheme balances the output
    // intensities; the dual-squeezing scheme leaves mode b brighter
    let r = 1.0f64;
    let alpha = format!("{}", r.sinh());
    for (r2, balanced_expected) in [("0", true), ("1", false)] {
        let data = tmp_path(&format!("wig-{r2}.csv"));
        let out = bin()
            .args(["wigner", "--alpha", &alpha, "--r1", "1", "--r2", r2, "--phi", "1.2"])
            .args(["--resolution", "5", "--out"])
            .arg(&data)
            .output()
            .unwrap();
        assert!(out.status.success());
        let manifest_path = PathBuf::from(format!("{}.manifest.json", data.display()));
        let manifest: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&manifest_path).unwrap()).unwrap();
        let ia = manifest["extra"]["i_a"].as_f64().unwrap();
        let ib = manifest["extra"]["i_b"].as_f64().unwrap();
        if balanced_expected {
            assert!((ia - ib).abs() < 1e-10, "conventional: {ia} vs {ib}");
        } else {
            assert!(ib > ia, "dual-squeezing should brighten mode b: {ia} vs {ib}");
        }
        std::fs::remove_file(&data).ok();
        std::fs::remove_file(&manifest_path).ok();
    }
}

#[test]
fn validate_quick_passes() {
    let out = run(&["validate", "--quick"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn threads_flag_is_accepted() {
    let out = run(&[
        "report", "--alpha", "1", "--r1", "0.5", "--phi", "1.5708", "--threads", "2",
    ]);
    assert!(out.status.success());
    assert_eq!(
        run(&["report", "--alpha", "1", "--r1", "0.5", "--phi", "1.0", "--threads", "0"])
            .status
            .code(),
        Some(2)
    );
}
