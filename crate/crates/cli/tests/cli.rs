//! End-to-end tests of the binary: file in, JSON out, exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_drincert")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn charpoly_finite_module() {
    let out = run(&[
        "charpoly",
        "--input",
        data("carlitz_f8.json").to_str().unwrap(),
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["status"], "good");
    assert_eq!(v["fx"], "X+(T^3)");
    assert_eq!(v["n_x"], 1);
    assert_eq!(v["trad"], "1");
}

#[test]
fn charpoly_family_place() {
    let out = run(&[
        "charpoly",
        "--input",
        data("ref_rank2_f3.json").to_str().unwrap(),
        "--place",
        "s+1",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["status"], "good");
    assert_eq!(v["fx"], "X^2+(2)*X+(2*T)");
    assert_eq!(v["deg_x"], 1);
}

#[test]
fn charpoly_bad_reduction_is_a_skip_record() {
    let out = run(&[
        "charpoly",
        "--input",
        data("bad_at_zero.json").to_str().unwrap(),
        "--place",
        "s",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["status"], "bad-reduction");
    assert!(v["fx"].is_null());
}

#[test]
fn charpoly_family_needs_place() {
    let out = run(&[
        "charpoly",
        "--input",
        data("ref_rank2_f3.json").to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--place"));
}

#[test]
fn malformed_input_diagnoses_and_fails() {
    let dir = std::env::temp_dir().join("drincert-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    let out = run(&["charpoly", "--input", bad.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));

    let missing = run(&["charpoly", "--input", "/definitely/not/here.json"]);
    assert!(!missing.status.success());
}

#[test]
fn certify_matches_golden_report() {
    let out = run(&[
        "certify",
        "--input",
        data("ref_rank2_f3.json").to_str().unwrap(),
        "--place-deg",
        "3",
        "--prime-deg",
        "2",
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let golden = std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/ref_rank2_f3_p2_s3.json"),
    )
    .unwrap();
    let got = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        got.trim_end(),
        golden.trim_end(),
        "report differs from the golden file"
    );
}

#[test]
fn certify_mode_override_accepted() {
    // trad_field is F for this family, so forcing full mode matches the
    // automatic choice byte for byte
    let out = run(&[
        "certify",
        "--input",
        data("ref_rank2_f3.json").to_str().unwrap(),
        "--place-deg",
        "2",
        "--prime-deg",
        "1",
        "--mode",
        "full",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["trad_field"], "F");
}

#[test]
fn closure_cap_exceeded_is_reported_not_fatal() {
    let out = run(&[
        "closure",
        "--input",
        data("sl2_f11_gens.json").to_str().unwrap(),
        "--cap",
        "10",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["complete"], false);
    assert!(v["order"].as_u64().unwrap() >= 10);
}

#[test]
fn closure_small_group() {
    let dir = std::env::temp_dir().join("drincert-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let gens = dir.join("sl2_f3.json");
    std::fs::write(
        &gens,
        r#"{"p":3,"m":1,"n":2,"gens":[[["1","1"],["0","1"]],[["1","0"],["1","1"]]]}"#,
    )
    .unwrap();
    let out = run(&[
        "closure",
        "--input",
        gens.to_str().unwrap(),
        "--cap",
        "1000",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["complete"], true);
    assert_eq!(v["order"], 24);
}

#[test]
fn rootsys_verify_zero_counterexamples() {
    let out = run(&["rootsys-verify", "--box-radius", "2"]);
    let v = stdout_json(&out);
    assert_eq!(v["total_counterexamples"], 0);
}

#[test]
fn selftest_quick_subset() {
    let out = run(&["selftest", "--only", "2,7,9,10"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.matches("[PASS]").count(), 4);
}
