//! End-to-end tests of the `evpos` binary: exit-code contract, file
//! round-trips, deterministic generation, golden report schemas.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn evpos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evpos"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_rotation(dir: &Path) -> PathBuf {
    let path = dir.join("rotation.json");
    std::fs::write(
        &path,
        r#"{"rows": 2, "cols": 2, "entries": [[[0.0, 0.0], [-1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]]}"#,
    )
    .unwrap();
    path
}

fn write_jordan(dir: &Path) -> PathBuf {
    let path = dir.join("jordan.json");
    std::fs::write(
        &path,
        r#"{"rows": 2, "cols": 2, "entries": [[[0.0, 0.0], [1.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]}"#,
    )
    .unwrap();
    path
}

#[test]
fn analyze_rotation_reports_imaginary_pair() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_rotation(dir.path());
    let out = evpos(&["analyze", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("s(A) = 0.000000000"));
    assert!(text.contains("0.000000+1.000000i"));
    assert!(text.contains("0.000000-1.000000i"));
}

#[test]
fn analyze_zero_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.json");
    std::fs::write(
        &path,
        r#"{"rows": 2, "cols": 2, "entries": [[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]}"#,
    )
    .unwrap();
    let out = evpos(&["analyze", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("s(A) = 0.000000000"));
    assert!(text.contains("alg 2"));
}

#[test]
fn analyze_jordan_shows_second_order_pole() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_jordan(dir.path());
    let out = evpos(&["analyze", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("pole order 2"));
}

#[test]
fn parse_error_exits_2_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"rows\": 2,\n  broken").unwrap();
    let out = evpos(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8(out.stderr).unwrap();
    assert!(text.contains("line 2"), "stderr: {text}");
}

#[test]
fn numerical_overflow_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("huge.json");
    std::fs::write(
        &path,
        r#"{"rows": 2, "cols": 2, "entries": [[[1e308, 0.0], [1e308, 0.0]], [[1e308, 0.0], [1e308, 0.0]]]}"#,
    )
    .unwrap();
    let out = evpos(&["positivity", path.to_str().unwrap(), "--mode", "power"]);
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8(out.stderr).unwrap();
    assert!(text.contains("rescale"), "stderr: {text}");
}

#[test]
fn unknown_theorem_exits_2_listing_identifiers() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_rotation(dir.path());
    let out = evpos(&["check", "thm-9.9", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8(out.stderr).unwrap();
    assert!(text.contains("lem-5.3"));
}

#[test]
fn check_verdicts_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let rotation = write_rotation(dir.path());
    let jordan = write_jordan(dir.path());
    // hypotheses-not-met and confirmed are data, not failures.
    assert!(evpos(&["check", "lem-5.3", rotation.to_str().unwrap()]).status.success());
    assert!(evpos(&["check", "thm-4.1", jordan.to_str().unwrap()]).status.success());
    assert!(evpos(&["check", "thm-5.1", jordan.to_str().unwrap()]).status.success());
}

#[test]
fn positivity_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let rotation = write_rotation(dir.path());
    let out = evpos(&["positivity", rotation.to_str().unwrap(), "--mode", "semigroup"]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("NotDetected"));

    let metzler = dir.path().join("metzler.json");
    std::fs::write(
        &metzler,
        r#"{"rows": 2, "cols": 2, "entries": [[[-1.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [-1.0, 0.0]]]}"#,
    )
    .unwrap();
    let out = evpos(&["positivity", metzler.to_str().unwrap(), "--mode", "semigroup"]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("PositiveFromStart"));
}

#[test]
fn generated_positivity_is_certified() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("ev3.json");
    let gen = evpos(&[
        "generate",
        "--family",
        "evpos-semigroup",
        "--dim",
        "3",
        "--seed",
        "11",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(gen.status.success());
    let out = evpos(&["positivity", out_path.to_str().unwrap(), "--mode", "semigroup"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("CertifiedStrictlyEventuallyPositive"), "{text}");
}

#[test]
fn generate_is_deterministic_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (path, _) in [(&a, 0), (&b, 1)] {
        let out = evpos(&[
            "generate",
            "--family",
            "evpos-semigroup",
            "--dim",
            "4",
            "--seed",
            "7",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(
        std::fs::read(dir.path().join("a.json.meta.json")).unwrap(),
        std::fs::read(dir.path().join("b.json.meta.json")).unwrap()
    );
}

#[test]
fn generate_then_analyze_round_trips_the_bound() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("ev4.json");
    let gen = evpos(&[
        "generate",
        "--family",
        "evpos-semigroup",
        "--dim",
        "4",
        "--seed",
        "3",
        "--spectral-bound",
        "0.25",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(gen.status.success());

    let meta: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("ev4.json.meta.json")).unwrap(),
    )
    .unwrap();
    let truth = meta["ground_truth"]["spectral_bound"].as_f64().unwrap();

    let out = evpos(&["analyze", out_path.to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let computed = report["spectral_bound"].as_f64().unwrap();
    assert!((computed - truth).abs() < 1e-7, "computed {computed}, truth {truth}");
}

#[test]
fn matrix_file_round_trip_preserves_values() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("m.json");
    let gen = evpos(&[
        "generate",
        "--family",
        "metzler",
        "--dim",
        "5",
        "--seed",
        "9",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(gen.status.success());
    let text = std::fs::read_to_string(&out_path).unwrap();
    let parsed: evpos::ComplexMatrix = serde_json::from_str(&text).unwrap();
    let reserialized = serde_json::to_string_pretty(&parsed).unwrap();
    assert_eq!(text.trim_end(), reserialized);
}

#[test]
fn golden_report_schemas_are_stable() {
    let dir = tempfile::tempdir().unwrap();
    let rotation = write_rotation(dir.path());

    let out = evpos(&["check", "lem-5.3", rotation.to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let golden = include_str!("golden/check_lem53_rotation.json");
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim_end(), golden.trim_end());

    let out = evpos(&["analyze", rotation.to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let golden = include_str!("golden/analyze_rotation.json");
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim_end(), golden.trim_end());
}

#[test]
fn converge_balancing_reports_rank() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("ev.json");
    evpos(&[
        "generate",
        "--family",
        "evpos-semigroup",
        "--dim",
        "3",
        "--seed",
        "2",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    let out = evpos(&["converge", out_path.to_str().unwrap(), "--mode", "balancing"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("converges: true"));
    assert!(text.contains("limit rank: 1"));
}

#[test]
fn infeasible_generator_parameters_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("x.json");
    let out = evpos(&[
        "generate",
        "--family",
        "evpos-power",
        "--dim",
        "4",
        "--gap",
        "3.0",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}
