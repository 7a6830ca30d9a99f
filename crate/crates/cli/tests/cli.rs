//! End-to-end tests of the `snlkit` binary: exit codes, report shape,
//! byte-level determinism, and re-validation of every emitted witness.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use snlkit_core::nalgebra::DVector;
use snlkit_core::SnlSpace;

fn snlkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_snlkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_instance(dir: &Path, name: &str, json: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, json).expect("instance written");
    path
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn witness_vector(report: &Value, label: &str) -> DVector<f64> {
    let entries = report["witnesses"].as_array().expect("witness array");
    let entry = entries
        .iter()
        .find(|w| w["label"] == label)
        .unwrap_or_else(|| panic!("witness `{label}` present"));
    let values: Vec<f64> = entry["vector"]
        .as_array()
        .expect("vector array")
        .iter()
        .map(|x| x.as_f64().expect("finite component"))
        .collect();
    DVector::from_vec(values)
}

#[test]
fn identity_graph_is_maximally_positive() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_instance(
        dir.path(),
        "ident.json",
        r#"{"space": {"product": 1}, "basis": [[1, 1]]}"#,
    );
    let out = snlkit(&["check-maximal", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["status"], "Pass");
    assert_eq!(report["criterion"], "Thm7.2a");
    assert_eq!(report["command"], "check-maximal");
    assert_eq!(report["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn rotation_graph_truth_table_is_all_true() {
    let dir = tempfile::tempdir().unwrap();
    // Graph of the quarter-turn matrix [[0, -1], [1, 0]].
    let path = write_instance(
        dir.path(),
        "rot.json",
        r#"{"space": {"product": 2}, "basis": [[1, 0, 0, 1], [0, 1, -1, 0]]}"#,
    );
    let out = snlkit(&["bb-check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["status"], "Pass");
    assert_eq!(report["criterion"], "Cor7.3");
    for key in ["maximal", "adjoint_monotone", "adjoint_maximal", "type_ni"] {
        assert_eq!(report["evidence"][key], 1.0, "flag {key}");
    }
}

#[test]
fn cyclic_fixture_is_rejected_by_every_check() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = dir.path().join("cyclic.json");
    let out = snlkit(&["fixtures", "cyclic3", "--json", fixture.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    // The emitted instance must itself be unusable as a pairing.
    let mut with_basis: Value =
        serde_json::from_str(&std::fs::read_to_string(&fixture).unwrap()).unwrap();
    with_basis["basis"] = serde_json::json!([[1.0, 0.0, 0.0]]);
    let path = write_instance(dir.path(), "cyclic-basis.json", &with_basis.to_string());
    let check = snlkit(&["check-positive", path.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&check.stderr);
    assert!(stderr.contains("not symmetric"), "stderr: {stderr}");
}

#[test]
fn space_without_dual_pairing_errors_cleanly_on_dual_commands() {
    let dir = tempfile::tempdir().unwrap();
    // One-dimensional space with the zero pairing: valid, but no dual.
    let path = write_instance(
        dir.path(),
        "r0.json",
        r#"{"space": {"matrix": [[0.0]]}, "basis": [[1.0]]}"#,
    );
    let positive = snlkit(&["check-positive", path.to_str().unwrap()]);
    assert_eq!(positive.status.code(), Some(0), "positivity needs no dual");

    for cmd in ["check-maximal", "check-maximal-negative", "validate-dual"] {
        let out = snlkit(&[cmd, path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{cmd} must error");
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(stderr.contains("no dual"), "{cmd} stderr: {stderr}");
    }

    // The oracle is the dual-free route and still runs.
    let oracle = snlkit(&["oracle", path.to_str().unwrap(), "--trials", "50"]);
    assert_eq!(oracle.status.code(), Some(0));
    assert_eq!(stdout_json(&oracle)["status"], "Inconclusive");
}

#[test]
fn reports_are_byte_identical_across_runs_and_sinks() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_instance(
        dir.path(),
        "rel.json",
        r#"{"space": {"product": 2}, "basis": [[1, 0, 1, 2], [0, 1, 0, 1]], "seed": 11}"#,
    );
    let file = dir.path().join("report.json");
    let first = snlkit(&[
        "ni-check",
        path.to_str().unwrap(),
        "--json",
        file.to_str().unwrap(),
    ]);
    let second = snlkit(&["ni-check", path.to_str().unwrap()]);
    assert_eq!(first.stdout, second.stdout, "identical runs, identical bytes");
    let written = std::fs::read(&file).unwrap();
    assert_eq!(first.stdout, written, "--json writes the stdout bytes");
}

#[test]
fn maximality_failure_witness_revalidates() {
    let dir = tempfile::tempdir().unwrap();
    // One positive line inside a two-dimensional product: never maximal.
    let path = write_instance(
        dir.path(),
        "thin.json",
        r#"{"space": {"product": 2}, "basis": [[1, 0, 0, 0]]}"#,
    );
    let out = snlkit(&["check-maximal", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["status"], "Fail");

    // The witness is a polar direction with positive dual form value.
    let w = witness_vector(&report, "polar_direction");
    let space = SnlSpace::product(2).unwrap();
    let value = space.q_dual(&w).unwrap();
    let claimed = report["evidence"]["polar_witness_q"].as_f64().unwrap();
    assert!(value > 1e-8, "dual form value {value}");
    assert!((value - claimed).abs() <= 1e-9 * claimed.abs().max(1.0));
}

#[test]
fn oracle_witness_extends_the_subspace() {
    let dir = tempfile::tempdir().unwrap();
    // Half of the identity graph: positive with nondegenerate restricted
    // form, but one dimension short of maximal.
    let path = write_instance(
        dir.path(),
        "thin.json",
        r#"{"space": {"product": 2}, "basis": [[1, 0, 1, 0]], "seed": 3}"#,
    );
    let out = snlkit(&["oracle", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["status"], "Fail");
    let d = witness_vector(&report, "extension_direction");
    assert!((d.norm() - 1.0).abs() < 1e-9, "witness is unit length");
    // Orthogonal to the original line, and the extension stays positive.
    let line = DVector::from_vec(vec![1.0, 0.0, 1.0, 0.0]) / 2.0_f64.sqrt();
    assert!(d.dot(&line).abs() < 1e-9);
    let min_eig = report["evidence"]["extended_min_eig"].as_f64().unwrap();
    assert!(min_eig >= -1e-9, "extended span still positive: {min_eig}");
    assert_eq!(report["evidence"]["extended_dim"], 2.0);
}

#[test]
fn scaled_helix_witness_revalidates_through_the_pairing() {
    let out = snlkit(&[
        "fixtures",
        "scaled-helix",
        "--lambda",
        "0.9",
        "--samples",
        "100000",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["status"], "Fail");
    let a = witness_vector(&report, "point_a");
    let b = witness_vector(&report, "point_b");
    let space = SnlSpace::new(snlkit_core::fixtures::swap3_matrix(), 1e-9).unwrap();
    let q = space.q(&(a - b)).unwrap();
    assert!(q < -1e-6, "witness pair violates positivity: q = {q}");
    let checked = report["evidence"]["witness_q_checked"].as_f64().unwrap();
    assert!((q - checked).abs() <= 1e-12);
}

#[test]
fn unit_helix_scan_passes() {
    let out = snlkit(&["fixtures", "helix", "--samples", "50000"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["status"], "Pass");
    assert!(report["evidence"]["scan_min_q"].as_f64().unwrap() >= -1e-12);
}

#[test]
fn conjugate_reports_infinite_values_as_text() {
    let dir = tempfile::tempdir().unwrap();
    // The restricted form on span{(1,0)} under the swap pairing is zero, so
    // the conjugate is finite only where B^T b* vanishes; bstar = (1, 0)
    // lands outside that range and the supremum diverges.
    let path = write_instance(
        dir.path(),
        "inf.json",
        r#"{"space": {"matrix": [[0, 1], [1, 0]]}, "basis": [[1, 0]], "bstar": [1, 0]}"#,
    );
    let out = snlkit(&["conjugate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["evidence"]["value"], "inf");
}

#[test]
fn missing_fields_and_bad_flags_error_with_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_instance(
        dir.path(),
        "bare.json",
        r#"{"space": {"product": 1}, "basis": [[1, 1]]}"#,
    );
    let cases: Vec<(Vec<&str>, &str)> = vec![
        (vec!["conjugate", path.to_str().unwrap()], "`bstar`"),
        (vec!["subdiff", path.to_str().unwrap()], "`b`"),
        (
            vec!["subdiff", path.to_str().unwrap(), "--kind", "x"],
            "unknown kind",
        ),
        (vec!["fixtures", "helixx"], "unknown fixture"),
    ];
    for (args, needle) in cases {
        let out = snlkit(&args);
        assert_eq!(out.status.code(), Some(2), "args: {args:?}");
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(stderr.contains(needle), "args {args:?}: {stderr}");
    }

    let missing = snlkit(&["check-positive", "/nonexistent/instance.json"]);
    assert_eq!(missing.status.code(), Some(2));

    let ragged = write_instance(
        dir.path(),
        "ragged.json",
        r#"{"space": {"product": 1}, "basis": [[1, 1, 1]]}"#,
    );
    let out = snlkit(&["check-positive", ragged.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("basis row 0"), "stderr: {stderr}");
}

#[test]
fn relation_commands_require_a_product_space() {
    let dir = tempfile::tempdir().unwrap();
    // Even-dimensional matrix space that is not declared as a product.
    let path = write_instance(
        dir.path(),
        "flat.json",
        r#"{"space": {"matrix": [[1, 0], [0, 1]]}, "basis": [[1, 0]]}"#,
    );
    for cmd in ["ni-check", "bb-check", "adjoint"] {
        let out = snlkit(&[cmd, path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{cmd}");
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(stderr.contains("product"), "{cmd} stderr: {stderr}");
    }
}

#[test]
fn flags_override_instance_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_instance(
        dir.path(),
        "seeded.json",
        r#"{"space": {"product": 1}, "basis": [[1, 1]], "seed": 5, "samples": 40}"#,
    );
    let inherited = snlkit(&["validate-dual", path.to_str().unwrap()]);
    let report = stdout_json(&inherited);
    assert_eq!(report["seed"], 5);
    assert_eq!(report["evidence"]["samples"], 40.0);

    let overridden = snlkit(&[
        "validate-dual",
        path.to_str().unwrap(),
        "--seed",
        "9",
        "--samples",
        "60",
    ]);
    let report = stdout_json(&overridden);
    assert_eq!(report["seed"], 9);
    assert_eq!(report["evidence"]["samples"], 60.0);
}

#[test]
fn fixture_instances_round_trip_through_commands() {
    let dir = tempfile::tempdir().unwrap();
    let line = dir.path().join("line.json");
    let out = snlkit(&["fixtures", "line-1m12", "--json", line.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    // The emitted line instance is positive but not maximal.
    let positive = snlkit(&["check-positive", line.to_str().unwrap()]);
    assert_eq!(positive.status.code(), Some(0));
    let maximal = snlkit(&["check-maximal", line.to_str().unwrap()]);
    assert_eq!(maximal.status.code(), Some(1));

    for (name, extra, dim_key, expected) in [
        ("identity", Some(("--dim", "4")), "matrix", 4),
        ("negidentity", None, "matrix", 3),
        ("swap3", None, "matrix", 3),
        ("product", Some(("--dim", "3")), "product", 3),
    ] {
        let mut args = vec!["fixtures", name];
        if let Some((k, v)) = extra {
            args.push(k);
            args.push(v);
        }
        let out = snlkit(&args);
        assert_eq!(out.status.code(), Some(0), "{name}");
        let inst = stdout_json(&out);
        match dim_key {
            "matrix" => {
                let rows = inst["space"]["matrix"].as_array().unwrap();
                assert_eq!(rows.len(), expected, "{name}");
            }
            _ => assert_eq!(inst["space"]["product"], expected as f64, "{name}"),
        }
    }
}
