//! Frozen CLI outputs. Expected files live in `tests/golden/expected`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn ppersist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ppersist")).args(args).current_dir(golden_dir()).output().unwrap()
}

fn expected(name: &str) -> String {
    fs::read_to_string(golden_dir().join("expected").join(name)).unwrap()
}

fn assert_golden(args: &[&str], name: &str) {
    let out = ppersist(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), expected(name), "{args:?}");
}

fn stderr_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stderr).unwrap()
}

#[test]
fn barcodes() {
    assert_golden(&["vr-barcode", "--degree", "1", "--max-dim", "2", "square.csv"], "square_h1.json");
    assert_golden(&["vr-barcode", "--degree", "0", "square.csv"], "square_h0.json");
    assert_golden(
        &["--field", "f2", "vr-barcode", "--degree", "1", "--max-dim", "2", "square.csv"],
        "square_h1_f2.json",
    );
    assert_golden(&["sublevel-barcode", "complex.json", "--degree", "0"], "complex_h0.json");
    assert_golden(&["sublevel-barcode", "complex.json", "--degree", "1"], "complex_h1.json");
}

#[test]
fn svg_plots() {
    let dir = std::env::temp_dir().join(format!("ppersist-golden-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let cases = [
        (vec!["vr-barcode", "--degree", "1", "--max-dim", "2", "square.csv"], "square_h1.svg"),
        (vec!["sublevel-barcode", "complex.json", "--degree", "0"], "complex_h0.svg"),
    ];
    for (mut args, name) in cases {
        let path = dir.join(name);
        let path_str = path.to_str().unwrap().to_string();
        args.extend(["--emit-svg", &path_str]);
        assert!(ppersist(&args).status.success());
        assert_eq!(fs::read_to_string(&path).unwrap(), expected(name));
    }
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn other_commands() {
    assert_golden(&["semigroup-order", "min2.csv"], "min2.json");
    assert_golden(&["semigroup-order", "--order", "nambooripad", "min2.csv"], "min2_nambooripad.json");
    assert_golden(&["spectral-check", "page_zero.json"], "page_zero.json");
    assert_golden(&["spectral-check", "page_bad.json"], "page_bad.json");
    assert_golden(&["end-ring", "diagram.json"], "diagram.json");
    assert_golden(&["graph-persist", "family.json"], "family.json");
    assert_golden(
        &[
            "bifiltration-rank",
            "square.csv",
            "--degree",
            "1",
            "--max-dim",
            "2",
            "--t2",
            "1",
            "--lambda",
            "1/4",
            "--shift",
            "1/2",
        ],
        "square_rank.json",
    );
    assert_golden(
        &["vr-map", "fiber_source.csv", "fiber_target.csv", "--map", "fiber_map.json", "--t2", "1", "--lambda", "2/5"],
        "fiber_safe.json",
    );
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let path = std::env::temp_dir().join(format!("ppersist-out-{}.json", std::process::id()));
    let out = ppersist(&["end-ring", "diagram.json", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read_to_string(&path).unwrap(), expected("diagram.json"));
    fs::remove_file(&path).unwrap();
}

#[test]
fn validation_errors_exit_one_with_json() {
    let cases: [&[&str]; 5] = [
        &["vr-barcode", "--degree", "2", "--max-dim", "2", "square.csv"],
        &["--field", "fp:4", "end-ring", "diagram.json"],
        &["vr-barcode", "missing.csv"],
        &["semigroup-order", "complex.json"],
        &["bifiltration-rank", "square.csv", "--t2", "1", "--lambda", "x"],
    ];
    for args in cases {
        let out = ppersist(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty());
        assert_eq!(stderr_json(&out)["error"], "validation", "{args:?}");
    }
}

#[test]
fn min_fiber_mode_reports_a_witness() {
    let out = ppersist(&[
        "vr-map",
        "fiber_source.csv",
        "fiber_target.csv",
        "--map",
        "fiber_map.json",
        "--t2",
        "1",
        "--lambda",
        "2/5",
        "--paper-mode-mlambda",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_json(&out);
    let w = &err["detail"]["witness"];
    assert_eq!(w["source_point"], 0);
    assert_eq!(w["target_point"], 0);
    assert_eq!(w["target_prob"], "2/5");
    assert_eq!(w["threshold"], "4/5");
}

#[test]
fn bad_thread_count_is_rejected() {
    let out = Command::new(env!("CARGO_BIN_EXE_ppersist"))
        .args(["spectral-check", "page_zero.json"])
        .current_dir(golden_dir())
        .env("PPERSIST_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
