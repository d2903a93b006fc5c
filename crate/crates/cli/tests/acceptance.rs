//! CLI-level acceptance checks, including the thread-count determinism
//! criterion, run against the actual binary.

use std::path::Path;
use std::process::{Command, Output};

fn waveqed(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_waveqed"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

/// Determinism: the fig4 preset exported with 1 worker and with 8 workers
/// must produce byte-identical CSV files.
#[test]
fn c10_thread_count_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = waveqed(
        &[
            "sweep",
            "--preset",
            "fig4",
            "--threads",
            "1",
            "--out",
            "t1.csv",
        ],
        dir.path(),
    );
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let b = waveqed(
        &[
            "sweep",
            "--preset",
            "fig4",
            "--threads",
            "8",
            "--out",
            "t8.csv",
        ],
        dir.path(),
    );
    assert!(b.status.success(), "{}", String::from_utf8_lossy(&b.stderr));
    let bytes1 = std::fs::read(dir.path().join("t1.csv")).unwrap();
    let bytes8 = std::fs::read(dir.path().join("t8.csv")).unwrap();
    assert!(!bytes1.is_empty());
    assert_eq!(bytes1, bytes8, "exports differ between 1 and 8 threads");
    println!(
        "ACCEPTANCE 10 (determinism): PASS — {} identical bytes for 1 vs 8 threads",
        bytes1.len()
    );
}

#[test]
fn oracle_check_command_is_within_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let out = waveqed(
        &["oracle-check", "--n", "10000", "--seed", "42"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("within threshold"), "{text}");
    let dev: f64 = text
        .split("max deviation = ")
        .nth(1)
        .and_then(|s| s.split_whitespace().next())
        .unwrap()
        .parse()
        .unwrap();
    assert!(dev < 1e-10, "reported deviation {dev}");
}

#[test]
fn oracle_check_fails_loudly_below_impossible_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let out = waveqed(
        &[
            "oracle-check",
            "--n",
            "200",
            "--seed",
            "42",
            "--threshold",
            "1e-30",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("worst-case parameters"));
}

#[test]
fn point_command_reports_half_wave_asymmetry() {
    let dir = tempfile::tempdir().unwrap();
    let out = waveqed(
        &[
            "point",
            "--gamma1",
            "1",
            "--gamma2",
            "0.01",
            "--big-gamma",
            "0.5",
            "--lambda",
            "0",
            "--theta",
            "1.5707963267948966",
            "--delta1",
            "0",
            "--delta2",
            "0",
            "--model",
            "two-level",
        ],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    let grab = |key: &str| -> f64 {
        text.lines()
            .find(|l| l.starts_with(key))
            .and_then(|l| l.split('=').nth(1))
            .map(|v| v.trim().parse().unwrap())
            .unwrap_or_else(|| panic!("missing {key} in {text}"))
    };
    let r_f = grab("R_f");
    let r_b = grab("R_b");
    assert!((r_f - 2.4266543716178503e-5).abs() < 1e-9, "R_f = {r_f}");
    assert!((r_b - 0.960979397704385).abs() < 1e-9, "R_b = {r_b}");
}

#[test]
fn sweep_preset_writes_expected_row_count() {
    let dir = tempfile::tempdir().unwrap();
    let out = waveqed(
        &["sweep", "--preset", "fig4", "--out", "fig4.csv"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("fig4.csv")).unwrap();
    // 2 lambda values x 201 theta values + header
    assert_eq!(text.lines().count(), 403);
    assert!(text.starts_with("delta1,"));
}

#[test]
fn sweep_config_json_export_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("cfg.json"),
        r#"{
            "model": "two-level",
            "axes": [{"param": "theta", "start": 0.0, "stop": 6.283185307179586, "count": 7}],
            "base": {"gamma1": 1.0, "gamma2": 0.01, "big_gamma": 0.5}
        }"#,
    )
    .unwrap();
    let out = waveqed(
        &[
            "sweep", "--config", "cfg.json", "--format", "json", "--out", "run.json",
        ],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("run.json")).unwrap())
            .unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 7);
    assert_eq!(doc["metadata"]["model"], "two-level");

    std::fs::write(
        dir.path().join("bad.json"),
        r#"{"model": "two-level", "axis": []}"#,
    )
    .unwrap();
    let bad = waveqed(&["sweep", "--config", "bad.json"], dir.path());
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn preset_sweep_json_metadata_lists_inferred_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = waveqed(
        &[
            "sweep",
            "--preset",
            "fig6",
            "--format",
            "json",
            "--out",
            "fig6.json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("fig6.json")).unwrap())
            .unwrap();
    assert_eq!(doc["metadata"]["preset"], "fig6");
    let inferred = doc["metadata"]["inferred"].as_array().unwrap();
    assert!(!inferred.is_empty());
    assert!(inferred[0].as_str().unwrap().contains("delta1"));
}

#[test]
fn ep_find_locates_the_detuned_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = waveqed(
        &["ep-find", "--preset", "fig6", "--slice", "fig6-ep-theta01"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("EP at delta2"), "{text}");
    assert!(text.contains("vanishing = forward"), "{text}");
}

#[test]
fn ep_find_manual_slice_matches_preset() {
    let dir = tempfile::tempdir().unwrap();
    let out = waveqed(
        &[
            "ep-find",
            "--param",
            "delta2",
            "--start",
            "-3",
            "--stop",
            "3",
            "--gamma1",
            "0.32",
            "--gamma2",
            "0.01",
            "--big-gamma",
            "1.7",
            "--lambda",
            "0.5",
            "--theta",
            "0.3141592653589793",
            "--link",
            "delta1:delta2:-1.0156355672678339",
            "--model",
            "two-level",
        ],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(text.contains("-5.199142591"), "{text}");
}

#[test]
fn preset_list_names_all_presets() {
    let dir = tempfile::tempdir().unwrap();
    let out = waveqed(&["preset-list"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for name in ["fig2", "fig3", "fig4", "fig5", "fig6", "fig7"] {
        assert!(text.contains(name), "missing {name} in {text}");
    }
    assert!(text.contains("inferred"));
}

#[test]
fn unknown_commands_and_flags_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(waveqed(&["frobnicate"], dir.path()).status.code(), Some(2));
    assert_eq!(
        waveqed(&["sweep", "--no-such-flag"], dir.path())
            .status
            .code(),
        Some(2)
    );
}
