#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    /// Exit code, stdout and stderr in one document.
    pub fn transcript(&self) -> String {
        format!(
            "exit: {}\n--- stdout\n{}--- stderr\n{}",
            self.code, self.stdout, self.stderr
        )
    }
}

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

/// Runs the binary from the crate directory so scenario paths stay relative.
pub fn qtrans(args: &[&str]) -> Run {
    qtrans_env(args, &[])
}

pub fn qtrans_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qtrans"));
    cmd.current_dir(manifest_dir())
        .args(args)
        .env_remove("QTRANS_TOL");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("spawn qtrans");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

/// `(golden name, arguments)` for every shipped report.
pub const GOLDEN_CASES: &[(&str, &[&str])] = &[
    ("validate_qubit", &["validate", "scenarios/qubit.json"]),
    ("validate_qutrit", &["validate", "scenarios/qutrit.json"]),
    (
        "validate_classical",
        &["validate", "scenarios/classical.json"],
    ),
    (
        "validate_invalid_effect",
        &["validate", "scenarios/invalid_effect.json"],
    ),
    (
        "validate_invalid_instrument",
        &["validate", "scenarios/invalid_instrument.json"],
    ),
    (
        "validate_unresolved",
        &["validate", "scenarios/unresolved.json"],
    ),
    (
        "validate_qubit_json",
        &["validate", "--format", "json", "scenarios/qubit.json"],
    ),
    (
        "tp_effect_identity",
        &[
            "tp-effect",
            "scenarios/qubit.json",
            "zero",
            "id",
            "plus",
            "plus",
        ],
    ),
    (
        "tp_effect_unit_b",
        &[
            "tp-effect",
            "scenarios/qubit.json",
            "mixed",
            "luders_soft",
            "plus",
            "unit",
        ],
    ),
    (
        "tp_effect_undefined",
        &[
            "tp-effect",
            "scenarios/qubit.json",
            "zero",
            "holevo_p1",
            "p1",
            "plus",
        ],
    ),
    (
        "tp_effect_check",
        &[
            "tp-effect",
            "--check",
            "scenarios/classical.json",
            "s",
            "leaky",
            "a",
            "b",
        ],
    ),
    (
        "tp_effect_holevo_json",
        &[
            "tp-effect",
            "--check",
            "--format",
            "json",
            "scenarios/qubit.json",
            "mixed",
            "holevo_plus",
            "p0",
            "plus",
        ],
    ),
    (
        "tp_state_pure",
        &[
            "tp-state",
            "scenarios/qubit.json",
            "luders_plus",
            "plus",
            "y_plus",
        ],
    ),
    (
        "tp_state_channel",
        &["tp-state", "scenarios/qutrit.json", "twisted", "psi", "e0"],
    ),
    (
        "tp_state_holevo_instrument",
        &["tp-state", "scenarios/classical.json", "HA", "s", "t"],
    ),
    (
        "tp_state_luders_instrument",
        &[
            "tp-state",
            "scenarios/qutrit.json",
            "LU",
            "psi",
            "maximally_mixed",
        ],
    ),
    (
        "joint_identity",
        &["joint", "scenarios/qubit.json", "zero", "id", "Z", "X"],
    ),
    (
        "joint_operation",
        &["joint", "scenarios/classical.json", "s", "leaky", "A", "B"],
    ),
    (
        "joint_instrument",
        &["joint", "scenarios/qutrit.json", "psi", "LU", "P", "U"],
    ),
    (
        "check_projection",
        &["check", "scenarios/qubit.json", "luders_plus"],
    ),
    (
        "check_half",
        &["check", "scenarios/qubit.json", "luders_half"],
    ),
    (
        "check_mixed_holevo",
        &["check", "scenarios/qubit.json", "prepare_by_z"],
    ),
    (
        "check_instrument",
        &["check", "scenarios/classical.json", "split"],
    ),
    (
        "sample_effect",
        &["sample", "scenarios/qubit.json", "effect:zero:plus"],
    ),
    (
        "sample_tp_effect",
        &[
            "sample",
            "--seed",
            "3",
            "scenarios/qutrit.json",
            "tp-effect:psi:luders_unsharp:unsharp:high",
        ],
    ),
    (
        "sample_instrument_json",
        &[
            "sample",
            "--format",
            "json",
            "scenarios/classical.json",
            "instrument:s:split",
        ],
    ),
    (
        "sample_one_shot",
        &[
            "sample",
            "--shots",
            "1",
            "scenarios/qubit.json",
            "effect:zero:plus",
        ],
    ),
    (
        "dist_observable",
        &["dist", "scenarios/qutrit.json", "psi", "U"],
    ),
    (
        "dist_instrument_check",
        &["dist", "--check", "scenarios/qubit.json", "mixed", "HZ"],
    ),
];

pub fn golden_path(name: &str) -> PathBuf {
    manifest_dir()
        .join("tests/golden")
        .join(format!("{name}.txt"))
}

/// Compares against the stored golden, or rewrites it when `UPDATE_GOLDEN=1`.
pub fn check_golden(name: &str, args: &[&str]) -> Result<(), String> {
    let actual = qtrans(args).transcript();
    let path = golden_path(name);
    if std::env::var("UPDATE_GOLDEN").as_deref() == Ok("1") {
        std::fs::write(&path, &actual).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let expected = std::fs::read_to_string(&path)
        .map_err(|e| format!("{}: {e} (run with UPDATE_GOLDEN=1)", path.display()))?;
    if expected == actual {
        Ok(())
    } else {
        Err(format!(
            "{name}: output differs from {}\n{actual}",
            path.display()
        ))
    }
}

pub fn scenario_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(manifest_dir().join("scenarios"))
        .expect("scenarios dir")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
}

pub fn is_invalid_example(path: &Path) -> bool {
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("");
    name.starts_with("invalid") || name == "unresolved"
}
