mod common;

use common::{check_golden, is_invalid_example, qtrans, qtrans_env, scenario_files, GOLDEN_CASES};
use serde_json::Value;

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let run = qtrans(&full);
    assert_eq!(run.code, 0, "{}", run.stderr);
    serde_json::from_str(&run.stdout).expect("valid json")
}

fn num(v: &Value, key: &str) -> f64 {
    v[key]
        .as_f64()
        .unwrap_or_else(|| panic!("{key} missing in {v}"))
}

#[test]
fn golden_reports() {
    let failures: Vec<String> = GOLDEN_CASES
        .iter()
        .filter_map(|(name, args)| check_golden(name, args).err())
        .collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn every_golden_file_has_a_case() {
    for entry in std::fs::read_dir(common::manifest_dir().join("tests/golden")).unwrap() {
        let path = entry.unwrap().path();
        let stem = path.file_stem().unwrap().to_str().unwrap().to_string();
        assert!(
            GOLDEN_CASES.iter().any(|(n, _)| *n == stem),
            "stale golden {stem}"
        );
    }
}

#[test]
fn shipped_scenarios_validate_as_labelled() {
    for path in scenario_files() {
        let p = path.to_str().unwrap();
        let run = qtrans(&["validate", p]);
        let want = if is_invalid_example(&path) { 1 } else { 0 };
        assert_eq!(run.code, want, "{p}: {}{}", run.stdout, run.stderr);
    }
}

#[test]
fn invalid_effect_is_named() {
    let run = qtrans(&["validate", "scenarios/invalid_effect.json"]);
    assert_eq!(run.code, 1);
    assert!(run.stdout.contains("too_big: eigenvalue 1.2 > 1"));
    assert!(run.stdout.contains("good: ok"));
}

#[test]
fn lossy_instrument_reports_its_deviation() {
    let run = qtrans(&["validate", "scenarios/invalid_instrument.json"]);
    assert_eq!(run.code, 1);
    assert!(run.stdout.contains("lossy:"));
    assert!(run.stdout.contains("1.000e-1"));
}

#[test]
fn invalid_scenarios_refuse_computation() {
    let run = qtrans(&[
        "tp-effect",
        "scenarios/invalid_effect.json",
        "zero",
        "luders_big",
        "good",
        "good",
    ]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("too_big"));
    assert!(run.stdout.is_empty());
}

#[test]
fn identity_transition_is_product_of_born_values() {
    // ⟨0|+⟩⟨+|0⟩ = 1/2, twice.
    let v = json(&[
        "tp-effect",
        "scenarios/qubit.json",
        "zero",
        "id",
        "plus",
        "plus",
    ]);
    assert!((num(&v, "value") - 0.25).abs() < 1e-12);
}

#[test]
fn unit_second_effect_gives_first_probability() {
    // mixed = [[0.75, 0.125-0.125i], [0.125+0.125i, 0.25]]; ⟨+|ρ|+⟩ = (0.75 + 0.25 + 2·0.125)/2.
    let v = json(&[
        "tp-effect",
        "scenarios/qubit.json",
        "mixed",
        "luders_soft",
        "plus",
        "unit",
    ]);
    assert!((num(&v, "value") - 0.625).abs() < 1e-12);
}

#[test]
fn rank_one_luders_gives_overlap() {
    // |⟨+|y+⟩|² = |(1 + i)/2|² = 1/2.
    let v = json(&[
        "tp-state",
        "scenarios/qubit.json",
        "luders_plus",
        "plus",
        "y_plus",
    ]);
    assert!((num(&v, "value") - 0.5).abs() < 1e-12);
    assert_eq!(v["path"], "rank-one");
}

#[test]
fn channels_have_unit_state_transition() {
    for (file, op) in [
        ("scenarios/qubit.json", "dephase"),
        ("scenarios/qubit.json", "reset"),
        ("scenarios/qubit.json", "prepare_by_z"),
        ("scenarios/classical.json", "shuffle"),
        ("scenarios/classical.json", "prepare_by_A"),
    ] {
        let states = if file.contains("qubit") {
            ["zero", "mixed"]
        } else {
            ["s", "t"]
        };
        let v = json(&["tp-state", file, op, states[0], states[1]]);
        assert!((num(&v, "value") - 1.0).abs() < 1e-12, "{op}");
    }
}

#[test]
fn holevo_instrument_outcomes_use_closed_form() {
    // s = (0.5,0.3,0.2), t = (0.1,0.1,0.8), A_yes = (1,0.5,0): s(A)=0.65, t(A)=0.15;
    // α_yes = point 0 so α_yes(A_yes) = 1; α_no = t so α_no(A_no) = 0.85.
    let v = json(&["tp-state", "scenarios/classical.json", "HA", "s", "t"]);
    let per = &v["per_operation"];
    assert!((num(&per["yes"], "value") - 0.65 * 0.15 * 1.0).abs() < 1e-12);
    assert!((num(&per["no"], "value") - 0.35 * 0.85 * 0.85).abs() < 1e-12);
    assert!((num(&v, "total") - 1.0).abs() < 1e-12);
}

#[test]
fn identity_joint_table_is_a_product() {
    let v = json(&["joint", "scenarios/classical.json", "s", "id", "A", "B"]);
    let s = [0.5, 0.3, 0.2];
    let a = [[1.0, 0.5, 0.0], [0.0, 0.5, 1.0]];
    let b = [[0.2, 0.9, 0.4], [0.8, 0.1, 0.6]];
    let dot = |e: &[f64; 3]| e.iter().zip(&s).map(|(x, y)| x * y).sum::<f64>();
    // Labels sort as no < yes, so row 0 is the complement.
    let entries = &v["table"]["entries"];
    for (i, ai) in [1, 0].into_iter().enumerate() {
        for (j, bj) in [1, 0].into_iter().enumerate() {
            let got = entries[i][j].as_f64().unwrap();
            assert!((got - dot(&a[ai]) * dot(&b[bj])).abs() < 1e-12);
        }
    }
    assert_eq!(v["enumeration_passed"], true);
}

#[test]
fn q_table_second_marginal_is_the_first_observable() {
    let v = json(&["joint", "scenarios/qutrit.json", "psi", "LU", "P", "U"]);
    let m = &v["marginals"]["A"];
    assert!(num(m, "max_deviation") < 1e-10);
    assert!((num(&v, "total") - 1.0).abs() < 1e-12);
}

#[test]
fn check_reports_expected_booleans() {
    let v = json(&["check", "scenarios/qubit.json", "luders_plus"]);
    assert_eq!(v["repeatable"], true);
    assert_eq!(v["projection"], true);
    let v = json(&["check", "scenarios/qubit.json", "luders_half"]);
    assert_eq!(v["repeatable"], false);
    // (C^{1/2})⁴ − C = C² − C = −1/4 on the diagonal.
    assert!((num(&v, "repeatability_deviation") - 0.25).abs() < 1e-12);
    let v = json(&["check", "scenarios/qubit.json", "prepare_by_z"]);
    assert_eq!(v["channel"], true);
}

#[test]
fn exit_code_contract() {
    let cases: &[(&[&str], i32)] = &[
        (&["validate", "scenarios/qubit.json"], 0),
        (&["validate", "scenarios/unresolved.json"], 1),
        (
            &[
                "tp-effect",
                "scenarios/qubit.json",
                "zero",
                "holevo_p1",
                "p1",
                "plus",
            ],
            2,
        ),
        (
            &[
                "tp-effect",
                "scenarios/classical.json",
                "point0",
                "holevo_last",
                "a",
                "b",
            ],
            2,
        ),
        (
            &[
                "sample",
                "--shots",
                "1",
                "scenarios/qubit.json",
                "effect:zero:plus",
            ],
            3,
        ),
        (
            &[
                "sample",
                "--shots",
                "0",
                "scenarios/qubit.json",
                "effect:zero:plus",
            ],
            4,
        ),
        (&["sample", "scenarios/qubit.json", "born:zero"], 4),
        (
            &[
                "tp-effect",
                "scenarios/qubit.json",
                "nobody",
                "id",
                "plus",
                "plus",
            ],
            4,
        ),
        (&["dist", "scenarios/qubit.json", "zero", "id"], 4),
        (&["validate", "scenarios/does_not_exist.json"], 4),
        (&["validate", "Cargo.toml"], 4),
        (&["frobnicate"], 4),
        (&["tp-effect", "scenarios/qubit.json"], 4),
        (&["--tol", "abc", "validate", "scenarios/qubit.json"], 4),
        (&["--tol", "-1", "validate", "scenarios/qubit.json"], 4),
        (&["--help"], 0),
        (&["--version"], 0),
    ];
    for (args, code) in cases {
        let run = qtrans(args);
        assert_eq!(run.code, *code, "{args:?}: {}{}", run.stdout, run.stderr);
        if *code == 2 {
            assert!(run.stderr.contains("transition undefined"));
        }
    }
}

#[test]
fn fixed_seed_is_byte_identical() {
    let args = [
        "sample",
        "--seed",
        "42",
        "scenarios/qutrit.json",
        "instrument:psi:HU",
    ];
    let first = qtrans(&args);
    let second = qtrans(&args);
    assert_eq!(first.stdout, second.stdout);
    let other = qtrans(&[
        "sample",
        "--seed",
        "43",
        "scenarios/qutrit.json",
        "instrument:psi:HU",
    ]);
    assert_ne!(first.stdout, other.stdout);
}

#[test]
fn sample_born_value_is_near_one_half() {
    let v = json(&["sample", "scenarios/qubit.json", "effect:zero:plus"]);
    assert!((num(&v, "estimate") - 0.5).abs() < 0.01);
    assert_eq!(v["shots"], 100000);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["rng_id"], qtrans_core::oracle::RNG_ID);
}

#[test]
fn tolerance_precedence() {
    // The lossy instrument misses the unit by 0.1.
    let file = "scenarios/invalid_instrument.json";
    assert_eq!(
        qtrans_env(&["validate", file], &[("QTRANS_TOL", "0.2")]).code,
        0
    );
    assert_eq!(
        qtrans_env(
            &["--tol", "1e-9", "validate", file],
            &[("QTRANS_TOL", "0.2")]
        )
        .code,
        1
    );
    assert_eq!(qtrans(&["--tol", "0.2", "validate", file]).code, 0);
    let v = json(&["validate", "scenarios/qubit.json"]);
    assert_eq!(num(&v, "tol"), 1e-9);
}

#[test]
fn seed_and_shots_flags_override_scenario_defaults() {
    let v = json(&[
        "sample",
        "--seed",
        "5",
        "--shots",
        "1000",
        "scenarios/qubit.json",
        "effect:zero:plus",
    ]);
    assert_eq!(v["seed"], 5);
    assert_eq!(v["shots"], 1000);
    let v = json(&["sample", "scenarios/qutrit.json", "effect:psi:high"]);
    assert_eq!(v["seed"], 0);
}

#[test]
fn json_keys_and_labels_are_sorted() {
    let v = json(&["validate", "scenarios/classical.json"]);
    let names: Vec<&String> = v["effects"].as_object().unwrap().keys().collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    let v = json(&["dist", "scenarios/classical.json", "s", "C"]);
    assert_eq!(
        v["distribution"]["axes"][0]["labels"],
        serde_json::json!(["high", "low"])
    );
}
