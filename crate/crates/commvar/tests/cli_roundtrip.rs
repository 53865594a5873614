//! CLI integration: structured output re-parses to the library's verdicts,
//! golden files pin the report schema, and the error paths map to the
//! documented exit codes.

use commvar::classifier::{classify_borel_irreducible, Verdict};
use commvar::modtables::ModalityTable;
use commvar::report::{Report, SCHEMA_VERSION};
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_commvar"))
        .args(args)
        .env_remove("COMMVAR_BUDGET_OPS")
        .output()
        .expect("binary runs")
}

fn run_structured(args: &[&str]) -> Report {
    let mut full = args.to_vec();
    full.extend(["--format", "structured"]);
    let output = run(&full);
    assert!(
        output.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("structured output parses as a report")
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn assert_matches_golden(args: &[&str], name: &str) {
    let mut full = args.to_vec();
    full.extend(["--format", "structured"]);
    let output = run(&full);
    assert!(output.status.success(), "command {args:?} failed");
    let expected = std::fs::read(golden_path(name))
        .unwrap_or_else(|_| panic!("golden file {name} missing"));
    assert_eq!(
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&expected),
        "golden mismatch for {name}; regenerate with the command {full:?}"
    );
}

#[test]
fn structured_verdicts_round_trip_to_the_library() {
    for shape in ["B6", "B7", "A16", "E8", "A3,A3,D5", "T4", "G2"] {
        let report = run_structured(&["classify", "borel", "--type", shape]);
        assert_eq!(report.schema_version, SCHEMA_VERSION);
        assert_eq!(report.operation, "classify-borel");
        let parsed: Verdict =
            serde_json::from_value(report.result.clone()).expect("verdict deserializes");
        let expected = classify_borel_irreducible(
            &shape.parse().unwrap(),
            &ModalityTable::builtin(),
        );
        assert_eq!(parsed, expected, "round-trip mismatch for {shape}");
        assert!(!report.citations.is_empty());
    }
}

#[test]
fn sweep_and_closed_form_agree_through_the_cli() {
    for shape in [
        "A5", "A15", "A16", "B6", "B7", "C6", "D7", "G2", "E6", "E7", "E8", "F4",
    ] {
        let sweep = run_structured(&["classify", "borel", "--type", shape, "--method", "sweep"]);
        let closed =
            run_structured(&["classify", "borel", "--type", shape, "--method", "closed-form"]);
        assert_eq!(
            sweep.result["status"], closed.result["status"],
            "method disagreement on {shape}"
        );
    }
}

#[test]
fn golden_reports() {
    assert_matches_golden(&["classify", "borel", "--type", "B7"], "classify_borel_b7.json");
    assert_matches_golden(
        &["classify", "borel", "--type", "E6", "--property", "normal"],
        "classify_normal_e6.json",
    );
    assert_matches_golden(
        &["verify", "count", "--n", "2", "--q", "2,3", "--support", "borel"],
        "verify_count_gl2.json",
    );
    assert_matches_golden(
        &["verify", "orbits", "--group", "U", "--n", "3", "--q", "2,3,5"],
        "verify_orbits_u3.json",
    );
    assert_matches_golden(&["tables", "show", "--family", "G"], "tables_show_g.json");
    assert_matches_golden(&["tables", "cartan", "--type", "G2"], "tables_cartan_g2.json");
}

#[test]
fn strata_eval_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("strata.toml");
    std::fs::write(
        &file,
        r#"
[ambient]
type = "A2+T1"
levi = ""

[[stratum]]
label = "torus"
levi = ""
sheet_dim = 0
orbit_dim = 0

[[stratum]]
label = "regular"
levi = "1,2"
sheet_dim = 3
orbit_dim = 3
"#,
    )
    .unwrap();
    let report = run_structured(&["strata", "eval", "--file", file.to_str().unwrap()]);
    assert_eq!(report.operation, "strata-eval");
    assert_eq!(report.result["component_floor"], 9);
    let strata = report.result["strata"].as_array().unwrap();
    assert_eq!(strata.len(), 2);
    // torus stratum reaches the floor: dim b + rank = 6 + 3
    assert_eq!(strata[0]["stratum_dim"], 9);
    assert_eq!(strata[0]["cprime_dim"], 6);
    // regular nilpotent sheet (j = dim S): (rank - ssrank) + dim(b cap h)
    // = 1 + 6, strictly below the floor as irreducibility demands
    assert_eq!(strata[1]["cprime_dim"], 7);
    assert_eq!(strata[1]["stratum_dim"], 7);
    assert_eq!(strata[1]["meets_floor"], false);
}

#[test]
fn oracle_and_override_files_flow_through() {
    let dir = tempfile::tempdir().unwrap();
    let oracle = dir.path().join("oracle.toml");
    std::fs::write(
        &oracle,
        r#"
[[entry]]
levi = [1, 2, 3, 4, 5, 6, 7]
relative = [1]
kind = "exact"
value = 9
provenance = "externally computed relative modality"
"#,
    )
    .unwrap();
    // B7 with I = {1}: the Borel shortcut fails (B7 reducible), and the
    // oracle settles the full Levi class with 9 >= 7
    let report = run_structured(&[
        "classify",
        "parabolic",
        "--type",
        "B7",
        "--levi",
        "1",
        "--oracle",
        oracle.to_str().unwrap(),
    ]);
    assert_eq!(report.result["status"], "reducible");

    // an oracle claiming a wrong Borel-case value is a hard input error
    let bad = dir.path().join("bad.toml");
    std::fs::write(
        &bad,
        r#"
[[entry]]
levi = [1, 2]
relative = []
kind = "exact"
value = 5
provenance = "wrong on purpose"
"#,
    )
    .unwrap();
    let output = run(&[
        "classify",
        "parabolic",
        "--type",
        "B7",
        "--levi",
        "1",
        "--oracle",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("conflicts with the modality table"), "{stderr}");

    // overrides reach the classifier: declare A16 exactly 16 and A16
    // becomes a definite reducible without the lower-bound caveat
    let overrides = dir.path().join("overrides.toml");
    std::fs::write(
        &overrides,
        r#"
[[entry]]
family = "A"
rank = 16
kind = "exact"
value = 16
provenance = "hypothetical exact value"
"#,
    )
    .unwrap();
    let report = run_structured(&[
        "classify",
        "borel",
        "--type",
        "A16",
        "--overrides",
        overrides.to_str().unwrap(),
    ]);
    assert_eq!(report.result["status"], "reducible");
    assert_eq!(report.result["witness"]["modality"]["kind"], "exact");
}

#[test]
fn distinct_diagnostics_and_exit_codes() {
    // unknown type string
    let output = run(&["classify", "borel", "--type", "Z9"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("cannot parse"));

    // malformed subset
    let output = run(&["classify", "parabolic", "--type", "A5", "--levi", "1,x"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("malformed levi index"));

    // subset out of range
    let output = run(&["classify", "parabolic", "--type", "A5", "--levi", "9"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("invalid for component"));

    // budget refusal via the environment override
    let output = Command::new(env!("CARGO_BIN_EXE_commvar"))
        .args(["verify", "count", "--n", "3", "--q", "3", "--support", "borel"])
        .env("COMMVAR_BUDGET_OPS", "10")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("budget refusal"));

    // config file sets the budget too; the env var wins over it
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.toml");
    std::fs::write(&config, "budget_ops = 10\n").unwrap();
    let output = run(&[
        "verify",
        "count",
        "--n",
        "3",
        "--q",
        "3",
        "--support",
        "borel",
        "--config",
        config.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
    let output = Command::new(env!("CARGO_BIN_EXE_commvar"))
        .args([
            "verify", "count", "--n", "3", "--q", "3", "--support", "borel", "--config",
            config.to_str().unwrap(),
        ])
        .env("COMMVAR_BUDGET_OPS", "99999999999")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
}

#[test]
fn timings_flag_controls_runtime_field() {
    let without = run(&["classify", "borel", "--type", "B6", "--format", "structured"]);
    assert!(!String::from_utf8_lossy(&without.stdout).contains("runtime_ms"));
    let with = run(&[
        "classify", "borel", "--type", "B6", "--format", "structured", "--timings",
    ]);
    assert!(String::from_utf8_lossy(&with.stdout).contains("runtime_ms"));
}
