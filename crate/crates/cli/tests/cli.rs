use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use qgames_cli::fixtures::Expectation;
use qgames_cli::{parse_problem, serialize_problem, FixtureId, Format, Outcome, Report};
use qgames_core::mw::mw_output_game;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn qgames(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgames"))
        .args(args)
        .output()
        .unwrap()
}

fn qgames_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qgames"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json_payoffs(v: &Value) -> Vec<Vec<(f64, f64)>> {
    v["payoffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|row| {
            row.as_array()
                .unwrap()
                .iter()
                .map(|p| (p[0].as_f64().unwrap(), p[1].as_f64().unwrap()))
                .collect()
        })
        .collect()
}

#[test]
fn transform_diagram7_table() {
    let out = qgames(&[
        "transform",
        "--input",
        fixture("diagram7.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "mw output game (2x2):");
    assert_eq!(lines[2], "I  (3, 2)  (3, 2)");
    assert_eq!(lines[3], "X  (2, 3)  (2, 3)");
}

#[test]
fn json_output_carries_computed_numbers() {
    let path = fixture("diagram7.json");
    let out = qgames(&[
        "transform",
        "--format",
        "json",
        "--input",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let doc = parse_problem(&std::fs::read(&path).unwrap()).unwrap();
    let g = mw_output_game(&doc.game, &doc.states_or_default()[0]).unwrap();
    let expected: Vec<Vec<(f64, f64)>> = g
        .rows()
        .iter()
        .map(|r| r.iter().map(|p| (p.p1, p.p2)).collect())
        .collect();
    assert_eq!(json_payoffs(&v["game"]), expected);
    assert_eq!(v["game"]["row_labels"], serde_json::json!(["I", "X"]));
}

#[test]
fn reproduce_every_fixture() {
    for id in FixtureId::ALL {
        let out = qgames(&["reproduce", id.name()]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}: {}",
            id.name(),
            stdout(&out)
        );
        assert!(stdout(&out).contains("\nmatch\n"), "{}", id.name());
        let out = qgames(&["reproduce", id.name(), "--format", "json"]);
        let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(v["status"], "match");
        assert_eq!(v["mismatches"], serde_json::json!([]));
    }
}

#[test]
fn reproduce_riskgame_lists_payoff_dominant_equilibrium() {
    let out = qgames(&["reproduce", "riskgame", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let eqs = v["pure_equilibria"].as_array().unwrap();
    let qx = eqs
        .iter()
        .find(|e| {
            e["support1"] == serde_json::json!(["Q1*X"])
                && e["support2"] == serde_json::json!(["Q1*X"])
        })
        .expect("(Q1*X, Q1*X) listed");
    assert_eq!(qx["payoff"], serde_json::json!([5.0, 5.0]));
    assert!(!eqs
        .iter()
        .any(|e| e["support1"] == serde_json::json!(["Q1*I"])
            && e["support2"] == serde_json::json!(["Q1*I"])));
}

#[test]
fn mismatch_exit_status() {
    // The coordination-game expectation does not describe the risk game.
    let exp = Expectation::parse(FixtureId::Bos0011.expected()).unwrap();
    let risk = Expectation::parse(FixtureId::Riskgame.expected()).unwrap();
    let mismatches = exp.mismatches(&risk.game, 1e-9);
    assert!(!mismatches.is_empty());
    let outcome = Outcome {
        report: Report {
            json: Value::Null,
            table: String::new(),
        },
        format: Format::Table,
        mismatches,
    };
    assert_eq!(outcome.exit_code(), 3);
}

#[test]
fn solve_one_by_one() {
    let out = qgames_stdin(
        &["solve", "--format", "json"],
        r#"{"game": {"payoffs": [[[2, -1]]]}}"#,
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let eqs = v["equilibria"].as_array().unwrap();
    assert_eq!(eqs.len(), 1);
    assert_eq!(eqs[0]["kind"], "pure");
    assert_eq!(eqs[0]["s1"], serde_json::json!([1.0]));
    assert_eq!(eqs[0]["payoff"], serde_json::json!([2.0, -1.0]));
}

#[test]
fn solve_mixed_equilibrium_table() {
    let doc = r#"{"game": {"payoffs": [[[1, -1], [-1, 1]], [[-1, 1], [1, -1]]], "row_labels": ["H", "T"], "col_labels": ["H", "T"]}}"#;
    let out = qgames_stdin(&["solve"], doc);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("equilibria: 1\n"), "{text}");
    assert!(
        text.contains("mixed  (0.5 H + 0.5 T, 0.5 H + 0.5 T)  payoff (0, 0)"),
        "{text}"
    );
}

#[test]
fn solve_selected_scheme() {
    let path = fixture("bos-01-10.json");
    let out = qgames(&[
        "solve",
        "--scheme",
        "emw",
        "--max-support",
        "1",
        "--format",
        "json",
        "--input",
        path.to_str().unwrap(),
    ]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["scheme"], "emw");
    assert_eq!(v["max_support"], 1);
    assert!(v["equilibria"]
        .as_array()
        .unwrap()
        .iter()
        .any(|e| e["support1"] == serde_json::json!(["Q1*I"])
            && e["support2"] == serde_json::json!(["Q1*X"])));
}

#[test]
fn empty_payoffs_schema_error() {
    let out = qgames_stdin(&["solve"], r#"{"game": {"payoffs": []}}"#);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).contains("SchemaError at /game/payoffs:"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn unnormalized_state_error() {
    let doc = r#"{"game": {"payoffs": [[[1, 1], [0, 0]]]}, "state": [[1, 0], [1, 0]]}"#;
    let out = qgames_stdin(&["transform"], doc);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).contains("NormalizationError at /state"),
        "{}",
        stderr(&out)
    );
    // Accepted once the tolerance admits it.
    let out = qgames_stdin(&["transform", "--tolerance", "1.5"], doc);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn computation_errors_exit_two() {
    // The classifier handles 2x2 games only.
    let doc = r#"{"game": {"payoffs": [[[1, 1], [0, 0], [2, 2]]]}}"#;
    let out = qgames_stdin(&["classify"], doc);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    // The refined scheme needs explicit parameters for an entangled state.
    let out = qgames(&[
        "transform",
        "--scheme",
        "refined",
        "--input",
        fixture("bos-00-11.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(qgames(&["reproduce", "nope"]).status.code(), Some(1));
    assert_eq!(
        qgames(&["solve", "--tolerance", "-1"]).status.code(),
        Some(1)
    );
    assert_eq!(
        qgames(&["solve", "--input", "/nonexistent/file.json"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(qgames(&["--help"]).status.code(), Some(0));
}

#[test]
fn classify_fixtures() {
    let classical = r#"{"game": {"payoffs": [[[5, 3], [1, 1]], [[1, 1], [3, 5]]]}}"#;
    let out = qgames_stdin(&["classify", "--format", "json"], classical);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["classification"], "Classical");
    for name in [
        "bos-00-11.json",
        "bos-01-10.json",
        "riskgame.json",
        "diagram7.json",
    ] {
        let out = qgames(&[
            "classify",
            "--format",
            "json",
            "--input",
            fixture(name).to_str().unwrap(),
        ]);
        let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(v["classification"], "NonClassical", "{name}");
        assert!(
            v["witness"]["source"]
                .as_str()
                .unwrap()
                .starts_with("mandatory"),
            "{name}"
        );
    }
}

#[test]
fn emw_command_reports_quotient() {
    let out = qgames_stdin(
        &["emw", "--format", "json"],
        r#"{"game": {"payoffs": [[[5, 3], [1, 1]], [[1, 1], [3, 5]]]}}"#,
    );
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json_payoffs(&v["game"]).len(), 4);
    assert_eq!(
        json_payoffs(&v["quotient"]),
        vec![vec![(5.0, 3.0), (1.0, 1.0)], vec![(1.0, 1.0), (3.0, 5.0)]]
    );
    assert_eq!(
        v["quotient"]["row_labels"],
        serde_json::json!(["C*I/Q1*I", "C*X/Q1*X"])
    );
}

#[test]
fn document_options_select_format() {
    let doc = r#"{"game": {"payoffs": [[[1, 2]]]}, "options": {"format": "json"}}"#;
    let out = qgames_stdin(&["solve"], doc);
    assert!(serde_json::from_str::<Value>(&stdout(&out)).is_ok());
    let out = qgames_stdin(&["solve", "--format", "table"], doc);
    assert!(stdout(&out).starts_with("input game (1x1):"));
}

#[test]
fn parse_serialize_round_trip() {
    for id in FixtureId::ALL {
        let doc = parse_problem(id.problem().as_bytes()).unwrap();
        let text = serialize_problem(&doc);
        assert_eq!(
            parse_problem(text.as_bytes()).unwrap(),
            doc,
            "{}",
            id.name()
        );

        // The serialized document drives the binary to the same output.
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(text.as_bytes()).unwrap();
        let a = qgames(&[
            "transform",
            "--format",
            "json",
            "--input",
            file.path().to_str().unwrap(),
        ]);
        let original = fixture(&format!("{}.json", id.name()));
        let b = qgames(&[
            "transform",
            "--format",
            "json",
            "--input",
            original.to_str().unwrap(),
        ]);
        assert_eq!(stdout(&a), stdout(&b), "{}", id.name());
    }
}

#[test]
fn multiple_states_for_emw() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let doc = format!(
        r#"{{"game": {{"payoffs": [[[5, 3], [1, 1]], [[1, 1], [3, 5]]]}},
            "states": [[[{h}, 0], [0, 0], [0, 0], [{h}, 0]], [[0, 0], [{h}, 0], [{h}, 0], [0, 0]]]}}"#
    );
    let out = qgames_stdin(&["emw", "--format", "json"], &doc);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["game"]["row_labels"].as_array().unwrap().len(), 6);
    // MW needs exactly one state.
    assert_eq!(qgames_stdin(&["transform"], &doc).status.code(), Some(1));
}
