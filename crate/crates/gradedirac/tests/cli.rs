use std::path::PathBuf;
use std::process::{Command, Output};

fn write_doc(name: &str, src: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("cli_{name}.gdl"));
    std::fs::write(&path, src).unwrap();
    path
}

fn gradedirac(args: &[&str], doc: &PathBuf) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gradedirac"))
        .args(args)
        .arg(doc)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const PASSING: &str =
    "chart R3 (x, y, z);\nform a2 w = x*dx^dy + dx^dz;\ncheck closed w;\ncompute d w;\n";

#[test]
fn passing_document_exits_zero() {
    let doc = write_doc("pass", PASSING);
    let o = gradedirac(&["check"], &doc);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("check closed"));
    assert!(out.ends_with("pass: 2 passed, 0 failed, 0 inconclusive\n"));
}

#[test]
fn non_closed_graph_fails_with_witness() {
    let doc = write_doc(
        "fail",
        "chart R3 (x, y, z);\nform a2 w = z*dx^dy;\ncheck involutive graph(w);\n",
    );
    let o = gradedirac(&["check"], &doc);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains(": fail"));
    assert!(out.contains("    generators = "), "{out}");
    assert!(out.contains("    defect = (0, dz)"), "{out}");
}

#[test]
fn exhausted_search_is_inconclusive() {
    let doc = write_doc(
        "inconclusive",
        "chart R3 (x, y, z);\npoisson S = multisymplectic((1 + x**2)*dx^dy^dz);\ncheck hamiltonian z*dy in S bound 2;\n",
    );
    let o = gradedirac(&["check"], &doc);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    assert!(stdout(&o).contains("inconclusive"));
}

#[test]
fn parse_error_is_positioned() {
    let doc = write_doc("parse", "chart R2 (x, y);\nform a2 w = dx^;\n");
    let o = gradedirac(&["check"], &doc);
    assert_eq!(o.status.code(), Some(64));
    let err = stderr(&o);
    assert!(err.contains("cli_parse.gdl:2:"), "{err}");
    assert!(err.contains("expected"), "{err}");
    assert!(err.trim_end().ends_with("(error)"), "{err}");
    assert!(o.stdout.is_empty());
}

#[test]
fn runtime_error_is_positioned() {
    let doc = write_doc(
        "runtime",
        "chart R2 (x, y);\npoisson S = multisymplectic(x*dx^dy);\ncheck hamiltonian dx in S;\n",
    );
    let o = gradedirac(&["check"], &doc);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("cli_runtime.gdl:2:1:"), "{err}");
    assert!(err.trim_end().ends_with("(runtime error)"), "{err}");
}

#[test]
fn structured_output_is_json() {
    let doc = write_doc("json", PASSING);
    let o = gradedirac(&["check", "--format", "structured", "--seed", "7"], &doc);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["cases"], 100);
    assert_eq!(v["status"], "pass");
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 2);
    for r in results {
        for key in [
            "line",
            "column",
            "kind",
            "directive",
            "status",
            "summary",
            "witnesses",
        ] {
            assert!(r.get(key).is_some(), "missing {key} in {r}");
        }
        assert!(r.get("timing_ms").is_none());
    }
    assert_eq!(results[0]["kind"], "check");
    assert_eq!(results[1]["kind"], "compute");
}

#[test]
fn compute_mode_skips_checks() {
    let doc = write_doc("compute", PASSING);
    let o = gradedirac(&["compute", "--format", "structured"], &doc);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let kinds: Vec<_> = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["kind"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(kinds, ["compute"]);
}

#[test]
fn timing_is_opt_in() {
    let doc = write_doc("timing", PASSING);
    let o = gradedirac(&["check", "--format", "structured", "--timing"], &doc);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for r in v["results"].as_array().unwrap() {
        assert!(r["timing_ms"].is_u64());
    }
    let text = stdout(&gradedirac(&["check", "--timing"], &doc));
    assert!(text.contains("time = "));
}

#[test]
fn reports_are_deterministic_per_seed() {
    let doc = write_doc(
        "seeded",
        "chart R2 (x, y);\ncheck sn-suite dim 2 cases 5;\n",
    );
    let run = |seed: &str| {
        stdout(&gradedirac(
            &["check", "--seed", seed, "--format", "structured"],
            &doc,
        ))
    };
    assert_eq!(run("3"), run("3"));
    let a: serde_json::Value = serde_json::from_str(&run("3")).unwrap();
    let b: serde_json::Value = serde_json::from_str(&run("4")).unwrap();
    assert_eq!(a["seed"], 3);
    assert_eq!(b["seed"], 4);
    assert_eq!(a["status"], "pass");
    assert_eq!(b["status"], "pass");
}
