use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kjlint"))
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn help_exits_zero_with_option_table() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for row in ["-w, --with", "-p, --prefix", "-d, --outDir", "-f, --format", "-c, --config", "-h, --help"] {
        assert!(text.contains(row), "{row}");
    }
    assert!(text.contains("lang") || text.contains("LANG"));
    assert!(text.contains("srcPath"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [&["kotlin"][..], &["kotlin", ".", "--nope"], &["kotlin", ".", "-f", "xml"], &["kotlin", "/definitely/not/here"]] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"), "{args:?}");
    }
}

#[test]
fn json_report_and_graph_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = run(&["kotlin", s(&fixtures()), "--with", "java", "-f", "json", "-d", s(&out_dir)]);
    assert_eq!(out.status.code(), Some(1), "error-severity findings exist in the corpus");
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["schemaVersion"], 1);
    assert_eq!(report["languages"], serde_json::json!(["java", "kotlin"]));
    assert!(!report["findings"].as_array().unwrap().is_empty());
    let graph: serde_json::Value = serde_json::from_slice(&std::fs::read(out_dir.join("graph.json")).unwrap()).unwrap();
    assert!(!graph["edges"].as_array().unwrap().is_empty());
}

#[test]
fn prefix_and_text_format() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["kotlin", s(&fixtures().join("clean")), "-w", "java", "-p", "run1-", "-d", s(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("run1-report.txt")).unwrap();
    assert!(text.contains("UnusedImport Detected=0 FilesAffected=0"));
    assert!(dir.path().join("run1-graph.json").exists());
}

#[test]
fn stdout_when_no_out_dir() {
    let out = run(&["java", s(&fixtures().join("smells")), "-f", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("info ExcessiveParams j/Legacy.java:9:")));
    assert!(text.contains("KotlinJvmAnnotationInJava Detected=0"));
}

#[test]
fn error_findings_set_exit_one() {
    let out = run(&["java", s(&fixtures().join("one-each")), "-w", "kotlin", "-f", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"severityOverrides": {"KotlinJvmAnnotationInJava": "warning"}}"#).unwrap();
    let out = run(&["java", s(&fixtures().join("one-each")), "-w", "kotlin", "-c", s(&cfg)]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn bad_config_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"maxParams": 0}"#).unwrap();
    let out = run(&["kotlin", s(&fixtures()), "-c", s(&cfg)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("maxParams"));
}

#[test]
fn config_changes_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"maxParams": 5}"#).unwrap();
    let out = run(&["kotlin", s(&fixtures().join("clean")), "-c", s(&cfg)]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("ExcessiveParams Detected=2"), "{text}");
}

#[test]
fn empty_tree_is_a_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["kotlin", s(dir.path())]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no .kt or .java sources"));
}
