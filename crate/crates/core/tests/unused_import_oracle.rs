mod common;
#[path = "common/unused_oracle.rs"]
mod unused_oracle;

use std::collections::BTreeSet;

use unused_oracle::oracle_unused;
use std::sync::Arc;

use kjlint_core::detect::{detect_unused_imports, DetectorConfig};
use kjlint_core::source::SourceFile;
use kjlint_core::syntax::parse_source;
use proptest::prelude::*;

fn detector_unused(path: &str, src: &str) -> Vec<String> {
    let ast = parse_source(Arc::new(SourceFile::new(path, src).unwrap())).unwrap();
    detect_unused_imports(&ast, &DetectorConfig::default()).into_iter().map(|f| f.entities[0].clone()).collect()
}

#[test]
fn oracle_sanity() {
    assert_eq!(oracle_unused("A.java", "import a.B;\nclass A { // B\n String s = \"B\"; }"), vec!["a.B"]);
    assert!(oracle_unused("A.java", "import a.B;\nclass A { B b; }").is_empty());
    assert!(oracle_unused("a.kt", "import a.B\nval s = \"${B.x}\"").is_empty());
    assert_eq!(oracle_unused("a.kt", "import a.B as C\nval s: B? = null"), vec!["a.B"]);
    assert!(oracle_unused("A.java", "import a.*;\nclass A {}").is_empty());
}

#[test]
fn detector_equals_oracle_on_every_fixture_file() {
    let root = common::fixtures();
    let files = common::walk(&root);
    assert!(files.len() > 20);
    for p in files {
        let rel = p.strip_prefix(&root).unwrap().to_string_lossy().replace('\\', "/");
        let src = std::fs::read_to_string(&p).unwrap();
        assert_eq!(detector_unused(&rel, &src), oracle_unused(&rel, &src), "{rel}");
    }
}

const NAMES: &[&str] = &["Alpha", "Beta", "Gamma", "Delta", "Eps", "helper"];

#[derive(Debug, Clone)]
enum Use {
    Type(usize),
    Call(usize),
    Comment(usize),
    Str(usize),
    Template(usize),
    Annotation(usize),
}

fn uses() -> impl Strategy<Value = Vec<Use>> {
    let n = NAMES.len();
    prop::collection::vec(
        prop_oneof![
            (0..n).prop_map(Use::Type),
            (0..n).prop_map(Use::Call),
            (0..n).prop_map(Use::Comment),
            (0..n).prop_map(Use::Str),
            (0..n).prop_map(Use::Template),
            (0..n).prop_map(Use::Annotation),
        ],
        0..8,
    )
}

fn kotlin_file(imported: &BTreeSet<usize>, uses: &[Use]) -> String {
    let mut s = String::from("package gen\n\n");
    for &i in imported {
        s.push_str(&format!("import lib.{}\n", NAMES[i]));
    }
    s.push_str("\nclass Host {\n");
    for (k, u) in uses.iter().enumerate() {
        let line = match u {
            Use::Type(i) => format!("    val v{k}: {}? = null", NAMES[*i]),
            Use::Call(i) => format!("    fun f{k}(): Int {{ return {}(1) }}", NAMES[*i]),
            Use::Comment(i) => format!("    // {}", NAMES[*i]),
            Use::Str(i) => format!("    val s{k}: String = \"{}\"", NAMES[*i]),
            Use::Template(i) => format!("    val t{k}: String = \"x ${{{}.size}}\"", NAMES[*i]),
            Use::Annotation(i) => format!("    @{}\n    fun a{k}(): Int = 0", NAMES[*i]),
        };
        s.push_str(&line);
        s.push('\n');
    }
    s.push_str("}\n");
    s
}

fn java_file(imported: &BTreeSet<usize>, uses: &[Use]) -> String {
    let mut s = String::from("package gen;\n\n");
    for &i in imported {
        s.push_str(&format!("import lib.{};\n", NAMES[i]));
    }
    s.push_str("\npublic class Host {\n");
    for (k, u) in uses.iter().enumerate() {
        let line = match u {
            Use::Type(i) => format!("    private {} v{k};", NAMES[*i]),
            Use::Call(i) => format!("    int f{k}() {{ return {}.run(); }}", NAMES[*i]),
            Use::Comment(i) => format!("    /* {} */", NAMES[*i]),
            Use::Str(i) | Use::Template(i) => format!("    String s{k} = \"{}\";", NAMES[*i]),
            Use::Annotation(i) => format!("    @{}\n    void a{k}() {{}}", NAMES[*i]),
        };
        s.push_str(&line);
        s.push('\n');
    }
    s.push_str("}\n");
    s
}

proptest! {
    #[test]
    fn detector_equals_oracle_on_generated_files(
        imported in prop::collection::btree_set(0..NAMES.len(), 0..=NAMES.len()),
        uses in uses(),
        kotlin in any::<bool>(),
    ) {
        let (path, src) = if kotlin {
            ("gen/Host.kt", kotlin_file(&imported, &uses))
        } else {
            ("gen/Host.java", java_file(&imported, &uses))
        };
        prop_assert_eq!(detector_unused(path, &src), oracle_unused(path, &src), "{}", src);
    }
}
