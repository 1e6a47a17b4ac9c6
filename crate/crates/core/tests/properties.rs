mod common;

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Duration;

use kjlint_core::deps::{export_graph_json, extract_dependencies, parse_graph_json};
use kjlint_core::detect::{
    detect_excessive_params, detect_implicit_single_expr, detect_internal_exposure, detect_unused_imports, DetectorConfig,
    Finding, Related, Severity, Smell,
};
use kjlint_core::entity::build_symbol_index;
use kjlint_core::pipeline::{compute_stats, AnalysisResult, GraphSummary};
use kjlint_core::report::ReportDocument;
use kjlint_core::source::{Language, SourceFile, SourceRange};
use kjlint_core::syntax::{extract_declarations, extract_references, parse_source, AstRoot, DeclKind};
use proptest::prelude::*;

fn corpus() -> Vec<(String, String)> {
    let root = common::fixtures();
    common::walk(&root)
        .into_iter()
        .map(|p| (p.strip_prefix(&root).unwrap().to_string_lossy().replace('\\', "/"), std::fs::read_to_string(&p).unwrap()))
        .collect()
}

fn parse(path: &str, text: &str) -> Option<AstRoot> {
    parse_source(Arc::new(SourceFile::new(path, text)?)).ok()
}

fn within(r: &SourceRange, len: usize) -> bool {
    r.start <= r.end && r.end <= len && r.line >= 1 && r.col >= 1
}

/// A fixture file with a random span of lines removed and a random cut.
fn mutated() -> impl Strategy<Value = (String, String)> {
    let files = corpus();
    (0..files.len(), any::<prop::sample::Index>(), any::<prop::sample::Index>(), 0usize..4, any::<bool>()).prop_map(
        move |(i, from, cut, span, truncate)| {
            let (path, text) = &files[i];
            let mut lines: Vec<&str> = text.lines().collect();
            let start = from.index(lines.len().max(1));
            let end = (start + span).min(lines.len());
            lines.drain(start..end);
            let mut t = lines.join("\n");
            if truncate {
                let mut at = cut.index(t.len() + 1);
                while !t.is_char_boundary(at) {
                    at -= 1;
                }
                t.truncate(at);
            }
            (path.clone(), t)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn parsing_is_deterministic_and_ranges_are_sound((path, text) in mutated()) {
        let file = Arc::new(SourceFile::new(path.as_str(), text.as_str()).unwrap());
        let a = parse_source(file.clone());
        let b = parse_source(file);
        prop_assert_eq!(&a, &b);
        if let Ok(ast) = a {
            let len = text.len();
            for d in extract_declarations(&ast) {
                prop_assert!(within(&d.range, len) && within(&d.name_range, len));
                let inside = d.range.start <= d.name_range.start && d.name_range.end <= d.range.end;
                prop_assert!(inside || d.is_constructor, "{:?}", d.qualified_name);
                let written = d.name_range.slice(&text);
                prop_assert!(written == d.name || d.name == "Companion" || d.is_constructor, "{:?} vs {:?}", written, d.name);
            }
            for r in extract_references(&ast) {
                prop_assert!(within(&r.range, len));
                prop_assert!(!r.name_path.is_empty());
            }
        }
    }

    #[test]
    fn detectors_are_idempotent(mask in prop::collection::vec(any::<bool>(), 64)) {
        let cfg = DetectorConfig::default();
        let asts: Vec<AstRoot> = corpus()
            .iter()
            .zip(mask.iter().cycle())
            .filter(|(_, keep)| **keep)
            .filter_map(|((p, t), _)| parse(p, t))
            .collect();
        let files: Vec<&AstRoot> = asts.iter().collect();
        let run = || {
            let index = build_symbol_index(files.iter().copied());
            let mut out: Vec<Finding> = Vec::new();
            for a in &files {
                out.extend(detect_unused_imports(a, &cfg));
                out.extend(detect_excessive_params(a, &cfg));
                out.extend(detect_implicit_single_expr(a, &cfg));
            }
            out.extend(detect_internal_exposure(&index, &files, &cfg));
            (out, export_graph_json(&extract_dependencies(&index, &files)))
        };
        prop_assert_eq!(run(), run());
    }
}

fn range() -> impl Strategy<Value = SourceRange> {
    (0usize..500, 0usize..50, 1u32..200, 1u32..80).prop_map(|(start, len, line, col)| SourceRange { start, end: start + len, line, col })
}

fn text() -> impl Strategy<Value = String> {
    "[a-zA-Z0-9 ./:\"\\\\\u{e9}\n-]{1,24}"
}

fn finding() -> impl Strategy<Value = Finding> {
    (
        prop::sample::select(Smell::ALL.to_vec()),
        prop::sample::select(vec![Severity::Info, Severity::Warning, Severity::Error]),
        text(),
        range(),
        text(),
        prop::collection::vec(text(), 0..3),
        prop::collection::vec((text(), range(), text()), 0..3),
    )
        .prop_map(|(smell, severity, file, range, message, entities, related)| Finding {
            smell,
            severity,
            file,
            range,
            message,
            entities,
            related: related.into_iter().map(|(file, range, note)| Related { file, range, note }).collect(),
        })
}

proptest! {
    #[test]
    fn report_json_round_trips(findings in prop::collection::vec(finding(), 0..6), java in any::<bool>()) {
        let mut languages = BTreeSet::from([Language::Kotlin]);
        if java {
            languages.insert(Language::Java);
        }
        let result = AnalysisResult {
            languages,
            stats: compute_stats(&findings),
            findings,
            graph: Default::default(),
            graph_summary: GraphSummary { nodes: 3, edges: 2 },
            skipped_files: vec![],
            duration: Duration::ZERO,
        };
        let doc = ReportDocument::from_result(&result);
        let json = doc.to_json();
        let back = ReportDocument::parse_json(&json).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(back.to_json(), json);
    }
}

#[test]
fn graph_export_round_trips_on_fixtures() {
    let asts: Vec<AstRoot> = corpus().iter().filter_map(|(p, t)| parse(p, t)).collect();
    let files: Vec<&AstRoot> = asts.iter().collect();
    let index = build_symbol_index(files.iter().copied());
    let bytes = export_graph_json(&extract_dependencies(&index, &files));
    assert_eq!(export_graph_json(&parse_graph_json(&bytes).unwrap()), bytes);
    assert!(files.iter().all(|a| extract_declarations(a).iter().all(|d| d.kind != DeclKind::Parameter)));
}
