//! Single-file detectors.

use std::collections::BTreeSet;

use super::{DetectorConfig, Finding, Smell};
use crate::source::Language;
use crate::syntax::{extract_declarations, extract_references, AstRoot, DeclKind, RefKind};

/// Non-wildcard imports whose bound name appears in no reference path or
/// annotation of the file.
pub fn detect_unused_imports(ast: &AstRoot, cfg: &DetectorConfig) -> Vec<Finding> {
    let mut used: BTreeSet<&str> = BTreeSet::new();
    for r in extract_references(ast) {
        if r.kind == RefKind::ImportUse {
            continue;
        }
        used.extend(r.name_path.iter().map(String::as_str));
    }
    for d in extract_declarations(ast) {
        for a in &d.annotations {
            used.insert(a.simple_name());
            used.extend(a.name.split('.'));
        }
    }
    ast.imports
        .iter()
        .filter_map(|imp| {
            let bound = imp.bound_name()?;
            if used.contains(bound) {
                return None;
            }
            let mut f = Finding::new(Smell::UnusedImport, cfg, ast.path(), imp.range, format!("unused import {}", imp.target));
            f.entities.push(imp.target.clone());
            Some(f)
        })
        .collect()
}

pub fn detect_excessive_params(ast: &AstRoot, cfg: &DetectorConfig) -> Vec<Finding> {
    extract_declarations(ast)
        .into_iter()
        .filter(|d| d.kind == DeclKind::Function && d.param_count() > cfg.max_params)
        .map(|d| {
            let what = if d.is_constructor { "constructor" } else { "function" };
            let mut f = Finding::new(
                Smell::ExcessiveParams,
                cfg,
                ast.path(),
                d.name_range,
                format!("{what} {} has {} parameters (max {})", d.name, d.param_count(), cfg.max_params),
            );
            f.entities.push(d.qualified_name.clone());
            f
        })
        .collect()
}

pub fn detect_implicit_single_expr(ast: &AstRoot, cfg: &DetectorConfig) -> Vec<Finding> {
    if ast.language() != Language::Kotlin {
        return Vec::new();
    }
    extract_declarations(ast)
        .into_iter()
        .filter(|d| {
            d.kind == DeclKind::Function
                && !d.is_constructor
                && d.is_single_expression
                && !d.has_explicit_return_type
                && !d.is_private()
        })
        .map(|d| {
            let mut f = Finding::new(
                Smell::ImplicitSingleExprFunction,
                cfg,
                ast.path(),
                d.name_range,
                format!("single-expression function {} has no explicit return type", d.name),
            );
            f.entities.push(d.qualified_name.clone());
            f
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::source::SourceFile;
    use crate::syntax::parse_source;

    fn ast(path: &str, src: &str) -> AstRoot {
        parse_source(Arc::new(SourceFile::new(path, src).unwrap())).unwrap()
    }

    #[test]
    fn unused_import_cases() {
        let cfg = DetectorConfig::default();
        let unused = ast("A.java", "import java.util.List;\nclass A { int x; }");
        let f = detect_unused_imports(&unused, &cfg);
        assert_eq!(f.len(), 1);
        assert!(f[0].range.slice(unused.file.text()).contains("java.util.List"));
        let used = ast("B.java", "import java.util.List;\nclass B { List x; }");
        assert!(detect_unused_imports(&used, &cfg).is_empty());
        let wild = ast("C.java", "import java.util.*;\nclass C { }");
        assert!(detect_unused_imports(&wild, &cfg).is_empty());
    }

    #[test]
    fn kotlin_alias_and_annotation_uses() {
        let cfg = DetectorConfig::default();
        let a = ast("a.kt", "import x.Y as Z\nimport x.Ann\n@Ann\nclass A(val z: Z)");
        assert!(detect_unused_imports(&a, &cfg).is_empty());
        let b = ast("b.kt", "import x.Y as Z\nclass B(val y: Y)");
        assert_eq!(detect_unused_imports(&b, &cfg).len(), 1);
    }

    #[test]
    fn param_threshold() {
        let cfg = DetectorConfig::default();
        let seven = ast("a.kt", "fun f(a: Int, b: Int, c: Int, d: Int, e: Int, f: Int, g: Int = 0) {}");
        assert_eq!(detect_excessive_params(&seven, &cfg).len(), 1);
        let six = ast("b.kt", "fun f(a: Int, b: Int, c: Int, d: Int, e: Int, f: Int) {}");
        assert!(detect_excessive_params(&six, &cfg).is_empty());
        let two = ast(
            "C.java",
            "class C { void a(int a, int b, int c, int d, int e, int f, int g) {} void b(int a, int b, int c, int d, int e, int f, int g) {} }",
        );
        let found = detect_excessive_params(&two, &cfg);
        assert_eq!(found.len(), 2);
        assert!(found.iter().all(|f| f.file == "C.java"));
    }

    #[test]
    fn implicit_single_expression() {
        let cfg = DetectorConfig::default();
        let count = |src: &str| detect_implicit_single_expr(&ast("a.kt", src), &cfg).len();
        assert_eq!(count("fun f(x: Int) = x + 1"), 1);
        assert_eq!(count("fun f(x: Int): Int = x + 1"), 0);
        assert_eq!(count("private fun f() = 1"), 0);
        assert_eq!(count("class A { fun g() = 2 }"), 1);
    }
}
