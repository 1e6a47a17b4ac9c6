//! Detectors that need both languages.

use std::collections::BTreeMap;

use super::{DetectorConfig, Finding, Related, Smell};
use crate::entity::{nullability_of, Entity, Nullability, Resolver, SymbolIndex, Visibility};
use crate::source::{Language, SourceRange};
use crate::syntax::{extract_declarations, extract_references, AstRoot, Confidence, DeclKind, RefKind, Reference, TypePosition};

const JAVA_PRIMITIVES: &[&str] = &["boolean", "byte", "char", "short", "int", "long", "float", "double", "void"];

/// A Kotlin declaration whose type is inferred from a single call or access
/// chain. Collected per file; checked once all files are indexed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlatformHint {
    pub file: String,
    pub declaration: String,
    pub name: String,
    pub name_range: SourceRange,
    pub chain: Reference,
}

pub fn platform_type_hints(ast: &AstRoot) -> Vec<PlatformHint> {
    if ast.language() != Language::Kotlin {
        return Vec::new();
    }
    let mut out = Vec::new();
    for d in extract_declarations(ast) {
        if d.is_private() || d.is_constructor {
            continue;
        }
        let inferred = match d.kind {
            DeclKind::Function => d.is_single_expression && !d.has_explicit_return_type,
            DeclKind::Property => d.declared_type.is_none(),
            _ => false,
        };
        let Some(chain) = d.defining_chain.as_ref().filter(|c| inferred && !c.is_empty()) else { continue };
        let reference = d
            .body_refs
            .iter()
            .find(|r| matches!(r.kind, RefKind::Call | RefKind::FieldAccess) && &r.name_path == chain)
            .cloned()
            .unwrap_or_else(|| synthetic(RefKind::FieldAccess, chain.clone(), d.range, &d.qualified_name));
        out.push(PlatformHint {
            file: ast.path().to_string(),
            declaration: d.qualified_name.clone(),
            name: d.name.clone(),
            name_range: d.name_range,
            chain: reference,
        });
    }
    out
}

fn synthetic(kind: RefKind, name_path: Vec<String>, range: SourceRange, enclosing: &str) -> Reference {
    Reference {
        kind,
        name_path,
        receiver_origin: None,
        position: TypePosition::None,
        confidence: Confidence::Normal,
        range,
        enclosing_decl: enclosing.to_string(),
    }
}

fn by_path<'f>(asts: &[&'f AstRoot]) -> BTreeMap<&'f str, &'f AstRoot> {
    asts.iter().map(|a| (a.path(), *a)).collect()
}

fn related_to(e: &Entity) -> Related {
    Related { file: e.file.clone(), range: e.name_range, note: e.qualified_name.clone() }
}

/// Kotlin declarations whose inferred type comes from an unannotated Java
/// function or field.
pub fn detect_platform_type(
    index: &SymbolIndex,
    asts: &[&AstRoot],
    hints: &[PlatformHint],
    cfg: &DetectorConfig,
) -> Vec<Finding> {
    let files = by_path(asts);
    let recognized = cfg.nullability();
    let mut out = Vec::new();
    for h in hints {
        let Some(ast) = files.get(h.file.as_str()) else { continue };
        let Some(target) = Resolver::new(index, ast).resolve(&h.chain) else { continue };
        let e = target.entity;
        let candidate = e.language == Language::Java
            && matches!(e.kind, DeclKind::Function | DeclKind::Field)
            && !e.is_constructor
            && e.declared_type_name.as_deref().is_some_and(|t| !JAVA_PRIMITIVES.contains(&t));
        if !candidate || nullability_of(e, &recognized) != Nullability::Unannotated {
            continue;
        }
        let mut f = Finding::new(
            Smell::PlatformType,
            cfg,
            &h.file,
            h.name_range,
            format!("{} exposes platform type from unannotated Java {}", h.name, e.qualified_name),
        );
        f.entities = vec![h.declaration.clone(), e.qualified_name.clone()];
        f.related.push(related_to(e));
        out.push(f);
    }
    out
}

/// Java calls of mutator methods on read-only Kotlin collections.
pub fn detect_immutable_collection_mutation(index: &SymbolIndex, asts: &[&AstRoot], cfg: &DetectorConfig) -> Vec<Finding> {
    let mut out = Vec::new();
    for ast in asts.iter().filter(|a| a.language() == Language::Java) {
        let resolver = Resolver::new(index, ast);
        let readonly_source = |path: Vec<String>, r: &Reference| {
            let probe = synthetic(RefKind::Call, path, r.range, &r.enclosing_decl);
            resolver.resolve(&probe).map(|t| t.entity).filter(|e| {
                e.language == Language::Kotlin
                    && e.declared_type_name.as_ref().is_some_and(|t| cfg.readonly_collection_types.contains(t))
            })
        };
        for r in extract_references(ast) {
            let n = r.name_path.len();
            if r.kind != RefKind::Call || r.confidence == Confidence::Low || n < 2 || !cfg.mutator_methods.contains(r.last()) {
                continue;
            }
            let direct = readonly_source(r.name_path[..n - 1].to_vec(), r);
            let source = direct.or_else(|| {
                let origin = r.receiver_origin.as_ref().filter(|_| n == 2)?;
                readonly_source(origin.split('.').map(str::to_string).collect(), r)
            });
            let Some(e) = source else { continue };
            let mut f = Finding::new(
                Smell::ImmutableCollectionMutation,
                cfg,
                ast.path(),
                r.range,
                format!("{}() mutates read-only Kotlin {} returned by {}", r.last(), e.simple_type_name().unwrap_or("collection"), e.qualified_name),
            );
            f.entities.push(e.qualified_name.clone());
            f.related.push(related_to(e));
            out.push(f);
        }
    }
    out
}

/// Java references to `internal` Kotlin declarations or their members.
pub fn detect_internal_exposure(index: &SymbolIndex, asts: &[&AstRoot], cfg: &DetectorConfig) -> Vec<Finding> {
    let mut out = Vec::new();
    for ast in asts.iter().filter(|a| a.language() == Language::Java) {
        let resolver = Resolver::new(index, ast);
        for r in extract_references(ast) {
            if r.confidence == Confidence::Low {
                continue;
            }
            let Some(t) = resolver.resolve(r) else { continue };
            let e = t.entity;
            if e.language != Language::Kotlin {
                continue;
            }
            let internal = std::iter::once(e).chain(index.owners(e)).find(|x| x.visibility == Visibility::Internal);
            let Some(holder) = internal else { continue };
            let mut f = Finding::new(
                Smell::InternalExposure,
                cfg,
                ast.path(),
                r.range,
                format!("Java uses {} which is internal to its Kotlin module via {}", e.qualified_name, holder.qualified_name),
            );
            f.entities.push(e.qualified_name.clone());
            f.related.push(related_to(holder));
            out.push(f);
        }
    }
    out
}

/// Kotlin-only annotations applied in Java sources.
pub fn detect_kotlin_jvm_annotation_in_java(asts: &[&AstRoot], cfg: &DetectorConfig) -> Vec<Finding> {
    let mut out = Vec::new();
    for ast in asts.iter().filter(|a| a.language() == Language::Java) {
        let explicit: BTreeMap<&str, &str> = ast
            .imports
            .iter()
            .filter(|i| !i.is_static)
            .filter_map(|i| Some((i.bound_name()?, i.target.as_str())))
            .collect();
        let jvm_wildcard = ast.imports.iter().any(|i| i.is_wildcard && !i.is_static && i.target == "kotlin.jvm");
        for r in extract_references(ast).into_iter().filter(|r| r.kind == RefKind::AnnotationUse) {
            let written = r.dotted();
            let resolved = if r.name_path.len() > 1 {
                Some(written.clone())
            } else {
                explicit.get(r.head()).map(|t| t.to_string())
            };
            let name = match resolved {
                Some(q) if q.starts_with("kotlin.") => q,
                Some(_) => continue,
                None if jvm_wildcard && cfg.kotlin_jvm_annotations.contains(r.head()) => format!("kotlin.jvm.{}", r.head()),
                None => continue,
            };
            let mut f = Finding::new(
                Smell::KotlinJvmAnnotationInJava,
                cfg,
                ast.path(),
                r.range,
                format!("Kotlin annotation @{name} has no effect in Java"),
            );
            f.entities.push(name);
            out.push(f);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::entity::build_symbol_index;
    use crate::source::SourceFile;
    use crate::syntax::parse_source;

    fn ast(path: &str, src: &str) -> AstRoot {
        parse_source(Arc::new(SourceFile::new(path, src).unwrap())).unwrap()
    }

    fn platform(java: &str, kotlin: &str) -> Vec<Finding> {
        let j = ast("p/JUser.java", java);
        let k = ast("p/K.kt", kotlin);
        let files = [&j, &k];
        let index = build_symbol_index(files);
        let hints = platform_type_hints(&k);
        detect_platform_type(&index, &files, &hints, &DetectorConfig::default())
    }

    #[test]
    fn platform_type_rule() {
        let plain = "package p; public class JUser { public String getName() { return null; } }";
        let found = platform(plain, "package p\nfun name(u: JUser) = u.getName()");
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].related[0].note, "p.JUser.getName");
        let annotated = "package p; public class JUser { @Nullable public String getName() { return null; } }";
        assert!(platform(annotated, "package p\nfun name(u: JUser) = u.getName()").is_empty());
        assert!(platform(plain, "package p\nfun name(u: JUser): String = u.getName()").is_empty());
        assert!(platform(plain, "package p\nprivate fun name(u: JUser) = u.getName()").is_empty());
        let primitive = "package p; public class JUser { public int getAge() { return 1; } }";
        assert!(platform(primitive, "package p\nfun age(u: JUser) = u.getAge()").is_empty());
    }

    fn mutation(kotlin: &str, java: &str) -> Vec<Finding> {
        let k = ast("p/Items.kt", kotlin);
        let j = ast("p/Use.java", java);
        let files = [&k, &j];
        let index = build_symbol_index(files);
        detect_immutable_collection_mutation(&index, &files, &DetectorConfig::default())
    }

    #[test]
    fn collection_mutation_rule() {
        let src = "package p; class Use { void m() { ItemsKt.items().add(\"x\"); } }";
        let f = mutation("package p\nfun items(): List<String> = listOf()", src);
        assert_eq!(f.len(), 1);
        assert!(f[0].range.slice(src).contains("add"));
        assert!(mutation(
            "package p\nfun items(): MutableList<String> = mutableListOf()",
            "package p; class Use { void m() { ItemsKt.items().add(\"x\"); } }"
        )
        .is_empty());
        let hop = mutation(
            "package p\nfun items(): List<String> = listOf()",
            "package p; import java.util.List; class Use { void m() { List<String> l = ItemsKt.items(); l.clear(); } }",
        );
        assert_eq!(hop.len(), 1);
        assert!(hop[0].message.starts_with("clear()"));
    }

    fn exposure(kotlin: &str, java: &str) -> usize {
        let k = ast("p/S.kt", kotlin);
        let j = ast("p/Use.java", java);
        let files = [&k, &j];
        let index = build_symbol_index(files);
        detect_internal_exposure(&index, &files, &DetectorConfig::default()).len()
    }

    #[test]
    fn internal_exposure_rule() {
        assert_eq!(exposure("package p\ninternal class Secret", "package p; class Use { Object m() { return new Secret(); } }"), 1);
        assert_eq!(exposure("package p\nclass Open", "package p; class Use { Object m() { return new Open(); } }"), 0);
        assert_eq!(
            exposure("package p\ninternal class Secret { fun peek() = 1 }", "package p; class Use { int m(Secret s) { return s.peek(); } }"),
            2
        );
        let k = ast("p/S.kt", "package p\ninternal class Secret");
        let k2 = ast("p/T.kt", "package p\nfun t() = Secret()");
        let files = [&k, &k2];
        let index = build_symbol_index(files);
        assert!(detect_internal_exposure(&index, &files, &DetectorConfig::default()).is_empty());
    }

    #[test]
    fn jvm_annotation_rule() {
        let cfg = DetectorConfig::default();
        let count = |path: &str, src: &str| detect_kotlin_jvm_annotation_in_java(&[&ast(path, src)], &cfg).len();
        assert_eq!(count("A.java", "import kotlin.jvm.JvmStatic;\nclass A { @JvmStatic void m() {} }"), 1);
        assert_eq!(count("a.kt", "import kotlin.jvm.JvmStatic\nobject A { @JvmStatic fun m() {} }"), 0);
        assert_eq!(count("A.java", "class A { @JvmStatic void m() {} }"), 0);
        assert_eq!(count("A.java", "import kotlin.jvm.*;\nclass A { @JvmField int x; @Override public String toString() { return \"\"; } }"), 1);
        assert_eq!(count("A.java", "class A { @kotlin.jvm.JvmOverloads void m() {} }"), 1);
    }
}
