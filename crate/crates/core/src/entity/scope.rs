use std::collections::BTreeMap;

use crate::source::Language;
use crate::syntax::AstRoot;

/// Collection interfaces Kotlin imports implicitly from `kotlin.collections`.
const KOTLIN_COLLECTIONS: &[&str] = &[
    "Collection",
    "Iterable",
    "List",
    "Map",
    "Set",
    "MutableCollection",
    "MutableIterable",
    "MutableList",
    "MutableMap",
    "MutableSet",
];

/// Names visible at file level: package, imports and the Kotlin file facade.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileScope {
    pub path: String,
    pub language: Language,
    pub package: String,
    /// Bound name (alias or last segment) to import target.
    pub explicit: BTreeMap<String, String>,
    pub wildcards: Vec<String>,
    /// Qualified name of the JVM class holding this file's top-level
    /// Kotlin declarations.
    pub facade: Option<String>,
}

impl FileScope {
    pub fn of(ast: &AstRoot) -> Self {
        let mut explicit = BTreeMap::new();
        let mut wildcards = Vec::new();
        for imp in &ast.imports {
            match imp.bound_name() {
                Some(name) => {
                    explicit.entry(name.to_string()).or_insert_with(|| imp.target.clone());
                }
                None => wildcards.push(imp.target.clone()),
            }
        }
        let facade = (ast.language() == Language::Kotlin).then(|| {
            let name = ast.jvm_name.clone().unwrap_or_else(|| facade_name(ast.file.stem()));
            qualify(ast.package(), &name)
        });
        FileScope {
            path: ast.path().to_string(),
            language: ast.language(),
            package: ast.package().to_string(),
            explicit,
            wildcards,
            facade,
        }
    }

    /// Qualified name for a simple type name that no project entity claims.
    pub fn default_type(&self, name: &str) -> Option<String> {
        if self.language == Language::Kotlin && KOTLIN_COLLECTIONS.contains(&name) {
            Some(format!("kotlin.collections.{name}"))
        } else {
            None
        }
    }
}

/// `items.kt` compiles to `ItemsKt`.
pub fn facade_name(stem: &str) -> String {
    let mut chars = stem.chars();
    let mut out = String::new();
    if let Some(c) = chars.next() {
        out.extend(c.to_uppercase());
    }
    out.push_str(chars.as_str());
    out.push_str("Kt");
    out
}

pub(crate) fn qualify(prefix: &str, name: &str) -> String {
    if prefix.is_empty() {
        name.to_string()
    } else {
        format!("{prefix}.{name}")
    }
}
