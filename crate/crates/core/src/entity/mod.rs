//! Project-wide symbol index over both languages and cross-language
//! reference resolution.

mod resolve;
mod scope;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::source::{Language, SourceRange};
use crate::syntax::{extract_declarations, AstRoot, DeclKind, Declaration};

pub use resolve::{resolve_reference, ResolvedTarget, Resolver, Via};
pub use scope::{facade_name, FileScope};

use scope::qualify;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Visibility {
    Public,
    Internal,
    Protected,
    Private,
    /// Java default access.
    PackagePrivate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Nullability {
    AnnotatedNullable,
    AnnotatedNotNull,
    Unannotated,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entity {
    pub qualified_name: String,
    pub name: String,
    pub kind: DeclKind,
    pub language: Language,
    pub visibility: Visibility,
    pub file: String,
    pub range: SourceRange,
    pub name_range: SourceRange,
    pub nullability: Nullability,
    /// Declared type (return type for functions), qualified where the
    /// project or the file's imports allow it.
    pub declared_type_name: Option<String>,
    pub declared_nullable: bool,
    pub param_count: usize,
    pub owner: Option<String>,
    pub supertypes: Vec<String>,
    pub receiver_type_name: Option<String>,
    /// Annotation names, qualified through explicit imports.
    pub annotations: Vec<String>,
    pub modifiers: BTreeSet<String>,
    pub is_constructor: bool,
}

impl Entity {
    pub fn simple_type_name(&self) -> Option<&str> {
        self.declared_type_name.as_deref().map(|n| n.rsplit('.').next().unwrap_or(n))
    }
}

/// Nullability annotation names. Entries without a dot match by simple name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NullabilityAnnotations {
    pub nullable: BTreeSet<String>,
    pub notnull: BTreeSet<String>,
}

const NULLABILITY_PACKAGES: &[&str] =
    &["org.jetbrains.annotations", "javax.annotation", "androidx.annotation", "jakarta.annotation"];

impl Default for NullabilityAnnotations {
    fn default() -> Self {
        let expand = |names: &[&str]| {
            let mut out = BTreeSet::new();
            for n in names {
                out.insert(n.to_string());
                for p in NULLABILITY_PACKAGES {
                    out.insert(format!("{p}.{n}"));
                }
            }
            out
        };
        NullabilityAnnotations { nullable: expand(&["Nullable", "CheckForNull"]), notnull: expand(&["NotNull", "NonNull"]) }
    }
}

fn annotation_matches(set: &BTreeSet<String>, name: &str) -> bool {
    if set.contains(name) {
        return true;
    }
    let simple = name.rsplit('.').next().unwrap_or(name);
    set.iter().any(|s| !s.contains('.') && s == simple)
}

/// Nullability status of a Java function or field.
pub fn nullability_of(entity: &Entity, recognized: &NullabilityAnnotations) -> Nullability {
    let applicable =
        entity.language == Language::Java && matches!(entity.kind, DeclKind::Function | DeclKind::Field | DeclKind::Parameter);
    if !applicable {
        return Nullability::NotApplicable;
    }
    if entity.annotations.iter().any(|a| annotation_matches(&recognized.nullable, a)) {
        Nullability::AnnotatedNullable
    } else if entity.annotations.iter().any(|a| annotation_matches(&recognized.notnull, a)) {
        Nullability::AnnotatedNotNull
    } else {
        Nullability::Unannotated
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndexDiagnostic {
    DuplicateSymbol { qualified_name: String, file: String, first_file: String },
}

#[derive(Debug, Clone, Default)]
pub struct SymbolIndex {
    entities: Vec<Entity>,
    by_qualified_name: BTreeMap<String, usize>,
    by_simple_name: BTreeMap<String, Vec<usize>>,
    per_file: BTreeMap<String, Vec<usize>>,
    children: HashMap<String, Vec<usize>>,
    /// Kotlin file facade class to its top-level members.
    facades: BTreeMap<String, Vec<usize>>,
    /// `Facade.member` to the member's canonical entity.
    facade_aliases: BTreeMap<String, usize>,
    /// Extension receiver type to extension functions and properties.
    extensions: HashMap<String, Vec<usize>>,
    scopes: BTreeMap<String, FileScope>,
    diagnostics: Vec<IndexDiagnostic>,
}

impl SymbolIndex {
    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    pub fn entities(&self) -> impl Iterator<Item = &Entity> {
        self.entities.iter()
    }

    pub fn get(&self, qualified_name: &str) -> Option<&Entity> {
        self.by_qualified_name.get(qualified_name).map(|&i| &self.entities[i])
    }

    pub fn by_simple_name(&self, name: &str) -> Vec<&Entity> {
        self.by_simple_name.get(name).map(|v| v.iter().map(|&i| &self.entities[i]).collect()).unwrap_or_default()
    }

    pub fn in_file(&self, path: &str) -> Vec<&Entity> {
        self.per_file.get(path).map(|v| v.iter().map(|&i| &self.entities[i]).collect()).unwrap_or_default()
    }

    pub fn files(&self) -> impl Iterator<Item = &str> {
        self.per_file.keys().map(String::as_str)
    }

    pub fn qualified_names(&self) -> impl Iterator<Item = &str> {
        self.by_qualified_name.keys().map(String::as_str)
    }

    pub fn children_of(&self, qualified_name: &str) -> Vec<&Entity> {
        self.children.get(qualified_name).map(|v| v.iter().map(|&i| &self.entities[i]).collect()).unwrap_or_default()
    }

    pub fn scope(&self, path: &str) -> Option<&FileScope> {
        self.scopes.get(path)
    }

    pub fn diagnostics(&self) -> &[IndexDiagnostic] {
        &self.diagnostics
    }

    pub fn is_facade(&self, qualified_name: &str) -> bool {
        self.facades.contains_key(qualified_name)
    }

    pub fn facade_members(&self, facade: &str) -> Vec<&Entity> {
        self.facades.get(facade).map(|v| v.iter().map(|&i| &self.entities[i]).collect()).unwrap_or_default()
    }

    /// Canonical entity for a `Facade.member` alias.
    pub fn facade_alias(&self, alias: &str) -> Option<&Entity> {
        self.facade_aliases.get(alias).map(|&i| &self.entities[i])
    }

    pub fn extensions_of(&self, receiver: &str) -> Vec<&Entity> {
        self.extensions.get(receiver).map(|v| v.iter().map(|&i| &self.entities[i]).collect()).unwrap_or_default()
    }

    /// Owner chain from the entity's direct owner outwards.
    pub fn owners(&self, entity: &Entity) -> Vec<&Entity> {
        let mut out = Vec::new();
        let mut cur = entity.owner.as_deref();
        while let Some(q) = cur {
            match self.get(q) {
                Some(e) => {
                    out.push(e);
                    cur = e.owner.as_deref();
                }
                None => break,
            }
        }
        out
    }

    fn type_entity(&self, qualified_name: &str) -> Option<&Entity> {
        self.get(qualified_name).filter(|e| e.kind.is_type())
    }

    /// Finds a nested type `name` inside `owner` or its supertypes.
    fn nested_type(&self, owner: &str, name: &str, depth: usize) -> Option<&Entity> {
        if depth > 8 {
            return None;
        }
        if let Some(e) = self.type_entity(&qualify(owner, name)) {
            return Some(e);
        }
        let o = self.type_entity(owner)?;
        o.supertypes.iter().find_map(|s| self.nested_type(s, name, depth + 1))
    }

    /// Qualifies a type name as written in `scope`, with `enclosing` the
    /// qualified names of the surrounding types, innermost last.
    pub fn qualify_type_name(&self, scope: &FileScope, raw: &str, enclosing: &[String]) -> String {
        let (head, rest) = match raw.split_once('.') {
            Some((h, r)) => (h, Some(r)),
            None => (raw, None),
        };
        let join = |base: &str| match rest {
            Some(r) => format!("{base}.{r}"),
            None => base.to_string(),
        };
        for owner in enclosing.iter().rev() {
            if let Some(e) = self.nested_type(owner, head, 0) {
                return join(&e.qualified_name);
            }
        }
        if let Some(target) = scope.explicit.get(head) {
            return join(target);
        }
        let same = qualify(&scope.package, head);
        if self.type_entity(&same).is_some() {
            return join(&same);
        }
        for w in &scope.wildcards {
            let q = qualify(w, head);
            if self.type_entity(&q).is_some() {
                return join(&q);
            }
        }
        if rest.is_none() {
            if let Some(d) = scope.default_type(head) {
                return d;
            }
        }
        raw.to_string()
    }
}

fn visibility(lang: Language, d: &Declaration) -> Visibility {
    if d.has_modifier("private") {
        Visibility::Private
    } else if d.has_modifier("protected") {
        Visibility::Protected
    } else if lang == Language::Kotlin && d.has_modifier("internal") {
        Visibility::Internal
    } else if lang == Language::Java && d.has_modifier("package-private") {
        Visibility::PackagePrivate
    } else {
        Visibility::Public
    }
}

/// Builds the index. Files are processed in path order; the first
/// declaration of a qualified name wins. Function overloads and members
/// sharing a name with another member of the same owner are dropped
/// silently; any other repeat is reported as `DuplicateSymbol`.
pub fn build_symbol_index<'a>(files: impl IntoIterator<Item = &'a AstRoot>) -> SymbolIndex {
    let mut files: Vec<&AstRoot> = files.into_iter().collect();
    files.sort_by(|a, b| a.path().cmp(b.path()));
    let mut index = SymbolIndex::default();
    // (entity index, declaring file, enclosing type names)
    let mut pending: Vec<(usize, usize, Vec<String>)> = Vec::new();
    let mut sources: Vec<(&Declaration, usize)> = Vec::new();
    for (fi, ast) in files.iter().enumerate() {
        let scope = FileScope::of(ast);
        let lang = ast.language();
        let path = ast.path().to_string();
        index.per_file.entry(path.clone()).or_default();
        let mut stack: Vec<(&Declaration, Option<String>)> =
            ast.declarations.iter().rev().map(|d| (d, None)).collect();
        while let Some((d, owner)) = stack.pop() {
            for c in d.children.iter().rev() {
                stack.push((c, Some(d.qualified_name.clone())));
            }
            if let Some(&first) = index.by_qualified_name.get(&d.qualified_name) {
                let prev = &index.entities[first];
                let same_owner_member = prev.file == path && prev.owner == owner && owner.is_some();
                let overload = prev.file == path && prev.kind == DeclKind::Function && d.kind == DeclKind::Function;
                if !same_owner_member && !overload {
                    index.diagnostics.push(IndexDiagnostic::DuplicateSymbol {
                        qualified_name: d.qualified_name.clone(),
                        file: path.clone(),
                        first_file: prev.file.clone(),
                    });
                }
                continue;
            }
            let enclosing: Vec<String> = {
                let mut v = Vec::new();
                let mut cur = owner.clone();
                while let Some(q) = cur {
                    let e = index.get(&q);
                    if e.is_some_and(|e| e.kind.is_type()) {
                        v.push(q.clone());
                    }
                    cur = e.and_then(|e| e.owner.clone());
                }
                if d.kind.is_type() {
                    v.insert(0, d.qualified_name.clone());
                }
                v.reverse();
                v
            };
            let annotations = d
                .annotations
                .iter()
                .map(|a| match a.name.split_once('.') {
                    None => scope.explicit.get(&a.name).cloned().unwrap_or_else(|| a.name.clone()),
                    Some(_) => a.name.clone(),
                })
                .collect();
            let entity = Entity {
                qualified_name: d.qualified_name.clone(),
                name: d.name.clone(),
                kind: d.kind,
                language: lang,
                visibility: visibility(lang, d),
                file: path.clone(),
                range: d.range,
                name_range: d.name_range,
                nullability: Nullability::NotApplicable,
                declared_type_name: None,
                declared_nullable: d.declared_type.as_ref().is_some_and(|t| t.nullable),
                param_count: d.param_count(),
                owner: owner.clone(),
                supertypes: Vec::new(),
                receiver_type_name: None,
                annotations,
                modifiers: d.modifiers.clone(),
                is_constructor: d.is_constructor,
            };
            let idx = index.entities.len();
            index.entities.push(entity);
            index.by_qualified_name.insert(d.qualified_name.clone(), idx);
            index.by_simple_name.entry(d.name.clone()).or_default().push(idx);
            index.per_file.get_mut(&path).unwrap().push(idx);
            if let Some(o) = &owner {
                index.children.entry(o.clone()).or_default().push(idx);
            } else if let Some(f) = &scope.facade {
                if matches!(d.kind, DeclKind::Function | DeclKind::Property) {
                    index.facades.entry(f.clone()).or_default().push(idx);
                    index.facade_aliases.entry(qualify(f, &d.name)).or_insert(idx);
                }
            }
            pending.push((idx, fi, enclosing));
            sources.push((d, fi));
        }
        index.scopes.insert(path, scope);
    }
    // second pass: qualify type names now that every entity is known
    let defaults = NullabilityAnnotations::default();
    for ((idx, fi, enclosing), (d, _)) in pending.into_iter().zip(sources) {
        let scope = index.scopes[files[fi].path()].clone();
        let declared = d.declared_type.as_ref().map(|t| index.qualify_type_name(&scope, &t.name, &enclosing));
        let supertypes: Vec<String> =
            d.supertypes.iter().map(|t| index.qualify_type_name(&scope, &t.name, &enclosing)).collect();
        let receiver = d.receiver_type.as_ref().map(|t| index.qualify_type_name(&scope, &t.name, &enclosing));
        let declared = if d.is_constructor { index.entities[idx].owner.clone() } else { declared };
        let e = &mut index.entities[idx];
        e.declared_type_name = declared;
        e.supertypes = supertypes;
        e.receiver_type_name = receiver.clone();
        let n = nullability_of(e, &defaults);
        e.nullability = n;
        if let Some(r) = receiver {
            index.extensions.entry(r).or_default().push(idx);
        }
    }
    index
}

/// Sum of declarations over all files, the size the index would have
/// without duplicates.
pub fn declaration_count<'a>(files: impl IntoIterator<Item = &'a AstRoot>) -> usize {
    files.into_iter().map(|a| extract_declarations(a).len()).sum()
}
