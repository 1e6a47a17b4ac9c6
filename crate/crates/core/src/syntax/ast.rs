use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::source::{Language, SourceFile, SourceRange};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AstRoot {
    pub file: Arc<SourceFile>,
    pub package_name: Option<String>,
    pub imports: Vec<ImportDecl>,
    pub declarations: Vec<Declaration>,
    /// References that live outside any declaration (imports, file annotations).
    pub file_refs: Vec<Reference>,
    /// `@file:JvmName("...")` override for the Kotlin file facade class.
    pub jvm_name: Option<String>,
}

impl AstRoot {
    pub fn language(&self) -> Language {
        self.file.language()
    }

    pub fn path(&self) -> &str {
        self.file.path()
    }

    pub fn package(&self) -> &str {
        self.package_name.as_deref().unwrap_or("")
    }

    /// Looks up a declaration (not a parameter) by qualified name.
    pub fn find_declaration(&self, qualified_name: &str) -> Option<&Declaration> {
        fn walk<'a>(decls: &'a [Declaration], q: &str) -> Option<&'a Declaration> {
            for d in decls {
                if d.qualified_name == q {
                    return Some(d);
                }
                if q.starts_with(d.qualified_name.as_str()) {
                    if let Some(found) = walk(&d.children, q) {
                        return Some(found);
                    }
                }
            }
            None
        }
        walk(&self.declarations, qualified_name)
    }

    /// The chain of declarations from the outermost to the one named
    /// `qualified_name`. Empty when no such declaration exists.
    pub fn declaration_chain(&self, qualified_name: &str) -> Vec<&Declaration> {
        fn walk<'a>(decls: &'a [Declaration], q: &str, out: &mut Vec<&'a Declaration>) -> bool {
            for d in decls {
                if d.qualified_name == q {
                    out.push(d);
                    return true;
                }
                let prefix = q.len() > d.qualified_name.len()
                    && q.starts_with(d.qualified_name.as_str())
                    && q.as_bytes()[d.qualified_name.len()] == b'.';
                if prefix {
                    out.push(d);
                    if walk(&d.children, q, out) {
                        return true;
                    }
                    out.pop();
                }
            }
            false
        }
        let mut out = Vec::new();
        walk(&self.declarations, qualified_name, &mut out);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImportDecl {
    pub target: String,
    pub is_wildcard: bool,
    pub alias: Option<String>,
    /// Java `import static`.
    pub is_static: bool,
    pub range: SourceRange,
}

impl ImportDecl {
    /// The name this import binds in the file: the alias, or the last segment.
    /// Wildcards bind nothing.
    pub fn bound_name(&self) -> Option<&str> {
        if self.is_wildcard {
            return None;
        }
        self.alias.as_deref().or_else(|| self.target.rsplit('.').next())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DeclKind {
    Class,
    Interface,
    Object,
    Enum,
    Function,
    Property,
    Field,
    Parameter,
    /// Annotation type declaration (`@interface`, `annotation class`).
    Annotation,
}

impl DeclKind {
    pub fn is_type(self) -> bool {
        matches!(self, DeclKind::Class | DeclKind::Interface | DeclKind::Object | DeclKind::Enum | DeclKind::Annotation)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeRef {
    /// Raw dotted name with generic arguments dropped (`java.util.List`, `JUser`).
    pub name: String,
    pub nullable: bool,
    pub range: SourceRange,
}

impl TypeRef {
    pub fn simple_name(&self) -> &str {
        self.name.rsplit('.').next().unwrap_or(&self.name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationUse {
    pub name: String,
    pub range: SourceRange,
}

impl AnnotationUse {
    pub fn simple_name(&self) -> &str {
        self.name.rsplit('.').next().unwrap_or(&self.name)
    }
}

/// A local variable seen in a function body.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalVar {
    pub name: String,
    pub declared_type: Option<TypeRef>,
    /// Dotted call/access chain of the initializer, when it is a single chain.
    pub origin: Option<String>,
    pub range: SourceRange,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Declaration {
    pub kind: DeclKind,
    pub name: String,
    pub qualified_name: String,
    pub modifiers: BTreeSet<String>,
    pub annotations: Vec<AnnotationUse>,
    pub params: Vec<Declaration>,
    pub declared_type: Option<TypeRef>,
    /// Receiver type of a Kotlin extension function or property.
    pub receiver_type: Option<TypeRef>,
    pub supertypes: Vec<TypeRef>,
    pub is_single_expression: bool,
    pub has_explicit_return_type: bool,
    pub is_constructor: bool,
    /// Parameter with a default value (Kotlin).
    pub has_default: bool,
    /// The expression body / initializer when it is exactly one call or
    /// access chain, as identifier segments.
    pub defining_chain: Option<Vec<String>>,
    pub locals: Vec<LocalVar>,
    pub body_refs: Vec<Reference>,
    pub children: Vec<Declaration>,
    pub name_range: SourceRange,
    pub range: SourceRange,
}

impl Declaration {
    pub fn new(kind: DeclKind, name: impl Into<String>, qualified_name: impl Into<String>) -> Self {
        Declaration {
            kind,
            name: name.into(),
            qualified_name: qualified_name.into(),
            modifiers: BTreeSet::new(),
            annotations: Vec::new(),
            params: Vec::new(),
            declared_type: None,
            receiver_type: None,
            supertypes: Vec::new(),
            is_single_expression: false,
            has_explicit_return_type: false,
            is_constructor: false,
            has_default: false,
            defining_chain: None,
            locals: Vec::new(),
            body_refs: Vec::new(),
            children: Vec::new(),
            name_range: SourceRange::default(),
            range: SourceRange::default(),
        }
    }

    pub fn has_modifier(&self, m: &str) -> bool {
        self.modifiers.contains(m)
    }

    pub fn is_private(&self) -> bool {
        self.has_modifier("private")
    }

    pub fn param_count(&self) -> usize {
        self.params.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RefKind {
    Call,
    FieldAccess,
    TypeUse,
    ObjectCreation,
    SuperType,
    AnnotationUse,
    ImportUse,
}

/// Syntactic position of a type use; drives dependency classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TypePosition {
    None,
    Parameter,
    Return,
    LocalVar,
    /// Declared type of a Kotlin property.
    Property,
    /// Declared type of a Java field.
    Field,
    /// Receiver of a Kotlin extension.
    ExtensionReceiver,
    /// Generic arguments, casts, `is`/`as`, `throws`, class literals.
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Confidence {
    Normal,
    /// Identifier harvested token-wise from a construct the parser does not
    /// model. Only used to keep unused-import detection conservative.
    Low,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reference {
    pub kind: RefKind,
    pub name_path: Vec<String>,
    pub receiver_origin: Option<String>,
    pub position: TypePosition,
    pub confidence: Confidence,
    pub range: SourceRange,
    pub enclosing_decl: String,
}

impl Reference {
    pub fn head(&self) -> &str {
        &self.name_path[0]
    }

    pub fn last(&self) -> &str {
        self.name_path.last().map(String::as_str).unwrap_or("")
    }

    pub fn dotted(&self) -> String {
        self.name_path.join(".")
    }
}
