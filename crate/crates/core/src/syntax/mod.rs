//! Kotlin and Java front ends: subset parsers producing [`AstRoot`] plus the
//! flattening helpers used by the later stages.

mod ast;
mod body;
mod java;
mod kotlin;
mod lexer;
mod tokens;
mod types;

use std::sync::Arc;

use thiserror::Error;

use crate::source::{Language, SourceFile};

pub use ast::{
    AnnotationUse, AstRoot, Confidence, DeclKind, Declaration, ImportDecl, LocalVar, RefKind, Reference, TypePosition,
    TypeRef,
};
pub use lexer::{tokenize, TokKind, Token};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{path}:{line}:{col}: expected {expected}")]
pub struct ParseError {
    pub path: String,
    pub line: u32,
    pub col: u32,
    pub expected: String,
}

#[derive(Debug, Default)]
pub(crate) struct FileSyntax {
    pub package: Option<String>,
    pub imports: Vec<ImportDecl>,
    pub declarations: Vec<Declaration>,
    pub file_refs: Vec<Reference>,
    pub jvm_name: Option<String>,
}

pub(crate) fn qualify(prefix: &str, name: &str) -> String {
    if prefix.is_empty() {
        name.to_string()
    } else {
        format!("{prefix}.{name}")
    }
}

pub fn parse_source(file: Arc<SourceFile>) -> Result<AstRoot, ParseError> {
    let toks = tokenize(file.text(), file.language()).map_err(|e| {
        let (line, col) = file.line_index().position(file.text(), e.offset);
        ParseError { path: file.path().to_string(), line, col, expected: e.message.replace("unterminated ", "end of ") }
    })?;
    let syntax = {
        let t = tokens::Toks::lenient(&file, toks);
        let parsed = match file.language() {
            Language::Kotlin => kotlin::parse(&t),
            Language::Java => java::parse(&t),
        };
        // report whichever problem comes first in the file
        match (parsed, t.bracket_error) {
            (Err(e), Some(b)) => return Err(if (b.line, b.col) < (e.line, e.col) { b } else { e }),
            (Err(e), None) | (Ok(_), Some(e)) => return Err(e),
            (Ok(s), None) => s,
        }
    };
    Ok(AstRoot {
        file,
        package_name: syntax.package,
        imports: syntax.imports,
        declarations: syntax.declarations,
        file_refs: syntax.file_refs,
        jvm_name: syntax.jvm_name,
    })
}

/// Pre-order flattening of all declarations except parameters.
pub fn extract_declarations(ast: &AstRoot) -> Vec<&Declaration> {
    fn walk<'a>(decls: &'a [Declaration], out: &mut Vec<&'a Declaration>) {
        for d in decls {
            out.push(d);
            walk(&d.children, out);
        }
    }
    let mut out = Vec::new();
    walk(&ast.declarations, &mut out);
    out
}

/// File-level references followed by every declaration's references in
/// pre-order. Parameter references come right after their function's own.
pub fn extract_references(ast: &AstRoot) -> Vec<&Reference> {
    let mut out: Vec<&Reference> = ast.file_refs.iter().collect();
    for d in extract_declarations(ast) {
        out.extend(d.body_refs.iter());
        for p in &d.params {
            out.extend(p.body_refs.iter());
        }
    }
    out
}
