//! Typed dependency graph between project files.

mod json;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entity::{ResolvedTarget, Resolver, SymbolIndex};
use crate::source::{Language, SourceRange};
use crate::syntax::{extract_references, AstRoot, Confidence, DeclKind, RefKind, Reference, TypePosition};

pub use json::{export_graph_json, parse_graph_json, GraphJsonError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DependencyType {
    Access,
    Call,
    Create,
    Extend,
    Extension,
    #[serde(rename = "LVT")]
    Lvt,
    #[serde(rename = "PT")]
    Pt,
    Implement,
    Import,
    Parameter,
    Return,
}

impl DependencyType {
    pub const ALL: [DependencyType; 11] = [
        DependencyType::Access,
        DependencyType::Call,
        DependencyType::Create,
        DependencyType::Extend,
        DependencyType::Extension,
        DependencyType::Lvt,
        DependencyType::Pt,
        DependencyType::Implement,
        DependencyType::Import,
        DependencyType::Parameter,
        DependencyType::Return,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DependencyType::Access => "Access",
            DependencyType::Call => "Call",
            DependencyType::Create => "Create",
            DependencyType::Extend => "Extend",
            DependencyType::Extension => "Extension",
            DependencyType::Lvt => "LVT",
            DependencyType::Pt => "PT",
            DependencyType::Implement => "Implement",
            DependencyType::Import => "Import",
            DependencyType::Parameter => "Parameter",
            DependencyType::Return => "Return",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.as_str() == s)
    }
}

impl fmt::Display for DependencyType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyEdge {
    pub from_entity: String,
    pub to_entity: String,
    pub from_file: String,
    pub to_file: String,
    pub dep_type: DependencyType,
    pub location: SourceRange,
    pub expression: String,
    pub cross_language: bool,
}

impl DependencyEdge {
    fn sort_key(&self) -> (&str, u32, u32, &str, &str, DependencyType, &str) {
        (
            &self.from_file,
            self.location.line,
            self.location.col,
            &self.to_file,
            &self.to_entity,
            self.dep_type,
            &self.from_entity,
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DependencyGraph {
    pub nodes: BTreeMap<String, Language>,
    pub edges: Vec<DependencyEdge>,
}

impl DependencyGraph {
    pub fn new(nodes: BTreeMap<String, Language>, mut edges: Vec<DependencyEdge>) -> Self {
        edges.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()).then_with(|| a.expression.cmp(&b.expression)));
        DependencyGraph { nodes, edges }
    }

    /// File-level projection of the edges.
    pub fn adjacency(&self) -> BTreeMap<&str, BTreeSet<&str>> {
        let mut adj: BTreeMap<&str, BTreeSet<&str>> = self.nodes.keys().map(|k| (k.as_str(), BTreeSet::new())).collect();
        for e in &self.edges {
            adj.entry(&e.from_file).or_default().insert(&e.to_file);
        }
        adj
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

/// Dependency type for a resolved reference, or `None` when the combination
/// has no type.
pub fn classify_edge(r: &Reference, target: &ResolvedTarget, from_language: Language) -> Option<DependencyType> {
    let e = target.entity;
    let kotlin_to_java = from_language == Language::Kotlin && e.language == Language::Java;
    match r.kind {
        RefKind::Call | RefKind::ObjectCreation if e.kind.is_type() => Some(DependencyType::Create),
        RefKind::Call | RefKind::ObjectCreation => (e.kind == DeclKind::Function).then_some(DependencyType::Call),
        RefKind::FieldAccess => match e.kind {
            DeclKind::Field | DeclKind::Property => Some(DependencyType::Access),
            DeclKind::Function => Some(DependencyType::Call),
            _ => None,
        },
        RefKind::SuperType => match e.kind {
            DeclKind::Interface => Some(DependencyType::Implement),
            k if k.is_type() => Some(DependencyType::Extend),
            _ => None,
        },
        RefKind::ImportUse => Some(DependencyType::Import),
        RefKind::AnnotationUse => None,
        RefKind::TypeUse => {
            if !e.kind.is_type() {
                return None;
            }
            match r.position {
                TypePosition::Parameter => Some(DependencyType::Parameter),
                TypePosition::Return => Some(DependencyType::Return),
                TypePosition::LocalVar => Some(DependencyType::Lvt),
                TypePosition::Property if kotlin_to_java => Some(DependencyType::Pt),
                TypePosition::ExtensionReceiver if kotlin_to_java => Some(DependencyType::Extension),
                _ => None,
            }
        }
    }
}

/// Builds the graph over `files`. Low-confidence references and references
/// into the referencing file itself produce no edges.
pub fn extract_dependencies<'a>(index: &SymbolIndex, files: &[&'a AstRoot]) -> DependencyGraph {
    let nodes = files.iter().map(|f| (f.path().to_string(), f.language())).collect();
    let edges: Vec<DependencyEdge> = files
        .par_iter()
        .flat_map_iter(|ast| {
            let resolver = Resolver::new(index, ast);
            let mut out = Vec::new();
            for r in extract_references(ast) {
                if r.confidence == Confidence::Low {
                    continue;
                }
                let Some(target) = resolver.resolve(r) else { continue };
                if target.entity.file == ast.path() {
                    continue;
                }
                let Some(dep_type) = classify_edge(r, &target, ast.language()) else { continue };
                let from_entity = if r.enclosing_decl.is_empty() { ast.path().to_string() } else { r.enclosing_decl.clone() };
                out.push(DependencyEdge {
                    from_entity,
                    to_entity: target.entity.qualified_name.clone(),
                    from_file: ast.path().to_string(),
                    to_file: target.entity.file.clone(),
                    dep_type,
                    location: r.range,
                    expression: ast.file.line_text(r.range.line).trim().to_string(),
                    cross_language: target.cross_language,
                });
            }
            out
        })
        .collect();
    DependencyGraph::new(nodes, edges)
}
