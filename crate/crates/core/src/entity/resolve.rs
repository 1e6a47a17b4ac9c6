use std::borrow::Cow;

use serde::{Deserialize, Serialize};

use crate::source::{Language, SourceRange};
use crate::syntax::{AstRoot, DeclKind, Declaration, RefKind, Reference};

use super::scope::qualify;
use super::{Entity, FileScope, SymbolIndex, Visibility};

/// How the first segment of a reference was bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Via {
    ExplicitImport,
    WildcardImport,
    SamePackage,
    QualifiedName,
    /// A local, parameter, or member of an enclosing declaration.
    Scope,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResolvedTarget<'a> {
    pub entity: &'a Entity,
    pub via: Via,
    pub cross_language: bool,
}

#[derive(Debug, Clone, Copy)]
enum Node<'a> {
    Entity(&'a Entity),
    Facade(&'a str),
}

const MAX_DEPTH: usize = 8;

pub fn resolve_reference<'a>(index: &'a SymbolIndex, r: &Reference, from: &AstRoot) -> Option<ResolvedTarget<'a>> {
    Resolver::new(index, from).resolve(r)
}

/// Resolves references of one file. Cheaper than repeated
/// [`resolve_reference`] calls since the file scope is built once.
pub struct Resolver<'a, 'f> {
    index: &'a SymbolIndex,
    ast: &'f AstRoot,
    scope: Cow<'a, FileScope>,
}

impl<'a, 'f> Resolver<'a, 'f> {
    pub fn new(index: &'a SymbolIndex, ast: &'f AstRoot) -> Self {
        let scope = match index.scope(ast.path()) {
            Some(s) => Cow::Borrowed(s),
            None => Cow::Owned(FileScope::of(ast)),
        };
        Resolver { index, ast, scope }
    }

    fn lang(&self) -> Language {
        self.ast.language()
    }

    pub fn resolve(&self, r: &Reference) -> Option<ResolvedTarget<'a>> {
        if r.name_path.is_empty() {
            return None;
        }
        let chain = self.decl_chain(&r.range);
        let found = match r.kind {
            RefKind::ImportUse => self.lookup(&r.name_path.join(".")).map(|n| (n, Via::ExplicitImport)),
            RefKind::TypeUse | RefKind::SuperType | RefKind::AnnotationUse => {
                self.resolve_type(&r.name_path, &chain).filter(|(n, _)| is_type(*n))
            }
            RefKind::ObjectCreation => self
                .resolve_type(&r.name_path, &chain)
                .filter(|(n, _)| is_type(*n))
                .or_else(|| self.resolve_value(&r.name_path, &chain, r.range.start, 0)),
            RefKind::Call | RefKind::FieldAccess => self.resolve_value(&r.name_path, &chain, r.range.start, 0),
        };
        match found? {
            (Node::Entity(entity), via) => {
                Some(ResolvedTarget { entity, via, cross_language: entity.language != self.lang() })
            }
            (Node::Facade(_), _) => None,
        }
    }

    /// Declarations whose ranges contain `range`, outermost first.
    fn decl_chain(&self, range: &SourceRange) -> Vec<&'f Declaration> {
        let mut out = Vec::new();
        let mut level: &'f [Declaration] = &self.ast.declarations;
        while let Some(d) = level.iter().find(|d| d.range.contains(range)) {
            out.push(d);
            level = &d.children;
        }
        out
    }

    fn enclosing_types(&self, chain: &[&Declaration]) -> Vec<String> {
        chain.iter().filter(|d| d.kind.is_type()).map(|d| d.qualified_name.clone()).collect()
    }

    fn lookup(&self, qualified_name: &str) -> Option<Node<'a>> {
        if let Some(e) = self.index.get(qualified_name) {
            return Some(Node::Entity(e));
        }
        if let Some(e) = self.index.facade_alias(qualified_name) {
            return Some(Node::Entity(e));
        }
        let (f, _) = self.index.facades.get_key_value(qualified_name)?;
        Some(Node::Facade(f.as_str()))
    }

    /// File-level binding of a simple name. `Some(None)` means the name is
    /// bound by an explicit import of something outside the project.
    fn top_level(&self, head: &str) -> Option<Option<(Node<'a>, Via)>> {
        if let Some(target) = self.scope.explicit.get(head) {
            return Some(self.lookup(target).map(|n| (n, Via::ExplicitImport)));
        }
        if let Some(n) = self.lookup(&qualify(&self.scope.package, head)) {
            return Some(Some((n, Via::SamePackage)));
        }
        for w in &self.scope.wildcards {
            if let Some(n) = self.lookup(&qualify(w, head)) {
                return Some(Some((n, Via::WildcardImport)));
            }
        }
        None
    }

    /// Longest qualified-name prefix of `path`; returns the node and the
    /// number of segments consumed.
    fn qualified_prefix(&self, path: &[String]) -> Option<(Node<'a>, usize)> {
        (1..=path.len()).rev().find_map(|k| self.lookup(&path[..k].join(".")).map(|n| (n, k)))
    }

    fn resolve_type(&self, path: &[String], chain: &[&Declaration]) -> Option<(Node<'a>, Via)> {
        let head = path[0].as_str();
        let mut start = None;
        for owner in self.enclosing_types(chain).iter().rev() {
            if let Some(e) = self.index.nested_type(owner, head, 0) {
                start = Some((Node::Entity(e), Via::Scope, 1));
                break;
            }
        }
        if start.is_none() {
            start = match self.top_level(head) {
                Some(Some((n, via))) => Some((n, via, 1)),
                Some(None) => return None,
                None => self.qualified_prefix(path).map(|(n, k)| (n, Via::QualifiedName, k)),
            };
        }
        let (mut node, via, used) = start?;
        for seg in &path[used..] {
            node = self.member_of(node, seg)?;
        }
        Some((node, via))
    }

    fn resolve_value(&self, path: &[String], chain: &[&Declaration], at: usize, depth: usize) -> Option<(Node<'a>, Via)> {
        if depth > MAX_DEPTH {
            return None;
        }
        let head = path[0].as_str();
        let (mut node, via, used) = if head == "this" || head == "super" {
            let ty = chain.iter().rev().find(|d| d.kind.is_type())?;
            let this = self.index.get(&ty.qualified_name)?;
            if head == "super" && path.len() > 1 {
                let found = this.supertypes.iter().find_map(|s| {
                    let st = self.index.type_entity(s)?;
                    self.member(st, &path[1], 0)
                })?;
                (found, Via::Scope, 2)
            } else {
                (Node::Entity(this), Via::Scope, 1)
            }
        } else if let Some(local) = self.local_or_param(head, chain, at, depth) {
            // a bare local names the variable, not an entity
            if path.len() == 1 {
                return None;
            }
            (local?, Via::Scope, 1)
        } else if let Some(n) = self.implicit_receiver(head, chain) {
            (n, Via::Scope, 1)
        } else {
            match self.top_level(head) {
                Some(Some((n, via))) => (n, via, 1),
                Some(None) => return None,
                None => {
                    let (n, k) = self.qualified_prefix(path)?;
                    (n, Via::QualifiedName, k)
                }
            }
        };
        for seg in &path[used..] {
            node = self.member_of(node, seg)?;
        }
        Some((node, via))
    }

    /// The type node of a local variable or parameter named `name`.
    /// `Some(None)` when the name is a local whose type is unknown.
    fn local_or_param(&self, name: &str, chain: &[&Declaration], at: usize, depth: usize) -> Option<Option<Node<'a>>> {
        let enclosing = self.enclosing_types(chain);
        let local = chain
            .iter()
            .flat_map(|d| d.locals.iter())
            .filter(|l| l.name == name && l.range.start < at)
            .max_by_key(|l| l.range.start);
        if let Some(l) = local {
            if let Some(t) = &l.declared_type {
                let q = self.index.qualify_type_name(&self.scope, &t.name, &enclosing);
                return Some(self.index.type_entity(&q).map(Node::Entity));
            }
            if let Some(origin) = &l.origin {
                let path: Vec<String> = origin.split('.').map(str::to_string).collect();
                if path.len() == 1 && depth < MAX_DEPTH {
                    if let Some(t) = self.local_or_param(&path[0], chain, l.range.start, depth + 1) {
                        return Some(t);
                    }
                }
                let node = self.resolve_value(&path, chain, l.range.start, depth + 1).map(|(n, _)| n);
                return Some(node.and_then(|n| self.value_type(n)));
            }
            return Some(None);
        }
        for d in chain.iter().rev() {
            let params: Box<dyn Iterator<Item = &Declaration>> = if d.kind == DeclKind::Function {
                Box::new(d.params.iter())
            } else if d.kind.is_type() && self.lang() == Language::Kotlin {
                // primary constructor parameters are visible in initializers
                Box::new(
                    d.children.iter().filter(|c| c.is_constructor && c.name_range == d.name_range).flat_map(|c| c.params.iter()),
                )
            } else {
                Box::new(std::iter::empty())
            };
            for p in params {
                if p.name == name {
                    let Some(t) = &p.declared_type else {
                        return Some(None);
                    };
                    let q = self.index.qualify_type_name(&self.scope, &t.name, &enclosing);
                    return Some(self.index.type_entity(&q).map(Node::Entity));
                }
            }
            if d.kind.is_type() {
                break;
            }
        }
        None
    }

    /// Members reachable without a qualifier: extension receivers and
    /// enclosing types, innermost first.
    fn implicit_receiver(&self, name: &str, chain: &[&Declaration]) -> Option<Node<'a>> {
        let enclosing = self.enclosing_types(chain);
        for d in chain.iter().rev() {
            if let Some(recv) = &d.receiver_type {
                let q = self.index.qualify_type_name(&self.scope, &recv.name, &enclosing);
                if let Some(n) = self.index.type_entity(&q).and_then(|t| self.member(t, name, 0)) {
                    return Some(n);
                }
            }
            if d.kind.is_type() {
                if let Some(n) = self.index.get(&d.qualified_name).and_then(|t| self.member(t, name, 0)) {
                    return Some(n);
                }
            }
        }
        None
    }

    /// Type to continue a member walk from a value node.
    fn value_type(&self, node: Node<'a>) -> Option<Node<'a>> {
        match node {
            Node::Facade(_) => Some(node),
            Node::Entity(e) if e.kind.is_type() => Some(node),
            Node::Entity(e) => {
                let t = e.declared_type_name.as_deref()?;
                self.index.type_entity(t).map(Node::Entity)
            }
        }
    }

    fn member_of(&self, node: Node<'a>, name: &str) -> Option<Node<'a>> {
        match self.value_type(node)? {
            Node::Facade(f) => self.facade_member(f, name),
            Node::Entity(t) => self.member(t, name, 0),
        }
    }

    fn facade_member(&self, facade: &str, name: &str) -> Option<Node<'a>> {
        let members = self.index.facades.get(facade)?;
        let find = |n: &str| members.iter().map(|&i| &self.index.entities[i]).find(|e| e.name == n);
        if let Some(e) = find(name) {
            return Some(Node::Entity(e));
        }
        accessor_names(name).into_iter().find_map(|(n, _)| find(&n)).map(Node::Entity)
    }

    fn member(&self, owner: &'a Entity, name: &str, depth: usize) -> Option<Node<'a>> {
        if depth > MAX_DEPTH {
            return None;
        }
        let q = &owner.qualified_name;
        if name == "INSTANCE" && owner.kind == DeclKind::Object {
            return Some(Node::Entity(owner));
        }
        if let Some(d) = self.index.get(&qualify(q, name)) {
            let hidden_field = self.lang() == Language::Kotlin
                && d.language == Language::Java
                && d.kind == DeclKind::Field
                && d.visibility == Visibility::Private;
            if hidden_field {
                if let Some(g) = self.accessor(q, name) {
                    return Some(Node::Entity(g));
                }
            }
            return Some(Node::Entity(d));
        }
        if let Some(a) = self.accessor(q, name) {
            return Some(Node::Entity(a));
        }
        for c in self.index.children_of(q) {
            if c.kind == DeclKind::Object && c.modifiers.contains("companion") {
                if let Some(n) = self.member(c, name, depth + 1) {
                    return Some(n);
                }
            }
        }
        for s in &owner.supertypes {
            if let Some(st) = self.index.type_entity(s) {
                if let Some(n) = self.member(st, name, depth + 1) {
                    return Some(n);
                }
            }
        }
        self.index.extensions_of(q).into_iter().find(|e| e.name == name).map(Node::Entity)
    }

    /// JVM accessor correspondence: `getX()`/`isX()`/`setX()` to property
    /// `x`, and property-style access `x` to a Java getter.
    fn accessor(&self, owner: &str, name: &str) -> Option<&'a Entity> {
        for (candidate, want_property) in accessor_names(name) {
            if let Some(e) = self.index.get(&qualify(owner, &candidate)) {
                let ok = if want_property {
                    matches!(e.kind, DeclKind::Property | DeclKind::Field)
                } else {
                    e.kind == DeclKind::Function && e.param_count == 0
                };
                if ok {
                    return Some(e);
                }
            }
        }
        None
    }
}

fn is_type(n: Node) -> bool {
    matches!(n, Node::Entity(e) if e.kind.is_type())
}

/// Candidate names for accessor synthesis, each with whether the candidate
/// should be a property (`true`) or a getter function (`false`).
fn accessor_names(name: &str) -> Vec<(String, bool)> {
    let decap = |s: &str| {
        let mut c = s.chars();
        match c.next() {
            Some(f) => f.to_lowercase().collect::<String>() + c.as_str(),
            None => String::new(),
        }
    };
    let cap = |s: &str| {
        let mut c = s.chars();
        match c.next() {
            Some(f) => f.to_uppercase().collect::<String>() + c.as_str(),
            None => String::new(),
        }
    };
    let upper_after = |p: &str| name.len() > p.len() && name[p.len()..].starts_with(|c: char| c.is_uppercase());
    let mut out = Vec::new();
    for p in ["get", "set"] {
        if name.starts_with(p) && upper_after(p) {
            out.push((decap(&name[p.len()..]), true));
        }
    }
    if name.starts_with("is") && upper_after("is") {
        out.push((name.to_string(), true));
        out.push((decap(&name[2..]), true));
    }
    if out.is_empty() && name.starts_with(|c: char| c.is_lowercase()) {
        out.push((format!("get{}", cap(name)), false));
        out.push((format!("is{}", cap(name)), false));
    }
    out
}
