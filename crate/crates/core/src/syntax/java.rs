//! Java declaration parser. Method bodies and initializers go through the
//! shared body scanner.

use crate::source::SourceRange;

use super::ast::{AnnotationUse, DeclKind, Declaration, ImportDecl, RefKind, TypePosition};
use super::body::{java_expr_end, scan, scan_low, scan_region, BodySink};
use super::tokens::{Toks, JAVA_MODIFIERS};
use super::types::parse_type;
use super::{qualify, FileSyntax, ParseError};

struct Ann {
    path: Vec<String>,
    range: SourceRange,
    args: Option<usize>,
}

struct Prefix {
    modifiers: Vec<String>,
    anns: Vec<Ann>,
    next: usize,
}

struct Owner<'o> {
    name: &'o str,
    qname: &'o str,
    kind: DeclKind,
}

pub(crate) fn parse(t: &Toks) -> Result<FileSyntax, ParseError> {
    JavaParser { t }.file()
}

struct JavaParser<'t, 'a> {
    t: &'t Toks<'a>,
}

impl<'t, 'a> JavaParser<'t, 'a> {
    fn file(&self) -> Result<FileSyntax, ParseError> {
        let t = self.t;
        let end = t.len();
        let mut out = FileSyntax::default();
        let mut i = 0;
        let pre = self.prefix(i, end)?;
        let mut sink = BodySink::new(String::new());
        if t.is_word(pre.next, "package") {
            let (segs, _, next) = self.dotted(pre.next + 1, end)?;
            out.package = Some(segs.join("."));
            sink = BodySink::new(segs.join("."));
            for ann in &pre.anns {
                self.emit_annotation(ann, &mut sink);
            }
            i = self.semi(next)?;
        }
        while t.is_word(i, "import") || t.is_punct(i, ";") {
            if t.is_punct(i, ";") {
                i += 1;
                continue;
            }
            let mut j = i + 1;
            let is_static = t.is_word(j, "static");
            if is_static {
                j += 1;
            }
            let (segs, mut range, mut next) = self.dotted(j, end)?;
            let mut wildcard = false;
            if t.is_punct(next, ".") && t.is_punct(next + 1, "*") {
                wildcard = true;
                range = t.span(j, next + 1);
                next += 2;
            }
            sink.push(RefKind::ImportUse, segs.clone(), range, TypePosition::None);
            out.imports.push(ImportDecl { target: segs.join("."), is_wildcard: wildcard, alias: None, is_static, range });
            i = self.semi(next)?;
        }
        let pkg = out.package.clone().unwrap_or_default();
        let mut decls = Vec::new();
        while i < end {
            if t.is_punct(i, ";") {
                i += 1;
                continue;
            }
            let pre = self.prefix(i, end)?;
            let (d, next) = self.type_decl(i, &pre, end, &pkg)?;
            decls.push(d);
            i = next;
        }
        out.declarations = decls;
        out.file_refs = sink.refs;
        Ok(out)
    }

    fn semi(&self, i: usize) -> Result<usize, ParseError> {
        if self.t.is_punct(i, ";") {
            Ok(i + 1)
        } else {
            Err(self.t.error(i, "`;`"))
        }
    }

    fn dotted(&self, i: usize, end: usize) -> Result<(Vec<String>, SourceRange, usize), ParseError> {
        let t = self.t;
        if !t.is_name(i) {
            return Err(t.error(i, "qualified name"));
        }
        let mut segs = vec![t.name(i)];
        let mut j = i + 1;
        while j + 1 < end && t.is_punct(j, ".") && t.is_name(j + 1) {
            segs.push(t.name(j + 1));
            j += 2;
        }
        Ok((segs, t.span(i, j - 1), j))
    }

    fn prefix(&self, i: usize, end: usize) -> Result<Prefix, ParseError> {
        let t = self.t;
        let mut p = Prefix { modifiers: Vec::new(), anns: Vec::new(), next: i };
        let mut j = i;
        while j < end {
            if t.is_punct(j, "@") && !t.is_word(j + 1, "interface") {
                let (path, range, mut next) = self.dotted(j + 1, end)?;
                let mut args = None;
                if t.is_punct(next, "(") {
                    args = Some(next);
                    next = t.close(next) + 1;
                }
                p.anns.push(Ann { path, range, args });
                j = next;
            } else if t.is_name(j) && JAVA_MODIFIERS.contains(&t.text(j)) && !t.is_punct(j + 1, ":") {
                p.modifiers.push(t.text(j).to_string());
                j += 1;
            } else if t.is_word(j, "non") && t.is_punct(j + 1, "-") && t.is_word(j + 2, "sealed") {
                p.modifiers.push("non-sealed".to_string());
                j += 3;
            } else {
                break;
            }
        }
        p.next = j;
        Ok(p)
    }

    fn emit_annotation(&self, ann: &Ann, sink: &mut BodySink) {
        sink.push(RefKind::AnnotationUse, ann.path.clone(), ann.range, TypePosition::None);
        if let Some(open) = ann.args {
            scan_region(self.t, open, sink);
        }
    }

    fn attach(&self, decl: &mut Declaration, prefix: &Prefix, package_private: bool) {
        decl.modifiers.extend(prefix.modifiers.iter().cloned());
        if package_private && !["public", "private", "protected"].iter().any(|m| decl.has_modifier(m)) {
            decl.modifiers.insert("package-private".to_string());
        }
        let mut sink = BodySink::new(decl.qualified_name.clone());
        for ann in &prefix.anns {
            decl.annotations.push(AnnotationUse { name: ann.path.join("."), range: ann.range });
            self.emit_annotation(ann, &mut sink);
        }
        decl.body_refs.splice(0..0, sink.refs);
    }

    fn is_type_keyword(&self, j: usize) -> bool {
        let t = self.t;
        t.is_word(j, "class")
            || t.is_word(j, "interface")
            || t.is_word(j, "enum")
            || (t.is_punct(j, "@") && t.is_word(j + 1, "interface"))
            || (t.is_word(j, "record") && t.is_ident(j + 1) && (t.is_punct(j + 2, "(") || t.is_punct(j + 2, "<")))
    }

    fn type_decl(&self, start: usize, pre: &Prefix, end: usize, prefix: &str) -> Result<(Declaration, usize), ParseError> {
        self.type_decl_in(start, pre, end, prefix, None)
    }

    fn type_decl_in(
        &self,
        start: usize,
        pre: &Prefix,
        end: usize,
        prefix: &str,
        enclosing: Option<DeclKind>,
    ) -> Result<(Declaration, usize), ParseError> {
        let t = self.t;
        let mut k = pre.next;
        let kind = if t.is_punct(k, "@") && t.is_word(k + 1, "interface") {
            k += 2;
            DeclKind::Annotation
        } else if t.is_word(k, "class") {
            k += 1;
            DeclKind::Class
        } else if t.is_word(k, "interface") {
            k += 1;
            DeclKind::Interface
        } else if t.is_word(k, "enum") {
            k += 1;
            DeclKind::Enum
        } else if t.is_word(k, "record") {
            k += 1;
            DeclKind::Class
        } else {
            return Err(t.error(k, "type declaration"));
        };
        let is_record = t.is_word(k - 1, "record");
        if !t.is_ident(k) {
            return Err(t.error(k, "class name"));
        }
        let name = t.name(k);
        let qname = qualify(prefix, &name);
        let mut decl = Declaration::new(kind, name.clone(), qname.clone());
        decl.name_range = t.range(k);
        let in_interface = matches!(enclosing, Some(DeclKind::Interface) | Some(DeclKind::Annotation));
        self.attach(&mut decl, pre, !in_interface);
        if in_interface && !decl.has_modifier("private") && !decl.has_modifier("protected") {
            decl.modifiers.insert("public".to_string());
        }
        k += 1;
        let mut sink = BodySink::new(qname.clone());
        if let Some(next) = t.skip_angle(k, end) {
            self.type_params(k, next, &mut sink);
            k = next;
        }
        let mut record_ctor = None;
        if is_record {
            if !t.is_punct(k, "(") {
                return Err(t.error(k, "record components"));
            }
            let ctor_q = qualify(&qname, &name);
            let params = self.params(k, &ctor_q)?;
            let mut ctor = Declaration::new(DeclKind::Function, name.clone(), ctor_q);
            ctor.is_constructor = true;
            ctor.name_range = decl.name_range;
            ctor.range = t.span(k, t.close(k));
            for p in &params {
                let mut f = Declaration::new(DeclKind::Field, p.name.clone(), qualify(&qname, &p.name));
                f.modifiers.extend(["private".to_string(), "final".to_string()]);
                f.declared_type = p.declared_type.clone();
                f.annotations = p.annotations.clone();
                f.name_range = p.name_range;
                f.range = p.range;
                decl.children.push(f);
            }
            ctor.params = params;
            record_ctor = Some(ctor);
            k = t.close(k) + 1;
        }
        loop {
            let position = if t.is_word(k, "extends") {
                Some(true)
            } else if t.is_word(k, "implements") || t.is_word(k, "permits") {
                Some(t.is_word(k, "implements"))
            } else {
                None
            };
            let Some(is_super) = position else { break };
            k += 1;
            loop {
                let Some(p) = parse_type(t, k, end) else {
                    return Err(t.error(k, "type name"));
                };
                if is_super {
                    sink.push(RefKind::SuperType, p.segments.clone(), p.name_range, TypePosition::None);
                    for nested in p.nested() {
                        sink.push_type(nested, TypePosition::Other);
                    }
                    decl.supertypes.push(p.type_ref());
                } else {
                    sink.push_type(&p, TypePosition::Other);
                }
                k = p.next;
                if t.is_punct(k, ",") {
                    k += 1;
                    continue;
                }
                break;
            }
        }
        if !t.is_punct(k, "{") {
            return Err(t.error(k, "`{`"));
        }
        let close = t.close(k);
        let owner = Owner { name: &name, qname: &qname, kind };
        let mut body = self.members(k + 1, close, &owner, &mut sink)?;
        if let Some(ctor) = record_ctor {
            let compact = body.iter().position(|d| d.is_constructor && d.params.is_empty() && d.has_modifier("compact"));
            match compact {
                Some(idx) => {
                    let mut c = body.remove(idx);
                    c.modifiers.remove("compact");
                    c.params = ctor.params;
                    decl.children.insert(0, c);
                }
                None => decl.children.insert(0, ctor),
            }
        }
        decl.children.extend(body);
        decl.body_refs.extend(sink.refs);
        decl.range = t.span(start, close);
        Ok((decl, close + 1))
    }

    /// Bounds of generic type parameters: `<T extends JBase & Comparable<T>>`.
    fn type_params(&self, open: usize, next: usize, sink: &mut BodySink) {
        let t = self.t;
        let mut j = open + 1;
        while j < next - 1 {
            if t.is_word(j, "extends") || t.is_punct(j, "&") {
                if let Some(p) = parse_type(t, j + 1, next - 1) {
                    sink.push_type(&p, TypePosition::Other);
                    j = p.next;
                    continue;
                }
            }
            j += 1;
        }
    }

    fn members(
        &self,
        start: usize,
        end: usize,
        owner: &Owner,
        stray: &mut BodySink,
    ) -> Result<Vec<Declaration>, ParseError> {
        let t = self.t;
        let mut decls = Vec::new();
        let mut i = start;
        if owner.kind == DeclKind::Enum {
            i = self.enum_constants(i, end, owner, &mut decls)?;
        }
        let in_interface = matches!(owner.kind, DeclKind::Interface | DeclKind::Annotation);
        while i < end {
            if t.is_punct(i, ";") {
                i += 1;
                continue;
            }
            if t.is_punct(i, "{") {
                scan(t, i + 1, t.close(i), stray);
                i = t.close(i) + 1;
                continue;
            }
            if t.is_word(i, "static") && t.is_punct(i + 1, "{") {
                scan(t, i + 2, t.close(i + 1), stray);
                i = t.close(i + 1) + 1;
                continue;
            }
            let pre = self.prefix(i, end)?;
            let mut j = pre.next;
            if self.is_type_keyword(j) {
                let (d, next) = self.type_decl_in(i, &pre, end, owner.qname, Some(owner.kind))?;
                decls.push(d);
                i = next;
                continue;
            }
            let mut sink = BodySink::new(String::new());
            if let Some(next) = t.skip_angle(j, end) {
                self.type_params(j, next, &mut sink);
                j = next;
            }
            if t.is_ident(j) && t.name(j) == owner.name && (t.is_punct(j + 1, "(") || t.is_punct(j + 1, "{")) {
                let (d, next) = self.constructor(i, &pre, j, owner, sink)?;
                decls.push(d);
                i = next;
                continue;
            }
            let Some(ty) = parse_type(t, j, end) else {
                return Err(t.error(j, "member declaration"));
            };
            let name_idx = ty.next;
            if !t.is_ident(name_idx) {
                return Err(t.error(name_idx, "member name"));
            }
            if t.is_punct(name_idx + 1, "(") {
                let name = t.name(name_idx);
                let qname = qualify(owner.qname, &name);
                let mut decl = Declaration::new(DeclKind::Function, name, qname.clone());
                decl.name_range = t.range(name_idx);
                self.attach(&mut decl, &pre, !in_interface);
                if in_interface && !decl.has_modifier("private") {
                    decl.modifiers.insert("public".to_string());
                    if !decl.has_modifier("default") && !decl.has_modifier("static") && !decl.has_modifier("private") {
                        decl.modifiers.insert("abstract".to_string());
                    }
                }
                sink.enclosing = qname.clone();
                if !(ty.primitive) {
                    sink.push_type(&ty, TypePosition::Return);
                } else {
                    for nested in ty.nested() {
                        sink.push_type(nested, TypePosition::Other);
                    }
                }
                decl.declared_type = Some(ty.type_ref());
                decl.has_explicit_return_type = true;
                let next = self.method_rest(name_idx + 1, end, &mut decl, sink)?;
                decl.range = t.span(i, next - 1);
                decls.push(decl);
                i = next;
                continue;
            }
            i = self.fields(i, &pre, &ty, name_idx, end, owner, in_interface, &mut decls)?;
        }
        Ok(decls)
    }

    #[allow(clippy::too_many_arguments)]
    fn fields(
        &self,
        start: usize,
        pre: &Prefix,
        ty: &super::types::ParsedType,
        first_name: usize,
        end: usize,
        owner: &Owner,
        in_interface: bool,
        decls: &mut Vec<Declaration>,
    ) -> Result<usize, ParseError> {
        let t = self.t;
        let mut name_idx = first_name;
        loop {
            let name = t.name(name_idx);
            let qname = qualify(owner.qname, &name);
            let mut decl = Declaration::new(DeclKind::Field, name, qname.clone());
            decl.name_range = t.range(name_idx);
            self.attach(&mut decl, pre, !in_interface);
            if in_interface {
                decl.modifiers.extend(["public".to_string(), "static".to_string(), "final".to_string()]);
            }
            let mut sink = BodySink::new(qname);
            sink.push_type(ty, TypePosition::Field);
            decl.declared_type = Some(ty.type_ref());
            let mut j = name_idx + 1;
            while t.is_punct(j, "[") && t.close(j) == j + 1 {
                j += 2;
            }
            if t.is_punct(j, "=") {
                let e = java_expr_end(t, j + 1, end);
                decl.defining_chain = super::body::single_chain(t, j + 1, e);
                scan(t, j + 1, e, &mut sink);
                j = e;
            }
            decl.body_refs.extend(sink.refs);
            decl.range = t.span(if name_idx == first_name { start } else { name_idx }, j - 1);
            decls.push(decl);
            if t.is_punct(j, ",") && t.is_ident(j + 1) {
                name_idx = j + 1;
                continue;
            }
            return self.semi(j);
        }
    }

    fn constructor(
        &self,
        start: usize,
        pre: &Prefix,
        name_idx: usize,
        owner: &Owner,
        mut sink: BodySink,
    ) -> Result<(Declaration, usize), ParseError> {
        let t = self.t;
        let qname = qualify(owner.qname, owner.name);
        let mut decl = Declaration::new(DeclKind::Function, owner.name, qname.clone());
        decl.is_constructor = true;
        decl.name_range = t.range(name_idx);
        self.attach(&mut decl, pre, owner.kind != DeclKind::Enum);
        sink.enclosing = qname;
        let next = if t.is_punct(name_idx + 1, "{") {
            decl.modifiers.insert("compact".to_string());
            let c = t.close(name_idx + 1);
            scan(t, name_idx + 2, c, &mut sink);
            decl.locals = sink.locals;
            decl.body_refs.extend(sink.refs);
            c + 1
        } else {
            self.method_rest(name_idx + 1, t.len(), &mut decl, sink)?
        };
        decl.range = t.span(start, next - 1);
        Ok((decl, next))
    }

    /// Parameters, `throws`, default value and body of a method starting at `(`.
    fn method_rest(&self, open: usize, end: usize, decl: &mut Declaration, mut sink: BodySink) -> Result<usize, ParseError> {
        let t = self.t;
        decl.params = self.params(open, &decl.qualified_name)?;
        for p in &decl.params {
            sink.shadow(&p.name);
        }
        let mut k = t.close(open) + 1;
        while t.is_punct(k, "[") && t.close(k) == k + 1 {
            k += 2;
        }
        if t.is_word(k, "throws") {
            k += 1;
            loop {
                let Some(p) = parse_type(t, k, end) else {
                    return Err(t.error(k, "exception type"));
                };
                sink.push_type(&p, TypePosition::Other);
                k = p.next;
                if t.is_punct(k, ",") {
                    k += 1;
                    continue;
                }
                break;
            }
        }
        if t.is_word(k, "default") {
            let e = java_expr_end(t, k + 1, end);
            scan(t, k + 1, e, &mut sink);
            k = e;
        }
        let next = if t.is_punct(k, "{") {
            let c = t.close(k);
            scan(t, k + 1, c, &mut sink);
            c + 1
        } else {
            self.semi(k)?
        };
        decl.locals = sink.locals;
        decl.body_refs.extend(sink.refs);
        Ok(next)
    }

    fn params(&self, open: usize, fn_qname: &str) -> Result<Vec<Declaration>, ParseError> {
        let t = self.t;
        let close = t.close(open);
        let mut out = Vec::new();
        let mut i = open + 1;
        while i < close {
            let pre = self.prefix(i, close)?;
            let j = pre.next;
            let Some(ty) = parse_type(t, j, close) else {
                return Err(t.error(j, "parameter type"));
            };
            let mut k = ty.next;
            if t.is_punct(k, "...") {
                k += 1;
            }
            // receiver parameter `Outer this`
            if t.is_word(k, "this") {
                k += 1;
                if t.is_punct(k, ",") {
                    k += 1;
                }
                i = k;
                continue;
            }
            if !t.is_ident(k) {
                return Err(t.error(k, "parameter name"));
            }
            let name = t.name(k);
            let mut p = Declaration::new(DeclKind::Parameter, name.clone(), qualify(fn_qname, &name));
            p.name_range = t.range(k);
            self.attach(&mut p, &pre, false);
            p.declared_type = Some(ty.type_ref());
            let mut sink = BodySink::new(fn_qname.to_string());
            sink.push_type(&ty, TypePosition::Parameter);
            p.body_refs.extend(sink.refs);
            k += 1;
            while t.is_punct(k, "[") && t.close(k) == k + 1 {
                k += 2;
            }
            p.range = t.span(i, k - 1);
            out.push(p);
            if t.is_punct(k, ",") {
                k += 1;
            } else if k < close {
                return Err(t.error(k, "`,` or `)`"));
            }
            i = k;
        }
        Ok(out)
    }

    fn enum_constants(&self, start: usize, end: usize, owner: &Owner, decls: &mut Vec<Declaration>) -> Result<usize, ParseError> {
        let t = self.t;
        let mut i = start;
        loop {
            let pre = self.prefix(i, end)?;
            let k = pre.next;
            if !(t.is_ident(k) && (k + 1 >= end || matches!(t.text(k + 1), "," | ";" | "(" | "{" | "}"))) {
                return Ok(if t.is_punct(i, ";") { i + 1 } else { i });
            }
            let name = t.name(k);
            let mut d = Declaration::new(DeclKind::Field, name.clone(), qualify(owner.qname, &name));
            d.name_range = t.range(k);
            self.attach(&mut d, &pre, false);
            d.modifiers.extend(["public".to_string(), "static".to_string(), "final".to_string()]);
            let mut sink = BodySink::new(d.qualified_name.clone());
            let mut j = k + 1;
            if t.is_punct(j, "(") {
                scan_region(t, j, &mut sink);
                j = t.close(j) + 1;
            }
            if t.is_punct(j, "{") {
                scan_low(t, j + 1, t.close(j), &mut sink);
                j = t.close(j) + 1;
            }
            d.body_refs.extend(sink.refs);
            d.range = t.span(i, j - 1);
            decls.push(d);
            if t.is_punct(j, ",") {
                i = j + 1;
                continue;
            }
            if t.is_punct(j, ";") {
                return Ok(j + 1);
            }
            return Ok(j);
        }
    }
}
