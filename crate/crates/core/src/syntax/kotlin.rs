//! Kotlin declaration parser. Bodies and initializers are delegated to the
//! body scanner.

use crate::source::SourceRange;

use super::ast::{AnnotationUse, DeclKind, Declaration, ImportDecl, RefKind, Reference, TypePosition};
use super::body::{kotlin_expr_end, scan, scan_low, scan_region, single_chain, BodySink};
use super::tokens::{Toks, KOTLIN_MODIFIERS};
use super::types::parse_type;
use super::{qualify, FileSyntax, ParseError};

struct Ann {
    path: Vec<String>,
    range: SourceRange,
    args: Option<usize>,
}

struct Owner<'o> {
    name: &'o str,
    qname: &'o str,
}

struct Prefix {
    modifiers: Vec<String>,
    anns: Vec<Ann>,
    next: usize,
}

pub(crate) fn parse(t: &Toks) -> Result<FileSyntax, ParseError> {
    KotlinParser { t }.file()
}

struct KotlinParser<'t, 'a> {
    t: &'t Toks<'a>,
}

impl<'t, 'a> KotlinParser<'t, 'a> {
    fn file(&self) -> Result<FileSyntax, ParseError> {
        let t = self.t;
        let end = t.len();
        let mut out = FileSyntax::default();
        let mut i = 0;
        let mut file_anns = Vec::new();
        loop {
            if t.is_punct(i, "@") && t.is_word(i + 1, "file") && t.is_punct(i + 2, ":") {
                let (ann, next) = self.annotation(i, end)?;
                if ann.path.last().map(String::as_str) == Some("JvmName") {
                    if let Some(open) = ann.args {
                        if t.kind(open + 1) == Some(super::lexer::TokKind::Str) && t.close(open) == open + 2 {
                            out.jvm_name = Some(t.text(open + 1).trim_matches('"').to_string());
                        }
                    }
                }
                file_anns.push(ann);
                i = next;
            } else if t.is_word(i, "package") {
                let (segs, _, next) = self.dotted(i + 1, end)?;
                out.package = Some(segs.join("."));
                i = next;
                if t.is_punct(i, ";") {
                    i += 1;
                }
            } else {
                break;
            }
        }
        let pkg = out.package.clone().unwrap_or_default();
        let mut sink = BodySink::new(pkg.clone());
        for ann in &file_anns {
            self.emit_annotation(ann, &mut sink);
        }
        while t.is_word(i, "import") {
            let (segs, range, mut next) = self.dotted(i + 1, end)?;
            let mut wildcard = false;
            let mut range = range;
            if t.is_punct(next, ".") && t.is_punct(next + 1, "*") {
                wildcard = true;
                range = t.span(i + 1, next + 1);
                next += 2;
            }
            let mut alias = None;
            if !wildcard && t.is_word(next, "as") && t.is_ident(next + 1) {
                alias = Some(t.name(next + 1));
                next += 2;
            }
            sink.push(RefKind::ImportUse, segs.clone(), range, TypePosition::None);
            out.imports.push(ImportDecl { target: segs.join("."), is_wildcard: wildcard, alias, is_static: false, range });
            i = next;
            if t.is_punct(i, ";") {
                i += 1;
            }
        }
        let (decls, stray) = self.members(i, end, &pkg, None)?;
        out.declarations = decls;
        out.file_refs = sink.refs;
        out.file_refs.extend(stray);
        Ok(out)
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

    fn annotation(&self, i: usize, end: usize) -> Result<(Ann, usize), ParseError> {
        let t = self.t;
        let mut j = i + 1;
        if t.is_name(j) && t.is_punct(j + 1, ":") {
            j += 2;
        }
        if t.is_punct(j, "[") {
            // `@[A B]`: keep the first name only
            let close = t.close(j);
            let path = if t.is_name(j + 1) { vec![t.name(j + 1)] } else { Vec::new() };
            let range = t.span(j, close);
            return Ok((Ann { path, range, args: None }, close + 1));
        }
        let (path, range, mut next) = self.dotted(j, end)?;
        let mut args = None;
        if next < end && t.is_punct(next, "(") && !t.nl(next) {
            args = Some(next);
            next = t.close(next) + 1;
        }
        Ok((Ann { path, range, args }, next))
    }

    fn emit_annotation(&self, ann: &Ann, sink: &mut BodySink) {
        if ann.path.is_empty() {
            return;
        }
        sink.push(RefKind::AnnotationUse, ann.path.clone(), ann.range, TypePosition::None);
        if let Some(open) = ann.args {
            scan_region(self.t, open, sink);
        }
    }

    fn prefix(&self, i: usize, end: usize) -> Result<Prefix, ParseError> {
        let t = self.t;
        let mut p = Prefix { modifiers: Vec::new(), anns: Vec::new(), next: i };
        let mut j = i;
        while j < end {
            if t.is_punct(j, "@") {
                let (ann, next) = self.annotation(j, end)?;
                p.anns.push(ann);
                j = next;
            } else if t.is_name(j)
                && KOTLIN_MODIFIERS.contains(&t.text(j))
                && (t.is_name(j + 1) || t.is_punct(j + 1, "@"))
            {
                p.modifiers.push(t.text(j).to_string());
                j += 1;
            } else {
                break;
            }
        }
        p.next = j;
        Ok(p)
    }

    fn attach(&self, decl: &mut Declaration, prefix: &Prefix) {
        decl.modifiers.extend(prefix.modifiers.iter().cloned());
        let mut sink = BodySink::new(decl.qualified_name.clone());
        for ann in &prefix.anns {
            if ann.path.is_empty() {
                continue;
            }
            decl.annotations.push(AnnotationUse { name: ann.path.join("."), range: ann.range });
            self.emit_annotation(ann, &mut sink);
        }
        decl.body_refs.splice(0..0, sink.refs);
    }

    /// Parses member declarations in `start..end`. Returns the declarations
    /// and references that belong to the owner itself (init blocks).
    fn members(
        &self,
        start: usize,
        end: usize,
        prefix: &str,
        owner: Option<(&Owner, bool)>,
    ) -> Result<(Vec<Declaration>, Vec<Reference>), ParseError> {
        let t = self.t;
        let mut decls = Vec::new();
        let mut stray = BodySink::new(prefix.to_string());
        let mut i = start;
        if let Some((o, true)) = owner {
            i = self.enum_entries(i, end, o, &mut decls)?;
        }
        while i < end {
            if t.is_punct(i, ";") {
                i += 1;
                continue;
            }
            let pre = self.prefix(i, end)?;
            let j = pre.next;
            let w = if t.is_name(j) { t.text(j) } else { "" };
            match w {
                "class" | "interface" | "object" => {
                    let d = self.class_like(i, &pre, j, j + 1, end, prefix)?;
                    i = d.1;
                    decls.push(d.0);
                }
                "fun" if t.is_word(j + 1, "interface") => {
                    let mut pre = pre;
                    pre.modifiers.push("fun".into());
                    let d = self.class_like(i, &pre, j + 1, j + 2, end, prefix)?;
                    i = d.1;
                    decls.push(d.0);
                }
                "fun" => {
                    let d = self.function(i, &pre, j, end, prefix)?;
                    i = d.1;
                    decls.push(d.0);
                }
                "val" | "var" => {
                    let d = self.property(i, &pre, j, end, prefix)?;
                    i = d.1;
                    decls.push(d.0);
                }
                "init" if t.is_punct(j + 1, "{") => {
                    scan_region(t, j + 1, &mut stray);
                    i = t.close(j + 1) + 1;
                }
                "constructor" => {
                    let Some((o, _)) = owner else {
                        return Err(t.error(j, "declaration"));
                    };
                    let d = self.secondary_constructor(i, &pre, j, end, o)?;
                    i = d.1;
                    decls.push(d.0);
                }
                "typealias" => {
                    let mut k = j + 1;
                    if t.is_ident(k) {
                        k += 1;
                    }
                    if let Some(next) = t.skip_angle(k, end) {
                        k = next;
                    }
                    if t.is_punct(k, "=") {
                        match parse_type(t, k + 1, end) {
                            Some(p) => {
                                stray.push_type(&p, TypePosition::Other);
                                k = p.next;
                            }
                            None => k += 1,
                        }
                    }
                    i = k;
                }
                _ => {
                    if t.is_open(j) {
                        scan_low(t, j + 1, t.close(j), &mut stray);
                        i = t.close(j) + 1;
                    } else {
                        i = j + 1;
                    }
                }
            }
        }
        Ok((decls, stray.refs))
    }

    fn enum_entries(&self, start: usize, end: usize, owner: &Owner, decls: &mut Vec<Declaration>) -> Result<usize, ParseError> {
        let t = self.t;
        let mut i = start;
        loop {
            let pre = self.prefix(i, end)?;
            let k = pre.next;
            let entry = t.is_ident(k)
                && t.text(k) != "init"
                && (k + 1 >= end || matches!(t.text(k + 1), "," | ";" | "(" | "{" | "}") || t.nl(k + 1));
            if !entry {
                return Ok(i);
            }
            let name = t.name(k);
            let mut d = Declaration::new(DeclKind::Field, name.clone(), qualify(owner.qname, &name));
            d.name_range = t.range(k);
            self.attach(&mut d, &pre);
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

    fn class_like(
        &self,
        start: usize,
        pre: &Prefix,
        kw: usize,
        mut k: usize,
        end: usize,
        prefix: &str,
    ) -> Result<(Declaration, usize), ParseError> {
        let t = self.t;
        let has = |m: &str| pre.modifiers.iter().any(|x| x == m);
        let kind = match t.text(kw) {
            "interface" => DeclKind::Interface,
            "object" => DeclKind::Object,
            _ if has("enum") => DeclKind::Enum,
            _ if has("annotation") => DeclKind::Annotation,
            _ => DeclKind::Class,
        };
        let (name, name_range) = if t.is_ident(k) {
            k += 1;
            (t.name(k - 1), t.range(k - 1))
        } else if kind == DeclKind::Object && has("companion") {
            ("Companion".to_string(), t.range(kw))
        } else {
            return Err(t.error(k, "class name"));
        };
        let qname = qualify(prefix, &name);
        let mut decl = Declaration::new(kind, name.clone(), qname.clone());
        decl.name_range = name_range;
        self.attach(&mut decl, pre);
        if let Some(next) = t.skip_angle(k, end) {
            k = next;
        }
        // primary constructor
        let ctor_pre = self.prefix(k, end)?;
        let mut c = ctor_pre.next;
        let explicit_ctor = t.is_word(c, "constructor");
        if explicit_ctor {
            c += 1;
        }
        if t.is_punct(c, "(") && (explicit_ctor || !t.nl(c)) {
            let close = t.close(c);
            let mut ctor = Declaration::new(DeclKind::Function, name.clone(), qualify(&qname, &name));
            ctor.is_constructor = true;
            ctor.name_range = name_range;
            self.attach(&mut ctor, &ctor_pre);
            let (params, props) = self.params(c, &ctor.qualified_name, Some(&qname))?;
            ctor.params = params;
            ctor.range = t.span(k.min(c), close);
            ctor.body_refs.extend(ctor.params.iter().flat_map(|p| p.body_refs.clone()).collect::<Vec<_>>());
            for p in ctor.params.iter_mut() {
                p.body_refs.clear();
            }
            decl.children.push(ctor);
            decl.children.extend(props);
            k = close + 1;
        }
        let mut sink = BodySink::new(qname.clone());
        if t.is_punct(k, ":") {
            k += 1;
            loop {
                let Some(p) = parse_type(t, k, end) else {
                    return Err(t.error(k, "supertype"));
                };
                sink.push(RefKind::SuperType, p.segments.clone(), p.name_range, TypePosition::None);
                for nested in p.nested() {
                    sink.push_type(nested, TypePosition::Other);
                }
                decl.supertypes.push(p.type_ref());
                k = p.next;
                if t.is_punct(k, "(") && !t.nl(k) {
                    scan_region(t, k, &mut sink);
                    k = t.close(k) + 1;
                }
                if t.is_word(k, "by") {
                    let mut e = k + 1;
                    while e < end && !t.is_punct(e, ",") && !t.is_punct(e, "{") && !(e > k + 1 && t.nl(e)) {
                        e = if t.is_open(e) { t.close(e) + 1 } else { e + 1 };
                    }
                    scan(t, k + 1, e, &mut sink);
                    k = e;
                }
                if t.is_punct(k, ",") {
                    k += 1;
                    continue;
                }
                break;
            }
        }
        if t.is_word(k, "where") {
            k += 1;
            while k < end && !t.is_punct(k, "{") && !(t.nl(k) && !t.is_punct(k - 1, ",")) {
                k += 1;
            }
        }
        if t.is_punct(k, "{") {
            let close = t.close(k);
            let owner = Owner { name: &name, qname: &qname };
            let (members, stray) = self.members(k + 1, close, &qname, Some((&owner, kind == DeclKind::Enum)))?;
            decl.children.extend(members);
            sink.refs.extend(stray);
            k = close + 1;
        }
        decl.body_refs.extend(sink.refs);
        decl.range = t.span(start, k - 1);
        Ok((decl, k))
    }

    /// Receiver type and name of `fun`/`val` declarations: `A.B<T>?.name`.
    fn receiver_and_name(&self, mut k: usize, end: usize) -> Option<(Option<(usize, usize)>, usize, usize)> {
        let t = self.t;
        let first = k;
        let mut last_dot = None;
        let mut last_ident = None;
        while k < end {
            if t.is_ident(k) {
                last_ident = Some(k);
                k += 1;
            } else {
                break;
            }
            if let Some(next) = t.skip_angle(k, end) {
                k = next;
            }
            while t.is_punct(k, "?") {
                k += 1;
            }
            if t.is_punct(k, ".") && t.is_ident(k + 1) {
                last_dot = Some(k);
                k += 1;
                continue;
            }
            break;
        }
        let name_idx = last_ident?;
        if name_idx != k - 1 {
            return None;
        }
        Some((last_dot.map(|d| (first, d)), name_idx, k))
    }

    fn function(&self, start: usize, pre: &Prefix, kw: usize, end: usize, prefix: &str) -> Result<(Declaration, usize), ParseError> {
        let t = self.t;
        let mut k = kw + 1;
        if let Some(next) = t.skip_angle(k, end) {
            k = next;
        }
        let Some((receiver, name_idx, next)) = self.receiver_and_name(k, end) else {
            return Err(t.error(k, "function name"));
        };
        let name = t.name(name_idx);
        let qname = qualify(prefix, &name);
        let mut decl = Declaration::new(DeclKind::Function, name, qname.clone());
        decl.name_range = t.range(name_idx);
        self.attach(&mut decl, pre);
        let mut sink = BodySink::new(qname.clone());
        if let Some((rs, re)) = receiver {
            if let Some(p) = parse_type(t, rs, re) {
                sink.push_type(&p, TypePosition::ExtensionReceiver);
                decl.receiver_type = Some(p.type_ref());
            }
        }
        k = next;
        if !t.is_punct(k, "(") {
            return Err(t.error(k, "`(`"));
        }
        let close = t.close(k);
        let (params, _) = self.params(k, &qname, None)?;
        for p in &params {
            sink.shadow(&p.name);
        }
        decl.params = params;
        k = close + 1;
        if t.is_punct(k, ":") {
            let Some(p) = parse_type(t, k + 1, end) else {
                return Err(t.error(k + 1, "return type"));
            };
            sink.push_type(&p, TypePosition::Return);
            decl.declared_type = Some(p.type_ref());
            decl.has_explicit_return_type = true;
            k = p.next;
        }
        if t.is_word(k, "where") {
            while k < end && !t.is_punct(k, "=") && !t.is_punct(k, "{") {
                k += 1;
            }
        }
        if t.is_punct(k, "=") {
            let e = kotlin_expr_end(t, k + 1, end);
            decl.is_single_expression = true;
            decl.defining_chain = single_chain(t, k + 1, e);
            scan(t, k + 1, e, &mut sink);
            k = e;
        } else if t.is_punct(k, "{") {
            let c = t.close(k);
            scan(t, k + 1, c, &mut sink);
            k = c + 1;
        }
        decl.locals = sink.locals;
        decl.body_refs.extend(sink.refs);
        decl.range = t.span(start, k - 1);
        Ok((decl, k))
    }

    fn property(&self, start: usize, pre: &Prefix, kw: usize, end: usize, prefix: &str) -> Result<(Declaration, usize), ParseError> {
        let t = self.t;
        let mut k = kw + 1;
        if let Some(next) = t.skip_angle(k, end) {
            k = next;
        }
        let Some((receiver, name_idx, next)) = self.receiver_and_name(k, end) else {
            return Err(t.error(k, "property name"));
        };
        let name = t.name(name_idx);
        let qname = qualify(prefix, &name);
        let mut decl = Declaration::new(DeclKind::Property, name, qname.clone());
        decl.name_range = t.range(name_idx);
        decl.modifiers.insert(t.text(kw).to_string());
        self.attach(&mut decl, pre);
        let mut sink = BodySink::new(qname);
        if let Some((rs, re)) = receiver {
            if let Some(p) = parse_type(t, rs, re) {
                sink.push_type(&p, TypePosition::ExtensionReceiver);
                decl.receiver_type = Some(p.type_ref());
            }
        }
        k = next;
        if t.is_punct(k, ":") {
            let Some(p) = parse_type(t, k + 1, end) else {
                return Err(t.error(k + 1, "property type"));
            };
            sink.push_type(&p, TypePosition::Property);
            decl.declared_type = Some(p.type_ref());
            k = p.next;
        }
        if t.is_punct(k, "=") {
            let e = kotlin_expr_end(t, k + 1, end);
            decl.defining_chain = single_chain(t, k + 1, e);
            scan(t, k + 1, e, &mut sink);
            k = e;
        } else if t.is_word(k, "by") {
            let e = kotlin_expr_end(t, k + 1, end);
            scan(t, k + 1, e, &mut sink);
            k = e;
        }
        // accessors
        loop {
            let acc = self.prefix(k, end)?;
            let a = acc.next;
            if !(t.is_word(a, "get") || t.is_word(a, "set")) {
                break;
            }
            let mut j = a + 1;
            if t.is_punct(j, "(") {
                j = t.close(j) + 1;
            }
            if t.is_punct(j, ":") {
                if let Some(p) = parse_type(t, j + 1, end) {
                    sink.push_type(&p, TypePosition::Other);
                    j = p.next;
                }
            }
            if t.is_punct(j, "=") {
                let e = kotlin_expr_end(t, j + 1, end);
                scan(t, j + 1, e, &mut sink);
                j = e;
            } else if t.is_punct(j, "{") {
                let c = t.close(j);
                scan(t, j + 1, c, &mut sink);
                j = c + 1;
            }
            k = j;
        }
        decl.locals = sink.locals;
        decl.body_refs.extend(sink.refs);
        decl.range = t.span(start, k - 1);
        Ok((decl, k))
    }

    fn secondary_constructor(
        &self,
        start: usize,
        pre: &Prefix,
        kw: usize,
        end: usize,
        owner: &Owner,
    ) -> Result<(Declaration, usize), ParseError> {
        let t = self.t;
        let mut k = kw + 1;
        if !t.is_punct(k, "(") {
            return Err(t.error(k, "`(`"));
        }
        let qname = qualify(owner.qname, owner.name);
        let mut decl = Declaration::new(DeclKind::Function, owner.name, qname.clone());
        decl.is_constructor = true;
        decl.name_range = t.range(kw);
        self.attach(&mut decl, pre);
        let (params, _) = self.params(k, &qname, None)?;
        let mut sink = BodySink::new(qname);
        for p in &params {
            sink.shadow(&p.name);
        }
        decl.params = params;
        k = t.close(k) + 1;
        if t.is_punct(k, ":") && (t.is_word(k + 1, "this") || t.is_word(k + 1, "super")) && t.is_punct(k + 2, "(") {
            scan_region(t, k + 2, &mut sink);
            k = t.close(k + 2) + 1;
        }
        if t.is_punct(k, "{") && k < end {
            let c = t.close(k);
            scan(t, k + 1, c, &mut sink);
            k = c + 1;
        }
        decl.locals = sink.locals;
        decl.body_refs.extend(sink.refs);
        decl.range = t.span(start, k - 1);
        Ok((decl, k))
    }

    /// Parses a parameter list starting at `(`. With `property_owner`, `val`/`var`
    /// parameters also become property declarations of that class.
    fn params(
        &self,
        open: usize,
        fn_qname: &str,
        property_owner: Option<&str>,
    ) -> Result<(Vec<Declaration>, Vec<Declaration>), ParseError> {
        let t = self.t;
        let close = t.close(open);
        let mut params = Vec::new();
        let mut props = Vec::new();
        let mut i = open + 1;
        while i < close {
            let pre = self.prefix(i, close)?;
            let mut j = pre.next;
            let mut binding = None;
            if t.is_word(j, "val") || t.is_word(j, "var") {
                binding = Some(t.text(j).to_string());
                j += 1;
            }
            if !t.is_name(j) {
                return Err(t.error(j, "parameter name"));
            }
            let name = t.name(j);
            let name_idx = j;
            j += 1;
            let as_property = binding.is_some() && property_owner.is_some();
            let mut p = Declaration::new(DeclKind::Parameter, name.clone(), qualify(fn_qname, &name));
            p.name_range = t.range(name_idx);
            self.attach(&mut p, &pre);
            if let Some(b) = &binding {
                p.modifiers.insert(b.clone());
            }
            let mut sink = BodySink::new(fn_qname.to_string());
            let mut ty = None;
            if t.is_punct(j, ":") {
                let Some(pt) = parse_type(t, j + 1, close) else {
                    return Err(t.error(j + 1, "parameter type"));
                };
                if !as_property {
                    sink.push_type(&pt, TypePosition::Parameter);
                }
                p.declared_type = Some(pt.type_ref());
                j = pt.next;
                ty = Some(pt);
            }
            if t.is_punct(j, "=") {
                let mut e = j + 1;
                while e < close && !t.is_punct(e, ",") {
                    e = if t.is_open(e) { t.close(e) + 1 } else { e + 1 };
                }
                scan(t, j + 1, e, &mut sink);
                p.has_default = true;
                j = e;
            }
            p.range = t.span(i, j - 1);
            if let (true, Some(owner)) = (as_property, property_owner) {
                let mut prop = Declaration::new(DeclKind::Property, name.clone(), qualify(owner, &name));
                prop.modifiers = p.modifiers.clone();
                prop.annotations = p.annotations.clone();
                prop.declared_type = p.declared_type.clone();
                prop.name_range = p.name_range;
                prop.range = p.range;
                let mut psink = BodySink::new(prop.qualified_name.clone());
                if let Some(pt) = &ty {
                    psink.push_type(pt, TypePosition::Property);
                }
                prop.body_refs = psink.refs;
                props.push(prop);
            }
            p.body_refs.extend(sink.refs);
            params.push(p);
            if t.is_punct(j, ",") {
                j += 1;
            } else if j < close {
                return Err(t.error(j, "`,` or `)`"));
            }
            i = j;
        }
        Ok((params, props))
    }
}
