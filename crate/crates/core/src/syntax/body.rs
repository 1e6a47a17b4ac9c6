//! Statement-level scanner for function bodies, initializers and argument
//! lists. It does not build expression trees: it recognizes local variable
//! declarations, call/access chains, object creation, type tests and
//! annotations, and harvests every other identifier as a low-confidence
//! reference.

use std::collections::HashMap;

use crate::source::{Language, SourceRange};

use super::ast::{Confidence, LocalVar, RefKind, Reference, TypePosition};
use super::lexer::{tokenize_span, TokKind};
use super::tokens::{Toks, KOTLIN_MODIFIERS};
use super::types::{parse_type, ParsedType};

pub(crate) struct BodySink {
    pub enclosing: String,
    pub refs: Vec<Reference>,
    pub locals: Vec<LocalVar>,
    origins: HashMap<String, Option<String>>,
    low: u32,
}

impl BodySink {
    pub fn new(enclosing: impl Into<String>) -> Self {
        BodySink { enclosing: enclosing.into(), refs: Vec::new(), locals: Vec::new(), origins: HashMap::new(), low: 0 }
    }

    pub fn push(&mut self, kind: RefKind, name_path: Vec<String>, range: SourceRange, position: TypePosition) {
        self.push_with_origin(kind, name_path, range, position, None);
    }

    fn push_with_origin(
        &mut self,
        kind: RefKind,
        name_path: Vec<String>,
        range: SourceRange,
        position: TypePosition,
        receiver_origin: Option<String>,
    ) {
        if name_path.is_empty() {
            return;
        }
        let confidence = if self.low > 0 { Confidence::Low } else { Confidence::Normal };
        self.refs.push(Reference {
            kind,
            name_path,
            receiver_origin,
            position,
            confidence,
            range,
            enclosing_decl: self.enclosing.clone(),
        });
    }

    fn harvest(&mut self, name: String, range: SourceRange) {
        self.refs.push(Reference {
            kind: RefKind::FieldAccess,
            name_path: vec![name],
            receiver_origin: None,
            position: TypePosition::None,
            confidence: Confidence::Low,
            range,
            enclosing_decl: self.enclosing.clone(),
        });
    }

    /// Emits a type use plus `Other` uses for its generic arguments.
    pub fn push_type(&mut self, ty: &ParsedType, position: TypePosition) {
        if !ty.primitive && !ty.function_type {
            self.push(RefKind::TypeUse, ty.segments.clone(), ty.name_range, position);
        }
        for nested in ty.nested() {
            if !nested.primitive && !nested.function_type {
                self.push(RefKind::TypeUse, nested.segments.clone(), nested.name_range, TypePosition::Other);
            }
        }
    }

    fn declare_local(&mut self, name: String, declared_type: Option<&ParsedType>, origin: Option<String>, range: SourceRange) {
        self.origins.insert(name.clone(), origin.clone());
        self.locals.push(LocalVar { name, declared_type: declared_type.map(ParsedType::type_ref), origin, range });
    }

    /// Adds names that behave as locals for origin tracking (parameters).
    pub fn shadow(&mut self, name: &str) {
        self.origins.insert(name.to_string(), None);
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Seg {
    pub name: String,
    pub range: SourceRange,
    pub call: bool,
}

#[derive(Debug, Clone)]
pub(crate) struct Chain {
    pub segs: Vec<Seg>,
    /// Segments before this index were already emitted (object creation base).
    pub emitted: usize,
    pub next: usize,
    /// Bracket openers of argument lists, index expressions and trailing lambdas.
    pub regions: Vec<usize>,
    pub type_args: Vec<ParsedType>,
    pub class_literal: bool,
}

impl Chain {
    pub fn names(&self) -> Vec<String> {
        self.segs.iter().map(|s| s.name.clone()).collect()
    }
}

fn is_chain_head(t: &Toks, i: usize) -> bool {
    t.is_ident(i) || t.is_word(i, "this") || t.is_word(i, "super")
}

pub(crate) fn parse_chain(t: &Toks, i: usize, limit: usize) -> Option<Chain> {
    if i >= limit || !is_chain_head(t, i) {
        return None;
    }
    let segs = vec![Seg { name: t.name(i), range: t.range(i), call: false }];
    Some(continue_chain(t, segs, 0, i + 1, limit))
}

fn continue_chain(t: &Toks, mut segs: Vec<Seg>, emitted: usize, mut j: usize, limit: usize) -> Chain {
    let kotlin = t.lang == Language::Kotlin;
    let mut regions = Vec::new();
    let mut type_args = Vec::new();
    let mut class_literal = false;
    while j < limit {
        if kotlin && t.is_punct(j, "<") {
            if let Some(k) = t.skip_angle(j, limit) {
                if k < limit && (t.is_punct(k, "(") || (t.is_punct(k, "{") && !t.nl(k))) {
                    let mut a = j + 1;
                    while a < k - 1 {
                        match parse_type(t, a, k - 1) {
                            Some(p) => {
                                a = p.next;
                                type_args.push(p);
                            }
                            None => a += 1,
                        }
                    }
                    j = k;
                }
            }
        }
        if t.is_punct(j, "(") && !(kotlin && t.nl(j)) {
            segs.last_mut().unwrap().call = true;
            regions.push(j);
            j = t.close(j) + 1;
            if kotlin && j < limit && t.is_punct(j, "{") && !t.nl(j) {
                regions.push(j);
                j = t.close(j) + 1;
            }
            continue;
        }
        if kotlin && t.is_punct(j, "{") && !t.nl(j) {
            segs.last_mut().unwrap().call = true;
            regions.push(j);
            j = t.close(j) + 1;
            continue;
        }
        if t.is_punct(j, "[") {
            regions.push(j);
            j = t.close(j) + 1;
            break;
        }
        let sep = if t.is_punct(j, ".") || t.is_punct(j, "?.") || t.is_punct(j, "::") {
            j
        } else if kotlin && t.is_punct(j, "!!") && (t.is_punct(j + 1, ".") || t.is_punct(j + 1, "?.")) {
            j + 1
        } else {
            break;
        };
        if sep + 1 >= limit {
            break;
        }
        if t.is_word(sep + 1, "class") {
            class_literal = true;
            j = sep + 2;
            break;
        }
        if !t.is_ident(sep + 1) {
            break;
        }
        segs.push(Seg { name: t.name(sep + 1), range: t.range(sep + 1), call: t.is_punct(sep, "::") });
        j = sep + 2;
    }
    Chain { segs, emitted, next: j, regions, type_args, class_literal }
}

/// If `start..end` is exactly one call/access chain, its identifier segments.
pub(crate) fn single_chain(t: &Toks, start: usize, end: usize) -> Option<Vec<String>> {
    let chain = parse_chain(t, start, end)?;
    if chain.next != end || chain.class_literal {
        return None;
    }
    let mut names = chain.names();
    if names.len() > 1 && names[0] == "this" {
        names.remove(0);
    }
    Some(names)
}

const CONT_AFTER: &[&str] = &[
    ".", "?.", "=", "+", "-", "*", "/", "%", "&&", "||", "?:", "==", "!=", "===", "!==", "<", ">", "<=", ">=", ",",
    "->", "..", "!", "(", "[", "+=", "-=", "*=", "/=", "%=", "::", "as", "is", "in", "else", "if", "when", "try", "do",
];
const CONT_BEFORE: &[&str] = &[".", "?.", "?:", "&&", "||", "!!", "as", "else", "catch", "finally", "::"];

/// End (exclusive) of a Kotlin expression starting at `start`.
pub(crate) fn kotlin_expr_end(t: &Toks, start: usize, limit: usize) -> usize {
    let mut i = start;
    while i < limit {
        if i > start && t.nl(i) && !continues(t, i) {
            return i;
        }
        if t.is_open(i) {
            i = t.close(i) + 1;
            continue;
        }
        if t.kind(i) == Some(TokKind::Punct) && matches!(t.text(i), ";" | "," | ")" | "]" | "}") {
            return i;
        }
        i += 1;
    }
    limit
}

fn continues(t: &Toks, i: usize) -> bool {
    let prev = t.text(i - 1);
    if CONT_AFTER.contains(&prev) || CONT_BEFORE.contains(&t.text(i)) {
        return true;
    }
    // `if (cond)` / `while (cond)` followed by a body on the next line
    if t.is_punct(i - 1, ")") {
        let open = t.close(i - 1);
        if open > 0 && matches!(t.text(open - 1), "if" | "while" | "for" | "when" | "catch") {
            return true;
        }
    }
    false
}

/// End (exclusive) of a Java expression: the next `,` or `;` at depth 0.
pub(crate) fn java_expr_end(t: &Toks, start: usize, limit: usize) -> usize {
    let mut i = start;
    while i < limit {
        if t.is_open(i) {
            i = t.close(i) + 1;
            continue;
        }
        if t.is_punct(i, ",") || t.is_punct(i, ";") {
            return i;
        }
        i += 1;
    }
    limit
}

pub(crate) fn scan(t: &Toks, start: usize, end: usize, sink: &mut BodySink) {
    Scanner { t }.range(start, end, true, false, sink);
}

/// Scans with every emitted reference marked low-confidence.
pub(crate) fn scan_low(t: &Toks, start: usize, end: usize, sink: &mut BodySink) {
    sink.low += 1;
    scan(t, start, end, sink);
    sink.low -= 1;
}

/// Scans one bracketed region starting at its opener, choosing the statement
/// mode the way the body scanner would.
pub(crate) fn scan_region(t: &Toks, open: usize, sink: &mut BodySink) {
    Scanner { t }.region(open, sink);
}

struct Scanner<'t, 'a> {
    t: &'t Toks<'a>,
}

impl<'t, 'a> Scanner<'t, 'a> {
    fn kotlin(&self) -> bool {
        self.t.lang == Language::Kotlin
    }

    fn region(&self, open: usize, sink: &mut BodySink) {
        let t = self.t;
        let close = t.close(open);
        match t.text(open) {
            "{" => {
                let mut start = open + 1;
                if self.kotlin() && !self.is_when_body(open) {
                    start = self.lambda_params(open + 1, close, sink);
                }
                self.range(start, close, true, false, sink);
            }
            "(" => {
                let stmt = !self.kotlin()
                    && ((open > 0 && matches!(t.text(open - 1), "for" | "catch" | "try")) || t.is_punct(close + 1, "->"));
                self.range(open + 1, close, stmt, true, sink);
            }
            _ => self.range(open + 1, close, false, false, sink),
        }
    }

    fn is_when_body(&self, open: usize) -> bool {
        let t = self.t;
        if open == 0 {
            return false;
        }
        if t.is_word(open - 1, "when") {
            return true;
        }
        if t.is_punct(open - 1, ")") {
            let o = t.close(open - 1);
            return o > 0 && t.is_word(o - 1, "when");
        }
        false
    }

    /// Recognizes `{ a, b: T -> ...` lambda parameters; returns where the body starts.
    fn lambda_params(&self, start: usize, end: usize, sink: &mut BodySink) -> usize {
        let t = self.t;
        let mut i = start;
        while i < end {
            if t.is_punct(i, "->") {
                break;
            }
            let ok = match t.kind(i) {
                Some(TokKind::Ident) => t.is_ident(i),
                Some(TokKind::Punct) => matches!(t.text(i), "," | ":" | "(" | ")" | "<" | ">" | "." | "?"),
                _ => false,
            };
            if !ok {
                return start;
            }
            i += 1;
        }
        if i >= end || i == start {
            return start;
        }
        let mut j = start;
        while j < i {
            if t.is_ident(j) && !t.is_punct(j.saturating_sub(1), ":") && !t.is_punct(j.saturating_sub(1), ".") {
                sink.declare_local(t.name(j), None, None, t.range(j));
            }
            if t.is_punct(j, ":") {
                if let Some(p) = parse_type(t, j + 1, i) {
                    sink.push_type(&p, TypePosition::Other);
                    j = p.next;
                    continue;
                }
            }
            j += 1;
        }
        i + 1
    }

    fn range(&self, start: usize, end: usize, mut stmt: bool, in_parens: bool, sink: &mut BodySink) {
        let t = self.t;
        let kotlin = self.kotlin();
        let mut i = start;
        while i < end {
            if kotlin && t.nl(i) {
                stmt = true;
            }
            match t.kind(i) {
                Some(TokKind::Punct) => {
                    let p = t.text(i);
                    if t.is_open(i) {
                        self.region(i, sink);
                        stmt = p == "{";
                        i = t.close(i) + 1;
                        if p == "{" && !kotlin {
                            stmt = true;
                        }
                        continue;
                    }
                    if p == "@" {
                        i = self.annotation(i, end, sink);
                        continue;
                    }
                    stmt = p == ";" || p == "}" || p == "->" || (!kotlin && p == ":");
                    i += 1;
                }
                Some(TokKind::Str) => {
                    if kotlin {
                        self.templates(i, sink);
                    }
                    stmt = false;
                    i += 1;
                }
                Some(TokKind::Ident) => {
                    i = self.word(i, end, stmt, in_parens, sink);
                    stmt = false;
                    if i > 0 && t.is_punct(i - 1, ";") {
                        stmt = true;
                    }
                }
                _ => {
                    stmt = false;
                    i += 1;
                }
            }
        }
    }

    fn templates(&self, i: usize, sink: &mut BodySink) {
        let t = self.t;
        for &(s, e) in &t.toks[i].templates {
            let Ok(toks) = tokenize_span(t.src, s, e, Language::Kotlin) else {
                continue;
            };
            let Ok(inner) = Toks::new(t.file, toks) else {
                continue;
            };
            Scanner { t: &inner }.range(0, inner.len(), false, false, sink);
        }
    }

    fn annotation(&self, i: usize, end: usize, sink: &mut BodySink) -> usize {
        let t = self.t;
        // `return@label`, `this@Outer`: a label, not an annotation
        if self.kotlin() && i > 0 && t.adjacent(i - 1, i) && t.is_name(i - 1) {
            return if t.is_name(i + 1) { i + 2 } else { i + 1 };
        }
        if i + 1 >= end || !t.is_name(i + 1) {
            return i + 1;
        }
        let mut j = i + 1;
        if self.kotlin() && t.is_punct(j + 1, ":") && t.is_name(j + 2) {
            j += 2;
        }
        let first = j;
        let mut path = vec![t.name(j)];
        j += 1;
        while j + 1 < end && t.is_punct(j, ".") && t.is_name(j + 1) {
            path.push(t.name(j + 1));
            j += 2;
        }
        sink.push(RefKind::AnnotationUse, path, t.span(first, j - 1), TypePosition::None);
        if j < end && t.is_punct(j, "(") && !t.nl(j) {
            self.region(j, sink);
            j = t.close(j) + 1;
        }
        j
    }

    /// Handles an identifier or keyword; returns the next index.
    fn word(&self, i: usize, end: usize, stmt: bool, in_parens: bool, sink: &mut BodySink) -> usize {
        let t = self.t;
        let kotlin = self.kotlin();
        let w = t.text(i);
        if kotlin {
            match w {
                "val" | "var" => return self.kotlin_local(i, end, sink),
                "is" | "as" => {
                    let mut j = i + 1;
                    if t.is_punct(j, "?") {
                        j += 1;
                    }
                    if let Some(p) = parse_type(t, j, end) {
                        sink.push_type(&p, TypePosition::Other);
                        return p.next;
                    }
                    return j;
                }
                "fun" => {
                    // local function: skip its name
                    let mut j = i + 1;
                    while t.is_ident(j) && t.is_punct(j + 1, ".") {
                        j += 2;
                    }
                    return if t.is_ident(j) { j + 1 } else { j };
                }
                _ => {}
            }
            if t.is_ident(i) && t.is_punct(i + 1, "@") && t.adjacent(i, i + 1) {
                return i + 2;
            }
            if KOTLIN_MODIFIERS.contains(&w) && t.is_name(i + 1) && !t.nl(i + 1) {
                return i + 1;
            }
            if in_parens && t.is_ident(i) && t.is_punct(i + 1, "=") {
                return i + 2;
            }
        } else {
            match w {
                "new" => return self.java_new(i, end, sink),
                "instanceof" => {
                    let mut j = i + 1;
                    if t.is_word(j, "final") {
                        j += 1;
                    }
                    if let Some(p) = parse_type(t, j, end) {
                        sink.push_type(&p, TypePosition::Other);
                        let mut next = p.next;
                        if next < end && t.is_ident(next) {
                            sink.declare_local(t.name(next), Some(&p), None, t.range(next));
                            next += 1;
                        }
                        return next;
                    }
                    return j;
                }
                _ => {}
            }
            if stmt {
                if let Some(next) = self.java_local(i, end, sink) {
                    return next;
                }
            }
        }
        if !is_chain_head(t, i) {
            return i + 1;
        }
        if i > 0 && (t.is_punct(i - 1, ".") || t.is_punct(i - 1, "?.") || t.is_punct(i - 1, "::")) {
            sink.harvest(t.name(i), t.range(i));
            return i + 1;
        }
        let chain = parse_chain(t, i, end).expect("chain head");
        if stmt && chain.segs.len() == 1 && !chain.segs[0].call && t.is_punct(chain.next, "=") {
            let rhs = chain.next + 1;
            let rhs_end = self.expr_end(rhs, end);
            let name = chain.segs[0].name.clone();
            if sink.origins.contains_key(&name) {
                let origin = single_chain(t, rhs, rhs_end).map(|n| n.join("."));
                sink.origins.insert(name, origin);
            }
        }
        self.emit_chain(&chain, sink);
        chain.next
    }

    fn expr_end(&self, start: usize, limit: usize) -> usize {
        if self.kotlin() {
            kotlin_expr_end(self.t, start, limit)
        } else {
            java_expr_end(self.t, start, limit)
        }
    }

    fn emit_chain(&self, chain: &Chain, sink: &mut BodySink) {
        let kotlin = self.kotlin();
        let segs = &chain.segs;
        let n = segs.len();
        let head = segs[0].name.as_str();
        let head_is_self = head == "this" || head == "super";
        let origin = sink.origins.get(head).cloned().flatten();
        for idx in chain.emitted..n {
            if idx == 0 && (head_is_self || (n > 1 && !segs[0].call)) {
                continue;
            }
            let seg = &segs[idx];
            let kind = if seg.call {
                let creation = kotlin
                    && seg.name.chars().next().is_some_and(char::is_uppercase)
                    && segs[..idx].iter().all(|s| !s.call)
                    && !head_is_self;
                if creation {
                    RefKind::ObjectCreation
                } else {
                    RefKind::Call
                }
            } else {
                RefKind::FieldAccess
            };
            let path: Vec<String> = segs[..=idx].iter().map(|s| s.name.clone()).collect();
            sink.push_with_origin(kind, path, seg.range, TypePosition::None, origin.clone());
        }
        if chain.class_literal {
            let path: Vec<String> = segs.iter().map(|s| s.name.clone()).collect();
            sink.push(RefKind::TypeUse, path, segs[n - 1].range, TypePosition::Other);
        }
        for ty in &chain.type_args {
            sink.push_type(ty, TypePosition::Other);
        }
        for &open in &chain.regions {
            self.region(open, sink);
        }
    }

    fn kotlin_local(&self, i: usize, end: usize, sink: &mut BodySink) -> usize {
        let t = self.t;
        let mut j = i + 1;
        if t.is_punct(j, "(") {
            let close = t.close(j);
            for k in j + 1..close {
                if t.is_ident(k) && !t.is_punct(k - 1, ":") {
                    sink.declare_local(t.name(k), None, None, t.range(k));
                }
            }
            return close + 1;
        }
        if !t.is_ident(j) {
            return j;
        }
        let name_idx = j;
        j += 1;
        let mut declared = None;
        if t.is_punct(j, ":") {
            if let Some(p) = parse_type(t, j + 1, end) {
                sink.push_type(&p, TypePosition::LocalVar);
                j = p.next;
                declared = Some(p);
            }
        }
        let mut origin = None;
        if t.is_punct(j, "=") {
            let e = kotlin_expr_end(t, j + 1, end);
            origin = single_chain(t, j + 1, e).map(|n| n.join("."));
        }
        sink.declare_local(t.name(name_idx), declared.as_ref(), origin, t.range(name_idx));
        j
    }

    /// Java local variable declaration at statement start. Returns the index
    /// after the declarator list head, or `None` when the tokens are not a
    /// declaration.
    fn java_local(&self, i: usize, end: usize, sink: &mut BodySink) -> Option<usize> {
        let t = self.t;
        let mut j = i;
        while t.is_word(j, "final") {
            j += 1;
        }
        let ty = if t.is_word(j, "var") && t.is_ident(j + 1) {
            j += 1;
            None
        } else {
            let p = parse_type(t, j, end)?;
            j = p.next;
            Some(p)
        };
        if !t.is_ident(j) {
            return None;
        }
        let follow = j + 1;
        let mut k = follow;
        while t.is_punct(k, "[") && t.close(k) == k + 1 {
            k += 2;
        }
        let ok = k >= end || matches!(t.text(k), "=" | ";" | "," | ":" | ")");
        if !ok || t.kind(k) == Some(TokKind::Ident) {
            return None;
        }
        if let Some(p) = &ty {
            sink.push_type(p, TypePosition::LocalVar);
        }
        let mut name_idx = j;
        loop {
            let mut after = name_idx + 1;
            while t.is_punct(after, "[") && t.close(after) == after + 1 {
                after += 2;
            }
            let mut origin = None;
            let mut next = after;
            if t.is_punct(after, "=") {
                let e = java_expr_end(t, after + 1, end);
                origin = single_chain(t, after + 1, e).map(|n| n.join("."));
                self.range(after + 1, e, false, false, sink);
                next = e;
            }
            sink.declare_local(t.name(name_idx), ty.as_ref(), origin, t.range(name_idx));
            if t.is_punct(next, ",") && t.is_ident(next + 1) && next < end {
                name_idx = next + 1;
                continue;
            }
            return Some(next);
        }
    }

    fn java_new(&self, i: usize, end: usize, sink: &mut BodySink) -> usize {
        let t = self.t;
        let Some(p) = parse_type(t, i + 1, end) else {
            return i + 1;
        };
        if !p.primitive {
            sink.push(RefKind::ObjectCreation, p.segments.clone(), p.name_range, TypePosition::None);
        }
        for nested in p.nested() {
            sink.push_type(nested, TypePosition::Other);
        }
        let mut j = p.next;
        while j < end && t.is_punct(j, "[") {
            self.region(j, sink);
            j = t.close(j) + 1;
        }
        if j < end && t.is_punct(j, "(") {
            self.region(j, sink);
            j = t.close(j) + 1;
            if j < end && t.is_punct(j, "{") {
                scan_low(t, j + 1, t.close(j), sink);
                j = t.close(j) + 1;
            }
        } else if j < end && t.is_punct(j, "{") {
            // array initializer
            self.region(j, sink);
            j = t.close(j) + 1;
        }
        if j + 1 < end && (t.is_punct(j, ".") || t.is_punct(j, "::")) && t.is_ident(j + 1) {
            let mut segs: Vec<Seg> =
                p.segments.iter().map(|s| Seg { name: s.clone(), range: p.name_range, call: false }).collect();
            segs.last_mut().unwrap().call = true;
            let base = segs.len();
            let chain = continue_chain(t, segs, base, j, end);
            self.emit_chain(&chain, sink);
            return chain.next;
        }
        j
    }
}
