use crate::source::{Language, SourceRange};

use super::ast::TypeRef;
use super::tokens::{Toks, JAVA_PRIMITIVES};

/// A type expression as written. Generic arguments are kept only as nested
/// types so callers can harvest their names.
#[derive(Debug, Clone)]
pub(crate) struct ParsedType {
    pub segments: Vec<String>,
    pub name_range: SourceRange,
    pub range: SourceRange,
    pub nullable: bool,
    pub primitive: bool,
    pub function_type: bool,
    pub args: Vec<ParsedType>,
    pub next: usize,
}

impl ParsedType {
    pub fn name(&self) -> String {
        self.segments.join(".")
    }

    pub fn type_ref(&self) -> TypeRef {
        TypeRef { name: self.name(), nullable: self.nullable, range: self.name_range }
    }

    /// All nested argument types, depth first.
    pub fn nested(&self) -> Vec<&ParsedType> {
        let mut out = Vec::new();
        fn walk<'p>(p: &'p ParsedType, out: &mut Vec<&'p ParsedType>) {
            for a in &p.args {
                out.push(a);
                walk(a, out);
            }
        }
        walk(self, &mut out);
        out
    }
}

fn skip_annotations(t: &Toks, mut j: usize, limit: usize) -> usize {
    while j + 1 < limit && t.is_punct(j, "@") && t.is_name(j + 1) && !t.is_word(j + 1, "interface") {
        j += 2;
        while j + 1 < limit && t.is_punct(j, ".") && t.is_name(j + 1) {
            j += 2;
        }
        if j < limit && t.is_punct(j, "(") && !t.nl(j) {
            j = t.close(j) + 1;
        }
    }
    j
}

pub(crate) fn parse_type(t: &Toks, i: usize, limit: usize) -> Option<ParsedType> {
    match t.lang {
        Language::Java => parse_java(t, i, limit),
        Language::Kotlin => parse_kotlin(t, i, limit),
    }
}

fn parse_java(t: &Toks, i: usize, limit: usize) -> Option<ParsedType> {
    let first = skip_annotations(t, i, limit);
    let mut j = first;
    if j >= limit {
        return None;
    }
    let mut segments = Vec::new();
    let mut args = Vec::new();
    let mut primitive = false;
    let mut last_seg = j;
    if t.is_name(j) && JAVA_PRIMITIVES.contains(&t.text(j)) {
        segments.push(t.name(j));
        primitive = true;
        j += 1;
    } else if t.is_ident(j) {
        loop {
            segments.push(t.name(j));
            last_seg = j;
            j += 1;
            if j < limit && t.is_punct(j, "<") {
                let (a, next) = parse_args(t, j, limit)?;
                args.extend(a);
                j = next;
            }
            if j + 1 < limit && t.is_punct(j, ".") && t.is_ident(j + 1) {
                j += 1;
                continue;
            }
            break;
        }
    } else {
        return None;
    }
    let mut last = j - 1;
    while j + 1 < limit && t.is_punct(j, "[") && t.close(j) == j + 1 {
        last = j + 1;
        j += 2;
    }
    Some(ParsedType {
        segments,
        name_range: t.span(first, if primitive { first } else { last_seg }),
        range: t.span(first, last),
        nullable: false,
        primitive,
        function_type: false,
        args,
        next: j,
    })
}

/// Parses `<...>` type arguments starting at the `<`.
fn parse_args(t: &Toks, i: usize, limit: usize) -> Option<(Vec<ParsedType>, usize)> {
    let mut j = i + 1;
    let mut out = Vec::new();
    if t.is_punct(j, ">") {
        return Some((out, j + 1));
    }
    loop {
        if j >= limit {
            return None;
        }
        if t.lang == Language::Java && t.is_punct(j, "?") {
            j += 1;
            if t.is_word(j, "extends") || t.is_word(j, "super") {
                let p = parse_type(t, j + 1, limit)?;
                j = p.next;
                out.push(p);
            }
        } else if t.lang == Language::Kotlin && t.is_punct(j, "*") {
            j += 1;
        } else {
            if t.lang == Language::Kotlin && (t.is_word(j, "in") || t.is_word(j, "out")) && t.is_name(j + 1) {
                j += 1;
            }
            let p = parse_type(t, j, limit)?;
            j = p.next;
            out.push(p);
        }
        if t.is_punct(j, ",") {
            j += 1;
        } else if t.is_punct(j, ">") {
            return Some((out, j + 1));
        } else {
            return None;
        }
    }
}

fn parse_kotlin(t: &Toks, i: usize, limit: usize) -> Option<ParsedType> {
    let mut j = i;
    while t.is_word(j, "suspend") {
        j += 1;
    }
    let first = skip_annotations(t, j, limit);
    j = first;
    if j >= limit {
        return None;
    }
    if t.is_punct(j, "(") {
        let c = t.close(j);
        if c >= limit {
            return None;
        }
        if t.is_punct(c + 1, "->") {
            let params = function_params(t, j + 1, c)?;
            let ret = parse_kotlin(t, c + 2, limit)?;
            let mut args = params;
            let next = ret.next;
            let end = next - 1;
            args.push(ret);
            return Some(ParsedType {
                segments: vec!["Function".to_string()],
                name_range: t.span(first, end),
                range: t.span(first, end),
                nullable: false,
                primitive: false,
                function_type: true,
                args,
                next,
            });
        }
        let mut inner = parse_kotlin(t, j + 1, c)?;
        if inner.next != c {
            return None;
        }
        let mut next = c + 1;
        while next < limit && t.is_punct(next, "?") {
            inner.nullable = true;
            next += 1;
        }
        inner.range = t.span(first, next - 1);
        inner.next = next;
        return Some(inner);
    }
    if !t.is_ident(j) && !t.is_word(j, "dynamic") {
        return None;
    }
    let mut segments = Vec::new();
    let mut args = Vec::new();
    let mut last_seg;
    loop {
        segments.push(t.name(j));
        last_seg = j;
        j += 1;
        if j < limit && t.is_punct(j, "<") && !t.nl(j) {
            let (a, next) = parse_args(t, j, limit)?;
            args.extend(a);
            j = next;
        }
        if j + 1 < limit && t.is_punct(j, ".") && t.is_ident(j + 1) {
            j += 1;
            continue;
        }
        break;
    }
    // Function type with receiver: `A.(B) -> C`
    if j + 1 < limit && t.is_punct(j, ".") && t.is_punct(j + 1, "(") {
        let c = t.close(j + 1);
        if c < limit && t.is_punct(c + 1, "->") {
            let receiver = ParsedType {
                segments,
                name_range: t.span(first, last_seg),
                range: t.span(first, j - 1),
                nullable: false,
                primitive: false,
                function_type: false,
                args,
                next: j,
            };
            let mut all = vec![receiver];
            all.extend(function_params(t, j + 2, c)?);
            let ret = parse_kotlin(t, c + 2, limit)?;
            let next = ret.next;
            all.push(ret);
            return Some(ParsedType {
                segments: vec!["Function".to_string()],
                name_range: t.span(first, next - 1),
                range: t.span(first, next - 1),
                nullable: false,
                primitive: false,
                function_type: true,
                args: all,
                next,
            });
        }
    }
    let mut nullable = false;
    let mut last = j - 1;
    while j < limit && t.is_punct(j, "?") && !t.nl(j) {
        nullable = true;
        last = j;
        j += 1;
    }
    Some(ParsedType {
        segments,
        name_range: t.span(first, last_seg),
        range: t.span(first, last),
        nullable,
        primitive: false,
        function_type: false,
        args,
        next: j,
    })
}

/// Parameter types of a Kotlin function type, `(a: A, B)`.
fn function_params(t: &Toks, start: usize, end: usize) -> Option<Vec<ParsedType>> {
    let mut out = Vec::new();
    let mut j = start;
    while j < end {
        if t.is_name(j) && t.is_punct(j + 1, ":") {
            j += 2;
        }
        let p = parse_kotlin(t, j, end)?;
        j = p.next;
        out.push(p);
        if t.is_punct(j, ",") {
            j += 1;
        } else if j != end {
            return None;
        }
    }
    Some(out)
}
