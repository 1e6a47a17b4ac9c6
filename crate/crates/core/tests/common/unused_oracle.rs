//! Brute-force unused-import oracle: an import is unused when its bound
//! name appears as no identifier token outside comments, strings and the
//! import header. Kotlin string template expressions count as code.

use std::collections::BTreeSet;

/// Code text with comments and string contents blanked out. Kotlin template
/// expressions inside strings are kept.
fn strip(src: &str, kotlin: bool) -> String {
    let b: Vec<char> = src.chars().collect();
    let mut out = String::new();
    let mut i = 0;
    let starts = |i: usize, pat: &str| pat.chars().enumerate().all(|(k, c)| b.get(i + k) == Some(&c));
    while i < b.len() {
        if starts(i, "//") {
            while i < b.len() && b[i] != '\n' {
                i += 1;
            }
        } else if starts(i, "/*") {
            i += 2;
            while i < b.len() && !starts(i, "*/") {
                i += 1;
            }
            i += 2;
            out.push(' ');
        } else if b[i] == '"' {
            let triple = starts(i, "\"\"\"");
            i += if triple { 3 } else { 1 };
            out.push(' ');
            loop {
                if i >= b.len() {
                    break;
                }
                if triple && starts(i, "\"\"\"") {
                    i += 3;
                    break;
                }
                if !triple && b[i] == '"' {
                    i += 1;
                    break;
                }
                if !triple && b[i] == '\\' {
                    i += 2;
                    continue;
                }
                if kotlin && b[i] == '$' && i + 1 < b.len() {
                    if b[i + 1] == '{' {
                        let mut depth = 0;
                        i += 1;
                        while i < b.len() {
                            match b[i] {
                                '{' => depth += 1,
                                '}' => {
                                    depth -= 1;
                                    if depth == 0 {
                                        i += 1;
                                        break;
                                    }
                                }
                                c => out.push(c),
                            }
                            i += 1;
                        }
                        out.push(' ');
                        continue;
                    }
                    if b[i + 1].is_alphabetic() || b[i + 1] == '_' {
                        i += 1;
                        while i < b.len() && (b[i].is_alphanumeric() || b[i] == '_') {
                            out.push(b[i]);
                            i += 1;
                        }
                        out.push(' ');
                        continue;
                    }
                }
                i += 1;
            }
            out.push(' ');
        } else if b[i] == '\'' {
            i += 1;
            while i < b.len() && b[i] != '\'' {
                if b[i] == '\\' {
                    i += 1;
                }
                i += 1;
            }
            i += 1;
            out.push(' ');
        } else {
            out.push(b[i]);
            i += 1;
        }
    }
    out
}

struct OracleImport {
    target: String,
    bound: String,
}

/// Imports that bind a name, and every identifier token outside the header.
fn scan(src: &str, kotlin: bool) -> (Vec<OracleImport>, BTreeSet<String>) {
    let code = strip(src, kotlin);
    let mut imports = Vec::new();
    let mut tokens = BTreeSet::new();
    for line in code.lines() {
        let t = line.trim().trim_end_matches(';').trim();
        if let Some(rest) = t.strip_prefix("import ") {
            let rest = rest.trim().strip_prefix("static ").unwrap_or(rest).trim();
            let (target, alias) = match rest.split_once(" as ") {
                Some((t, a)) => (t.trim(), Some(a.trim())),
                None => (rest, None),
            };
            if !target.ends_with(".*") {
                let bound = alias.unwrap_or_else(|| target.rsplit('.').next().unwrap());
                imports.push(OracleImport { target: target.to_string(), bound: bound.to_string() });
            }
            continue;
        }
        if t.starts_with("package ") {
            continue;
        }
        let mut cur = String::new();
        for c in line.chars().chain(std::iter::once(' ')) {
            if c.is_alphanumeric() || c == '_' {
                cur.push(c);
            } else if !cur.is_empty() {
                if !cur.chars().next().unwrap().is_ascii_digit() {
                    tokens.insert(std::mem::take(&mut cur));
                }
                cur.clear();
            }
        }
    }
    (imports, tokens)
}

pub fn oracle_unused(path: &str, src: &str) -> Vec<String> {
    let (imports, tokens) = scan(src, path.ends_with(".kt"));
    imports.into_iter().filter(|i| !tokens.contains(&i.bound)).map(|i| i.target).collect()
}

