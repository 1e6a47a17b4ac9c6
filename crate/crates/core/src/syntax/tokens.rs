use crate::source::{Language, SourceFile, SourceRange};

use super::lexer::{TokKind, Token};
use super::ParseError;

const JAVA_KEYWORDS: &[&str] = &[
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const", "continue",
    "default", "do", "double", "else", "enum", "extends", "final", "finally", "float", "for", "goto", "if",
    "implements", "import", "instanceof", "int", "interface", "long", "native", "new", "package", "private",
    "protected", "public", "return", "short", "static", "strictfp", "super", "switch", "synchronized", "this",
    "throw", "throws", "transient", "try", "void", "volatile", "while", "true", "false", "null", "yield",
];

const KOTLIN_KEYWORDS: &[&str] = &[
    "as", "break", "class", "continue", "do", "else", "false", "for", "fun", "if", "in", "interface", "is", "null",
    "object", "package", "return", "super", "this", "throw", "true", "try", "typealias", "typeof", "val", "var",
    "when", "while",
];

pub(crate) const JAVA_PRIMITIVES: &[&str] = &["boolean", "byte", "char", "short", "int", "long", "float", "double", "void"];

pub(crate) const KOTLIN_MODIFIERS: &[&str] = &[
    "public", "private", "protected", "internal", "open", "abstract", "final", "override", "data", "sealed", "inner",
    "enum", "annotation", "companion", "inline", "suspend", "operator", "infix", "tailrec", "external", "const",
    "lateinit", "noinline", "crossinline", "reified", "value", "expect", "actual", "vararg",
];

pub(crate) const JAVA_MODIFIERS: &[&str] = &[
    "public", "protected", "private", "static", "final", "abstract", "native", "synchronized", "transient",
    "volatile", "strictfp", "default", "sealed",
];

pub(crate) fn is_keyword(lang: Language, word: &str) -> bool {
    match lang {
        Language::Java => JAVA_KEYWORDS.contains(&word),
        Language::Kotlin => KOTLIN_KEYWORDS.contains(&word),
    }
}

/// Token vector with precomputed bracket matching.
pub(crate) struct Toks<'a> {
    pub src: &'a str,
    pub file: &'a SourceFile,
    pub lang: Language,
    pub toks: Vec<Token>,
    matching: Vec<usize>,
    pub bracket_error: Option<ParseError>,
}

impl<'a> Toks<'a> {
    pub fn new(file: &'a SourceFile, toks: Vec<Token>) -> Result<Self, ParseError> {
        let t = Self::lenient(file, toks);
        match t.bracket_error.clone() {
            Some(e) => Err(e),
            None => Ok(t),
        }
    }

    /// Like `new`, but keeps going on unbalanced brackets; the error is kept
    /// in `bracket_error`.
    pub fn lenient(file: &'a SourceFile, toks: Vec<Token>) -> Self {
        let (matching, bracket_error) = match_brackets(file, &toks);
        Toks { src: file.text(), file, lang: file.language(), toks, matching, bracket_error }
    }

    pub fn len(&self) -> usize {
        self.toks.len()
    }

    pub fn text(&self, i: usize) -> &'a str {
        match self.toks.get(i) {
            Some(t) => &self.src[t.start..t.end],
            None => "",
        }
    }

    pub fn kind(&self, i: usize) -> Option<TokKind> {
        self.toks.get(i).map(|t| t.kind)
    }

    pub fn is_punct(&self, i: usize, p: &str) -> bool {
        self.kind(i) == Some(TokKind::Punct) && self.text(i) == p
    }

    pub fn is_word(&self, i: usize, w: &str) -> bool {
        self.kind(i) == Some(TokKind::Ident) && self.text(i) == w
    }

    /// Any identifier-shaped token, keywords included.
    pub fn is_name(&self, i: usize) -> bool {
        self.kind(i) == Some(TokKind::Ident)
    }

    /// An identifier that is not a hard keyword of the file's language.
    pub fn is_ident(&self, i: usize) -> bool {
        self.is_name(i) && (self.text(i).starts_with('`') || !is_keyword(self.lang, self.text(i)))
    }

    pub fn name(&self, i: usize) -> String {
        self.text(i).trim_matches('`').to_string()
    }

    pub fn nl(&self, i: usize) -> bool {
        self.toks.get(i).is_some_and(|t| t.nl_before)
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        match (self.toks.get(i), self.toks.get(j)) {
            (Some(a), Some(b)) => a.end == b.start,
            _ => false,
        }
    }

    pub fn range(&self, i: usize) -> SourceRange {
        let t = &self.toks[i];
        self.file.range(t.start, t.end)
    }

    /// Range from the start of token `i` to the end of token `j` (inclusive).
    pub fn span(&self, i: usize, j: usize) -> SourceRange {
        let j = j.max(i);
        self.file.range(self.toks[i].start, self.toks[j].end)
    }

    /// Index of the bracket matching the one at `i`.
    pub fn close(&self, i: usize) -> usize {
        self.matching[i]
    }

    pub fn is_open(&self, i: usize) -> bool {
        self.kind(i) == Some(TokKind::Punct) && matches!(self.text(i), "(" | "[" | "{")
    }

    pub fn error(&self, i: usize, expected: &str) -> ParseError {
        let offset = self.toks.get(i).map(|t| t.start).unwrap_or(self.src.len());
        let (line, col) = self.file.line_index().position(self.src, offset);
        ParseError { path: self.file.path().to_string(), line, col, expected: expected.to_string() }
    }

    /// Skips a balanced `<...>` run that can only be a type argument or
    /// parameter list. Returns the index after the closing `>`.
    pub fn skip_angle(&self, i: usize, limit: usize) -> Option<usize> {
        if !self.is_punct(i, "<") {
            return None;
        }
        let mut depth = 0usize;
        let mut j = i;
        while j < limit {
            let text = self.text(j);
            match self.kind(j)? {
                TokKind::Punct => match text {
                    "<" => depth += 1,
                    ">" => {
                        depth -= 1;
                        if depth == 0 {
                            return Some(j + 1);
                        }
                    }
                    "(" | "[" => {
                        j = self.close(j);
                    }
                    "," | "." | "?" | "*" | ":" | "&" | "@" | "->" | "?." => {}
                    _ => return None,
                },
                TokKind::Ident => {
                    if self.lang == Language::Java
                        && is_keyword(Language::Java, text)
                        && !matches!(text, "extends" | "super")
                        && !JAVA_PRIMITIVES.contains(&text)
                    {
                        return None;
                    }
                    if self.lang == Language::Kotlin && is_keyword(Language::Kotlin, text) && !matches!(text, "in") {
                        return None;
                    }
                }
                _ => return None,
            }
            j += 1;
        }
        None
    }
}

/// Matches brackets. Unbalanced input still yields a usable table (stray
/// closers map to themselves, unclosed openers to the last token) together
/// with the first error.
fn match_brackets(file: &SourceFile, toks: &[Token]) -> (Vec<usize>, Option<ParseError>) {
    let text = file.text();
    let err = |offset: usize, expected: &str| {
        let (line, col) = file.line_index().position(text, offset);
        ParseError { path: file.path().to_string(), line, col, expected: expected.to_string() }
    };
    let mut first: Option<ParseError> = None;
    let mut matching: Vec<usize> = (0..toks.len()).collect();
    let mut stack: Vec<usize> = Vec::new();
    for (i, t) in toks.iter().enumerate() {
        if t.kind != TokKind::Punct {
            continue;
        }
        let s = &text[t.start..t.end];
        match s {
            "(" | "[" | "{" => stack.push(i),
            ")" | "]" | "}" => {
                let want = match s {
                    ")" => "(",
                    "]" => "[",
                    _ => "{",
                };
                match stack.last() {
                    Some(&open) if &text[toks[open].start..toks[open].end] == want => {
                        stack.pop();
                        matching[open] = i;
                        matching[i] = open;
                    }
                    Some(&open) => {
                        let close = closer(&text[toks[open].start..toks[open].end]);
                        first.get_or_insert_with(|| err(t.start, &format!("`{close}`")));
                    }
                    None => {
                        first.get_or_insert_with(|| err(t.start, "matching opening bracket"));
                    }
                }
            }
            _ => {}
        }
    }
    if let Some(&open) = stack.first() {
        let close = closer(&text[toks[open].start..toks[open].end]);
        first.get_or_insert_with(|| err(text.len(), &format!("`{close}`")));
    }
    for open in stack {
        matching[open] = toks.len() - 1;
    }
    (matching, first)
}

fn closer(open: &str) -> &'static str {
    match open {
        "(" => ")",
        "[" => "]",
        _ => "}",
    }
}
