//! Tokenizer shared by the Kotlin and Java front ends.
//!
//! Comments are dropped. Every token records whether a line break preceded
//! it, which the Kotlin parser needs to find statement ends. Kotlin string
//! templates are kept inside the string token as byte spans so that the
//! body scanner can re-lex them.

use crate::source::Language;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokKind {
    Ident,
    Number,
    Str,
    Char,
    Punct,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokKind,
    pub start: usize,
    pub end: usize,
    pub nl_before: bool,
    /// Template expression spans inside a Kotlin string (`$x` or `${...}` contents).
    pub templates: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexError {
    pub offset: usize,
    pub message: String,
}

const PUNCT: &[&str] = &[
    "...", "===", "!==", "?.", "?:", "::", "!!", "->", "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=", "-=",
    "*=", "/=", "%=", "..",
];

pub fn tokenize(src: &str, lang: Language) -> Result<Vec<Token>, LexError> {
    tokenize_span(src, 0, src.len(), lang)
}

/// Tokenizes `src[start..end]`; offsets in the result are absolute.
pub fn tokenize_span(src: &str, start: usize, end: usize, lang: Language) -> Result<Vec<Token>, LexError> {
    let mut lx = Lexer { src, bytes: src.as_bytes(), pos: start, end, lang, out: Vec::new() };
    lx.run()?;
    Ok(lx.out)
}

struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    end: usize,
    lang: Language,
    out: Vec<Token>,
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '$'
}

fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}

impl<'a> Lexer<'a> {
    fn peek_char(&self, at: usize) -> Option<char> {
        if at >= self.end {
            return None;
        }
        self.src[at..self.end].chars().next()
    }

    fn byte(&self, at: usize) -> Option<u8> {
        if at < self.end {
            Some(self.bytes[at])
        } else {
            None
        }
    }

    fn err(&self, offset: usize, message: &str) -> LexError {
        LexError { offset, message: message.to_string() }
    }

    fn run(&mut self) -> Result<(), LexError> {
        let mut nl = false;
        while self.pos < self.end {
            let c = self.peek_char(self.pos).unwrap();
            if c == '\n' {
                nl = true;
                self.pos += 1;
                continue;
            }
            if c.is_whitespace() || c == '\u{feff}' {
                self.pos += c.len_utf8();
                continue;
            }
            if c == '/' && self.byte(self.pos + 1) == Some(b'/') {
                while let Some(b) = self.byte(self.pos) {
                    if b == b'\n' {
                        break;
                    }
                    self.pos += 1;
                }
                continue;
            }
            if c == '/' && self.byte(self.pos + 1) == Some(b'*') {
                if self.skip_block_comment()? {
                    nl = true;
                }
                continue;
            }
            let start = self.pos;
            let mut templates = Vec::new();
            let kind = if c == '"' {
                self.string(&mut templates)?;
                TokKind::Str
            } else if c == '\'' {
                self.char_lit()?;
                TokKind::Char
            } else if c == '`' && self.lang == Language::Kotlin {
                let close = self.src[start + 1..self.end]
                    .find(['`', '\n'])
                    .map(|i| start + 1 + i)
                    .filter(|&i| self.bytes[i] == b'`')
                    .ok_or_else(|| self.err(start, "unterminated backtick identifier"))?;
                self.pos = close + 1;
                TokKind::Ident
            } else if c.is_ascii_digit() {
                self.number();
                TokKind::Number
            } else if is_ident_start(c) {
                self.pos += c.len_utf8();
                while let Some(c) = self.peek_char(self.pos) {
                    if !is_ident_continue(c) {
                        break;
                    }
                    self.pos += c.len_utf8();
                }
                TokKind::Ident
            } else {
                let rest = &self.src[self.pos..self.end];
                let len = PUNCT.iter().find(|p| rest.starts_with(**p)).map(|p| p.len()).unwrap_or(c.len_utf8());
                self.pos += len;
                TokKind::Punct
            };
            self.out.push(Token { kind, start, end: self.pos, nl_before: nl, templates });
            nl = false;
        }
        Ok(())
    }

    /// Returns whether the comment spanned a line break.
    fn skip_block_comment(&mut self) -> Result<bool, LexError> {
        let start = self.pos;
        let nested = self.lang == Language::Kotlin;
        let mut depth = 0usize;
        let mut newline = false;
        while self.pos < self.end {
            if self.byte(self.pos) == Some(b'/') && self.byte(self.pos + 1) == Some(b'*') {
                if depth == 0 || nested {
                    depth += 1;
                }
                self.pos += 2;
            } else if self.byte(self.pos) == Some(b'*') && self.byte(self.pos + 1) == Some(b'/') {
                depth -= 1;
                self.pos += 2;
                if depth == 0 {
                    return Ok(newline);
                }
            } else {
                if self.byte(self.pos) == Some(b'\n') {
                    newline = true;
                }
                self.pos += 1;
            }
        }
        Err(self.err(start, "unterminated block comment"))
    }

    fn number(&mut self) {
        let rest = &self.src[self.pos..self.end];
        let hex = rest.starts_with("0x") || rest.starts_with("0X");
        while let Some(b) = self.byte(self.pos) {
            let c = b as char;
            if c.is_ascii_alphanumeric() || c == '_' {
                let exp = (c == 'e' || c == 'E')
                    && matches!(self.byte(self.pos + 1), Some(b'+') | Some(b'-'))
                    && !hex;
                self.pos += if exp { 2 } else { 1 };
            } else if c == '.' && self.byte(self.pos + 1).is_some_and(|b| b.is_ascii_digit()) {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn char_lit(&mut self) -> Result<(), LexError> {
        let start = self.pos;
        self.pos += 1;
        while let Some(b) = self.byte(self.pos) {
            match b {
                b'\\' => self.pos += 2,
                b'\'' => {
                    self.pos += 1;
                    return Ok(());
                }
                b'\n' => break,
                _ => self.pos += 1,
            }
        }
        Err(self.err(start, "unterminated character literal"))
    }

    fn string(&mut self, templates: &mut Vec<(usize, usize)>) -> Result<(), LexError> {
        let start = self.pos;
        let raw = self.src[start..self.end].starts_with("\"\"\"");
        let kotlin = self.lang == Language::Kotlin;
        self.pos += if raw { 3 } else { 1 };
        loop {
            let Some(b) = self.byte(self.pos) else {
                return Err(self.err(start, "unterminated string literal"));
            };
            match b {
                b'\\' if !raw || !kotlin => self.pos += 2,
                b'"' if raw => {
                    if self.src[self.pos..self.end].starts_with("\"\"\"") {
                        self.pos += 3;
                        // Kotlin allows extra quotes right before the closing delimiter.
                        while self.byte(self.pos) == Some(b'"') {
                            self.pos += 1;
                        }
                        return Ok(());
                    }
                    self.pos += 1;
                }
                b'"' => {
                    self.pos += 1;
                    return Ok(());
                }
                b'\n' if !raw => return Err(self.err(start, "unterminated string literal")),
                b'$' if kotlin => {
                    let next = self.peek_char(self.pos + 1);
                    if next == Some('{') {
                        let inner = self.pos + 2;
                        let close = self.template_end(inner)?;
                        templates.push((inner, close));
                        self.pos = close + 1;
                    } else if next.is_some_and(|c| c.is_alphabetic() || c == '_') {
                        let s = self.pos + 1;
                        let mut e = s;
                        while let Some(c) = self.peek_char(e) {
                            if !(c.is_alphanumeric() || c == '_') {
                                break;
                            }
                            e += c.len_utf8();
                        }
                        templates.push((s, e));
                        self.pos = e;
                    } else {
                        self.pos += 1;
                    }
                }
                _ => self.pos += 1,
            }
        }
    }

    /// Finds the `}` closing a `${` template starting at `from`.
    fn template_end(&mut self, from: usize) -> Result<usize, LexError> {
        let mut depth = 0usize;
        let mut i = from;
        while i < self.end {
            match self.bytes[i] {
                b'{' => depth += 1,
                b'}' if depth == 0 => return Ok(i),
                b'}' => depth -= 1,
                b'"' => {
                    let saved = self.pos;
                    self.pos = i;
                    let mut nested = Vec::new();
                    self.string(&mut nested)?;
                    i = self.pos;
                    self.pos = saved;
                    continue;
                }
                _ => {}
            }
            i += 1;
        }
        Err(self.err(from, "unterminated string template"))
    }
}
