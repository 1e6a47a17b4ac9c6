use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    Java,
    Kotlin,
}

impl Language {
    /// Maps a file extension to a language. Matching is case-sensitive and
    /// `.kts` scripts are not recognized.
    pub fn from_path(path: &Path) -> Option<Language> {
        match path.extension()?.to_str()? {
            "kt" => Some(Language::Kotlin),
            "java" => Some(Language::Java),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Language::Java => "java",
            Language::Kotlin => "kotlin",
        }
    }

    pub fn parse(tag: &str) -> Option<Language> {
        match tag {
            "java" => Some(Language::Java),
            "kotlin" => Some(Language::Kotlin),
            _ => None,
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Half-open byte span plus the 1-based line/column of its start.
/// Columns count characters, not bytes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct SourceRange {
    pub start: usize,
    pub end: usize,
    pub line: u32,
    pub col: u32,
}

impl SourceRange {
    pub fn contains(&self, other: &SourceRange) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn slice<'a>(&self, text: &'a str) -> &'a str {
        &text[self.start..self.end]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineIndex {
    starts: Vec<usize>,
}

impl LineIndex {
    pub fn new(text: &str) -> Self {
        let mut starts = vec![0];
        starts.extend(text.match_indices('\n').map(|(i, _)| i + 1));
        LineIndex { starts }
    }

    pub fn line_starts(&self) -> &[usize] {
        &self.starts
    }

    /// 1-based (line, col) for a byte offset.
    pub fn position(&self, text: &str, offset: usize) -> (u32, u32) {
        let line = match self.starts.binary_search(&offset) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let col = text[self.starts[line]..offset].chars().count();
        (line as u32 + 1, col as u32 + 1)
    }

    pub fn range(&self, text: &str, start: usize, end: usize) -> SourceRange {
        let (line, col) = self.position(text, start);
        SourceRange { start, end, line, col }
    }

    pub fn line_text<'a>(&self, text: &'a str, line: u32) -> &'a str {
        let i = (line as usize).saturating_sub(1);
        let Some(&start) = self.starts.get(i) else {
            return "";
        };
        let end = self.starts.get(i + 1).copied().unwrap_or(text.len());
        text[start..end].trim_end_matches(['\n', '\r'])
    }
}

/// One source file under analysis. `path` is the project-relative path with
/// `/` separators; it doubles as the file's identity everywhere else.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    path: String,
    language: Language,
    text: String,
    line_index: LineIndex,
}

impl SourceFile {
    /// Returns `None` when the extension is not `.kt` or `.java`.
    pub fn new(path: impl Into<String>, text: impl Into<String>) -> Option<Self> {
        let path = path.into();
        let language = Language::from_path(Path::new(&path))?;
        Some(Self::with_language(path, language, text))
    }

    pub fn with_language(path: impl Into<String>, language: Language, text: impl Into<String>) -> Self {
        let text = text.into();
        let line_index = LineIndex::new(&text);
        SourceFile { path: path.into(), language, text, line_index }
    }

    pub fn path(&self) -> &str {
        &self.path
    }

    pub fn language(&self) -> Language {
        self.language
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn line_index(&self) -> &LineIndex {
        &self.line_index
    }

    pub fn range(&self, start: usize, end: usize) -> SourceRange {
        self.line_index.range(&self.text, start, end)
    }

    pub fn line_text(&self, line: u32) -> &str {
        self.line_index.line_text(&self.text, line)
    }

    /// File stem without extension, e.g. `Items` for `a/b/Items.kt`.
    pub fn stem(&self) -> &str {
        Path::new(&self.path).file_stem().and_then(|s| s.to_str()).unwrap_or("")
    }
}
