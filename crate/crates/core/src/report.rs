//! Report documents and their text/JSON renderings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use thiserror::Error;

use crate::deps::export_graph_json;
use crate::detect::{Finding, Related, Severity, Smell};
use crate::json::to_canonical_string;
use crate::pipeline::{AnalysisResult, GraphSummary, SkippedFile, SmellStats};
use crate::source::{Language, SourceRange};

pub const REPORT_SCHEMA_VERSION: u64 = 1;
pub const TOOL_NAME: &str = "kjlint";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Option<Format> {
        match s {
            "text" => Some(Format::Text),
            "json" => Some(Format::Json),
            _ => None,
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Format::Text => "txt",
            Format::Json => "json",
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Text => "text",
            Format::Json => "json",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportDocument {
    pub schema_version: u64,
    pub tool_name: String,
    pub tool_version: String,
    pub languages: Vec<Language>,
    pub findings: Vec<Finding>,
    pub stats: BTreeMap<Smell, SmellStats>,
    pub graph: GraphSummary,
    pub skipped_files: Vec<SkippedFile>,
}

impl ReportDocument {
    pub fn from_result(result: &AnalysisResult) -> Self {
        ReportDocument {
            schema_version: REPORT_SCHEMA_VERSION,
            tool_name: TOOL_NAME.to_string(),
            tool_version: TOOL_VERSION.to_string(),
            languages: result.languages.iter().copied().collect(),
            findings: result.findings.clone(),
            stats: result.stats.clone(),
            graph: result.graph_summary,
            skipped_files: result.skipped_files.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        let findings: Vec<Value> = self.findings.iter().map(finding_json).collect();
        let stats: serde_json::Map<String, Value> = self
            .stats
            .iter()
            .map(|(s, v)| (s.as_str().to_string(), json!({"detected": v.detected, "filesAffected": v.files_affected})))
            .collect();
        let skipped: Vec<Value> = self.skipped_files.iter().map(|s| json!({"path": s.path, "reason": s.reason})).collect();
        let doc = json!({
            "schemaVersion": self.schema_version,
            "tool": {"name": self.tool_name, "version": self.tool_version},
            "languages": self.languages.iter().map(|l| l.as_str()).collect::<Vec<_>>(),
            "findings": findings,
            "stats": stats,
            "graph": {"nodes": self.graph.nodes, "edges": self.graph.edges},
            "skippedFiles": skipped,
        });
        to_canonical_string(&doc)
    }

    pub fn parse_json(text: &str) -> Result<ReportDocument, ReportError> {
        let v: Value = serde_json::from_str(text).map_err(|e| ReportError::Parse(e.to_string()))?;
        let bad = |m: &str| ReportError::Parse(m.to_string());
        let str_at = |v: &Value, k: &str| v.get(k).and_then(Value::as_str).map(str::to_string).ok_or_else(|| bad(k));
        let num_at = |v: &Value, k: &str| v.get(k).and_then(Value::as_u64).ok_or_else(|| bad(k));
        let arr_at = |v: &Value, k: &str| v.get(k).and_then(Value::as_array).cloned().ok_or_else(|| bad(k));
        let schema_version = num_at(&v, "schemaVersion")?;
        if schema_version != REPORT_SCHEMA_VERSION {
            return Err(bad("unsupported schemaVersion"));
        }
        let tool = v.get("tool").ok_or_else(|| bad("tool"))?;
        let languages = arr_at(&v, "languages")?
            .iter()
            .map(|l| l.as_str().and_then(Language::parse).ok_or_else(|| bad("languages")))
            .collect::<Result<_, _>>()?;
        let range = |v: &Value| -> Result<SourceRange, ReportError> {
            Ok(SourceRange {
                start: num_at(v, "start")? as usize,
                end: num_at(v, "end")? as usize,
                line: num_at(v, "line")? as u32,
                col: num_at(v, "col")? as u32,
            })
        };
        let mut findings = Vec::new();
        for f in arr_at(&v, "findings")? {
            let related = arr_at(&f, "related")?
                .iter()
                .map(|r| Ok(Related { file: str_at(r, "file")?, range: range(r)?, note: str_at(r, "note")? }))
                .collect::<Result<_, ReportError>>()?;
            let entities = arr_at(&f, "entities")?
                .iter()
                .map(|e| e.as_str().map(str::to_string).ok_or_else(|| bad("entities")))
                .collect::<Result<_, _>>()?;
            findings.push(Finding {
                smell: Smell::parse(&str_at(&f, "smell")?).ok_or_else(|| bad("smell"))?,
                severity: Severity::parse(&str_at(&f, "severity")?).ok_or_else(|| bad("severity"))?,
                file: str_at(&f, "file")?,
                range: range(&f)?,
                message: str_at(&f, "message")?,
                entities,
                related,
            });
        }
        let mut stats = BTreeMap::new();
        for (k, s) in v.get("stats").and_then(Value::as_object).ok_or_else(|| bad("stats"))? {
            let smell = Smell::parse(k).ok_or_else(|| bad("stats"))?;
            stats.insert(
                smell,
                SmellStats { detected: num_at(s, "detected")? as usize, files_affected: num_at(s, "filesAffected")? as usize },
            );
        }
        let g = v.get("graph").ok_or_else(|| bad("graph"))?;
        let skipped_files = arr_at(&v, "skippedFiles")?
            .iter()
            .map(|s| Ok(SkippedFile { path: str_at(s, "path")?, reason: str_at(s, "reason")? }))
            .collect::<Result<_, ReportError>>()?;
        Ok(ReportDocument {
            schema_version,
            tool_name: str_at(tool, "name")?,
            tool_version: str_at(tool, "version")?,
            languages,
            findings,
            stats,
            graph: GraphSummary { nodes: num_at(g, "nodes")? as usize, edges: num_at(g, "edges")? as usize },
            skipped_files,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for f in &self.findings {
            out.push_str(&format!("{} {} {}:{}:{} {}\n", f.severity, f.smell, f.file, f.range.line, f.range.col, f.message));
        }
        for s in &self.skipped_files {
            out.push_str(&format!("skipped {}: {}\n", s.path, s.reason));
        }
        for smell in Smell::ALL {
            let st = self.stats.get(&smell).copied().unwrap_or_default();
            out.push_str(&format!("{smell} Detected={} FilesAffected={}\n", st.detected, st.files_affected));
        }
        out
    }

    /// One-line summary for the terminal.
    pub fn summary(&self) -> String {
        let files: BTreeSet<&str> = self.findings.iter().map(|f| f.file.as_str()).collect();
        format!(
            "{TOOL_NAME}: {} findings in {} files, {} files skipped",
            self.findings.len(),
            files.len(),
            self.skipped_files.len()
        )
    }
}

fn range_fields(m: &mut serde_json::Map<String, Value>, r: &SourceRange) {
    m.insert("line".into(), json!(r.line));
    m.insert("col".into(), json!(r.col));
    m.insert("start".into(), json!(r.start));
    m.insert("end".into(), json!(r.end));
}

fn finding_json(f: &Finding) -> Value {
    let related: Vec<Value> = f
        .related
        .iter()
        .map(|r| {
            let mut m = serde_json::Map::new();
            m.insert("file".into(), json!(r.file));
            m.insert("note".into(), json!(r.note));
            range_fields(&mut m, &r.range);
            Value::Object(m)
        })
        .collect();
    let mut m = serde_json::Map::new();
    m.insert("smell".into(), json!(f.smell.as_str()));
    m.insert("severity".into(), json!(f.severity.as_str()));
    m.insert("file".into(), json!(f.file));
    m.insert("message".into(), json!(f.message));
    m.insert("entities".into(), json!(f.entities));
    m.insert("related".into(), Value::Array(related));
    range_fields(&mut m, &f.range);
    Value::Object(m)
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid report JSON: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderOptions {
    pub format: Format,
    pub prefix: Option<String>,
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderOutcome {
    pub written: Vec<PathBuf>,
    pub summary: String,
    pub exit_code: i32,
}

/// 1 when any finding has error severity, else 0.
pub fn exit_status(findings: &[Finding]) -> i32 {
    i32::from(findings.iter().any(|f| f.severity == Severity::Error))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), ReportError> {
    std::fs::write(path, bytes).map_err(|source| ReportError::Io { path: path.to_path_buf(), source })
}

/// Writes `<prefix>report.{json,txt}` and `<prefix>graph.json` into the
/// output directory, or the report alone to `stdout` when there is none.
pub fn render_report(result: &AnalysisResult, opts: &RenderOptions, stdout: &mut dyn Write) -> Result<RenderOutcome, ReportError> {
    let doc = ReportDocument::from_result(result);
    let body = match opts.format {
        Format::Json => doc.to_json() + "\n",
        Format::Text => doc.to_text(),
    };
    let mut written = Vec::new();
    match &opts.out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|source| ReportError::Io { path: dir.clone(), source })?;
            let prefix = opts.prefix.as_deref().unwrap_or("");
            let report = dir.join(format!("{prefix}report.{}", opts.format.extension()));
            write_file(&report, body.as_bytes())?;
            let graph = dir.join(format!("{prefix}graph.json"));
            let mut g = export_graph_json(&result.graph);
            g.push(b'\n');
            write_file(&graph, &g)?;
            written.push(report);
            written.push(graph);
        }
        None => {
            stdout
                .write_all(body.as_bytes())
                .map_err(|source| ReportError::Io { path: PathBuf::from("<stdout>"), source })?;
        }
    }
    Ok(RenderOutcome { written, summary: doc.summary(), exit_code: exit_status(&result.findings) })
}
