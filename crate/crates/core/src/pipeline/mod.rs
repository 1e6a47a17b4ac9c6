//! Three-stage analysis driver.

mod context;
mod processors;
mod registry;

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;
use walkdir::WalkDir;

use crate::bus::{BusError, Message, MessageBus};
use crate::deps::{extract_dependencies, DependencyGraph};
use crate::detect::{sort_findings, DetectorConfig, Finding, Smell};
use crate::entity::{build_symbol_index, SymbolIndex};
use crate::source::{Language, SourceFile};
use crate::syntax::{parse_source, AstRoot};

pub use context::{AnalysisContext, ContextError, SkippedFile, Stage};
pub use processors::{detector_ids, standard_registry, HINT_PROCESSOR};
pub use registry::{Factory, Processor, ProcessorDescriptor, ProcessorEnv, ProcessorRegistry, RegistryError};

pub const KIND_FILE: &str = "syntax.file";
pub const KIND_GRAPH: &str = "stage2.graph";
pub const KIND_READY: &str = "stage3.ready";
pub const KIND_FINDING: &str = "finding";
pub const HINTS_KEY: &str = "hints.platform";

const SKIPPED_DIRS: &[&str] = &["build", "out", "target"];

/// Everything the stage-2 and stage-3 processors look at.
pub struct ProjectView {
    pub asts: Vec<Arc<AstRoot>>,
    pub index: Arc<SymbolIndex>,
    pub graph: Arc<DependencyGraph>,
}

impl ProjectView {
    pub fn files(&self) -> Vec<&AstRoot> {
        self.asts.iter().map(|a| a.as_ref()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisConfig {
    pub languages: BTreeSet<Language>,
    pub detector: DetectorConfig,
}

impl AnalysisConfig {
    pub fn new(languages: impl IntoIterator<Item = Language>) -> Self {
        AnalysisConfig { languages: languages.into_iter().collect(), detector: DetectorConfig::default() }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SmellStats {
    pub detected: usize,
    pub files_affected: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GraphSummary {
    pub nodes: usize,
    pub edges: usize,
}

#[derive(Debug, Clone)]
pub struct AnalysisResult {
    pub languages: BTreeSet<Language>,
    pub findings: Vec<Finding>,
    pub stats: BTreeMap<Smell, SmellStats>,
    pub graph: DependencyGraph,
    pub graph_summary: GraphSummary,
    pub skipped_files: Vec<SkippedFile>,
    pub duration: Duration,
}

impl AnalysisResult {
    pub fn has_errors(&self) -> bool {
        self.findings.iter().any(|f| f.severity == crate::detect::Severity::Error)
    }
}

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("{0}: no such file or directory")]
    RootMissing(PathBuf),
    #[error("{0}: no .kt or .java sources found")]
    NoSourcesFound(PathBuf),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("message bus: {0}")]
    Bus(#[from] BusError),
    #[error("processor {id} failed: {message}")]
    Processor { id: String, message: String },
    #[error(transparent)]
    Context(#[from] ContextError),
}

/// Per-smell finding counts and affected files (finding files plus their
/// related files).
pub fn compute_stats(findings: &[Finding]) -> BTreeMap<Smell, SmellStats> {
    Smell::ALL
        .into_iter()
        .map(|s| {
            let of: Vec<&Finding> = findings.iter().filter(|f| f.smell == s).collect();
            let files: BTreeSet<&str> =
                of.iter().flat_map(|f| std::iter::once(f.file.as_str()).chain(f.related.iter().map(|r| r.file.as_str()))).collect();
            (s, SmellStats { detected: of.len(), files_affected: files.len() })
        })
        .collect()
}

/// Source files under `root` in lexicographic order, as (absolute, relative)
/// path pairs. Hidden and build output directories are skipped; symlinks are
/// not followed.
pub fn discover_sources(root: &Path, languages: &BTreeSet<Language>) -> Result<Vec<(PathBuf, String)>, AnalysisError> {
    if !root.exists() {
        return Err(AnalysisError::RootMissing(root.to_path_buf()));
    }
    let mut out = Vec::new();
    let walker = WalkDir::new(root).follow_links(false).sort_by_file_name().into_iter().filter_entry(|e| {
        if e.depth() == 0 || !e.file_type().is_dir() {
            return true;
        }
        let name = e.file_name().to_string_lossy();
        !name.starts_with('.') && !SKIPPED_DIRS.contains(&name.as_ref())
    });
    for entry in walker {
        let entry = entry.map_err(|e| AnalysisError::Io {
            path: e.path().map(Path::to_path_buf).unwrap_or_else(|| root.to_path_buf()),
            source: e.into_io_error().unwrap_or_else(|| std::io::Error::other("walk failed")),
        })?;
        if !entry.file_type().is_file() {
            continue;
        }
        let Some(lang) = Language::from_path(entry.path()) else { continue };
        if !languages.contains(&lang) {
            continue;
        }
        let rel = match entry.path().strip_prefix(root) {
            Ok(r) if !r.as_os_str().is_empty() => r,
            _ => Path::new(entry.file_name()),
        };
        let rel = rel.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/");
        out.push((entry.path().to_path_buf(), rel));
    }
    Ok(out)
}

enum Loaded {
    Parsed(AstRoot),
    Skipped(SkippedFile),
}

fn load(abs: &Path, rel: &str) -> Result<Loaded, AnalysisError> {
    let bytes = std::fs::read(abs).map_err(|source| AnalysisError::Io { path: abs.to_path_buf(), source })?;
    let skip = |reason: String| Ok(Loaded::Skipped(SkippedFile { path: rel.to_string(), reason }));
    let Ok(text) = String::from_utf8(bytes) else { return skip("not valid UTF-8".into()) };
    let Some(file) = SourceFile::new(rel, text) else { return skip("unknown language".into()) };
    match parse_source(Arc::new(file)) {
        Ok(ast) => Ok(Loaded::Parsed(ast)),
        Err(e) => skip(e.to_string()),
    }
}

pub fn run_analysis(cfg: &AnalysisConfig, root: &Path) -> Result<AnalysisResult, AnalysisError> {
    run_analysis_with(&standard_registry(), cfg, root)
}

/// Runs the three stages with processors from `registry`.
pub fn run_analysis_with(
    registry: &ProcessorRegistry,
    cfg: &AnalysisConfig,
    root: &Path,
) -> Result<AnalysisResult, AnalysisError> {
    let started = Instant::now();
    let sources = discover_sources(root, &cfg.languages)?;
    if sources.is_empty() {
        return Err(AnalysisError::NoSourcesFound(root.to_path_buf()));
    }
    let loaded: Vec<Loaded> = sources.par_iter().map(|(abs, rel)| load(abs, rel)).collect::<Result<_, _>>()?;
    let ctx = Arc::new(Mutex::new(AnalysisContext::new()));
    let mut asts = Vec::new();
    {
        let mut c = ctx.lock().expect("context lock");
        for l in loaded {
            match l {
                Loaded::Parsed(a) => asts.push(Arc::new(a)),
                Loaded::Skipped(s) => c.skipped_files.push(s),
            }
        }
    }

    let bus = MessageBus::new();
    let env = ProcessorEnv { ctx: ctx.clone(), config: Arc::new(cfg.detector.clone()) };
    let sink = ctx.clone();
    bus.subscribe(KIND_FINDING, 0, move |m, _| {
        let f = m.payload::<Finding>().ok_or("finding message without a finding")?;
        sink.lock().map_err(|e| e.to_string())?.push_finding(f.clone());
        Ok(())
    })?;
    let active = registry.select(&cfg.languages);
    let stage3 = cfg.languages.len() >= 2;
    for d in &active {
        if d.stage == 3 && !stage3 {
            continue;
        }
        let p = registry.construct(d.id).expect("selected processor is registered");
        p.install(&bus, env.clone())?;
    }
    let publish = |msg: Message| -> Result<(), AnalysisError> {
        let report = bus.publish(msg)?;
        match report.failures.into_iter().next() {
            Some((id, message)) => Err(AnalysisError::Processor { id: id.to_string(), message }),
            None => Ok(()),
        }
    };

    ctx.lock().expect("context lock").begin_stage(1);
    for ast in &asts {
        publish(Message::new(KIND_FILE, ast.clone()).label(ast.language().as_str()).origin("pipeline"))?;
    }

    ctx.lock().expect("context lock").begin_stage(2);
    let files: Vec<&AstRoot> = asts.iter().map(|a| a.as_ref()).collect();
    let index = Arc::new(build_symbol_index(files.iter().copied()));
    let graph = Arc::new(extract_dependencies(&index, &files));
    {
        let mut c = ctx.lock().expect("context lock");
        c.index = Some(index.clone());
        c.graph = Some(graph.clone());
    }
    let view = Arc::new(ProjectView { asts: asts.clone(), index, graph: graph.clone() });
    publish(Message::new(KIND_GRAPH, view.clone()).origin("pipeline"))?;

    if stage3 {
        ctx.lock().expect("context lock").begin_stage(3);
        publish(Message::new(KIND_READY, view).origin("pipeline"))?;
    }

    let mut c = ctx.lock().expect("context lock");
    c.finish();
    let mut findings = c.take_findings();
    sort_findings(&mut findings);
    let mut skipped_files = std::mem::take(&mut c.skipped_files);
    skipped_files.sort();
    let graph = DependencyGraph::clone(&graph);
    Ok(AnalysisResult {
        languages: cfg.languages.clone(),
        stats: compute_stats(&findings),
        graph_summary: GraphSummary { nodes: graph.nodes.len(), edges: graph.edges.len() },
        graph,
        findings,
        skipped_files,
        duration: started.elapsed(),
    })
}
