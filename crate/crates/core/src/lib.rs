//! Cross-language smell analysis for mixed Kotlin and Java projects.

pub mod bus;
pub mod config;
pub mod deps;
pub mod detect;
pub mod entity;
pub mod json;
pub mod pipeline;
pub mod report;
pub mod scc;
pub mod source;
pub mod syntax;

pub use bus::{DeliveryReport, Message, MessageBus, SubscriptionId};
pub use config::{load_config, parse_config, ConfigError};
pub use deps::{export_graph_json, extract_dependencies, parse_graph_json, DependencyEdge, DependencyGraph, DependencyType};
pub use detect::{DetectorConfig, Finding, Related, Severity, Smell};
pub use entity::{build_symbol_index, resolve_reference, Entity, SymbolIndex, Visibility};
pub use pipeline::{run_analysis, AnalysisConfig, AnalysisError, AnalysisResult, SmellStats};
pub use report::{render_report, Format, RenderOptions, RenderOutcome, ReportDocument, ReportError};
pub use source::{Language, SourceFile, SourceRange};
pub use syntax::{parse_source, AstRoot, Declaration, ParseError, Reference};
