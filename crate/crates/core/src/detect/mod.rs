//! Smell detectors and the findings they emit.

mod circular;
mod cross;
mod local;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::entity::NullabilityAnnotations;
use crate::source::SourceRange;

pub use circular::detect_circular_references;
pub use cross::{
    detect_immutable_collection_mutation, detect_internal_exposure, detect_kotlin_jvm_annotation_in_java,
    detect_platform_type, platform_type_hints, PlatformHint,
};
pub use local::{detect_excessive_params, detect_implicit_single_expr, detect_unused_imports};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Smell {
    UnusedImport,
    ExcessiveParams,
    ImplicitSingleExprFunction,
    CircularReferences,
    PlatformType,
    ImmutableCollectionMutation,
    InternalExposure,
    KotlinJvmAnnotationInJava,
}

impl Smell {
    pub const ALL: [Smell; 8] = [
        Smell::UnusedImport,
        Smell::ExcessiveParams,
        Smell::ImplicitSingleExprFunction,
        Smell::CircularReferences,
        Smell::PlatformType,
        Smell::ImmutableCollectionMutation,
        Smell::InternalExposure,
        Smell::KotlinJvmAnnotationInJava,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Smell::UnusedImport => "UnusedImport",
            Smell::ExcessiveParams => "ExcessiveParams",
            Smell::ImplicitSingleExprFunction => "ImplicitSingleExprFunction",
            Smell::CircularReferences => "CircularReferences",
            Smell::PlatformType => "PlatformType",
            Smell::ImmutableCollectionMutation => "ImmutableCollectionMutation",
            Smell::InternalExposure => "InternalExposure",
            Smell::KotlinJvmAnnotationInJava => "KotlinJvmAnnotationInJava",
        }
    }

    pub fn parse(s: &str) -> Option<Smell> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }

    pub fn default_severity(self) -> Severity {
        match self {
            Smell::PlatformType | Smell::ImmutableCollectionMutation | Smell::InternalExposure => Severity::Warning,
            Smell::KotlinJvmAnnotationInJava => Severity::Error,
            _ => Severity::Info,
        }
    }
}

impl fmt::Display for Smell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Info,
    Warning,
    Error,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Info => "info",
            Severity::Warning => "warning",
            Severity::Error => "error",
        }
    }

    pub fn parse(s: &str) -> Option<Severity> {
        [Severity::Info, Severity::Warning, Severity::Error].into_iter().find(|v| v.as_str() == s)
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Related {
    pub file: String,
    pub range: SourceRange,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Finding {
    pub smell: Smell,
    pub severity: Severity,
    pub file: String,
    pub range: SourceRange,
    pub message: String,
    pub entities: Vec<String>,
    pub related: Vec<Related>,
}

impl Finding {
    pub fn new(smell: Smell, cfg: &DetectorConfig, file: &str, range: SourceRange, message: String) -> Self {
        Finding {
            smell,
            severity: cfg.severity(smell),
            file: file.to_string(),
            range,
            message,
            entities: Vec::new(),
            related: Vec::new(),
        }
    }

    pub fn sort_key(&self) -> (&str, u32, Smell, u32, &str) {
        (&self.file, self.range.line, self.smell, self.range.col, &self.message)
    }
}

pub fn sort_findings(findings: &mut [Finding]) {
    findings.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectorConfig {
    pub max_params: usize,
    pub nullable_annotations: BTreeSet<String>,
    pub notnull_annotations: BTreeSet<String>,
    pub readonly_collection_types: BTreeSet<String>,
    pub mutator_methods: BTreeSet<String>,
    pub kotlin_jvm_annotations: BTreeSet<String>,
    pub enabled: BTreeMap<Smell, bool>,
    pub severity_overrides: BTreeMap<Smell, Severity>,
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

impl Default for DetectorConfig {
    fn default() -> Self {
        let nullability = NullabilityAnnotations::default();
        DetectorConfig {
            max_params: 6,
            nullable_annotations: nullability.nullable,
            notnull_annotations: nullability.notnull,
            readonly_collection_types: set(&[
                "kotlin.collections.List",
                "kotlin.collections.Set",
                "kotlin.collections.Map",
                "kotlin.collections.Collection",
            ]),
            mutator_methods: set(&[
                "add",
                "addAll",
                "remove",
                "removeAll",
                "removeIf",
                "retainAll",
                "clear",
                "set",
                "sort",
                "replaceAll",
                "put",
                "putAll",
                "merge",
                "compute",
                "computeIfAbsent",
                "computeIfPresent",
            ]),
            kotlin_jvm_annotations: set(&[
                "JvmStatic",
                "JvmField",
                "JvmName",
                "JvmOverloads",
                "JvmDefault",
                "JvmSuppressWildcards",
                "JvmWildcard",
                "JvmMultifileClass",
            ]),
            enabled: Smell::ALL.into_iter().map(|s| (s, true)).collect(),
            severity_overrides: BTreeMap::new(),
        }
    }
}

impl DetectorConfig {
    pub fn severity(&self, smell: Smell) -> Severity {
        self.severity_overrides.get(&smell).copied().unwrap_or_else(|| smell.default_severity())
    }

    pub fn is_enabled(&self, smell: Smell) -> bool {
        self.enabled.get(&smell).copied().unwrap_or(true)
    }

    pub fn nullability(&self) -> NullabilityAnnotations {
        NullabilityAnnotations { nullable: self.nullable_annotations.clone(), notnull: self.notnull_annotations.clone() }
    }
}
