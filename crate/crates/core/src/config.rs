//! Detector configuration profiles (JSON).

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::detect::{DetectorConfig, Severity, Smell};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid config: {0}")]
    Malformed(String),
    #[error("invalid config: {0}")]
    OutOfRange(String),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct Profile {
    max_params: Option<i64>,
    nullable_annotations: Option<BTreeSet<String>>,
    notnull_annotations: Option<BTreeSet<String>>,
    readonly_collection_types: Option<BTreeSet<String>>,
    mutator_methods: Option<BTreeSet<String>>,
    kotlin_jvm_annotations: Option<BTreeSet<String>>,
    enabled: Option<BTreeMap<String, bool>>,
    severity_overrides: Option<BTreeMap<String, String>>,
}

fn smell(name: &str) -> Result<Smell, ConfigError> {
    Smell::parse(name).ok_or_else(|| ConfigError::Malformed(format!("unknown smell {name:?}")))
}

/// Reads a profile. No path means all defaults.
pub fn load_config(path: Option<&Path>) -> Result<DetectorConfig, ConfigError> {
    match path {
        None => Ok(DetectorConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|source| ConfigError::Io { path: p.to_path_buf(), source })?;
            parse_config(&text)
        }
    }
}

pub fn parse_config(text: &str) -> Result<DetectorConfig, ConfigError> {
    let p: Profile = serde_json::from_str(text).map_err(|e| ConfigError::Malformed(e.to_string()))?;
    let mut cfg = DetectorConfig::default();
    if let Some(n) = p.max_params {
        if n < 1 {
            return Err(ConfigError::OutOfRange(format!("maxParams must be at least 1, got {n}")));
        }
        cfg.max_params = usize::try_from(n).map_err(|_| ConfigError::OutOfRange(format!("maxParams {n} is too large")))?;
    }
    let sets = [
        (p.nullable_annotations, &mut cfg.nullable_annotations),
        (p.notnull_annotations, &mut cfg.notnull_annotations),
        (p.readonly_collection_types, &mut cfg.readonly_collection_types),
        (p.mutator_methods, &mut cfg.mutator_methods),
        (p.kotlin_jvm_annotations, &mut cfg.kotlin_jvm_annotations),
    ];
    for (given, slot) in sets {
        if let Some(v) = given {
            *slot = v;
        }
    }
    for (name, on) in p.enabled.unwrap_or_default() {
        cfg.enabled.insert(smell(&name)?, on);
    }
    for (name, sev) in p.severity_overrides.unwrap_or_default() {
        let level = Severity::parse(&sev).ok_or_else(|| ConfigError::Malformed(format!("unknown severity {sev:?}")))?;
        cfg.severity_overrides.insert(smell(&name)?, level);
    }
    let required = [
        (Smell::PlatformType, cfg.nullable_annotations.is_empty(), "nullableAnnotations"),
        (Smell::PlatformType, cfg.notnull_annotations.is_empty(), "notnullAnnotations"),
        (Smell::ImmutableCollectionMutation, cfg.readonly_collection_types.is_empty(), "readonlyCollectionTypes"),
        (Smell::ImmutableCollectionMutation, cfg.mutator_methods.is_empty(), "mutatorMethods"),
        (Smell::KotlinJvmAnnotationInJava, cfg.kotlin_jvm_annotations.is_empty(), "kotlinJvmAnnotations"),
    ];
    for (s, empty, key) in required {
        if empty && cfg.is_enabled(s) {
            return Err(ConfigError::OutOfRange(format!("{key} must not be empty while {s} is enabled")));
        }
    }
    Ok(cfg)
}
