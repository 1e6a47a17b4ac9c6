//! Stage-scoped key/value store shared by processors.

use std::any::Any;
use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::deps::DependencyGraph;
use crate::detect::Finding;
use crate::entity::SymbolIndex;

pub type Stage = u8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextError {
    #[error("stage {0} is closed")]
    StageClosed(Stage),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SkippedFile {
    pub path: String,
    pub reason: String,
}

#[derive(Default)]
pub struct AnalysisContext {
    store: BTreeMap<(Stage, String), Box<dyn Any + Send>>,
    /// Stages up to and including this one reject writes.
    closed_through: Stage,
    findings: Vec<Finding>,
    pub graph: Option<Arc<DependencyGraph>>,
    pub index: Option<Arc<SymbolIndex>>,
    pub skipped_files: Vec<SkippedFile>,
}

impl AnalysisContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn put<T: Any + Send>(&mut self, stage: Stage, key: &str, value: T) -> Result<(), ContextError> {
        if stage <= self.closed_through {
            return Err(ContextError::StageClosed(stage));
        }
        self.store.insert((stage, key.to_string()), Box::new(value));
        Ok(())
    }

    /// Removes and returns the value. A value of another type stays put.
    pub fn take<T: Any + Send>(&mut self, stage: Stage, key: &str) -> Option<T> {
        let k = (stage, key.to_string());
        if !self.store.get(&k)?.is::<T>() {
            return None;
        }
        self.store.remove(&k).and_then(|b| b.downcast::<T>().ok()).map(|b| *b)
    }

    pub fn contains(&self, stage: Stage, key: &str) -> bool {
        self.store.contains_key(&(stage, key.to_string()))
    }

    pub fn entry_count(&self) -> usize {
        self.store.len()
    }

    /// Closes every stage before `stage` to writes.
    pub fn begin_stage(&mut self, stage: Stage) {
        self.closed_through = self.closed_through.max(stage.saturating_sub(1));
    }

    /// Drops all stage data and closes every stage.
    pub fn finish(&mut self) {
        self.store.clear();
        self.closed_through = Stage::MAX;
    }

    pub fn push_finding(&mut self, f: Finding) {
        self.findings.push(f);
    }

    pub fn findings(&self) -> &[Finding] {
        &self.findings
    }

    pub fn take_findings(&mut self) -> Vec<Finding> {
        std::mem::take(&mut self.findings)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn put_take_twice() {
        let mut ctx = AnalysisContext::new();
        ctx.put(1, "hints.platform", 7u32).unwrap();
        assert_eq!(ctx.take::<u32>(1, "hints.platform"), Some(7));
        assert_eq!(ctx.take::<u32>(1, "hints.platform"), None);
        assert_eq!(ctx.take::<u32>(2, "never"), None);
    }

    #[test]
    fn wrong_type_is_left_in_place() {
        let mut ctx = AnalysisContext::new();
        ctx.put(1, "k", 1u8).unwrap();
        assert_eq!(ctx.take::<String>(1, "k"), None);
        assert_eq!(ctx.take::<u8>(1, "k"), Some(1));
    }

    #[test]
    fn closed_stages_reject_writes() {
        let mut ctx = AnalysisContext::new();
        ctx.begin_stage(2);
        assert_eq!(ctx.put(1, "x", ()), Err(ContextError::StageClosed(1)));
        assert!(ctx.put(2, "x", ()).is_ok());
        ctx.finish();
        assert_eq!(ctx.entry_count(), 0);
        assert_eq!(ctx.put(1, "hints.platform", ()), Err(ContextError::StageClosed(1)));
        assert_eq!(ctx.put(3, "x", ()), Err(ContextError::StageClosed(3)));
    }
}
