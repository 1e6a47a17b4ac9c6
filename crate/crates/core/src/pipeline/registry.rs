//! Compile-time processor registry with language-gated activation.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use crate::bus::{BusError, MessageBus};
use crate::detect::{DetectorConfig, Smell};
use crate::source::Language;

use super::context::{AnalysisContext, Stage};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessorDescriptor {
    pub id: &'static str,
    pub stage: Stage,
    /// Languages that must all be requested. Empty means any.
    pub languages: BTreeSet<Language>,
    pub subscriptions: Vec<&'static str>,
    pub produces: Vec<&'static str>,
    pub priority: i32,
    pub smell: Option<Smell>,
}

/// What a processor gets when it is wired into a run.
#[derive(Clone)]
pub struct ProcessorEnv {
    pub ctx: Arc<Mutex<AnalysisContext>>,
    pub config: Arc<DetectorConfig>,
}

pub trait Processor: Send {
    /// Registers the processor's handlers on `bus`.
    fn install(self: Box<Self>, bus: &MessageBus, env: ProcessorEnv) -> Result<(), BusError>;
}

pub type Factory = Box<dyn Fn() -> Box<dyn Processor> + Send + Sync>;

struct Entry {
    descriptor: ProcessorDescriptor,
    factory: Factory,
    constructed: AtomicUsize,
}

#[derive(Default)]
pub struct ProcessorRegistry {
    entries: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegistryError {
    #[error("processor id {0} registered twice")]
    DuplicateId(&'static str),
    #[error("stage-3 processor {0} must require at least two languages")]
    Stage3Languages(&'static str),
    #[error("processor {0} has stage {1}, expected 1, 2 or 3")]
    BadStage(&'static str, Stage),
}

impl ProcessorRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, descriptor: ProcessorDescriptor, factory: Factory) -> Result<(), RegistryError> {
        if self.entries.iter().any(|e| e.descriptor.id == descriptor.id) {
            return Err(RegistryError::DuplicateId(descriptor.id));
        }
        if !(1..=3).contains(&descriptor.stage) {
            return Err(RegistryError::BadStage(descriptor.id, descriptor.stage));
        }
        if descriptor.stage == 3 && descriptor.languages.len() < 2 {
            return Err(RegistryError::Stage3Languages(descriptor.id));
        }
        self.entries.push(Entry { descriptor, factory, constructed: AtomicUsize::new(0) });
        Ok(())
    }

    pub fn descriptors(&self) -> impl Iterator<Item = &ProcessorDescriptor> {
        self.entries.iter().map(|e| &e.descriptor)
    }

    /// Descriptors whose languages are all requested, ordered by (stage, id).
    pub fn select(&self, requested: &BTreeSet<Language>) -> Vec<&ProcessorDescriptor> {
        let mut out: Vec<&ProcessorDescriptor> =
            self.descriptors().filter(|d| d.languages.is_subset(requested)).collect();
        out.sort_by_key(|d| (d.stage, d.id));
        out
    }

    /// Builds a fresh processor. Counted per id.
    pub fn construct(&self, id: &str) -> Option<Box<dyn Processor>> {
        let e = self.entries.iter().find(|e| e.descriptor.id == id)?;
        e.constructed.fetch_add(1, Ordering::SeqCst);
        Some((e.factory)())
    }

    pub fn construction_count(&self, id: &str) -> usize {
        self.entries.iter().find(|e| e.descriptor.id == id).map_or(0, |e| e.constructed.load(Ordering::SeqCst))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Nop;
    impl Processor for Nop {
        fn install(self: Box<Self>, _: &MessageBus, _: ProcessorEnv) -> Result<(), BusError> {
            Ok(())
        }
    }

    fn desc(id: &'static str, stage: Stage, langs: &[Language]) -> ProcessorDescriptor {
        ProcessorDescriptor {
            id,
            stage,
            languages: langs.iter().copied().collect(),
            subscriptions: vec![],
            produces: vec![],
            priority: 0,
            smell: None,
        }
    }

    #[test]
    fn selection_and_counters() {
        let mut r = ProcessorRegistry::new();
        r.register(desc("z", 1, &[]), Box::new(|| Box::new(Nop))).unwrap();
        r.register(desc("a", 2, &[]), Box::new(|| Box::new(Nop))).unwrap();
        r.register(desc("k", 1, &[Language::Kotlin]), Box::new(|| Box::new(Nop))).unwrap();
        r.register(desc("x", 3, &[Language::Kotlin, Language::Java]), Box::new(|| Box::new(Nop))).unwrap();
        let ids = |langs: &[Language]| -> Vec<&str> { r.select(&langs.iter().copied().collect()).iter().map(|d| d.id).collect() };
        assert_eq!(ids(&[Language::Kotlin]), vec!["k", "z", "a"]);
        assert_eq!(ids(&[Language::Java]), vec!["z", "a"]);
        assert_eq!(ids(&[Language::Java, Language::Kotlin]), vec!["k", "z", "a", "x"]);
        assert_eq!(r.construction_count("x"), 0);
        r.construct("x").unwrap();
        assert_eq!(r.construction_count("x"), 1);
    }

    #[test]
    fn registration_rules() {
        let mut r = ProcessorRegistry::new();
        r.register(desc("a", 1, &[]), Box::new(|| Box::new(Nop))).unwrap();
        assert_eq!(r.register(desc("a", 1, &[]), Box::new(|| Box::new(Nop))), Err(RegistryError::DuplicateId("a")));
        assert_eq!(
            r.register(desc("b", 3, &[Language::Java]), Box::new(|| Box::new(Nop))),
            Err(RegistryError::Stage3Languages("b"))
        );
        assert_eq!(r.register(desc("c", 4, &[]), Box::new(|| Box::new(Nop))), Err(RegistryError::BadStage("c", 4)));
    }
}
