//! The built-in processors.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::bus::{BusError, Filter, Message, MessageBus};
use crate::detect::{
    detect_circular_references, detect_excessive_params, detect_immutable_collection_mutation, detect_implicit_single_expr,
    detect_internal_exposure, detect_kotlin_jvm_annotation_in_java, detect_platform_type, detect_unused_imports,
    platform_type_hints, Finding, PlatformHint, Smell,
};
use crate::source::Language;
use crate::syntax::AstRoot;

use super::registry::{Processor, ProcessorDescriptor, ProcessorEnv, ProcessorRegistry};
use super::{ProjectView, HINTS_KEY, KIND_FILE, KIND_FINDING, KIND_GRAPH, KIND_READY};

type Run = fn(&Message, &ProcessorEnv) -> Vec<Finding>;

struct DetectorProcessor {
    id: &'static str,
    kind: &'static str,
    priority: i32,
    smell: Smell,
    label: Option<&'static str>,
    run: Run,
}

impl Processor for DetectorProcessor {
    fn install(self: Box<Self>, bus: &MessageBus, env: ProcessorEnv) -> Result<(), BusError> {
        let filter = self.label.map(|l| Filter::labels([l])).unwrap_or_default();
        let DetectorProcessor { id, kind, priority, smell, run, .. } = *self;
        bus.subscribe_filtered(kind, priority, filter, move |msg, bus| {
            if !env.config.is_enabled(smell) {
                return Ok(());
            }
            for f in run(msg, &env) {
                bus.publish(Message::new(KIND_FINDING, f).origin(id)).map_err(|e| e.to_string())?;
            }
            Ok(())
        })?;
        Ok(())
    }
}

struct HintProcessor;

impl Processor for HintProcessor {
    fn install(self: Box<Self>, bus: &MessageBus, env: ProcessorEnv) -> Result<(), BusError> {
        bus.subscribe_filtered(KIND_FILE, 50, Filter::labels([Language::Kotlin.as_str()]), move |msg, _| {
            let Some(ast) = msg.payload::<Arc<AstRoot>>() else { return Ok(()) };
            let hints = platform_type_hints(ast);
            if hints.is_empty() {
                return Ok(());
            }
            let mut ctx = env.ctx.lock().map_err(|e| e.to_string())?;
            let mut all: Vec<PlatformHint> = ctx.take(1, HINTS_KEY).unwrap_or_default();
            all.extend(hints);
            ctx.put(1, HINTS_KEY, all).map_err(|e| e.to_string())
        })?;
        Ok(())
    }
}

fn file(msg: &Message) -> Option<&AstRoot> {
    msg.payload::<Arc<AstRoot>>().map(|a| a.as_ref())
}

fn view(msg: &Message) -> Option<&ProjectView> {
    msg.payload::<Arc<ProjectView>>().map(|v| v.as_ref())
}

fn run_unused(m: &Message, env: &ProcessorEnv) -> Vec<Finding> {
    file(m).map(|a| detect_unused_imports(a, &env.config)).unwrap_or_default()
}

fn run_params(m: &Message, env: &ProcessorEnv) -> Vec<Finding> {
    file(m).map(|a| detect_excessive_params(a, &env.config)).unwrap_or_default()
}

fn run_implicit(m: &Message, env: &ProcessorEnv) -> Vec<Finding> {
    file(m).map(|a| detect_implicit_single_expr(a, &env.config)).unwrap_or_default()
}

fn run_circular(m: &Message, env: &ProcessorEnv) -> Vec<Finding> {
    view(m).map(|v| detect_circular_references(&v.graph, &env.config)).unwrap_or_default()
}

fn run_platform(m: &Message, env: &ProcessorEnv) -> Vec<Finding> {
    let Some(v) = view(m) else { return Vec::new() };
    let hints: Vec<PlatformHint> = match env.ctx.lock() {
        Ok(mut ctx) => ctx.take(1, HINTS_KEY).unwrap_or_default(),
        Err(_) => return Vec::new(),
    };
    detect_platform_type(&v.index, &v.files(), &hints, &env.config)
}

fn run_collections(m: &Message, env: &ProcessorEnv) -> Vec<Finding> {
    view(m).map(|v| detect_immutable_collection_mutation(&v.index, &v.files(), &env.config)).unwrap_or_default()
}

fn run_internal(m: &Message, env: &ProcessorEnv) -> Vec<Finding> {
    view(m).map(|v| detect_internal_exposure(&v.index, &v.files(), &env.config)).unwrap_or_default()
}

fn run_jvm(m: &Message, env: &ProcessorEnv) -> Vec<Finding> {
    view(m).map(|v| detect_kotlin_jvm_annotation_in_java(&v.files(), &env.config)).unwrap_or_default()
}

struct Spec {
    id: &'static str,
    stage: u8,
    languages: &'static [Language],
    kind: &'static str,
    label: Option<&'static str>,
    smell: Smell,
    run: Run,
}

const BOTH: &[Language] = &[Language::Kotlin, Language::Java];

const DETECTORS: &[Spec] = &[
    Spec { id: "unused-import", stage: 1, languages: &[], kind: KIND_FILE, label: None, smell: Smell::UnusedImport, run: run_unused },
    Spec { id: "excessive-params", stage: 1, languages: &[], kind: KIND_FILE, label: None, smell: Smell::ExcessiveParams, run: run_params },
    Spec {
        id: "implicit-single-expr",
        stage: 1,
        languages: &[Language::Kotlin],
        kind: KIND_FILE,
        label: Some("kotlin"),
        smell: Smell::ImplicitSingleExprFunction,
        run: run_implicit,
    },
    Spec { id: "circular-references", stage: 2, languages: &[], kind: KIND_GRAPH, label: None, smell: Smell::CircularReferences, run: run_circular },
    Spec { id: "platform-type", stage: 3, languages: BOTH, kind: KIND_READY, label: None, smell: Smell::PlatformType, run: run_platform },
    Spec {
        id: "immutable-collection",
        stage: 3,
        languages: BOTH,
        kind: KIND_READY,
        label: None,
        smell: Smell::ImmutableCollectionMutation,
        run: run_collections,
    },
    Spec { id: "internal-exposure", stage: 3, languages: BOTH, kind: KIND_READY, label: None, smell: Smell::InternalExposure, run: run_internal },
    Spec {
        id: "kotlin-jvm-annotation",
        stage: 3,
        languages: BOTH,
        kind: KIND_READY,
        label: None,
        smell: Smell::KotlinJvmAnnotationInJava,
        run: run_jvm,
    },
];

pub const HINT_PROCESSOR: &str = "platform-type-hints";

/// Registry holding the eight detectors and the stage-1 hint collector.
pub fn standard_registry() -> ProcessorRegistry {
    let mut reg = ProcessorRegistry::new();
    for (i, s) in DETECTORS.iter().enumerate() {
        let desc = ProcessorDescriptor {
            id: s.id,
            stage: s.stage,
            languages: s.languages.iter().copied().collect(),
            subscriptions: vec![s.kind],
            produces: vec![KIND_FINDING],
            priority: 100 + i as i32,
            smell: Some(s.smell),
        };
        let (id, kind, priority, smell, label, run) = (s.id, s.kind, desc.priority, s.smell, s.label, s.run);
        reg.register(desc, Box::new(move || Box::new(DetectorProcessor { id, kind, priority, smell, label, run })))
            .expect("built-in registry is valid");
    }
    let hints = ProcessorDescriptor {
        id: HINT_PROCESSOR,
        stage: 1,
        languages: BOTH.iter().copied().collect::<BTreeSet<_>>(),
        subscriptions: vec![KIND_FILE],
        produces: vec![],
        priority: 50,
        smell: None,
    };
    reg.register(hints, Box::new(|| Box::new(HintProcessor))).expect("built-in registry is valid");
    reg
}

/// Config-independent check used by tests of custom registries.
pub fn detector_ids() -> Vec<&'static str> {
    DETECTORS.iter().map(|s| s.id).collect()
}
