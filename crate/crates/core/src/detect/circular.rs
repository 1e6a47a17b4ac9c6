//! File-level dependency cycles within one language.

use std::collections::{BTreeMap, BTreeSet};

use super::{DetectorConfig, Finding, Related, Smell};
use crate::deps::{DependencyEdge, DependencyGraph};
use crate::scc::components;

/// One finding per strongly connected component of two or more files, or a
/// single file with an edge to itself. Cross-language edges are ignored.
pub fn detect_circular_references(graph: &DependencyGraph, cfg: &DetectorConfig) -> Vec<Finding> {
    let same_language: Vec<&DependencyEdge> = graph
        .edges
        .iter()
        .filter(|e| match (graph.nodes.get(&e.from_file), graph.nodes.get(&e.to_file)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        })
        .collect();
    let mut adj: BTreeMap<&str, BTreeSet<&str>> = graph.nodes.keys().map(|k| (k.as_str(), BTreeSet::new())).collect();
    for e in &same_language {
        adj.entry(&e.from_file).or_default().insert(&e.to_file);
    }
    let mut out = Vec::new();
    for comp in components(&adj) {
        let cyclic = comp.len() >= 2 || adj.get(comp[0]).is_some_and(|s| s.contains(comp[0]));
        if !cyclic {
            continue;
        }
        let members: BTreeSet<&str> = comp.iter().copied().collect();
        let inner: Vec<&&DependencyEdge> =
            same_language.iter().filter(|e| members.contains(e.from_file.as_str()) && members.contains(e.to_file.as_str())).collect();
        let first_edge = |file: &str| inner.iter().find(|e| e.from_file == file).map(|e| e.location).unwrap_or_default();
        let anchor = comp[0];
        let mut f = Finding::new(
            Smell::CircularReferences,
            cfg,
            anchor,
            first_edge(anchor),
            format!("circular dependency among {} files: {}", comp.len(), comp.join(", ")),
        );
        let entities: BTreeSet<&str> = inner.iter().map(|e| e.to_entity.as_str()).collect();
        f.entities = entities.into_iter().map(str::to_string).collect();
        f.related = comp
            .iter()
            .map(|m| Related { file: m.to_string(), range: first_edge(m), note: "cycle member".to_string() })
            .collect();
        out.push(f);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deps::DependencyType;
    use crate::source::{Language, SourceRange};

    fn edge(from: &str, to: &str) -> DependencyEdge {
        DependencyEdge {
            from_entity: from.into(),
            to_entity: to.into(),
            from_file: from.into(),
            to_file: to.into(),
            dep_type: DependencyType::Call,
            location: SourceRange { start: 0, end: 1, line: 1, col: 1 },
            expression: String::new(),
            cross_language: false,
        }
    }

    fn graph(nodes: &[(&str, Language)], edges: &[(&str, &str)]) -> DependencyGraph {
        DependencyGraph::new(
            nodes.iter().map(|(n, l)| (n.to_string(), *l)).collect(),
            edges.iter().map(|(a, b)| edge(a, b)).collect(),
        )
    }

    #[test]
    fn two_cycle() {
        let g = graph(&[("A", Language::Java), ("B", Language::Java)], &[("A", "B"), ("B", "A")]);
        let f = detect_circular_references(&g, &DetectorConfig::default());
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].file, "A");
        let related: Vec<&str> = f[0].related.iter().map(|r| r.file.as_str()).collect();
        assert_eq!(related, vec!["A", "B"]);
    }

    #[test]
    fn chain_has_no_cycle() {
        let nodes = [("A", Language::Java), ("B", Language::Java), ("C", Language::Java)];
        let g = graph(&nodes, &[("A", "B"), ("B", "C")]);
        assert!(detect_circular_references(&g, &DetectorConfig::default()).is_empty());
    }

    #[test]
    fn cross_language_cycle_is_ignored() {
        let g = graph(&[("A.kt", Language::Kotlin), ("B.java", Language::Java)], &[("A.kt", "B.java"), ("B.java", "A.kt")]);
        assert!(detect_circular_references(&g, &DetectorConfig::default()).is_empty());
    }

    #[test]
    fn self_edge() {
        let g = graph(&[("A", Language::Java)], &[("A", "A")]);
        assert_eq!(detect_circular_references(&g, &DetectorConfig::default()).len(), 1);
    }
}
