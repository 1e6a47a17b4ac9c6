//! One PASS/FAIL line per acceptance criterion. Run with `--nocapture` to
//! see the lines.

#[path = "../../core/tests/common/unused_oracle.rs"]
mod unused_oracle;

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::{Arc, Mutex};
use std::time::Instant;

use kjlint_core::bus::{Filter, Message, MessageBus, SubscriptionId};
use kjlint_core::deps::{DependencyEdge, DependencyGraph, DependencyType};
use kjlint_core::detect::{detect_circular_references, detect_unused_imports, DetectorConfig, Smell};
use kjlint_core::pipeline::{run_analysis, run_analysis_with, standard_registry, AnalysisConfig};
use kjlint_core::report::ReportDocument;
use kjlint_core::{parse_source, Language, SourceFile, SourceRange};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = Result<(), String>;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn both() -> AnalysisConfig {
    AnalysisConfig::new([Language::Kotlin, Language::Java])
}

fn source_files(root: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for e in std::fs::read_dir(&dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else if matches!(p.extension().and_then(|x| x.to_str()), Some("kt" | "java")) {
                out.push(p);
            }
        }
    }
    out.sort();
    out
}

fn rel(root: &Path, p: &Path) -> String {
    p.strip_prefix(root).unwrap().to_string_lossy().replace('\\', "/")
}

fn markers(root: &Path) -> BTreeMap<(String, u32, Smell), usize> {
    let mut out = BTreeMap::new();
    for p in source_files(root) {
        for (i, line) in std::fs::read_to_string(&p).unwrap().lines().enumerate() {
            let Some((_, spec)) = line.split_once("// expect:") else { continue };
            for item in spec.split(',') {
                let mut w = item.split_whitespace();
                let smell = Smell::parse(w.next().unwrap()).unwrap();
                let n: usize = w.next().map_or(1, |x| x.trim_start_matches('x').parse().unwrap());
                *out.entry((rel(root, &p), i as u32 + 1, smell)).or_insert(0) += n;
            }
        }
    }
    out
}

fn seeded_fixtures() -> Check {
    let started = Instant::now();
    let smells = fixtures().join("smells");
    let want = markers(&smells);
    for s in Smell::ALL {
        let n: usize = want.iter().filter(|(k, _)| k.2 == s).map(|(_, n)| n).sum();
        if n < 3 {
            return Err(format!("{s} seeded {n} times"));
        }
    }
    let result = run_analysis(&both(), &smells).map_err(|e| e.to_string())?;
    let mut got = BTreeMap::new();
    for f in &result.findings {
        *got.entry((f.file.clone(), f.range.line, f.smell)).or_insert(0) += 1;
    }
    if got != want {
        return Err(format!("reported {} findings at {} sites, seeded {} sites", result.findings.len(), got.len(), want.len()));
    }
    let clean = run_analysis(&both(), &fixtures().join("clean")).map_err(|e| e.to_string())?;
    if !clean.findings.is_empty() {
        return Err(format!("clean twin has {} findings", clean.findings.len()));
    }
    let secs = started.elapsed().as_secs_f64();
    if secs >= 5.0 {
        return Err(format!("took {secs:.2}s"));
    }
    Ok(())
}

fn dependency_ground_truth() -> Check {
    let root = fixtures().join("deps");
    let want: BTreeSet<(String, u32, String, String, String)> = std::fs::read_to_string(root.join("expected_edges.txt"))
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            (f[0].into(), f[1].parse().unwrap(), f[2].into(), f[3].into(), f[4].into())
        })
        .collect();
    let types: BTreeSet<&str> = want.iter().map(|r| r.2.as_str()).collect();
    if types.len() != DependencyType::ALL.len() {
        return Err(format!("manual list covers {} of 11 types", types.len()));
    }
    let result = run_analysis(&both(), &root).map_err(|e| e.to_string())?;
    let got: BTreeSet<_> = result
        .graph
        .edges
        .iter()
        .map(|e| (e.from_file.clone(), e.location.line, e.dep_type.to_string(), e.to_file.clone(), e.to_entity.clone()))
        .collect();
    if got.len() != result.graph.edges.len() {
        return Err("duplicate edges".into());
    }
    let missing = want.difference(&got).count();
    let extra = got.difference(&want).count();
    if missing + extra > 0 {
        return Err(format!("{missing} missing, {extra} extra"));
    }
    Ok(())
}

fn reach(n: usize, adj: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let mut m: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j || adj[i][j]).collect()).collect();
    let mut len = 1;
    while len < n {
        let prev = m.clone();
        for i in 0..n {
            for k in 0..n {
                if prev[i][k] {
                    for j in 0..n {
                        m[i][j] |= prev[k][j];
                    }
                }
            }
        }
        len *= 2;
    }
    m
}

fn scc_oracle() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5cc);
    for trial in 0..200 {
        let n = rng.gen_range(1..=12);
        let density = rng.gen_range(0.0..0.4);
        let adj: Vec<Vec<bool>> = (0..n).map(|_| (0..n).map(|_| rng.gen_bool(density)).collect()).collect();
        let name = |i: usize| format!("F{i:02}.java");
        let nodes = (0..n).map(|i| (name(i), Language::Java)).collect();
        let mut edges = Vec::new();
        for (i, row) in adj.iter().enumerate() {
            for (j, &on) in row.iter().enumerate() {
                if on {
                    edges.push(DependencyEdge {
                        from_entity: name(i),
                        to_entity: name(j),
                        from_file: name(i),
                        to_file: name(j),
                        dep_type: DependencyType::Call,
                        location: SourceRange { start: 0, end: 1, line: 1, col: 1 },
                        expression: String::new(),
                        cross_language: false,
                    });
                }
            }
        }
        let found: BTreeSet<BTreeSet<String>> = detect_circular_references(&DependencyGraph::new(nodes, edges), &DetectorConfig::default())
            .into_iter()
            .map(|f| f.related.into_iter().map(|r| r.file).collect())
            .collect();
        let r = reach(n, &adj);
        let mut expected = BTreeSet::new();
        for u in 0..n {
            let comp: BTreeSet<String> = (0..n).filter(|&v| r[u][v] && r[v][u]).map(name).collect();
            if comp.len() >= 2 || adj[u][u] {
                expected.insert(comp);
            }
        }
        if found != expected {
            return Err(format!("trial {trial}: {found:?} != {expected:?}"));
        }
    }
    Ok(())
}

fn unused_import_oracle() -> Check {
    let root = fixtures();
    let files = source_files(&root);
    for p in &files {
        let path = rel(&root, p);
        let text = std::fs::read_to_string(p).unwrap();
        let ast = parse_source(Arc::new(SourceFile::new(path.as_str(), text.as_str()).unwrap())).map_err(|e| e.to_string())?;
        let got: Vec<String> =
            detect_unused_imports(&ast, &DetectorConfig::default()).into_iter().map(|f| f.entities[0].clone()).collect();
        let want = unused_oracle::oracle_unused(&path, &text);
        if got != want {
            return Err(format!("{path}: detector {got:?}, oracle {want:?}"));
        }
    }
    Ok(())
}

fn bus_ordering() -> Check {
    let mut rng = StdRng::seed_from_u64(0xb05);
    for trial in 0..500 {
        let bus = MessageBus::new();
        let ran: Arc<Mutex<Vec<SubscriptionId>>> = Arc::new(Mutex::new(Vec::new()));
        let count = rng.gen_range(0..16);
        let labelled = rng.gen_bool(0.5);
        let mut subs = Vec::new();
        for reg in 0..count {
            let priority: i32 = rng.gen_range(-3..4);
            let fails = rng.gen_bool(0.3);
            let needs = rng.gen_bool(0.2);
            let filter = if needs { Filter::labels(["x"]) } else { Filter::default() };
            let slot: Arc<Mutex<Option<SubscriptionId>>> = Arc::new(Mutex::new(None));
            let (me, log) = (slot.clone(), ran.clone());
            let id = bus
                .subscribe_filtered("k", priority, filter, move |_, _| {
                    log.lock().unwrap().push(me.lock().unwrap().unwrap());
                    if fails {
                        Err("fail".into())
                    } else {
                        Ok(())
                    }
                })
                .map_err(|e| e.to_string())?;
            *slot.lock().unwrap() = Some(id);
            subs.push((priority, reg, id, needs));
        }
        let msg = if labelled { Message::new("k", ()).label("x") } else { Message::new("k", ()) };
        let report = bus.publish(msg).map_err(|e| e.to_string())?;
        let mut expected: Vec<_> = subs.iter().filter(|s| labelled || !s.3).collect();
        expected.sort_by_key(|s| (s.0, s.1));
        let expected: Vec<SubscriptionId> = expected.into_iter().map(|s| s.2).collect();
        if report.delivered_to != expected || *ran.lock().unwrap() != expected {
            return Err(format!("trial {trial}: delivery order or coverage differs"));
        }
    }
    Ok(())
}

fn pipeline_gating() -> Check {
    let reg = standard_registry();
    let result =
        run_analysis_with(&reg, &AnalysisConfig::new([Language::Kotlin]), &fixtures().join("one-each")).map_err(|e| e.to_string())?;
    let stage3 = [Smell::PlatformType, Smell::ImmutableCollectionMutation, Smell::InternalExposure, Smell::KotlinJvmAnnotationInJava];
    let leaked = result.findings.iter().filter(|f| stage3.contains(&f.smell)).count();
    if leaked > 0 {
        return Err(format!("{leaked} stage-3 findings"));
    }
    for d in reg.descriptors().filter(|d| d.stage == 3) {
        let n = reg.construction_count(d.id);
        if n != 0 {
            return Err(format!("{} constructed {n} times", d.id));
        }
    }
    Ok(())
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kjlint"))
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for run in 0..2 {
        let out = dir.path().join(format!("run{run}"));
        bin()
            .args(["kotlin", fixtures().to_str().unwrap(), "--with", "java", "-f", "json", "-d", out.to_str().unwrap()])
            .output()
            .map_err(|e| e.to_string())?;
        let report = std::fs::read(out.join("report.json")).map_err(|e| e.to_string())?;
        let graph = std::fs::read(out.join("graph.json")).map_err(|e| e.to_string())?;
        outputs.push((report, graph));
    }
    if outputs[0] != outputs[1] {
        return Err("outputs differ between runs".into());
    }
    Ok(())
}

fn copy_tree(from: &Path, to: &Path) {
    std::fs::create_dir_all(to).unwrap();
    for e in std::fs::read_dir(from).unwrap() {
        let p = e.unwrap().path();
        let dest = to.join(p.file_name().unwrap());
        if p.is_dir() {
            copy_tree(&p, &dest);
        } else {
            std::fs::copy(&p, &dest).unwrap();
        }
    }
}

fn cli_contract() -> Check {
    let help = bin().arg("--help").output().map_err(|e| e.to_string())?;
    let text = String::from_utf8_lossy(&help.stdout);
    for row in ["-w, --with", "-p, --prefix", "-d, --outDir", "-f, --format", "-c, --config", "-h, --help"] {
        if !text.contains(row) {
            return Err(format!("help lacks {row}"));
        }
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    copy_tree(&fixtures(), &dir.path().join("fixtures"));
    let out = bin()
        .current_dir(dir.path())
        .args(["kotlin", "./fixtures", "--with", "java", "-f", "json", "-d", "./out"])
        .output()
        .map_err(|e| e.to_string())?;
    if !matches!(out.status.code(), Some(0 | 1)) {
        return Err(format!("analysis run exited with {:?}", out.status.code()));
    }
    let report = std::fs::read_to_string(dir.path().join("out/report.json")).map_err(|e| e.to_string())?;
    let doc = ReportDocument::parse_json(report.trim_end()).map_err(|e| e.to_string())?;
    if doc.schema_version != 1 || doc.findings.is_empty() {
        return Err("report.json is empty or has the wrong schema".into());
    }
    let missing = bin().arg("kotlin").output().map_err(|e| e.to_string())?;
    if missing.status.code() != Some(2) || !String::from_utf8_lossy(&missing.stderr).contains("Usage") {
        return Err(format!("missing srcPath exited with {:?}", missing.status.code()));
    }
    Ok(())
}

#[test]
fn acceptance() {
    let checks: [(&str, fn() -> Check); 8] = [
        ("seeded fixtures: exact findings, clean twins silent, under 5 s", seeded_fixtures),
        ("dependency ground truth: all 11 types match the manual edge list", dependency_ground_truth),
        ("SCC oracle: 200 random digraphs agree with mutual reachability", scc_oracle),
        ("UnusedImport oracle: detector equals token scan on every fixture file", unused_import_oracle),
        ("bus ordering: 500 random subscriber sets, failures isolated", bus_ordering),
        ("pipeline gating: single-language run skips and never builds stage 3", pipeline_gating),
        ("determinism: byte-identical report.json and graph.json", determinism),
        ("CLI contract: help rows, json run, missing srcPath usage error", cli_contract),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        match check() {
            Ok(()) => println!("PASS {name}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
