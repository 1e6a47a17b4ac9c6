#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use kjlint_core::detect::{Finding, Smell};

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// (file, line, smell) → count, read from `// expect: A, B x2` markers.
pub fn expected_markers(root: &Path) -> BTreeMap<(String, u32, Smell), usize> {
    let mut out = BTreeMap::new();
    for entry in walk(root) {
        let rel = entry.strip_prefix(root).unwrap().to_string_lossy().replace('\\', "/");
        let text = std::fs::read_to_string(&entry).unwrap();
        for (i, line) in text.lines().enumerate() {
            let Some((_, spec)) = line.split_once("// expect:") else { continue };
            for item in spec.split(',') {
                let mut words = item.split_whitespace();
                let name = words.next().expect("smell name");
                let smell = Smell::parse(name).unwrap_or_else(|| panic!("unknown smell {name} in {rel}"));
                let n = words.next().map_or(1, |w| w.trim_start_matches('x').parse().unwrap());
                *out.entry((rel.clone(), i as u32 + 1, smell)).or_insert(0) += n;
            }
        }
    }
    out
}

pub fn actual(findings: &[Finding]) -> BTreeMap<(String, u32, Smell), usize> {
    let mut out = BTreeMap::new();
    for f in findings {
        *out.entry((f.file.clone(), f.range.line, f.smell)).or_insert(0) += 1;
    }
    out
}

pub fn walk(root: &Path) -> Vec<PathBuf> {
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
