//! Genealogy export as a Graphviz DOT digraph: one node per robot, one
//! edge per parent-child link, nodes shaded by fitness.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::evolution::IndividualRecord;

/// HSV colour from blue (lowest fitness) to red (highest).
fn colour(f: f64, lo: f64, hi: f64) -> String {
    let t = if hi > lo {
        ((f - lo) / (hi - lo)).clamp(0.0, 1.0)
    } else {
        0.5
    };
    format!("{:.3} 0.800 0.950", (1.0 - t) * 2.0 / 3.0)
}

pub fn to_dot(records: &[IndividualRecord]) -> String {
    let lo = records.iter().map(|r| r.fitness_after).fold(f64::INFINITY, f64::min);
    let hi = records
        .iter()
        .map(|r| r.fitness_after)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut out = String::from("digraph genealogy {\n  node [style=filled];\n");
    for r in records {
        writeln!(
            out,
            "  \"{}\" [generation={}, fitness={:.6}, fitness_before={:.6}, fillcolor=\"{}\"];",
            r.id,
            r.generation,
            r.fitness_after,
            r.fitness_before,
            colour(r.fitness_after, lo, hi)
        )
        .unwrap();
    }
    for r in records {
        for p in r.parents() {
            writeln!(out, "  \"{}\" -> \"{}\";", p, r.id).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

pub fn write_dot(path: &Path, records: &[IndividualRecord]) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, to_dot(records)).map_err(|e| Error::io(path, e))
}

/// Node and edge counts of a DOT file written by [`to_dot`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DotSummary {
    pub nodes: usize,
    pub edges: usize,
}

pub fn summarize_dot(text: &str) -> Result<DotSummary> {
    let mut nodes = HashSet::new();
    let mut edges = 0;
    let body = text
        .trim()
        .strip_prefix("digraph")
        .and_then(|s| s.trim_end().strip_suffix('}'))
        .ok_or_else(|| Error::parse("genealogy.dot", "not a digraph"))?;
    for line in body.lines().map(str::trim) {
        let line = line.trim_end_matches(';');
        if let Some((a, b)) = line.split_once("->") {
            let id = |s: &str| s.trim().trim_matches('"').to_string();
            nodes.insert(id(a));
            nodes.insert(id(b));
            edges += 1;
        } else if let Some(rest) = line.strip_prefix('"') {
            if let Some((id, _)) = rest.split_once('"') {
                nodes.insert(id.to_string());
            }
        }
    }
    Ok(DotSummary {
        nodes: nodes.len(),
        edges,
    })
}
