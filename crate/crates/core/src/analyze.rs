//! Post-hoc analysis of experiment directories: descriptor trends,
//! learning-delta curve, fitness landscapes over descriptor pairs, and
//! trajectory density of the best robots.
//!
//! Everything lands in `<dir>/analysis/` as schema-tagged CSV plus an
//! `analysis.json` overview.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{GenerationStats, IndividualRecord};
use crate::experiment::{trajectory_file, MeanStd, GENEALOGY, INDIVIDUALS, STATS};
use crate::fitness::TARGET_DIRECTIONS;
use crate::genealogy::summarize_dot;
use crate::report;

pub const DEFAULT_RESOLUTION: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Descriptor {
    Proportion,
    RelLimbs,
    Symmetry,
    Branching,
}

impl Descriptor {
    pub const ALL: [Descriptor; 4] = [
        Descriptor::Proportion,
        Descriptor::RelLimbs,
        Descriptor::Symmetry,
        Descriptor::Branching,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Descriptor::Proportion => "proportion",
            Descriptor::RelLimbs => "rel_limbs",
            Descriptor::Symmetry => "symmetry",
            Descriptor::Branching => "branching",
        }
    }

    pub fn of(self, r: &IndividualRecord) -> f64 {
        match self {
            Descriptor::Proportion => r.proportion,
            Descriptor::RelLimbs => r.rel_limbs,
            Descriptor::Symmetry => r.symmetry,
            Descriptor::Branching => r.branching,
        }
    }
}

/// Bin of a value in [0, 1] at `resolution` bins; 1.0 falls in the last.
pub fn bin(value: f64, resolution: usize) -> usize {
    ((value.clamp(0.0, 1.0) * resolution as f64).floor() as usize).min(resolution - 1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandscapeCell {
    pub a_bin: usize,
    pub b_bin: usize,
    pub a_lo: f64,
    pub a_hi: f64,
    pub b_lo: f64,
    pub b_hi: f64,
    pub count: usize,
    /// Mean fitness of robots in the cell, empty when the cell is empty.
    pub mean_fitness: Option<f64>,
}

/// Fitness landscape over a descriptor pair: every cell of a
/// `resolution` x `resolution` grid over [0, 1]^2, row-major in `a`.
pub fn landscape(records: &[IndividualRecord], a: Descriptor, b: Descriptor, resolution: usize) -> Vec<LandscapeCell> {
    let mut sums = vec![(0usize, 0.0f64); resolution * resolution];
    for r in records {
        let cell = &mut sums[bin(a.of(r), resolution) * resolution + bin(b.of(r), resolution)];
        cell.0 += 1;
        cell.1 += r.fitness_after;
    }
    let edge = |i: usize| i as f64 / resolution as f64;
    sums.iter()
        .enumerate()
        .map(|(k, &(count, sum))| {
            let (i, j) = (k / resolution, k % resolution);
            LandscapeCell {
                a_bin: i,
                b_bin: j,
                a_lo: edge(i),
                a_hi: edge(i + 1),
                b_lo: edge(j),
                b_hi: edge(j + 1),
                count,
                mean_fitness: (count > 0).then(|| sum / count as f64),
            }
        })
        .collect()
}

pub fn landscape_file(a: Descriptor, b: Descriptor) -> String {
    format!("landscape_{}_{}.csv", a.name(), b.name())
}

pub fn read_landscape(path: &Path) -> Result<Vec<LandscapeCell>> {
    report::read_rows(path)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescriptorMeans {
    pub generation: usize,
    pub mean_size: f64,
    pub mean_proportion: f64,
    pub mean_bricks: f64,
    pub mean_rel_limbs: f64,
    pub mean_symmetry: f64,
    pub mean_branching: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaPoint {
    pub generation: usize,
    pub mean_delta: f64,
    pub std_delta: f64,
    pub mean_fitness: f64,
    pub std_fitness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityCell {
    pub target_deg: i64,
    pub x_bin: usize,
    pub y_bin: usize,
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, Deserialize)]
struct TrajectoryRow {
    #[allow(dead_code)]
    t: f64,
    x: f64,
    y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub runs: usize,
    pub generations: usize,
    pub individuals: usize,
    pub genealogy_nodes: usize,
    pub genealogy_edges: usize,
    pub resolution: usize,
    pub trajectory_extent: f64,
    pub files: Vec<String>,
}

fn required_files() -> Vec<String> {
    let mut files = vec![STATS.to_string(), INDIVIDUALS.to_string(), GENEALOGY.to_string()];
    files.extend(TARGET_DIRECTIONS.iter().map(|&t| trajectory_file(t)));
    files
}

/// Run directories under `dir`: `dir` itself if it holds a run, otherwise
/// its `run_*` children in name order.
pub fn find_runs(dir: &Path) -> Result<Vec<PathBuf>> {
    if dir.join(STATS).exists() {
        return Ok(vec![dir.to_path_buf()]);
    }
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut runs: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir() && p.file_name().is_some_and(|n| n.to_string_lossy().starts_with("run_")))
        .collect();
    runs.sort();
    if runs.is_empty() {
        return Err(Error::MissingArtifacts {
            dir: dir.to_path_buf(),
            missing: required_files().into_iter().map(|f| format!("run_*/{f}")).collect(),
        });
    }
    Ok(runs)
}

fn check_run(dir: &Path) -> Result<()> {
    let missing: Vec<String> = required_files().into_iter().filter(|f| !dir.join(f).exists()).collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(Error::MissingArtifacts {
            dir: dir.to_path_buf(),
            missing,
        })
    }
}

pub fn cmd_analyze(dir: &Path, resolution: usize) -> Result<AnalysisReport> {
    if resolution == 0 {
        return Err(Error::Config("resolution must be at least 1".into()));
    }
    let runs = find_runs(dir)?;
    for run in &runs {
        check_run(run)?;
    }
    let out = dir.join("analysis");
    let mut files = Vec::new();

    let mut stats: Vec<Vec<GenerationStats>> = Vec::new();
    let mut records: Vec<IndividualRecord> = Vec::new();
    let (mut nodes, mut edges) = (0, 0);
    for run in &runs {
        stats.push(report::read_rows(&run.join(STATS))?);
        let rows: Vec<IndividualRecord> = report::read_rows(&run.join(INDIVIDUALS))?;
        let path = run.join(GENEALOGY);
        let dot = summarize_dot(&fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?)?;
        let expected_edges: usize = rows.iter().map(|r| r.parents().count()).sum();
        if dot.nodes != rows.len() || dot.edges != expected_edges {
            return Err(Error::parse(
                path,
                format!(
                    "{} nodes / {} edges, but {} lists {} robots / {} parent links",
                    dot.nodes,
                    dot.edges,
                    INDIVIDUALS,
                    rows.len(),
                    expected_edges
                ),
            ));
        }
        nodes += dot.nodes;
        edges += dot.edges;
        records.extend(rows);
    }
    let generations = stats.iter().map(Vec::len).min().unwrap_or(0);

    let mean_of =
        |g: usize, f: fn(&GenerationStats) -> f64| MeanStd::of(&stats.iter().map(|s| f(&s[g])).collect::<Vec<_>>());
    let means: Vec<DescriptorMeans> = (0..generations)
        .map(|g| DescriptorMeans {
            generation: g,
            mean_size: mean_of(g, |s| s.mean_size).mean,
            mean_proportion: mean_of(g, |s| s.mean_proportion).mean,
            mean_bricks: mean_of(g, |s| s.mean_bricks).mean,
            mean_rel_limbs: mean_of(g, |s| s.mean_rel_limbs).mean,
            mean_symmetry: mean_of(g, |s| s.mean_symmetry).mean,
            mean_branching: mean_of(g, |s| s.mean_branching).mean,
        })
        .collect();
    report::write_rows(&out.join("descriptor_means.csv"), "descriptor-means", &means)?;
    files.push("descriptor_means.csv".to_string());

    let deltas: Vec<DeltaPoint> = (0..generations)
        .map(|g| {
            let d = mean_of(g, |s| s.mean_delta);
            let f = mean_of(g, |s| s.mean_fitness);
            DeltaPoint {
                generation: g,
                mean_delta: d.mean,
                std_delta: d.std,
                mean_fitness: f.mean,
                std_fitness: f.std,
            }
        })
        .collect();
    report::write_rows(&out.join("learning_delta.csv"), "learning-delta", &deltas)?;
    files.push("learning_delta.csv".to_string());

    for (i, &a) in Descriptor::ALL.iter().enumerate() {
        for &b in &Descriptor::ALL[i + 1..] {
            let name = landscape_file(a, b);
            report::write_rows(&out.join(&name), "landscape", &landscape(&records, a, b, resolution))?;
            files.push(name);
        }
    }

    let mut paths: BTreeMap<i64, Vec<(f64, f64)>> = BTreeMap::new();
    for run in &runs {
        for &t in &TARGET_DIRECTIONS {
            let rows: Vec<TrajectoryRow> = report::read_rows(&run.join(trajectory_file(t)))?;
            paths
                .entry(t.to_degrees().round() as i64)
                .or_default()
                .extend(rows.iter().map(|r| (r.x, r.y)));
        }
    }
    let extent = trajectory_extent(paths.values().flatten());
    let density: Vec<DensityCell> = paths
        .iter()
        .flat_map(|(&deg, pts)| trajectory_density(deg, pts, extent, resolution))
        .collect();
    report::write_rows(&out.join("trajectory_density.csv"), "trajectory-density", &density)?;
    files.push("trajectory_density.csv".to_string());

    let summary = AnalysisReport {
        runs: runs.len(),
        generations,
        individuals: records.len(),
        genealogy_nodes: nodes,
        genealogy_edges: edges,
        resolution,
        trajectory_extent: extent,
        files,
    };
    report::write_json(&out.join("analysis.json"), &summary)?;
    Ok(summary)
}

/// Half-width of the square grid covering every point, at least 1 m.
fn trajectory_extent<'a>(points: impl Iterator<Item = &'a (f64, f64)>) -> f64 {
    let m = points.fold(0.0f64, |m, &(x, y)| m.max(x.abs()).max(y.abs()));
    m.max(1.0).ceil()
}

/// Visit counts of trajectory samples on a grid over [-extent, extent]^2.
pub fn trajectory_density(target_deg: i64, points: &[(f64, f64)], extent: f64, resolution: usize) -> Vec<DensityCell> {
    let mut counts = vec![0usize; resolution * resolution];
    let unit = |v: f64| (v + extent) / (2.0 * extent);
    for &(x, y) in points {
        counts[bin(unit(x), resolution) * resolution + bin(unit(y), resolution)] += 1;
    }
    let edge = |i: usize| -extent + 2.0 * extent * i as f64 / resolution as f64;
    counts
        .iter()
        .enumerate()
        .map(|(k, &count)| {
            let (i, j) = (k / resolution, k % resolution);
            DensityCell {
                target_deg,
                x_bin: i,
                y_bin: j,
                x_lo: edge(i),
                x_hi: edge(i + 1),
                y_lo: edge(j),
                y_hi: edge(j + 1),
                count,
            }
        })
        .collect()
}
