//! Cross-product benchmark runs over instance sets, with CSV output.

use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::instance::Instance;
use crate::par;
use crate::search::{solve, Heuristic, Mode, ModelConfig, Relax, SolveConfig};
use crate::tsplib::{circuit_to_path, read_tsplib};

pub const CSV_HEADER: [&str; 6] = ["instance", "heuristic", "model", "status", "nodes", "time_s"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchConfig {
    pub heuristic: Heuristic,
    pub model: ModelConfig,
    pub relax: Relax,
}

impl BenchConfig {
    /// Model label used in the CSV; the relaxation is appended unless it is
    /// the default tree relaxation.
    pub fn model_label(&self) -> String {
        match self.relax {
            Relax::Tree => self.model.name().to_string(),
            r => format!("{}+{}", self.model.name(), r.name()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
    pub home: usize,
    /// Known upper bounds per instance name; those instances run in prove
    /// mode, all others are optimized.
    pub bounds: BTreeMap<String, i64>,
    pub seed: u64,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions { time_limit: Some(Duration::from_secs(1800)), node_limit: None, home: 0, bounds: BTreeMap::new(), seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub instance: String,
    pub heuristic: String,
    pub model: String,
    pub status: String,
    pub nodes: u64,
    pub time_s: Option<f64>,
}

/// One row per (instance, config), in input order.
pub fn bench_instances(configs: &[BenchConfig], instances: &[Instance], opts: &BenchOptions) -> Vec<BenchRow> {
    let jobs: Vec<(usize, usize)> =
        (0..instances.len()).flat_map(|i| (0..configs.len()).map(move |c| (i, c))).collect();
    par::map(&jobs, |&(i, c)| {
        let inst = &instances[i];
        let cfg = &configs[c];
        let mode = opts.bounds.get(&inst.name).map_or(Mode::Optimize, |&ub| Mode::Prove(ub));
        let sc = SolveConfig {
            mode,
            heuristic: cfg.heuristic,
            model: cfg.model,
            relax: cfg.relax,
            time_limit: opts.time_limit,
            node_limit: opts.node_limit,
            seed: opts.seed,
        };
        let r = solve(inst, &sc);
        BenchRow {
            instance: inst.name.clone(),
            heuristic: cfg.heuristic.name().to_string(),
            model: cfg.model_label(),
            status: r.status.name().to_string(),
            nodes: r.nodes,
            time_s: Some(r.time_s),
        }
    })
}

/// Runs every TSPLIB file of `dir` (sorted by file name) against every
/// config. Files that fail to load produce one `Error` row per config.
pub fn bench_suite(configs: &[BenchConfig], dir: &Path, opts: &BenchOptions) -> Result<Vec<BenchRow>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "tsp" || x == "atsp"))
        .collect();
    paths.sort();
    let mut rows = Vec::new();
    for p in paths {
        let label = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        match read_tsplib(&p) {
            Ok(raw) if opts.home < raw.dimension => {
                let inst = circuit_to_path(&raw, opts.home);
                rows.extend(bench_instances(configs, std::slice::from_ref(&inst), opts));
            }
            other => {
                let msg = match other {
                    Err(e) => e.to_string(),
                    Ok(_) => format!("home {} out of range", opts.home),
                };
                rows.extend(configs.iter().map(|c| BenchRow {
                    instance: label.clone(),
                    heuristic: c.heuristic.name().to_string(),
                    model: c.model_label(),
                    status: format!("Error: {msg}"),
                    nodes: 0,
                    time_s: None,
                }));
            }
        }
    }
    Ok(rows)
}

/// Appends `rows` to `path`, writing the header only if the file is new or
/// empty. With `timing` off the time column is left empty so reruns are
/// byte-identical.
pub fn append_csv(path: &Path, rows: &[BenchRow], timing: bool) -> Result<()> {
    let fresh = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    write_rows(file, rows, timing, fresh)
}

pub fn write_csv<W: std::io::Write>(out: W, rows: &[BenchRow], timing: bool) -> Result<()> {
    write_rows(out, rows, timing, true)
}

fn write_rows<W: std::io::Write>(out: W, rows: &[BenchRow], timing: bool, header: bool) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    if header {
        w.write_record(CSV_HEADER)?;
    }
    for r in rows {
        let mut r = r.clone();
        if !timing {
            r.time_s = None;
        }
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<BenchRow>> {
    let mut rd = csv::Reader::from_path(path)?;
    let mut rows = Vec::new();
    for r in rd.deserialize() {
        rows.push(r?);
    }
    Ok(rows)
}
