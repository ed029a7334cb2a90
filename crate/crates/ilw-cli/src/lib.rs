//! Config-driven scenario runner for `ilw-core`.
//!
//! A scenario is described by a TOML file (see [`config::ScenarioConfig`]). Running it
//! writes a directory with `metadata.json`, `diagnostics.csv`, scenario tables and field
//! snapshots. Exit codes: 0 success, 2 configuration error, 3 numerical failure.

pub mod config;
pub mod output;
pub mod scenarios;

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use config::{Issue, ScenarioConfig};
use scenarios::Check;

#[derive(Debug)]
pub enum RunError {
    Config(Vec<Issue>),
    Numerical(ilw_core::Error),
    Io(std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Numerical(_) => 3,
            Self::Io(_) => 1,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Config(issues) => {
                write!(f, "invalid configuration:")?;
                for i in issues {
                    write!(f, "\n  {i}")?;
                }
                Ok(())
            }
            Self::Numerical(e) => write!(f, "numerical failure: {e}"),
            Self::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for RunError {}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub dir: PathBuf,
    pub checks: Vec<Check>,
    pub wall_time: f64,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn load(path: &Path) -> Result<ScenarioConfig, RunError> {
    config::load(path).map_err(|i| RunError::Config(vec![i]))
}

/// Parse and validation problems for the file at `path`; empty when it is runnable.
pub fn validate(path: &Path) -> Vec<Issue> {
    match config::load(path) {
        Ok(cfg) => cfg.validate(),
        Err(i) => vec![i],
    }
}

/// Runs `cfg` into `<root>/<name>`.
pub fn run(cfg: &ScenarioConfig, root: &Path) -> Result<RunReport, RunError> {
    let clock = Instant::now();
    let outcome = scenarios::execute(cfg)?;
    let wall_time = clock.elapsed().as_secs_f64();
    let dir = root.join(cfg.run_name());
    output::write_run(&dir, cfg, &outcome, wall_time).map_err(RunError::Io)?;
    Ok(RunReport { dir, checks: outcome.checks, wall_time })
}

/// Per-file results of a batch, in file name order.
pub type BatchResults = Vec<(PathBuf, Result<RunReport, RunError>)>;

/// Runs every `*.toml` in `dir` on up to `workers` threads. Configs resolving to the same
/// output directory are rejected before anything runs.
pub fn batch(dir: &Path, root_override: Option<PathBuf>, workers: usize) -> Result<BatchResults, RunError> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(RunError::Io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "toml"))
        .collect();
    paths.sort();
    let mut jobs = Vec::new();
    let mut seen: Vec<(PathBuf, PathBuf)> = Vec::new();
    let mut results: Vec<Option<Result<RunReport, RunError>>> = Vec::new();
    for p in &paths {
        match load(p) {
            Ok(cfg) => {
                let root = output::output_root(&cfg, root_override.clone());
                let target = root.join(cfg.run_name());
                if let Some((other, _)) = seen.iter().find(|(_, t)| *t == target) {
                    let msg = format!("output directory {} already used by {}", target.display(), other.display());
                    results.push(Some(Err(RunError::Config(vec![Issue::new("name", msg)]))));
                } else {
                    seen.push((p.clone(), target));
                    jobs.push((results.len(), cfg, root));
                    results.push(None);
                }
            }
            Err(e) => results.push(Some(Err(e))),
        }
    }
    let next = AtomicUsize::new(0);
    let slots = Mutex::new(results);
    std::thread::scope(|s| {
        for _ in 0..workers.max(1).min(jobs.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some((slot, cfg, root)) = jobs.get(i) else { break };
                let r = run(cfg, root);
                slots.lock().expect("no panics while holding the lock")[*slot] = Some(r);
            });
        }
    });
    let results = slots.into_inner().expect("workers finished");
    Ok(paths.into_iter().zip(results).map(|(p, r)| (p, r.expect("every job ran"))).collect())
}
