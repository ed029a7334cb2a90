//! Run directories: `metadata.json`, `diagnostics.csv`, extra tables and field snapshots.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use ilw_core::diagnostics::windows::TAPER_POINTS;
use ilw_core::diagnostics::DiagnosticRecord;
use ilw_core::spectral::{write_binary, write_csv};
use serde_json::json;

use crate::config::ScenarioConfig;
use crate::scenarios::{thresholds, Outcome};

pub const OUTPUT_ROOT_ENV: &str = "ILW_OUTPUT_ROOT";

/// `ILW_OUTPUT_ROOT` if set, else the config's `output_dir`, else `runs`.
pub fn output_root(cfg: &ScenarioConfig, env_override: Option<PathBuf>) -> PathBuf {
    env_override.or_else(|| cfg.output_dir.clone()).unwrap_or_else(|| PathBuf::from("runs"))
}

pub fn env_output_root() -> Option<PathBuf> {
    std::env::var_os(OUTPUT_ROOT_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

fn write_lines(path: &Path, header: &str, rows: impl IntoIterator<Item = String>) -> io::Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "{header}")?;
    for r in rows {
        writeln!(w, "{r}")?;
    }
    w.flush()
}

pub fn write_diagnostics(path: &Path, records: &[DiagnosticRecord]) -> io::Result<()> {
    write_lines(path, &DiagnosticRecord::csv_header(), records.iter().map(DiagnosticRecord::csv_row))
}

pub fn write_run(dir: &Path, cfg: &ScenarioConfig, outcome: &Outcome, wall_time: f64) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    write_diagnostics(&dir.join("diagnostics.csv"), &outcome.records)?;
    for t in &outcome.tables {
        write_lines(&dir.join(&t.file), &t.header, t.rows.iter().cloned())?;
    }
    let snaps = dir.join("snapshots");
    let mut snapshot_index = Vec::new();
    if !outcome.snapshots.is_empty() {
        fs::create_dir_all(&snaps)?;
    }
    for s in &outcome.snapshots {
        let csv = snaps.join(format!("{}.csv", s.label));
        write_csv(&s.field, &csv).map_err(io::Error::other)?;
        let mut entry = json!({ "label": s.label, "t": s.t, "csv": format!("snapshots/{}.csv", s.label) });
        if cfg.output.binary {
            write_binary(&s.field, s.t, &snaps.join(format!("{}.bin", s.label))).map_err(io::Error::other)?;
            entry["binary"] = json!(format!("snapshots/{}.bin", s.label));
        }
        snapshot_index.push(entry);
    }
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let meta = json!({
        "scenario": cfg.scenario,
        "name": cfg.run_name(),
        "config": cfg,
        "versions": { "ilw-cli": env!("CARGO_PKG_VERSION"), "ilw-core": ilw_core::VERSION },
        "finished_unix": started,
        "wall_time_s": wall_time,
        "run_summary": outcome.summary,
        "thresholds": thresholds(cfg.scenario),
        "checks": outcome.checks,
        "passed": outcome.checks.iter().all(|c| c.passed),
        "notes": outcome.notes,
        "conventions": {
            "window_taper_points": TAPER_POINTS,
            "i4_constant_density": "3/(2 delta^2) omitted; drift is unaffected",
            "x_weight": "sawtooth x on [-L/2, L/2)",
        },
        "snapshots": snapshot_index,
    });
    let text = serde_json::to_string_pretty(&meta).map_err(io::Error::other)?;
    fs::write(dir.join("metadata.json"), text + "\n")
}
