use ilw_core::solutions::solve_soliton;

use super::*;
use crate::config::InitialData;

/// Elapsed time at which the travelled profile is compared with the exact translate.
pub const SHAPE_TIME: f64 = 2.0;

pub const THRESHOLDS: &[Threshold] = &[
    Threshold::new("soliton_residual", Relation::Le, 1e-8),
    Threshold::new("shape_error", Relation::Lt, 1e-3),
    Threshold::new("i2_drift", Relation::Lt, 1e-8),
    Threshold::new("i3_drift", Relation::Lt, 1e-6),
    Threshold::new("i4_drift", Relation::Lt, 1e-6),
];

fn check(out: &mut Outcome, name: &str, value: f64) {
    let kind = ScenarioKind::SolitonTravel;
    out.checks.push(threshold(kind, name).check(value));
}

fn drift_checks(out: &mut Outcome, records: &[DiagnosticRecord]) {
    check(out, "i2_drift", drift(records, |r| r.i2));
    check(out, "i3_drift", drift(records, |r| r.i3));
    check(out, "i4_drift", drift(records, |r| r.i4));
}

pub fn travel(cfg: &ScenarioConfig) -> Result<Outcome, RunError> {
    let grid = cfg.grid().map_err(config_error)?;
    let spec = cfg.equation().map_err(config_error)?;
    let (solver, every) = cfg.solver().map_err(config_error)?;
    let &InitialData::Soliton { c, center, tol } = cfg.initial().map_err(config_error)? else { unreachable!("validated") };
    let delta = spec.dispersion.depth().expect("validated");
    let q = solve_soliton(c, delta, &grid, tol).map_err(RunError::Numerical)?;
    let u0 = q.sample(&grid, center);
    let shots = snapshot_times(cfg.output.field_snapshots, solver.t_start, solver.t_end);
    let shape_t = (solver.t_start + SHAPE_TIME).min(solver.t_end);
    let mut marks = shots.clone();
    marks.push(shape_t);
    let traj = run_marked(&u0, &solver, every, &marks, &Probes::new(&spec))?;

    let mut out = Outcome::default();
    let (_, moved) = traj.marked.iter().find(|(t, _)| (t - shape_t).abs() <= 1e-9 * shape_t.abs().max(1.0)).expect("marked");
    let expected = q.sample(&grid, center + c * (shape_t - solver.t_start));
    let shape = moved.zip_map(&expected, |a, b| a - b).map_err(RunError::Numerical)?.l2_norm() / expected.l2_norm();
    check(&mut out, "soliton_residual", q.residual);
    check(&mut out, "shape_error", shape);
    drift_checks(&mut out, &traj.records);
    out.note("soliton", q);
    out.note("peak", q.peak());
    out.note("shape_time", shape_t);
    attach_snapshots(&mut out, &traj, &shots);
    out.summary = Some(traj.summary.clone());
    out.records = traj.records;
    Ok(out)
}

/// Superposed single solitons; there is no exact two-soliton profile to compare with.
pub fn pair(cfg: &ScenarioConfig) -> Result<Outcome, RunError> {
    let grid = cfg.grid().map_err(config_error)?;
    let spec = cfg.equation().map_err(config_error)?;
    let (solver, every) = cfg.solver().map_err(config_error)?;
    let InitialData::Solitons { components, tol } = cfg.initial().map_err(config_error)? else { unreachable!("validated") };
    let delta = spec.dispersion.depth().expect("validated");
    let mut u0 = Field::zeros(&grid);
    let mut profiles = Vec::new();
    for s in components {
        let q = solve_soliton(s.c, delta, &grid, *tol).map_err(RunError::Numerical)?;
        u0 = u0.zip_map(&q.sample(&grid, s.center), |a, b| a + b).map_err(RunError::Numerical)?;
        profiles.push(q);
    }
    let shots = snapshot_times(cfg.output.field_snapshots, solver.t_start, solver.t_end);
    let traj = run_marked(&u0, &solver, every, &shots, &Probes::new(&spec))?;
    let mut out = Outcome::default();
    drift_checks(&mut out, &traj.records);
    out.note("solitons", &profiles);
    attach_snapshots(&mut out, &traj, &shots);
    out.summary = Some(traj.summary.clone());
    out.records = traj.records;
    Ok(out)
}
