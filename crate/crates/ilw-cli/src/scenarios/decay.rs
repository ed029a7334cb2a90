use ilw_core::solutions::{gaussian, solve_soliton, SolitonProfile};
use ilw_core::Grid;
use std::sync::Arc;

use super::*;
use crate::config::InitialData;

pub const LIMINF_THRESHOLDS: &[Threshold] =
    &[Threshold::new("window_mass_min_ratio", Relation::Lt, 0.2), Threshold::new("window_mass_after_exit", Relation::Lt, 1e-6)];

pub const FAR_FIELD_THRESHOLDS: &[Threshold] = &[Threshold::new("far_field_max_ratio", Relation::Lt, 1.0)];

pub const COROLLARY_THRESHOLDS: &[Threshold] = &[Threshold::new("late_decade_growth", Relation::Lt, 0.05)];

fn initial(cfg: &ScenarioConfig, grid: &Arc<Grid>, spec: &EquationSpec) -> Result<(Field, Option<(SolitonProfile, f64)>), RunError> {
    match *cfg.initial().map_err(config_error)? {
        InitialData::Gaussian { amplitude, width, center } => {
            Ok((gaussian(amplitude, width, center, grid).map_err(RunError::Numerical)?, None))
        }
        InitialData::Soliton { c, center, tol } => {
            let delta = spec.dispersion.depth().expect("validated");
            let q = solve_soliton(c, delta, grid, tol).map_err(RunError::Numerical)?;
            Ok((q.sample(grid, center), Some((q, center))))
        }
        _ => unreachable!("validated"),
    }
}

struct Setup {
    u0: Field,
    soliton: Option<(SolitonProfile, f64)>,
    schedule: WeightSchedule,
    solver: SolverConfig,
    traj: Trajectory,
    shots: Vec<f64>,
}

fn setup(cfg: &ScenarioConfig, marks: &[f64]) -> Result<Setup, RunError> {
    let grid = cfg.grid().map_err(config_error)?;
    let spec = cfg.equation().map_err(config_error)?;
    let (solver, every) = cfg.solver().map_err(config_error)?;
    let schedule = cfg.schedule().map_err(config_error)?;
    let (u0, soliton) = initial(cfg, &grid, &spec)?;
    let mut probes = Probes::new(&spec);
    probes.schedule = Some(schedule);
    probes.weight = cfg.weight().map_err(config_error)?;
    let shots = snapshot_times(cfg.output.field_snapshots, solver.t_start, solver.t_end);
    let mut all = marks.to_vec();
    all.extend(&shots);
    let traj = run_marked(&u0, &solver, every, &all, &probes)?;
    Ok(Setup { u0, soliton, schedule, solver, traj, shots })
}

fn finish(mut out: Outcome, s: Setup) -> Outcome {
    attach_snapshots(&mut out, &s.traj, &s.shots);
    out.summary = Some(s.traj.summary.clone());
    out.records = s.traj.records;
    out
}

fn at(records: &[DiagnosticRecord], t: f64, pick: impl Fn(&DiagnosticRecord) -> Option<f64>) -> f64 {
    records.iter().find(|r| (r.t - t).abs() <= 1e-9 * t.max(1.0)).and_then(pick).unwrap_or(f64::NAN)
}

/// Window mass on `|x| <= C t^b / log t`: for dispersive data its smallest value over the
/// horizon against the value at the start of the schedule; for a soliton its size once the
/// soliton centre has left the window.
pub fn liminf(cfg: &ScenarioConfig) -> Result<Outcome, RunError> {
    let s = setup(cfg, &[SCHEDULE_START])?;
    let mut out = Outcome::default();
    let rows: Vec<&DiagnosticRecord> = s.traj.records.iter().filter(|r| r.window_mass.is_some()).collect();
    match s.soliton {
        None => {
            let start = at(&s.traj.records, SCHEDULE_START, |r| r.window_mass);
            let low = rows.iter().filter_map(|r| r.window_mass).fold(f64::INFINITY, f64::min);
            out.checks.push(threshold(ScenarioKind::DecayLiminf, "window_mass_min_ratio").check(low / start));
            out.note("window_mass_start", start);
        }
        Some((q, center)) => {
            let i2 = s.u0.dot(&s.u0).map_err(RunError::Numerical)?;
            let mut worst = f64::NAN;
            let mut exit = None;
            let mut settled = None;
            let bound = threshold(ScenarioKind::DecayLiminf, "window_mass_after_exit").value;
            for r in &rows {
                let position = center + q.c * (r.t - s.solver.t_start);
                let radius = s.schedule.window_radius(r.t).map_err(RunError::Numerical)?;
                if position > radius {
                    exit.get_or_insert(r.t);
                    let rel = r.window_mass.unwrap_or(f64::NAN) / i2;
                    worst = if worst.is_nan() { rel } else { worst.max(rel) };
                    if rel < bound {
                        settled.get_or_insert(r.t);
                    } else {
                        settled = None;
                    }
                }
            }
            out.checks.push(threshold(ScenarioKind::DecayLiminf, "window_mass_after_exit").check(worst));
            out.note("soliton", q);
            out.note("first_row_outside_window", exit);
            out.note("below_bound_from", settled);
        }
    }
    Ok(finish(out, s))
}

pub const FAR_FIELD_TIMES: [f64; 3] = [10.0, 20.0, 40.0];

/// `||u||` on `mu/2 <= |x| <= 2 mu` at `t = 10, 20, 40`.
pub fn far_field(cfg: &ScenarioConfig) -> Result<Outcome, RunError> {
    let s = setup(cfg, &FAR_FIELD_TIMES)?;
    let mut out = Outcome::default();
    let values: Vec<f64> = FAR_FIELD_TIMES.iter().map(|&t| at(&s.traj.records, t, |r| r.far_field_l2)).collect();
    out.checks.push(threshold(ScenarioKind::FarFieldDecay, "far_field_max_ratio").check(max_ratio(&values)));
    out.tables.push(Table {
        file: "far_field.csv".into(),
        header: "t,far_field_l2".into(),
        rows: FAR_FIELD_TIMES.iter().zip(&values).map(|(t, v)| format!("{t:e},{v:e}")).collect(),
    });
    Ok(finish(out, s))
}

/// Running integral of `corollary_integrand / t` from the start of the schedule; the check
/// is its relative growth over the final decade `[t_end / 10, t_end]`.
pub fn corollary(cfg: &ScenarioConfig) -> Result<Outcome, RunError> {
    let t_end = cfg.solver.expect("validated").t_end;
    let early = t_end / 10.0;
    let s = setup(cfg, &[SCHEDULE_START, early])?;
    let mut out = Outcome::default();
    let mut rows = Vec::new();
    let mut sum = 0.0;
    let mut prev: Option<(f64, f64)> = None;
    let mut at_early = f64::NAN;
    for r in s.traj.records.iter().filter(|r| r.corollary_integrand.is_some()) {
        let g = r.corollary_integrand.unwrap_or(f64::NAN) / r.t;
        if let Some((t, h)) = prev {
            sum += 0.5 * (r.t - t) * (g + h);
        }
        prev = Some((r.t, g));
        if (r.t - early).abs() <= 1e-9 * early {
            at_early = sum;
        }
        rows.push(format!("{:e},{:e},{:e}", r.t, g, sum));
    }
    let growth = if sum == at_early { 0.0 } else { (sum - at_early) / at_early };
    out.checks.push(threshold(ScenarioKind::CorollaryLl, "late_decade_growth").check(growth));
    out.tables.push(Table { file: "running_sum.csv".into(), header: "t,integrand_over_t,running_sum".into(), rows });
    out.note("running_sum_final", sum);
    out.note("running_sum_decade_start", at_early);
    Ok(finish(out, s))
}
