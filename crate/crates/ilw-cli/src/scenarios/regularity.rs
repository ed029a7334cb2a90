use ilw_core::solutions::make_regularity_datum;

use super::*;

pub const THRESHOLDS: &[Threshold] = &[
    Threshold::new("right_h2_growth", Relation::Lt, 3.0),
    Threshold::new("left_over_right_initial", Relation::Gt, 10.0),
    Threshold::new("smoothing_integral", Relation::Finite, 0.0),
];

/// Rough-left, smooth-right datum: the order-`m` norm on the window
/// `(x0 + epsilon - gamma t, L/2)` against its initial value, and the time integral of the
/// half-derivative gain on the same window.
pub fn run(cfg: &ScenarioConfig) -> Result<Outcome, RunError> {
    let grid = cfg.grid().map_err(config_error)?;
    let spec = cfg.equation().map_err(config_error)?;
    let (solver, every) = cfg.solver().map_err(config_error)?;
    let datum = cfg.regularity_datum().map_err(config_error)?;
    let u0 = make_regularity_datum(&datum, &grid).map_err(RunError::Numerical)?;
    let p = cfg.probe;
    let mut probes = Probes::new(&spec);
    probes.regularity = Some(RegularityProbe { x0: datum.x0, epsilon: p.epsilon, gamma: p.gamma, order: p.order, t0: solver.t_start });
    let shots = snapshot_times(cfg.output.field_snapshots, solver.t_start, solver.t_end);
    let traj = run_marked(&u0, &solver, every, &shots, &probes)?;

    let rows = &traj.records;
    let right0 = rows[0].local_hm_right.unwrap_or(f64::NAN);
    let left0 = rows[0].local_hm_left.unwrap_or(f64::NAN);
    let growth = rows.iter().filter_map(|r| r.local_hm_right).fold(0.0, f64::max) / right0;
    let smoothing: f64 = rows
        .windows(2)
        .map(|w| 0.5 * (w[1].t - w[0].t) * (w[0].smoothing_halfnorm.unwrap_or(f64::NAN) + w[1].smoothing_halfnorm.unwrap_or(f64::NAN)))
        .sum();
    let mut out = Outcome::default();
    out.checks.push(THRESHOLDS[0].check(growth));
    out.checks.push(THRESHOLDS[1].check(left0 / right0));
    out.checks.push(THRESHOLDS[2].check(smoothing));
    out.note("smoothing_integral", smoothing);
    out.note("order", p.order);
    attach_snapshots(&mut out, &traj, &shots);
    out.summary = Some(traj.summary.clone());
    out.records = traj.records;
    Ok(out)
}
