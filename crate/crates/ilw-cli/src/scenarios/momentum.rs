use ilw_core::solutions::gaussian;

use super::*;
use crate::config::InitialData;

pub const THRESHOLDS: &[Threshold] = &[
    Threshold::new("f_integral_min", Relation::Gt, 0.0),
    Threshold::new("x_moment_min_increment", Relation::Gt, 0.0),
    Threshold::new("identity_order", Relation::Ge, 1.9),
];

/// Even data under a generalized flux: `int x u` must increase at the rate `int F(u)`.
/// The identity is checked with centred differences over 4, 2 and 1 row spacings about the
/// middle row; the periodic seam term is added to the predicted rate.
pub fn run(cfg: &ScenarioConfig) -> Result<Outcome, RunError> {
    let grid = cfg.grid().map_err(config_error)?;
    let spec = cfg.equation().map_err(config_error)?;
    let (solver, every) = cfg.solver().map_err(config_error)?;
    let &InitialData::Gaussian { amplitude, width, center } = cfg.initial().map_err(config_error)? else { unreachable!("validated") };
    let u0 = gaussian(amplitude, width, center, &grid).map_err(RunError::Numerical)?;
    let shots = snapshot_times(cfg.output.field_snapshots, solver.t_start, solver.t_end);

    let probes = Probes::new(&spec);
    let mut seams = Vec::new();
    let traj = run_tapped(&u0, &solver, every, &shots, &probes, &mut |_, f| seams.push(momentum_identity(f, &spec).seam_term))?;

    let rows = &traj.records;
    let f_min = rows.iter().filter_map(|r| r.f_integral).fold(f64::INFINITY, f64::min);
    let x: Vec<f64> = rows.iter().map(|r| r.x_moment.unwrap_or(f64::NAN)).collect();
    let step = x.windows(2).map(|p| p[1] - p[0]).fold(f64::INFINITY, f64::min);
    let mid = rows.len() / 2;
    let errors: Vec<f64> = [4usize, 2, 1]
        .iter()
        .map(|&k| {
            if mid < k || mid + k >= rows.len() {
                return f64::NAN;
            }
            let fd = (x[mid + k] - x[mid - k]) / (rows[mid + k].t - rows[mid - k].t);
            (fd - rows[mid].f_integral.unwrap_or(f64::NAN) - seams[mid]).abs()
        })
        .collect();
    let orders: Vec<f64> = errors.windows(2).map(|p| (p[0] / p[1]).log2()).collect();
    let order = orders.iter().copied().fold(f64::INFINITY, f64::min);

    let mut out = Outcome::default();
    out.checks.push(THRESHOLDS[0].check(f_min));
    out.checks.push(THRESHOLDS[1].check(step));
    out.checks.push(THRESHOLDS[2].check(if order.is_finite() { order } else { f64::NAN }));
    out.note("identity_errors", &errors);
    out.note("identity_orders", &orders);
    out.note("seam_term_mid", seams.get(mid));
    attach_snapshots(&mut out, &traj, &shots);
    out.summary = Some(traj.summary.clone());
    out.records = traj.records;
    Ok(out)
}
