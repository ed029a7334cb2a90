use ilw_core::solutions::gaussian;
use ilw_core::{Depth, DispersionKind};

use super::*;
use crate::config::InitialData;

pub const THRESHOLDS: &[Threshold] = &[Threshold::new("gap_max_ratio", Relation::Lt, 1.0)];

struct Common {
    u0: Field,
    spec: EquationSpec,
    solver: SolverConfig,
    every: f64,
    deltas: Vec<f64>,
}

fn common(cfg: &ScenarioConfig) -> Result<Common, RunError> {
    let grid = cfg.grid().map_err(config_error)?;
    let spec = cfg.equation().map_err(config_error)?;
    let (solver, every) = cfg.solver().map_err(config_error)?;
    let &InitialData::Gaussian { amplitude, width, center } = cfg.initial().map_err(config_error)? else { unreachable!("validated") };
    let u0 = gaussian(amplitude, width, center, &grid).map_err(RunError::Numerical)?;
    let deltas = cfg.limit.as_ref().expect("validated").deltas.clone();
    Ok(Common { u0, spec, solver, every, deltas })
}

fn with_dispersion(spec: &EquationSpec, d: DispersionKind) -> EquationSpec {
    EquationSpec::new(d, spec.nonlinearity.clone())
}

fn ilw(spec: &EquationSpec, delta: f64) -> Result<EquationSpec, RunError> {
    let depth = Depth::new(delta).map_err(|e| config_error(Issue::new("limit.deltas", e.to_string())))?;
    Ok(with_dispersion(spec, DispersionKind::Ilw(depth)))
}

fn finish(mut out: Outcome, reference: Trajectory, deltas: &[f64], gaps: &[f64]) -> Outcome {
    out.checks.push(THRESHOLDS[0].check(max_ratio(gaps)));
    out.tables.push(Table {
        file: "gaps.csv".into(),
        header: "delta,gap".into(),
        rows: deltas.iter().zip(gaps).map(|(d, g)| format!("{d:e},{g:e}")).collect(),
    });
    out.snapshots.push(Snapshot { label: "reference_final".into(), t: reference.summary.t_final, field: reference.last.clone() });
    out.summary = Some(reference.summary);
    out.records = reference.records;
    out
}

/// ILW at each listed depth against BO from the same data; sup-norm gap at `t_end`.
pub fn bo(cfg: &ScenarioConfig) -> Result<Outcome, RunError> {
    let c = common(cfg)?;
    let reference = run_marked(&c.u0, &c.solver, c.every, &[], &Probes::new(&with_dispersion(&c.spec, DispersionKind::Bo)))?;
    let mut gaps = Vec::new();
    for &delta in &c.deltas {
        let (u, _) = evolve(&c.u0, &ilw(&c.spec, delta)?, &c.solver, &mut []).map_err(RunError::Numerical)?;
        gaps.push(sup_gap(&u, &reference.last));
    }
    Ok(finish(Outcome::default(), reference, &c.deltas, &gaps))
}

/// `v = (3/delta) u(3t/delta, x)` for the ILW solution `u` with data `(delta/3) v0`, against
/// KdV from `v0`; sup-norm gap at `t_end` in KdV time.
pub fn kdv(cfg: &ScenarioConfig) -> Result<Outcome, RunError> {
    let c = common(cfg)?;
    let reference = run_marked(&c.u0, &c.solver, c.every, &[], &Probes::new(&with_dispersion(&c.spec, DispersionKind::Kdv)))?;
    let mut gaps = Vec::new();
    for &delta in &c.deltas {
        let s = 3.0 / delta;
        let mut solver = c.solver.clone();
        solver.dt *= s;
        solver.t_start *= s;
        solver.t_end *= s;
        let (u, _) = evolve(&c.u0.scale(1.0 / s), &ilw(&c.spec, delta)?, &solver, &mut []).map_err(RunError::Numerical)?;
        gaps.push(sup_gap(&u.scale(s), &reference.last));
    }
    let mut out = Outcome::default();
    out.note("scaling", "v(t, x) = (3/delta) u(3 t / delta, x)");
    Ok(finish(out, reference, &c.deltas, &gaps))
}
