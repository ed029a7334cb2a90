//! Named experiments. Each returns diagnostics rows, pass/fail checks and extra tables.

mod decay;
mod limits;
mod momentum;
mod regularity;
mod soliton;
mod table;

use std::collections::BTreeMap;

use ilw_core::diagnostics::schedule::SCHEDULE_START;
use ilw_core::diagnostics::*;
use ilw_core::{evolve, EquationSpec, Field, RunSummary, SolverConfig};
use serde::{Deserialize, Serialize};

use crate::config::{Issue, ScenarioConfig, ScenarioKind};
use crate::RunError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Lt,
    Le,
    Gt,
    Ge,
    Finite,
}

impl Relation {
    pub fn holds(self, value: f64, threshold: f64) -> bool {
        match self {
            Self::Lt => value < threshold,
            Self::Le => value <= threshold,
            Self::Gt => value > threshold,
            Self::Ge => value >= threshold,
            Self::Finite => value.is_finite(),
        }
    }
}

/// A scenario's pass/fail threshold, recorded in the run metadata.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub name: &'static str,
    pub relation: Relation,
    pub value: f64,
}

impl Threshold {
    pub const fn new(name: &'static str, relation: Relation, value: f64) -> Self {
        Self { name, relation, value }
    }

    pub fn check(&self, measured: f64) -> Check {
        Check {
            name: self.name.to_string(),
            value: measured,
            relation: self.relation,
            threshold: self.value,
            passed: self.relation.holds(measured, self.value),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// `null` in JSON when the measurement is not finite.
    pub value: f64,
    pub relation: Relation,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub file: String,
    pub header: String,
    pub rows: Vec<String>,
}

pub struct Snapshot {
    pub label: String,
    pub t: f64,
    pub field: Field,
}

#[derive(Default)]
pub struct Outcome {
    pub records: Vec<DiagnosticRecord>,
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
    pub snapshots: Vec<Snapshot>,
    pub notes: BTreeMap<String, serde_json::Value>,
    pub summary: Option<RunSummary>,
}

impl Outcome {
    fn note(&mut self, key: &str, value: impl Serialize) {
        self.notes.insert(key.to_string(), serde_json::to_value(value).expect("plain data"));
    }
}

pub fn thresholds(kind: ScenarioKind) -> &'static [Threshold] {
    match kind {
        ScenarioKind::SolitonTravel | ScenarioKind::TwoSoliton => soliton::THRESHOLDS,
        ScenarioKind::DecayLiminf => decay::LIMINF_THRESHOLDS,
        ScenarioKind::FarFieldDecay => decay::FAR_FIELD_THRESHOLDS,
        ScenarioKind::CorollaryLl => decay::COROLLARY_THRESHOLDS,
        ScenarioKind::BoLimit | ScenarioKind::KdvLimit => limits::THRESHOLDS,
        ScenarioKind::RegularityPropagation => regularity::THRESHOLDS,
        ScenarioKind::BreatherObstruction => momentum::THRESHOLDS,
        ScenarioKind::SymbolTable => table::THRESHOLDS,
    }
}

fn threshold(kind: ScenarioKind, name: &str) -> Threshold {
    *thresholds(kind).iter().find(|t| t.name == name).expect("known threshold")
}

pub fn execute(cfg: &ScenarioConfig) -> Result<Outcome, RunError> {
    let issues = cfg.validate();
    if !issues.is_empty() {
        return Err(RunError::Config(issues));
    }
    match cfg.scenario {
        ScenarioKind::SolitonTravel => soliton::travel(cfg),
        ScenarioKind::TwoSoliton => soliton::pair(cfg),
        ScenarioKind::DecayLiminf => decay::liminf(cfg),
        ScenarioKind::FarFieldDecay => decay::far_field(cfg),
        ScenarioKind::CorollaryLl => decay::corollary(cfg),
        ScenarioKind::BoLimit => limits::bo(cfg),
        ScenarioKind::KdvLimit => limits::kdv(cfg),
        ScenarioKind::RegularityPropagation => regularity::run(cfg),
        ScenarioKind::BreatherObstruction => momentum::run(cfg),
        ScenarioKind::SymbolTable => table::run(cfg),
    }
}

pub(crate) fn config_error(issue: Issue) -> RunError {
    RunError::Config(vec![issue])
}

/// Right-moving window probe for the regularity scenario.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RegularityProbe {
    pub x0: f64,
    pub epsilon: f64,
    pub gamma: f64,
    pub order: u32,
    pub t0: f64,
}

impl RegularityProbe {
    pub fn right(&self, t: f64) -> Window {
        Window::right_of(self.x0 + self.epsilon - self.gamma * (t - self.t0))
    }

    pub fn left(&self) -> Window {
        Window::left_of(self.x0)
    }
}

/// What gets measured on each snapshot.
#[derive(Debug, Clone)]
pub(crate) struct Probes {
    pub spec: EquationSpec,
    pub schedule: Option<WeightSchedule>,
    pub weight: Weight,
    pub regularity: Option<RegularityProbe>,
}

impl Probes {
    pub fn new(spec: &EquationSpec) -> Self {
        Self { spec: spec.clone(), schedule: None, weight: Weight::new(WeightKind::CorollaryStep), regularity: None }
    }

    pub fn record(&self, t: f64, f: &Field) -> ilw_core::Result<DiagnosticRecord> {
        let mut r = DiagnosticRecord::at(t);
        r.i1 = Some(f.integral());
        r.i2 = Some(f.dot(f)?);
        if let (Some(delta), Some(nl)) = (self.spec.dispersion.depth(), &self.spec.nonlinearity) {
            if *nl == ilw_core::Nonlinearity::classic() {
                let inv = invariants(f, delta);
                r.i3 = Some(inv.i3);
                r.i4 = Some(inv.i4);
            }
        }
        let m = momentum_identity(f, &self.spec);
        r.x_moment = Some(m.x_moment);
        r.f_integral = Some(m.f_integral);
        r.edge_mass_flag = Some(m.edge_mass_flag);
        r.weighted_moment_pred = Some(weighted_moment_rate(f, &self.spec));
        if let Some(ws) = self.schedule.filter(|_| t >= SCHEDULE_START) {
            r.v = Some(v_functional(f, t, &ws, &self.weight)?);
            r.j = Some(j_functional(f, t, &ws, &self.weight)?);
            r.je = Some(je_functional(f, t, &ws, &self.weight)?);
            match ws {
                WeightSchedule::Thm1 { .. } => {
                    let delta = self.spec.dispersion.depth().unwrap_or(1.0);
                    r.window_mass = Some(window_mass(f, t, &ws, delta)?);
                }
                WeightSchedule::FarField { .. } => r.far_field_l2 = Some(far_field_l2(f, t, &ws)?),
                WeightSchedule::Corollary { .. } => r.corollary_integrand = Some(corollary_integrand(f, t, &ws, &self.weight)?),
            }
        }
        if let Some(p) = &self.regularity {
            r.local_hm_left = Some(local_sobolev(f, &p.left(), p.order)?);
            r.local_hm_right = Some(local_sobolev(f, &p.right(t), p.order)?);
            r.smoothing_halfnorm = Some(smoothing_halfnorm(f, &p.right(t), p.order)?);
        }
        Ok(r)
    }
}

pub(crate) struct Trajectory {
    pub records: Vec<DiagnosticRecord>,
    /// Fields at the requested marks, in time order.
    pub marked: Vec<(f64, Field)>,
    pub last: Field,
    pub summary: RunSummary,
}

/// Evolves through `marks`, recording a row roughly every `every` time units, at every
/// mark and at the end.
pub(crate) fn run_marked(u0: &Field, solver: &SolverConfig, every: f64, marks: &[f64], probes: &Probes) -> Result<Trajectory, RunError> {
    run_tapped(u0, solver, every, marks, probes, &mut |_, _| {})
}

/// [`run_marked`] that also hands every recorded state to `tap`.
pub(crate) fn run_tapped(
    u0: &Field,
    solver: &SolverConfig,
    every: f64,
    marks: &[f64],
    probes: &Probes,
    tap: &mut dyn FnMut(f64, &Field),
) -> Result<Trajectory, RunError> {
    let (t0, t1) = (solver.t_start, solver.t_end);
    let mut stops: Vec<f64> = marks.iter().copied().filter(|&m| m > t0 && m < t1).collect();
    stops.push(t1);
    stops.sort_by(f64::total_cmp);
    stops.dedup();
    let is_mark = |t: f64| marks.iter().any(|&m| (m - t).abs() <= 1e-9 * t.abs().max(1.0));

    let mut records = vec![probes.record(t0, u0).map_err(RunError::Numerical)?];
    tap(t0, u0);
    let mut marked = Vec::new();
    if is_mark(t0) {
        marked.push((t0, u0.clone()));
    }
    let mut state = u0.clone();
    let mut summary = RunSummary { steps: 0, dt: solver.dt, t_final: t0, wall_time: 0.0, initial_max: u0.max_abs(), max_abs: u0.max_abs() };
    let mut start = t0;
    for &stop in &stops {
        let mut seg = solver.clone().starting_at(start);
        seg.t_end = stop;
        let (_, dt) = seg.steps();
        seg.snapshot_stride = ((every / dt).round() as usize).max(1);
        let mut failure = None;
        let mut first = true;
        let mut obs = |t: f64, f: &Field| {
            if std::mem::take(&mut first) || failure.is_some() {
                return;
            }
            match probes.record(t, f) {
                Ok(r) => {
                    records.push(r);
                    tap(t, f);
                }
                Err(e) => failure = Some(e),
            }
        };
        let (next, s) = evolve(&state, &probes.spec, &seg, &mut [&mut obs]).map_err(RunError::Numerical)?;
        if let Some(e) = failure {
            return Err(RunError::Numerical(e));
        }
        if records.last().is_none_or(|r| (r.t - stop).abs() > 1e-9 * stop.abs().max(1.0)) {
            records.push(probes.record(stop, &next).map_err(RunError::Numerical)?);
            tap(stop, &next);
        }
        if is_mark(stop) {
            marked.push((stop, next.clone()));
        }
        summary.steps += s.steps;
        summary.dt = s.dt;
        summary.t_final = s.t_final;
        summary.wall_time += s.wall_time;
        summary.max_abs = summary.max_abs.max(s.max_abs);
        state = next;
        start = stop;
    }
    Ok(Trajectory { records, marked, last: state, summary })
}

/// Evenly spaced snapshot times covering `[t0, t1]`.
pub(crate) fn snapshot_times(count: usize, t0: f64, t1: f64) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![t1],
        _ => (0..count).map(|i| t0 + (t1 - t0) * i as f64 / (count - 1) as f64).collect(),
    }
}

pub(crate) fn attach_snapshots(out: &mut Outcome, traj: &Trajectory, times: &[f64]) {
    for (i, &t) in times.iter().enumerate() {
        if let Some((_, f)) = traj.marked.iter().find(|(m, _)| (m - t).abs() <= 1e-9 * t.abs().max(1.0)) {
            out.snapshots.push(Snapshot { label: format!("u_{i:03}"), t, field: f.clone() });
        }
    }
}

/// Largest `|q(t) / q(t0) - 1|` over the rows.
pub(crate) fn drift(records: &[DiagnosticRecord], pick: impl Fn(&DiagnosticRecord) -> Option<f64>) -> f64 {
    let values: Vec<f64> = records.iter().filter_map(&pick).collect();
    let Some(&first) = values.first() else { return f64::NAN };
    values.iter().map(|v| (v / first - 1.0).abs()).fold(0.0, f64::max)
}

/// Largest ratio of consecutive entries; below 1 exactly when the sequence strictly decreases.
pub(crate) fn max_ratio(values: &[f64]) -> f64 {
    values.windows(2).map(|p| p[1] / p[0]).fold(f64::NEG_INFINITY, f64::max)
}

pub(crate) fn sup_gap(a: &Field, b: &Field) -> f64 {
    a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
