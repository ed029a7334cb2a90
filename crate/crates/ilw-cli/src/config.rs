//! TOML scenario configuration.

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use ilw_core::diagnostics::{Weight, WeightKind, WeightSchedule};
use ilw_core::solutions::{RegularityDatum, RoughComponent, SmoothProfile};
use ilw_core::{Dealias, Depth, DispersionKind, EquationSpec, Grid, Nonlinearity, Scheme, SolverConfig};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    SolitonTravel,
    TwoSoliton,
    DecayLiminf,
    FarFieldDecay,
    CorollaryLl,
    BoLimit,
    KdvLimit,
    RegularityPropagation,
    BreatherObstruction,
    SymbolTable,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::SolitonTravel => "soliton_travel",
            Self::TwoSoliton => "two_soliton",
            Self::DecayLiminf => "decay_liminf",
            Self::FarFieldDecay => "far_field_decay",
            Self::CorollaryLl => "corollary_ll",
            Self::BoLimit => "bo_limit",
            Self::KdvLimit => "kdv_limit",
            Self::RegularityPropagation => "regularity_propagation",
            Self::BreatherObstruction => "breather_obstruction",
            Self::SymbolTable => "symbol_table",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquationKind {
    Ilw,
    Bo,
    Kdv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquationConfig {
    pub kind: EquationKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    /// Leading power of the flux `u^k + p_k(u)`; absent means the classic `u^2 / 2`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default)]
    pub coefficients: Vec<f64>,
    #[serde(default)]
    pub linear: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n: usize,
    pub length: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub dt: f64,
    #[serde(default)]
    pub t_start: f64,
    pub t_end: f64,
    /// Time between diagnostic rows; defaults to a hundredth of the run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot_every: Option<f64>,
    #[serde(default)]
    pub scheme: Scheme,
    #[serde(default)]
    pub dealias: Dealias,
    #[serde(default = "default_contour_points")]
    pub contour_points: usize,
}

fn default_contour_points() -> usize {
    32
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightConfig {
    pub kind: WeightKind,
    #[serde(default = "one")]
    pub capital_c: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolitonComponent {
    pub c: f64,
    pub center: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    Gaussian {
        amplitude: f64,
        width: f64,
        center: f64,
    },
    Soliton {
        c: f64,
        center: f64,
        #[serde(default = "default_tol")]
        tol: f64,
    },
    Solitons {
        components: Vec<SolitonComponent>,
        #[serde(default = "default_tol")]
        tol: f64,
    },
    Regularity {
        x0: f64,
        m: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rough: Option<RoughComponent>,
        smooth: SmoothProfile,
    },
}

fn default_tol() -> f64 {
    1e-8
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitConfig {
    pub deltas: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableConfig {
    pub delta: f64,
    pub xi_min: f64,
    pub xi_max: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeConfig {
    #[serde(default = "half")]
    pub epsilon: f64,
    #[serde(default = "one")]
    pub gamma: f64,
    #[serde(default = "two")]
    pub order: u32,
}

fn half() -> f64 {
    0.5
}

fn two() -> u32 {
    2
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self { epsilon: 0.5, gamma: 1.0, order: 2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Field snapshots written, evenly spaced and including both ends of the run.
    #[serde(default = "default_field_snapshots")]
    pub field_snapshots: usize,
    #[serde(default = "yes")]
    pub binary: bool,
}

fn default_field_snapshots() -> usize {
    2
}

fn yes() -> bool {
    true
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { field_snapshots: 2, binary: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equation: Option<EquationConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<WeightSchedule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<WeightConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<LimitConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<TableConfig>,
    #[serde(default)]
    pub probe: ProbeConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

/// One validation problem, located by a dotted field path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Issue {
    pub path: String,
    pub message: String,
}

impl Issue {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self { path: path.into(), message: message.into() }
    }
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

pub fn parse(text: &str) -> Result<ScenarioConfig, Issue> {
    let de = toml::Deserializer::new(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let message = inner.message().to_string();
        let line = inner.span().map(|s| text[..s.start].matches('\n').count() + 1);
        let path = if path == "." { String::new() } else { path };
        match line {
            Some(l) => Issue::new(path, format!("{message} (line {l})")),
            None => Issue::new(path, message),
        }
    })
}

pub fn load(path: &Path) -> Result<ScenarioConfig, Issue> {
    let text = std::fs::read_to_string(path).map_err(|e| Issue::new("", format!("cannot read {}: {e}", path.display())))?;
    parse(&text)
}

fn core_issue(section: &str, e: ilw_core::Error) -> Issue {
    match e {
        ilw_core::Error::InvalidParameter { name, reason } => Issue::new(format!("{section}.{name}"), reason),
        other => Issue::new(section, other.to_string()),
    }
}

fn positive(issues: &mut Vec<Issue>, path: &str, v: f64) {
    if !(v.is_finite() && v > 0.0) {
        issues.push(Issue::new(path, format!("must be positive, got {v}")));
    }
}

impl EquationConfig {
    pub fn build(&self) -> Result<EquationSpec, Issue> {
        let dispersion = match self.kind {
            EquationKind::Ilw => {
                let d = self.delta.ok_or_else(|| Issue::new("equation.delta", "required for kind = \"ilw\""))?;
                DispersionKind::Ilw(Depth::new(d).map_err(|e| core_issue("equation", e))?)
            }
            _ if self.delta.is_some() => {
                return Err(Issue::new("equation.delta", "only applies to kind = \"ilw\""));
            }
            EquationKind::Bo => DispersionKind::Bo,
            EquationKind::Kdv => DispersionKind::Kdv,
        };
        let nonlinearity = match (self.linear, self.k) {
            (true, _) => None,
            (false, None) if self.coefficients.is_empty() => Some(Nonlinearity::classic()),
            (false, None) => return Err(Issue::new("equation.coefficients", "need `k` for a generalized flux")),
            (false, Some(k)) => Some(Nonlinearity::power(k, self.coefficients.clone()).map_err(|e| core_issue("equation", e))?),
        };
        Ok(EquationSpec::new(dispersion, nonlinearity))
    }
}

impl SolverSection {
    pub fn build(&self) -> Result<SolverConfig, Issue> {
        let mut c = SolverConfig::new(self.dt, self.t_end).starting_at(self.t_start).with_scheme(self.scheme).with_dealias(self.dealias);
        c.phi_contour_points = self.contour_points;
        c.validate().map_err(|e| core_issue("solver", e))?;
        if let Some(s) = self.snapshot_every {
            if !(s.is_finite() && s > 0.0) {
                return Err(Issue::new("solver.snapshot_every", format!("must be positive, got {s}")));
            }
        }
        Ok(c)
    }

    pub fn snapshot_every(&self) -> f64 {
        self.snapshot_every.unwrap_or((self.t_end - self.t_start) / 100.0)
    }
}

impl WeightConfig {
    pub fn build(&self) -> Result<Weight, Issue> {
        match self.kind {
            WeightKind::ClassAc => Weight::class_ac(self.capital_c).map_err(|e| core_issue("weight", e)),
            kind => Ok(Weight::new(kind)),
        }
    }
}

impl ScenarioConfig {
    pub fn run_name(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.scenario.name().to_string())
    }

    pub fn grid(&self) -> Result<Arc<Grid>, Issue> {
        let g = self.grid.ok_or_else(|| Issue::new("grid", "section required by this scenario"))?;
        if !(g.length.is_finite() && g.length > 0.0) {
            return Err(Issue::new("grid.length", format!("must be finite and positive, got {}", g.length)));
        }
        Grid::new(g.n, g.length).map_err(|e| Issue::new("grid.n", e.to_string()))
    }

    pub fn equation(&self) -> Result<EquationSpec, Issue> {
        self.equation.as_ref().ok_or_else(|| Issue::new("equation", "section required by this scenario"))?.build()
    }

    pub fn solver(&self) -> Result<(SolverConfig, f64), Issue> {
        let s = self.solver.ok_or_else(|| Issue::new("solver", "section required by this scenario"))?;
        Ok((s.build()?, s.snapshot_every()))
    }

    pub fn schedule(&self) -> Result<WeightSchedule, Issue> {
        let s = self.schedule.ok_or_else(|| Issue::new("schedule", "section required by this scenario"))?;
        s.validate().map_err(|e| core_issue("schedule", e))?;
        Ok(s)
    }

    pub fn weight(&self) -> Result<Weight, Issue> {
        self.weight.unwrap_or(WeightConfig { kind: WeightKind::ClassAc, capital_c: 1.0 }).build()
    }

    pub fn initial(&self) -> Result<&InitialData, Issue> {
        self.initial.as_ref().ok_or_else(|| Issue::new("initial", "section required by this scenario"))
    }

    pub fn regularity_datum(&self) -> Result<RegularityDatum, Issue> {
        match self.initial()? {
            InitialData::Regularity { x0, m, rough, smooth } => {
                let d = RegularityDatum { x0: *x0, m: *m, rough: *rough, smooth: *smooth, seed: self.seed };
                d.validate().map_err(|e| core_issue("initial", e))?;
                Ok(d)
            }
            _ => Err(Issue::new("initial.kind", "this scenario needs kind = \"regularity\"")),
        }
    }

    /// Every problem found without running the scenario.
    pub fn validate(&self) -> Vec<Issue> {
        let mut issues = Vec::new();
        let mut push = |r: Result<(), Issue>| {
            if let Err(i) = r {
                issues.push(i);
            }
        };
        if let Some(n) = &self.name {
            if n.is_empty() || n.contains(['/', '\\']) || n == "." || n == ".." {
                push(Err(Issue::new("name", "must be a plain directory name")));
            }
        }
        if self.output.field_snapshots == 1 {
            push(Err(Issue::new("output.field_snapshots", "use 0, or at least 2 to include both ends")));
        }
        let kind = self.scenario;
        if kind == ScenarioKind::SymbolTable {
            push(self.validate_table());
            return issues;
        }
        push(self.grid().map(drop));
        let spec = self.equation();
        push(spec.as_ref().map(drop).map_err(Clone::clone));
        push(self.solver().map(drop));
        if self.weight.is_some() {
            push(self.weight().map(drop));
        }
        push(self.validate_initial(spec.as_ref().ok()));
        push(self.validate_schedule());
        push(self.validate_limits());
        push(self.validate_probe());
        issues
    }

    fn validate_table(&self) -> Result<(), Issue> {
        let t = self.table.ok_or_else(|| Issue::new("table", "section required by symbol_table"))?;
        Depth::new(t.delta).map_err(|e| core_issue("table", e))?;
        if !(t.xi_min.is_finite() && t.xi_max.is_finite() && t.xi_min < t.xi_max) {
            return Err(Issue::new("table.xi_max", "needs finite xi_min < xi_max"));
        }
        if t.samples < 2 {
            return Err(Issue::new("table.samples", "must be at least 2"));
        }
        Ok(())
    }

    fn validate_initial(&self, spec: Option<&EquationSpec>) -> Result<(), Issue> {
        let data = self.initial()?;
        let delta = spec.and_then(|s| s.dispersion.depth());
        let soliton = |c: f64, path: &str| -> Result<(), Issue> {
            let Some(d) = delta else {
                return Err(Issue::new("equation.kind", "soliton data needs kind = \"ilw\""));
            };
            if !(c.is_finite() && c > 1.0 / d) {
                return Err(Issue::new(path, format!("soliton speed must satisfy c > 1/delta = {}, got {c}", 1.0 / d)));
            }
            Ok(())
        };
        match data {
            InitialData::Gaussian { width, amplitude, center } => {
                let mut v = Vec::new();
                positive(&mut v, "initial.width", *width);
                if !amplitude.is_finite() || !center.is_finite() {
                    v.push(Issue::new("initial.amplitude", "amplitude and center must be finite"));
                }
                if let Some(i) = v.pop() {
                    return Err(i);
                }
            }
            InitialData::Soliton { c, tol, .. } => {
                soliton(*c, "initial.c")?;
                if !(*tol > 0.0) {
                    return Err(Issue::new("initial.tol", "must be positive"));
                }
            }
            InitialData::Solitons { components, .. } => {
                if components.is_empty() {
                    return Err(Issue::new("initial.components", "need at least one soliton"));
                }
                for (i, s) in components.iter().enumerate() {
                    soliton(s.c, &format!("initial.components[{i}].c"))?;
                }
            }
            InitialData::Regularity { .. } => {
                self.regularity_datum()?;
            }
        }
        let needs = match self.scenario {
            ScenarioKind::SolitonTravel => Some("soliton"),
            ScenarioKind::TwoSoliton => Some("solitons"),
            ScenarioKind::RegularityPropagation => Some("regularity"),
            ScenarioKind::FarFieldDecay | ScenarioKind::BreatherObstruction | ScenarioKind::BoLimit | ScenarioKind::KdvLimit => {
                Some("gaussian")
            }
            _ => None,
        };
        let actual = match data {
            InitialData::Gaussian { .. } => "gaussian",
            InitialData::Soliton { .. } => "soliton",
            InitialData::Solitons { .. } => "solitons",
            InitialData::Regularity { .. } => "regularity",
        };
        match needs {
            Some(k) if k != actual => Err(Issue::new("initial.kind", format!("{} needs kind = \"{k}\"", self.scenario.name()))),
            _ if matches!(self.scenario, ScenarioKind::DecayLiminf | ScenarioKind::CorollaryLl)
                && !matches!(data, InitialData::Gaussian { .. } | InitialData::Soliton { .. }) =>
            {
                Err(Issue::new("initial.kind", "needs kind = \"gaussian\" or \"soliton\""))
            }
            _ => match data {
                InitialData::Gaussian { center, .. } if self.scenario == ScenarioKind::BreatherObstruction && *center != 0.0 => {
                    Err(Issue::new("initial.center", "breather data must be even, so center = 0"))
                }
                _ => Ok(()),
            },
        }
    }

    fn validate_schedule(&self) -> Result<(), Issue> {
        let wanted = match self.scenario {
            ScenarioKind::DecayLiminf => "thm1",
            ScenarioKind::FarFieldDecay => "far_field",
            ScenarioKind::CorollaryLl => "corollary",
            _ => return Ok(()),
        };
        let s = self.schedule()?;
        let actual = match s {
            WeightSchedule::Thm1 { .. } => "thm1",
            WeightSchedule::FarField { .. } => "far_field",
            WeightSchedule::Corollary { .. } => "corollary",
        };
        if actual != wanted {
            return Err(Issue::new("schedule.regime", format!("{} needs regime = \"{wanted}\"", self.scenario.name())));
        }
        let (solver, _) = self.solver()?;
        let horizon = match self.scenario {
            ScenarioKind::FarFieldDecay => 40.0,
            ScenarioKind::CorollaryLl => 100.0,
            _ => 10.0,
        };
        if solver.t_end < horizon {
            return Err(Issue::new("solver.t_end", format!("must reach t = {horizon} for {}", self.scenario.name())));
        }
        if let (WeightSchedule::Thm1 { .. }, Ok(g)) = (s, self.grid()) {
            let r = s.window_radius(solver.t_end).map_err(|e| core_issue("schedule", e))?;
            let pad = ilw_core::diagnostics::windows::TAPER_POINTS * g.dx();
            if r + pad >= 0.5 * g.length() {
                return Err(Issue::new("grid.length", format!("window radius {r:.3} at t_end does not fit the box")));
            }
        }
        Ok(())
    }

    fn validate_limits(&self) -> Result<(), Issue> {
        if !matches!(self.scenario, ScenarioKind::BoLimit | ScenarioKind::KdvLimit) {
            return Ok(());
        }
        let l = self.limit.as_ref().ok_or_else(|| Issue::new("limit", "section required by this scenario"))?;
        if l.deltas.len() < 2 {
            return Err(Issue::new("limit.deltas", "need at least two depths"));
        }
        for (i, d) in l.deltas.iter().enumerate() {
            if !(d.is_finite() && *d > 0.0) {
                return Err(Issue::new(format!("limit.deltas[{i}]"), format!("must be positive, got {d}")));
            }
        }
        let eq = self.equation.as_ref().ok_or_else(|| Issue::new("equation", "section required by this scenario"))?;
        let (reference, name) = match self.scenario {
            ScenarioKind::BoLimit => (EquationKind::Bo, "bo"),
            _ => (EquationKind::Kdv, "kdv"),
        };
        if eq.kind != reference {
            return Err(Issue::new("equation.kind", format!("{} compares ILW against kind = \"{name}\"", self.scenario.name())));
        }
        Ok(())
    }

    fn validate_probe(&self) -> Result<(), Issue> {
        if self.scenario != ScenarioKind::RegularityPropagation {
            return Ok(());
        }
        let p = self.probe;
        if !(p.epsilon.is_finite() && p.gamma.is_finite() && p.gamma >= 0.0) {
            return Err(Issue::new("probe.gamma", "epsilon and gamma must be finite, gamma >= 0"));
        }
        if p.order > ilw_core::diagnostics::windows::MAX_SOBOLEV_ORDER {
            return Err(Issue::new("probe.order", "exceeds the resolvable maximum"));
        }
        Ok(())
    }
}
