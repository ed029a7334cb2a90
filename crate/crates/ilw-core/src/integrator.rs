//! Exponential time stepping for `u_hat' = i omega(z) u_hat - i z F_hat(u)`.
//!
//! The linear part is propagated exactly. ETDRK4 follows Cox-Matthews with the
//! phi-functions averaged over a circle of radius 1 around each `i omega(z) dt`
//! (Kassam-Trefethen), taken over the full circle because the linear symbol is imaginary.

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::spectral::nonlinear::FluxEvaluator;
use crate::spectral::{Dealias, Field, Grid, Nonlinearity};
use crate::symbols::{Depth, DispersionKind};

/// Abort once `max|u|` exceeds this multiple of its initial value.
pub const BLOW_UP_FACTOR: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquationSpec {
    pub dispersion: DispersionKind,
    /// `None` gives the linear flow.
    pub nonlinearity: Option<Nonlinearity>,
}

impl EquationSpec {
    pub fn new(dispersion: DispersionKind, nonlinearity: Option<Nonlinearity>) -> Self {
        Self { dispersion, nonlinearity }
    }

    /// `u_t + T u_xx + u_x / delta + u u_x = 0`.
    pub fn ilw(delta: f64) -> Result<Self> {
        Ok(Self::new(DispersionKind::Ilw(Depth::new(delta)?), Some(Nonlinearity::classic())))
    }

    pub fn bo() -> Self {
        Self::new(DispersionKind::Bo, Some(Nonlinearity::classic()))
    }

    /// `v_t + v_xxx + v v_x = 0`.
    pub fn kdv() -> Self {
        Self::new(DispersionKind::Kdv, Some(Nonlinearity::classic()))
    }

    pub fn linear(dispersion: DispersionKind) -> Self {
        Self::new(dispersion, None)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    #[default]
    Etdrk4,
    Ifrk4,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub dt: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub snapshot_stride: usize,
    pub scheme: Scheme,
    pub phi_contour_points: usize,
    pub dealias: Dealias,
}

impl SolverConfig {
    pub fn new(dt: f64, t_end: f64) -> Self {
        Self { dt, t_start: 0.0, t_end, snapshot_stride: 1, scheme: Scheme::Etdrk4, phi_contour_points: 32, dealias: Dealias::TwoThirds }
    }

    pub fn starting_at(mut self, t_start: f64) -> Self {
        self.t_start = t_start;
        self
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.snapshot_stride = stride;
        self
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_dealias(mut self, dealias: Dealias) -> Self {
        self.dealias = dealias;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(invalid("dt", format!("must be positive, got {}", self.dt)));
        }
        if !self.t_start.is_finite() || !(self.t_end.is_finite() && self.t_end >= self.t_start) {
            return Err(invalid("t_end", format!("must be finite and >= t_start = {}", self.t_start)));
        }
        if self.snapshot_stride == 0 {
            return Err(invalid("snapshot_stride", "must be at least 1"));
        }
        if self.phi_contour_points < 16 {
            return Err(invalid("phi_contour_points", format!("must be at least 16, got {}", self.phi_contour_points)));
        }
        Ok(())
    }

    /// Number of steps and the step actually used, `(t_end - t_start) / steps`.
    pub fn steps(&self) -> (usize, f64) {
        let span = self.t_end - self.t_start;
        if span == 0.0 {
            return (0, self.dt);
        }
        let steps = ((span / self.dt) - 1e-9).ceil().max(1.0) as usize;
        (steps, span / steps as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub steps: usize,
    pub dt: f64,
    pub t_final: f64,
    pub wall_time: f64,
    pub initial_max: f64,
    pub max_abs: f64,
}

enum Coefficients {
    Etdrk4 { e: Vec<Complex64>, e2: Vec<Complex64>, q: Vec<Complex64>, f1: Vec<Complex64>, f2: Vec<Complex64>, f3: Vec<Complex64> },
    Ifrk4 { e: Vec<Complex64>, e2: Vec<Complex64> },
}

/// Precomputed stepper for a fixed grid, equation and step size.
pub struct Integrator {
    grid: Arc<Grid>,
    dt: f64,
    coeffs: Coefficients,
    flux: Option<FluxEvaluator>,
    // -i z with the Nyquist mode removed
    deriv: Vec<Complex64>,
    scratch: [Vec<Complex64>; 8],
}

fn contour_mean(center: Complex64, points: usize, f: impl Fn(Complex64) -> Complex64) -> Complex64 {
    let sum: Complex64 = (0..points)
        .map(|j| {
            let theta = 2.0 * PI * (j as f64 + 0.5) / points as f64;
            f(center + Complex64::from_polar(1.0, theta))
        })
        .sum();
    sum / points as f64
}

impl Integrator {
    pub fn new(grid: &Arc<Grid>, spec: &EquationSpec, dt: f64, scheme: Scheme, contour_points: usize, dealias: Dealias) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(invalid("dt", format!("must be positive, got {dt}")));
        }
        let n = grid.n();
        let nyq = grid.nyquist_index();
        let lin: Vec<Complex64> = grid
            .z()
            .iter()
            .enumerate()
            .map(|(j, &z)| if j == nyq { Complex64::default() } else { Complex64::new(0.0, spec.dispersion.omega(z)) })
            .collect();
        if lin.iter().any(|c| !c.im.is_finite()) {
            return Err(invalid("dispersion", "symbol is not finite on the grid"));
        }
        let exp = |s: f64| lin.iter().map(|l| (l * dt * s).exp()).collect::<Vec<_>>();
        let coeffs = match scheme {
            Scheme::Ifrk4 => Coefficients::Ifrk4 { e: exp(1.0), e2: exp(0.5) },
            Scheme::Etdrk4 => {
                let m = contour_points;
                let phi = |g: &dyn Fn(Complex64) -> Complex64| -> Vec<Complex64> {
                    lin.iter().map(|l| contour_mean(l * dt, m, g) * dt).collect()
                };
                Coefficients::Etdrk4 {
                    e: exp(1.0),
                    e2: exp(0.5),
                    q: phi(&|r| ((r / 2.0).exp() - 1.0) / r),
                    f1: phi(&|r| (-4.0 - r + r.exp() * (4.0 - 3.0 * r + r * r)) / (r * r * r)),
                    f2: phi(&|r| (2.0 + r + r.exp() * (-2.0 + r)) / (r * r * r)),
                    f3: phi(&|r| (-4.0 - 3.0 * r - r * r + r.exp() * (4.0 - r)) / (r * r * r)),
                }
            }
        };
        let mut deriv: Vec<Complex64> = grid.z().iter().map(|&z| Complex64::new(0.0, -z)).collect();
        deriv[nyq] = Complex64::default();
        Ok(Self {
            grid: grid.clone(),
            dt,
            coeffs,
            flux: spec.nonlinearity.as_ref().map(|nl| FluxEvaluator::new(grid, nl, dealias)),
            deriv,
            scratch: std::array::from_fn(|_| vec![Complex64::default(); n]),
        })
    }

    pub fn from_config(grid: &Arc<Grid>, spec: &EquationSpec, cfg: &SolverConfig) -> Result<Self> {
        cfg.validate()?;
        let (_, dt) = cfg.steps();
        Self::new(grid, spec, dt, cfg.scheme, cfg.phi_contour_points, cfg.dealias)
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    fn nonlinear(flux: &mut Option<FluxEvaluator>, deriv: &[Complex64], v: &[Complex64], out: &mut [Complex64]) -> Result<()> {
        match flux {
            None => out.iter_mut().for_each(|c| *c = Complex64::default()),
            Some(f) => {
                f.eval(v, out)?;
                out.iter_mut().zip(deriv).for_each(|(c, d)| *c *= d);
            }
        }
        Ok(())
    }

    /// Advances the spectrum `v` by one step in place.
    pub fn step_spectrum(&mut self, v: &mut [Complex64]) -> Result<()> {
        let [nv, a, na, b, nb, c, nc, _] = &mut self.scratch;
        let flux = &mut self.flux;
        let deriv = &self.deriv;
        Self::nonlinear(flux, deriv, v, nv)?;
        match &self.coeffs {
            Coefficients::Etdrk4 { e, e2, q, f1, f2, f3 } => {
                for j in 0..v.len() {
                    a[j] = e2[j] * v[j] + q[j] * nv[j];
                }
                Self::nonlinear(flux, deriv, a, na)?;
                for j in 0..v.len() {
                    b[j] = e2[j] * v[j] + q[j] * na[j];
                }
                Self::nonlinear(flux, deriv, b, nb)?;
                for j in 0..v.len() {
                    c[j] = e2[j] * a[j] + q[j] * (2.0 * nb[j] - nv[j]);
                }
                Self::nonlinear(flux, deriv, c, nc)?;
                for j in 0..v.len() {
                    v[j] = e[j] * v[j] + f1[j] * nv[j] + 2.0 * f2[j] * (na[j] + nb[j]) + f3[j] * nc[j];
                }
            }
            Coefficients::Ifrk4 { e, e2 } => {
                let h = self.dt;
                for j in 0..v.len() {
                    a[j] = e2[j] * (v[j] + 0.5 * h * nv[j]);
                }
                Self::nonlinear(flux, deriv, a, na)?;
                for j in 0..v.len() {
                    b[j] = e2[j] * v[j] + 0.5 * h * na[j];
                }
                Self::nonlinear(flux, deriv, b, nb)?;
                for j in 0..v.len() {
                    c[j] = e[j] * v[j] + h * e2[j] * nb[j];
                }
                Self::nonlinear(flux, deriv, c, nc)?;
                for j in 0..v.len() {
                    v[j] = e[j] * v[j] + h / 6.0 * (e[j] * nv[j] + 2.0 * e2[j] * (na[j] + nb[j]) + nc[j]);
                }
            }
        }
        Ok(())
    }

    pub fn step(&mut self, state: &Field) -> Result<Field> {
        let mut v = state.spectrum().to_vec();
        self.step_spectrum(&mut v)?;
        Field::from_spectrum(&self.grid, v)
    }
}

/// One step from time `t` with the step size `cfg.dt`.
pub fn step(state: &Field, t: f64, spec: &EquationSpec, cfg: &SolverConfig) -> Result<Field> {
    cfg.validate()?;
    let mut it = Integrator::new(state.grid(), spec, cfg.dt, cfg.scheme, cfg.phi_contour_points, cfg.dealias)?;
    let next = it.step(state)?;
    if next.values().iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { t: t + cfg.dt });
    }
    Ok(next)
}

pub type Observer<'a> = &'a mut dyn FnMut(f64, &Field);

/// Integrates from `cfg.t_start` to `cfg.t_end`, calling every observer at the start and
/// after every `snapshot_stride` steps. Returns the final state and a summary.
pub fn evolve(state: &Field, spec: &EquationSpec, cfg: &SolverConfig, observers: &mut [Observer<'_>]) -> Result<(Field, RunSummary)> {
    let clock = Instant::now();
    let grid = state.grid().clone();
    let n = grid.n() as f64;
    let (steps, dt) = cfg.steps();
    let mut it = Integrator::from_config(&grid, spec, cfg)?;
    let initial_max = state.max_abs();
    let limit = BLOW_UP_FACTOR * initial_max;
    let mut max_abs = initial_max;
    for obs in observers.iter_mut() {
        obs(cfg.t_start, state);
    }
    let mut v = state.spectrum().to_vec();
    for s in 1..=steps {
        let t = cfg.t_start + s as f64 * dt;
        it.step_spectrum(&mut v).map_err(|e| Error::StepFailed { t, source: Box::new(e) })?;
        let bound = v.iter().map(|c| c.norm()).sum::<f64>() / n;
        if !bound.is_finite() {
            return Err(Error::NonFinite { t });
        }
        let snapshot = s % cfg.snapshot_stride == 0 || s == steps;
        if bound > limit || snapshot {
            let f = Field::from_spectrum(&grid, v.clone())?;
            let m = f.max_abs();
            if m > limit {
                return Err(Error::BlowUp { t, max_abs: m, limit });
            }
            max_abs = max_abs.max(m);
            if s % cfg.snapshot_stride == 0 {
                for obs in observers.iter_mut() {
                    obs(t, &f);
                }
            }
        }
    }
    let last = Field::from_spectrum(&grid, v)?;
    let summary =
        RunSummary { steps, dt, t_final: cfg.t_start + steps as f64 * dt, wall_time: clock.elapsed().as_secs_f64(), initial_max, max_abs };
    Ok((last, summary))
}
