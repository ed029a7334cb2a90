//! Conserved quantities, virial functionals and the exact right-hand sides of their
//! time derivatives along `u_t = L u - d_x F(u)`.

use serde::{Deserialize, Serialize};

use super::schedule::WeightSchedule;
use super::weights::Weight;
use crate::error::Result;
use crate::integrator::EquationSpec;
use crate::spectral::{linear_part, t_dx, Field, Parity};

/// Fraction of the box, at each end, counted as the seam region.
pub const EDGE_FRACTION: f64 = 0.05;
/// Edge mass above this multiple of `I_2` raises the edge flag.
pub const EDGE_MASS_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Invariants {
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub i4: f64,
}

fn integrate(f: &Field, density: impl Fn(usize) -> f64) -> f64 {
    f.grid().integrate(&(0..f.grid().n()).map(density).collect::<Vec<_>>())
}

/// ILW invariants with the classic flux `u u_x`:
///
/// ```text
/// I1 = int u,  I2 = int u^2,  I3 = int (u T u_x + u^2/delta + u^3/3),
/// I4 = int (u^4/4 + 3/2 u^2 T u_x + u_x^2/2 + 3/2 (T u_x)^2 + (3/2 u^3 + 9/2 u T u_x)/delta).
/// ```
///
/// The time-independent constant `3/(2 delta^2)` in the density of `I4` is left out.
pub fn invariants(f: &Field, delta: f64) -> Invariants {
    let u = f.values();
    let ux = f.dx();
    let ux = ux.values();
    let tux = t_dx(f, delta);
    let tux = tux.values();
    let d = 1.0 / delta;
    Invariants {
        i1: f.integral(),
        i2: integrate(f, |j| u[j] * u[j]),
        i3: integrate(f, |j| u[j] * tux[j] + d * u[j] * u[j] + u[j].powi(3) / 3.0),
        i4: integrate(f, |j| {
            let (v, t) = (u[j], tux[j]);
            0.25 * v.powi(4) + 1.5 * v * v * t + 0.5 * ux[j] * ux[j] + 1.5 * t * t + d * (1.5 * v.powi(3) + 4.5 * v * t)
        }),
    }
}

/// `-<u, K u> + 2 int G(u)` where `K` has symbol `omega(z)/z` and `G' = F`; conserved for
/// every dispersion and flux, equal to `I3` for classic ILW.
pub fn hamiltonian(f: &Field, spec: &EquationSpec) -> f64 {
    let ku =
        f.apply_multiplier(|z| if z == 0.0 { 0.0 } else { spec.dispersion.omega(z) / z }, Parity::Even, false).expect("omega(z)/z is even");
    let quad = -f.dot(&ku).expect("same grid");
    let pot = match &spec.nonlinearity {
        Some(nl) => 2.0 * f.map(|v| nl.antiderivative(v)).integral(),
        None => 0.0,
    };
    quad + pot
}

fn flux_field(f: &Field, spec: &EquationSpec, density: impl Fn(&crate::spectral::Nonlinearity, f64) -> f64) -> Option<Field> {
    spec.nonlinearity.as_ref().map(|nl| f.map(|v| density(nl, v)))
}

/// `(1/mu) int phi(x/lambda) u`.
pub fn v_functional(f: &Field, t: f64, ws: &WeightSchedule, w: &Weight) -> Result<f64> {
    let (lambda, _) = ws.lambda(t)?;
    let (mu, _) = ws.mu(t)?;
    let s = w.sample(f.grid(), lambda, 0.0);
    let u = f.values();
    Ok(integrate(f, |j| s.phi[j] * u[j]) / mu)
}

/// Exact `dV/dt`:
///
/// ```text
/// -(lambda'/(mu lambda)) int y phi'(y) u - (mu'/mu^2) int phi u
///   - (1/(mu lambda^2)) int phi''(y) Psi u + (1/(mu lambda)) int phi'(y) F(u),   y = x/lambda.
/// ```
pub fn v_rate(f: &Field, t: f64, ws: &WeightSchedule, w: &Weight, spec: &EquationSpec) -> Result<f64> {
    let (lambda, dlambda) = ws.lambda(t)?;
    let (mu, dmu) = ws.mu(t)?;
    let s = w.sample(f.grid(), lambda, 0.0);
    let u = f.values();
    let psi_u = f.apply_multiplier(|z| -spec.dispersion.psi(z), Parity::Odd, true)?;
    let psi_u = psi_u.values();
    let mut rate = -dlambda / (mu * lambda) * integrate(f, |j| s.y[j] * s.dphi[j] * u[j])
        - dmu / (mu * mu) * integrate(f, |j| s.phi[j] * u[j])
        - 1.0 / (mu * lambda * lambda) * integrate(f, |j| s.d2phi[j] * psi_u[j]);
    if let Some(flux) = flux_field(f, spec, |nl, v| nl.flux(v)) {
        let fv = flux.values();
        rate += 1.0 / (mu * lambda) * integrate(f, |j| s.dphi[j] * fv[j]);
    }
    Ok(rate)
}

/// `(1/(2 mu)) int phi(x/lambda) u^2`.
pub fn j_functional(f: &Field, t: f64, ws: &WeightSchedule, w: &Weight) -> Result<f64> {
    let (lambda, _) = ws.lambda(t)?;
    let (mu, _) = ws.mu(t)?;
    let s = w.sample(f.grid(), lambda, 0.0);
    let u = f.values();
    Ok(integrate(f, |j| s.phi[j] * u[j] * u[j]) / (2.0 * mu))
}

/// Exact `dJ/dt`:
///
/// ```text
/// -(mu'/(2 mu^2)) int phi u^2 - (lambda'/(2 mu lambda)) int y phi'(y) u^2
///   + (1/mu) int phi u L u + (1/(lambda mu)) int phi'(y) Phi(u),   y = x/lambda.
/// ```
pub fn j_rate(f: &Field, t: f64, ws: &WeightSchedule, w: &Weight, spec: &EquationSpec) -> Result<f64> {
    let (lambda, dlambda) = ws.lambda(t)?;
    let (mu, dmu) = ws.mu(t)?;
    let s = w.sample(f.grid(), lambda, 0.0);
    let u = f.values();
    let lu = linear_part(f, &spec.dispersion);
    let lu = lu.values();
    let mut rate = -dmu / (2.0 * mu * mu) * integrate(f, |j| s.phi[j] * u[j] * u[j])
        - dlambda / (2.0 * mu * lambda) * integrate(f, |j| s.y[j] * s.dphi[j] * u[j] * u[j])
        + 1.0 / mu * integrate(f, |j| s.phi[j] * u[j] * lu[j]);
    if let Some(p) = flux_field(f, spec, |nl, v| nl.moment_potential(v)) {
        let pv = p.values();
        rate += 1.0 / (lambda * mu) * integrate(f, |j| s.dphi[j] * pv[j]);
    }
    Ok(rate)
}

/// `(1/2) int phi((x + mu)/lambda) u^2`.
pub fn je_functional(f: &Field, t: f64, ws: &WeightSchedule, w: &Weight) -> Result<f64> {
    let (lambda, _) = ws.lambda(t)?;
    let (mu, _) = ws.mu(t)?;
    let s = w.sample(f.grid(), lambda, mu);
    let u = f.values();
    Ok(0.5 * integrate(f, |j| s.phi[j] * u[j] * u[j]))
}

/// Exact `dJe/dt`:
///
/// ```text
/// (mu'/(2 lambda)) int phi'(y) u^2 - (lambda'/(2 lambda)) int y phi'(y) u^2
///   + int phi(y) u L u + (1/lambda) int phi'(y) Phi(u),   y = (x + mu)/lambda.
/// ```
pub fn je_rate(f: &Field, t: f64, ws: &WeightSchedule, w: &Weight, spec: &EquationSpec) -> Result<f64> {
    let (lambda, dlambda) = ws.lambda(t)?;
    let (mu, dmu) = ws.mu(t)?;
    let s = w.sample(f.grid(), lambda, mu);
    let u = f.values();
    let lu = linear_part(f, &spec.dispersion);
    let lu = lu.values();
    let mut rate = dmu / (2.0 * lambda) * integrate(f, |j| s.dphi[j] * u[j] * u[j])
        - dlambda / (2.0 * lambda) * integrate(f, |j| s.y[j] * s.dphi[j] * u[j] * u[j])
        + integrate(f, |j| s.phi[j] * u[j] * lu[j]);
    if let Some(p) = flux_field(f, spec, |nl, v| nl.moment_potential(v)) {
        let pv = p.values();
        rate += 1.0 / lambda * integrate(f, |j| s.dphi[j] * pv[j]);
    }
    Ok(rate)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentumIdentity {
    /// `int x u` with the grid coordinate.
    pub x_moment: f64,
    /// `int F(u)`, the rate of `x_moment` on the line.
    pub f_integral: f64,
    /// `int x L u` with the sawtooth `x`; zero on the line, `O(I_1 / L)` on the torus when
    /// the dispersion symbol has a kink at the origin.
    pub seam_term: f64,
    /// Mass within the outer `EDGE_FRACTION` of the box exceeds `EDGE_MASS_THRESHOLD * I_2`.
    pub edge_mass_flag: bool,
}

pub fn edge_mass_flag(f: &Field) -> bool {
    let half = 0.5 * f.grid().length();
    let cut = half - 2.0 * EDGE_FRACTION * half;
    let u = f.values();
    let x = f.grid().x();
    let edge = integrate(f, |j| if x[j].abs() >= cut { u[j] * u[j] } else { 0.0 });
    let total = integrate(f, |j| u[j] * u[j]);
    edge > EDGE_MASS_THRESHOLD * total
}

pub fn momentum_identity(f: &Field, spec: &EquationSpec) -> MomentumIdentity {
    let x = f.grid().x();
    let u = f.values();
    MomentumIdentity {
        x_moment: integrate(f, |j| x[j] * u[j]),
        f_integral: flux_field(f, spec, |nl, v| nl.flux(v)).map_or(0.0, |g| g.integral()),
        seam_term: linear_part(f, &spec.dispersion).map_with_x(|x, v| x * v).integral(),
        edge_mass_flag: edge_mass_flag(f),
    }
}

/// `int x u^2`.
pub fn weighted_moment(f: &Field) -> f64 {
    let x = f.grid().x();
    let u = f.values();
    integrate(f, |j| x[j] * u[j] * u[j])
}

fn dispersive_smoothing(f: &Field, spec: &EquationSpec) -> f64 {
    let du = f.apply_multiplier(|z| spec.dispersion.omega_prime(z), Parity::Even, false).expect("omega' is even");
    -f.dot(&du).expect("same grid")
}

/// Predicted `d/dt int x u^2 = -<u, omega'(D) u> + 2 int Phi(u)`. For `omega = z|z|` the
/// first term is `-2 int (D^{1/2} u)^2`.
pub fn weighted_moment_rate(f: &Field, spec: &EquationSpec) -> f64 {
    dispersive_smoothing(f, spec) + flux_field(f, spec, |nl, v| 2.0 * nl.moment_potential(v)).map_or(0.0, |g| g.integral())
}

/// `2 int x u L u + <u, omega'(D) u>`: the torus correction to [`weighted_moment_rate`].
pub fn weighted_moment_seam(f: &Field, spec: &EquationSpec) -> f64 {
    let lu = linear_part(f, &spec.dispersion);
    let direct = 2.0 * lu.zip_map(f, |a, b| a * b).expect("same grid").map_with_x(|x, v| x * v).integral();
    direct - dispersive_smoothing(f, spec)
}
