//! Windowed norms: decay-window mass, far-field annulus, local Sobolev and smoothing probes.

use serde::{Deserialize, Serialize};

use super::schedule::WeightSchedule;
use super::weights::Weight;
use crate::error::{Error, Result};
use crate::spectral::{Field, Parity};
use crate::symbols::q_symbol;

/// Width of the cosine taper at window edges, in grid spacings.
pub const TAPER_POINTS: f64 = 10.0;
/// Highest derivative order accepted by the local probes.
pub const MAX_SOBOLEV_ORDER: u32 = 8;

/// Interval `[lo, hi]`; a missing end extends to the edge of the box without a taper.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub lo: Option<f64>,
    pub hi: Option<f64>,
}

impl Window {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo: Some(lo), hi: Some(hi) }
    }

    pub fn right_of(lo: f64) -> Self {
        Self { lo: Some(lo), hi: None }
    }

    pub fn left_of(hi: f64) -> Self {
        Self { lo: None, hi: Some(hi) }
    }

    /// Taper weights on the grid of `f`, checking that the window fits in the box.
    pub fn taper(&self, f: &Field) -> Result<Vec<f64>> {
        let grid = f.grid();
        let half = 0.5 * grid.length();
        let w = TAPER_POINTS * grid.dx();
        let lo = self.lo.unwrap_or(-half - w);
        let hi = self.hi.unwrap_or(half + w);
        let fits = |e: Option<f64>| e.map_or(true, |e| e - 0.5 * w >= -half && e + 0.5 * w <= half);
        if !(lo < hi) || !fits(self.lo) || !fits(self.hi) {
            return Err(Error::WindowOutsideDomain { lo, hi, half });
        }
        let ramp = |d: f64| {
            if d <= -0.5 * w {
                0.0
            } else if d >= 0.5 * w {
                1.0
            } else {
                0.5 * (1.0 - (std::f64::consts::PI * (d / w + 0.5)).cos())
            }
        };
        Ok(grid.x().iter().map(|&x| ramp(x - lo) * ramp(hi - x)).collect())
    }
}

fn windowed(f: &Field, taper: &[f64], density: impl Fn(usize) -> f64) -> f64 {
    let values: Vec<f64> = taper.iter().enumerate().map(|(j, w)| if *w == 0.0 { 0.0 } else { w * density(j) }).collect();
    f.grid().integrate(&values)
}

/// `int_{|x| <= C t^b / log t} (u^2 + (q(D) u)^2)` with tapered edges.
pub fn window_mass(f: &Field, t: f64, ws: &WeightSchedule, delta: f64) -> Result<f64> {
    let r = ws.window_radius(t)?;
    let taper = Window::new(-r, r).taper(f)?;
    let qu = f.apply_multiplier(|z| q_symbol(delta, z), Parity::Even, false)?;
    let (u, qu) = (f.values(), qu.values());
    Ok(windowed(f, &taper, |j| u[j] * u[j] + qu[j] * qu[j]))
}

/// L2 norm of `u` over `mu/2 <= |x| <= 2 mu`, intersected with the box.
pub fn far_field_l2(f: &Field, t: f64, ws: &WeightSchedule) -> Result<f64> {
    let (mu, _) = ws.mu(t)?;
    let half = 0.5 * f.grid().length();
    let (inner, outer) = (0.5 * mu, 2.0 * mu);
    let (right, left) = if outer + 0.5 * TAPER_POINTS * f.grid().dx() < half {
        (Window::new(inner, outer), Window::new(-outer, -inner))
    } else {
        (Window::right_of(inner), Window::left_of(-inner))
    };
    let (a, b) = (right.taper(f)?, left.taper(f)?);
    let u = f.values();
    let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
    Ok(windowed(f, &sum, |j| u[j] * u[j]).sqrt())
}

fn check_order(m: u32) -> Result<()> {
    if m > MAX_SOBOLEV_ORDER {
        Err(Error::UnresolvableOrder { m, max: MAX_SOBOLEV_ORDER })
    } else {
        Ok(())
    }
}

/// `int_window (d_x^m u)^2` with tapered edges.
pub fn local_sobolev(f: &Field, window: &Window, m: u32) -> Result<f64> {
    check_order(m)?;
    let taper = window.taper(f)?;
    let d = f.dx_n(m);
    let d = d.values();
    Ok(windowed(f, &taper, |j| d[j] * d[j]))
}

/// `int_window (D^{1/2} d_x^m u)^2` with `D^{1/2}` the multiplier `|z|^{1/2}`.
pub fn smoothing_halfnorm(f: &Field, window: &Window, m: u32) -> Result<f64> {
    check_order(m)?;
    let taper = window.taper(f)?;
    let sign = if m % 4 >= 2 { -1.0 } else { 1.0 };
    let parity = if m % 2 == 0 { Parity::Even } else { Parity::Odd };
    let d = f.apply_multiplier(|z| sign * z.abs().sqrt() * z.powi(m as i32), parity, m % 2 == 1)?;
    let d = d.values();
    Ok(windowed(f, &taper, |j| d[j] * d[j]))
}

/// `int y phi'(y) u^2` with `y = (x + mu)/lambda`.
pub fn corollary_integrand(f: &Field, t: f64, ws: &WeightSchedule, w: &Weight) -> Result<f64> {
    let (lambda, _) = ws.lambda(t)?;
    let (mu, _) = ws.mu(t)?;
    let s = w.sample(f.grid(), lambda, mu);
    let u = f.values();
    let values: Vec<f64> = (0..u.len()).map(|j| s.y[j] * s.dphi[j] * u[j] * u[j]).collect();
    Ok(f.grid().integrate(&values))
}
