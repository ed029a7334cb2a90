//! Initial data: ILW solitons with numerically resolved parameters, Gaussians, and
//! rough-left / smooth-right data.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::diagnostics::weights::smooth_step;
use crate::error::{invalid, Error, Result};
use crate::spectral::{t_dx, Field, Grid};

/// `Q(s) = b sin(a delta) / (cos(a delta) + cosh(a s))`, travelling as `Q(x - c t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolitonProfile {
    pub c: f64,
    pub delta: f64,
    pub a: f64,
    pub b: f64,
    /// Relative L2 residual of the profile equation on the solver grid.
    pub residual: f64,
}

impl SolitonProfile {
    pub fn value(&self, s: f64) -> f64 {
        let ad = self.a * self.delta;
        self.b * ad.sin() / (ad.cos() + (self.a * s).cosh())
    }

    pub fn peak(&self) -> f64 {
        self.value(0.0)
    }

    /// Samples `Q(x - center)` with the argument wrapped into the periodic box.
    pub fn sample(&self, grid: &Arc<Grid>, center: f64) -> Field {
        let l = grid.length();
        Field::from_fn(grid, |x| {
            let s = x - center;
            self.value(s - l * (s / l).round())
        })
    }

    /// `T d_x Q + (1/delta - c) Q + Q^2 / 2` on the grid.
    pub fn residual_field(&self, grid: &Arc<Grid>, center: f64) -> Field {
        let q = self.sample(grid, center);
        profile_residual(&q, self.c, self.delta)
    }
}

fn profile_residual(q: &Field, c: f64, delta: f64) -> Field {
    let tq = t_dx(q, delta);
    let shift = 1.0 / delta - c;
    tq.zip_map(q, |t, u| t + shift * u + 0.5 * u * u).expect("same grid")
}

/// Benjamin-Ono soliton `4c / (1 + c^2 x^2)`, the `delta -> infinity` limit profile.
pub fn bo_soliton(c: f64, x: f64) -> f64 {
    4.0 * c / (1.0 + c * c * x * x)
}

/// Log-decay of an admissible soliton between its peak and the edge of the box.
pub const DECAY_DEPTH: f64 = 27.6;

struct Trial {
    a: f64,
    b: f64,
    residual: f64,
}

/// Resolves `(a, b)` so that the profile solves the travelling-wave equation on `grid`
/// with relative L2 residual at most `tol`.
///
/// Trial `a` run over `(2 DECAY_DEPTH / L, pi/delta)`, so the profile decays by
/// `e^{-DECAY_DEPTH}` inside the box and the constant state `2c` is excluded. For each
/// trial `a`, `b` minimizes the residual norm exactly (the residual is quadratic in `b`);
/// `a` is then located by a scan and golden-section search.
pub fn solve_soliton(c: f64, delta: f64, grid: &Arc<Grid>, tol: f64) -> Result<SolitonProfile> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(invalid("delta", format!("must be positive, got {delta}")));
    }
    if !(c.is_finite() && c > 1.0 / delta) {
        return Err(invalid("c", format!("soliton speed must satisfy c > 1/delta = {}, got {c}", 1.0 / delta)));
    }
    if !(tol > 0.0) {
        return Err(invalid("tol", "must be positive"));
    }
    let trial = |a: f64| -> Trial {
        let shape = SolitonProfile { c, delta, a, b: 1.0, residual: f64::NAN }.sample(grid, 0.0);
        let lin = t_dx(&shape, delta).zip_map(&shape, |t, u| t + (1.0 / delta - c) * u).expect("same grid");
        let quad = shape.map(|u| 0.5 * u * u);
        let ll = lin.dot(&lin).expect("same grid");
        let lq = lin.dot(&quad).expect("same grid");
        let qq = quad.dot(&quad).expect("same grid");
        let pp = shape.dot(&shape).expect("same grid");
        let norm2 = |b: f64| (b * b * ll + 2.0 * b * b * b * lq + b.powi(4) * qq).max(0.0);
        let disc = 9.0 * lq * lq - 8.0 * qq * ll;
        let mut candidates = vec![-3.0 * lq / (4.0 * qq)];
        if disc >= 0.0 {
            let r = disc.sqrt();
            candidates.extend([(-3.0 * lq + r) / (4.0 * qq), (-3.0 * lq - r) / (4.0 * qq)]);
        }
        candidates
            .into_iter()
            .filter(|b| b.is_finite() && *b > 0.0)
            .min_by(|x, y| norm2(*x).total_cmp(&norm2(*y)))
            .map(|b| {
                let r = lin.zip_map(&quad, |l, q| b * l + b * b * q).expect("same grid");
                Trial { a, b, residual: r.l2_norm() / (b * pp.sqrt()) }
            })
            .unwrap_or(Trial { a, b: f64::NAN, residual: f64::INFINITY })
    };

    let top = PI / delta;
    let bottom = 2.0 * DECAY_DEPTH / grid.length();
    if bottom >= top {
        return Err(invalid("grid", format!("box of length {} is too short for delta = {delta}", grid.length())));
    }
    let samples = 400;
    let at = |j: usize| bottom + (top - bottom) * j as f64 / samples as f64;
    let scan: Vec<Trial> = (1..samples).map(|j| trial(at(j))).collect();
    let best = (0..scan.len()).min_by(|&i, &j| scan[i].residual.total_cmp(&scan[j].residual)).expect("nonempty scan");
    let mut lo = at(best);
    let mut hi = at(best + 2);
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut t1 = trial(x1);
    let mut t2 = trial(x2);
    while hi - lo > 4.0 * f64::EPSILON * hi {
        if t1.residual <= t2.residual {
            hi = x2;
            x2 = x1;
            t2 = t1;
            x1 = hi - ratio * (hi - lo);
            t1 = trial(x1);
        } else {
            lo = x1;
            x1 = x2;
            t1 = t2;
            x2 = lo + ratio * (hi - lo);
            t2 = trial(x2);
        }
    }
    let found = [t1, t2, trial(0.5 * (lo + hi))].into_iter().min_by(|x, y| x.residual.total_cmp(&y.residual)).expect("three candidates");
    if !(found.residual <= tol) {
        return Err(Error::SolitonNotFound { c, delta, best_residual: found.residual });
    }
    Ok(SolitonProfile { c, delta, a: found.a, b: found.b, residual: found.residual })
}

/// `amplitude * exp(-((x - center) / width)^2)`.
pub fn gaussian(amplitude: f64, width: f64, center: f64, grid: &Arc<Grid>) -> Result<Field> {
    if !(width.is_finite() && width > 0.0) || !amplitude.is_finite() || !center.is_finite() {
        return Err(invalid("gaussian", "needs finite amplitude and center and positive width"));
    }
    Ok(Field::from_fn(grid, |x| {
        let s = (x - center) / width;
        amplitude * (-s * s).exp()
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmoothProfile {
    pub amplitude: f64,
    pub width: f64,
    pub center: f64,
}

/// Random series `sum_k (1 + z_k^2)^{-(s+1/2)/2} cos(z_k x + theta_k)` cut off smoothly
/// to `[lo, hi]`. Its Fourier tail decays like `|z|^{-(s+1/2)}`, so it lies in `H^r` exactly
/// for `r < s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoughComponent {
    pub sobolev_index: f64,
    pub amplitude: f64,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegularityDatum {
    pub x0: f64,
    pub m: u32,
    pub rough: Option<RoughComponent>,
    pub smooth: SmoothProfile,
    pub seed: u64,
}

impl RegularityDatum {
    pub fn validate(&self) -> Result<()> {
        if self.m < 2 {
            return Err(invalid("m", format!("must be at least 2, got {}", self.m)));
        }
        if let Some(r) = &self.rough {
            if !(r.sobolev_index > 1.5) {
                return Err(invalid("sobolev_index", format!("datum must lie in H^(3/2+), got critical index {}", r.sobolev_index)));
            }
            if !(r.hi <= self.x0 && r.hi - r.lo >= 2.0) || !r.amplitude.is_finite() {
                return Err(invalid("rough", "support [lo, hi] must satisfy hi <= x0 and hi - lo >= 2"));
            }
        }
        if !(self.smooth.width > 0.0) {
            return Err(invalid("smooth.width", "must be positive"));
        }
        Ok(())
    }
}

/// Smooth profile plus a seeded rough component supported left of `x0`. Phases are drawn
/// mode by mode, so refining `n` at fixed `L` keeps the low modes and adds new ones.
pub fn make_regularity_datum(spec: &RegularityDatum, grid: &Arc<Grid>) -> Result<Field> {
    spec.validate()?;
    let s = &spec.smooth;
    let smooth = gaussian(s.amplitude, s.width, s.center, grid)?;
    let Some(r) = spec.rough else { return Ok(smooth) };
    let n = grid.n();
    let cutoff = (n - 1) / 3;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut spectrum = vec![Complex64::default(); n];
    for k in 1..=cutoff {
        let theta: f64 = rng.gen_range(0.0..2.0 * PI);
        let z = 2.0 * PI * k as f64 / grid.length();
        let amp = (1.0 + z * z).powf(-(r.sobolev_index + 0.5) / 2.0);
        let c = Complex64::from_polar(0.5 * n as f64 * amp, theta);
        spectrum[k] = c;
        spectrum[n - k] = c.conj();
    }
    let series = Field::from_spectrum(grid, spectrum)?;
    let rough = series.map_with_x(|x, v| r.amplitude * smooth_step(x - r.lo) * smooth_step(r.hi - x) * v);
    smooth.zip_map(&rough, |a, b| a + b)
}
