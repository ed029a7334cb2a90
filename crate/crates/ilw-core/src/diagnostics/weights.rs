//! Smooth cutoff weights for the virial functionals.

use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::spectral::Grid;

fn bump(t: f64) -> [f64; 3] {
    // e^{-1/t} and its first two derivatives; flat zero below t ~ 1/700
    if t < 1.0 / 700.0 {
        return [0.0; 3];
    }
    let p = (-1.0 / t).exp();
    let t2 = t * t;
    [p, p / t2, p * (1.0 - 2.0 * t) / (t2 * t2)]
}

/// `S(t)` together with `S'` and `S''`: `S = 0` for `t <= 0`, `1` for `t >= 1`, smooth.
pub fn smooth_step_derivs(t: f64) -> [f64; 3] {
    if t <= 0.0 {
        return [0.0; 3];
    }
    if t >= 1.0 {
        return [1.0, 0.0, 0.0];
    }
    let [a, a1, a2] = bump(t);
    let [b, b1, b2] = bump(1.0 - t);
    let (b1, b2) = (-b1, b2);
    let d = a + b;
    let num = a1 * b - a * b1;
    let num1 = a2 * b - a * b2;
    let d1 = a1 + b1;
    [a / d, num / (d * d), (num1 * d - 2.0 * num * d1) / (d * d * d)]
}

pub fn smooth_step(t: f64) -> f64 {
    smooth_step_derivs(t)[0]
}

const TABLE_CELLS: usize = 4096;

// M(tau) = int_tau^1 (1 - S(s))^3 ds on a uniform grid of [0, 1], with M' = -(1 - S)^3
struct CubeTable {
    m: Vec<f64>,
    dm: Vec<f64>,
}

impl CubeTable {
    fn build() -> Self {
        let h = 1.0 / TABLE_CELLS as f64;
        let f = |s: f64| (1.0 - smooth_step(s)).powi(3);
        // 5-point Gauss-Legendre per cell
        let nodes = [
            (0.0, 0.568_888_888_888_888_9),
            (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
            (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
            (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
            (0.906_179_845_938_664, 0.236_926_885_056_189_1),
        ];
        let mut m = vec![0.0; TABLE_CELLS + 1];
        for i in (0..TABLE_CELLS).rev() {
            let mid = (i as f64 + 0.5) * h;
            let cell: f64 = nodes.iter().map(|(x, w)| w * f(mid + 0.5 * h * x)).sum::<f64>() * 0.5 * h;
            m[i] = m[i + 1] + cell;
        }
        let dm = (0..=TABLE_CELLS).map(|i| -f(i as f64 * h)).collect();
        Self { m, dm }
    }

    fn eval(&self, tau: f64) -> f64 {
        let tau = tau.clamp(0.0, 1.0);
        let h = 1.0 / TABLE_CELLS as f64;
        let i = ((tau / h) as usize).min(TABLE_CELLS - 1);
        let s = tau / h - i as f64;
        let (h00, h10, h01, h11) =
            ((1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s), s * (1.0 - s) * (1.0 - s), s * s * (3.0 - 2.0 * s), s * s * (s - 1.0));
        h00 * self.m[i] + h10 * h * self.dm[i] + h01 * self.m[i + 1] + h11 * h * self.dm[i + 1]
    }

    fn total(&self) -> f64 {
        self.m[0]
    }
}

fn cube_table() -> &'static CubeTable {
    static TABLE: OnceLock<CubeTable> = OnceLock::new();
    TABLE.get_or_init(CubeTable::build)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKind {
    /// Increasing, `phi' = (phi_0')^3` even, `phi' = 1` on `[-C, C]`, supported in `[-C-1, C+1]`.
    ClassAc,
    /// `1` for `s <= -1`, `0` for `s >= 0`.
    LeftStep,
    /// `0` for `s <= -3/4`, `1` for `s >= -1/4`.
    Tilde,
    /// `0` for `s <= 0`, `1` for `s >= 1`.
    CorollaryStep,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weight {
    pub kind: WeightKind,
    pub capital_c: f64,
}

/// `phi`, `phi'`, `phi''` sampled at `y_j = (x_j + shift) / scale`.
#[derive(Debug, Clone)]
pub struct WeightSamples {
    pub y: Vec<f64>,
    pub phi: Vec<f64>,
    pub dphi: Vec<f64>,
    pub d2phi: Vec<f64>,
}

impl Weight {
    pub fn class_ac(capital_c: f64) -> Result<Self> {
        if !(capital_c.is_finite() && capital_c > 0.0) {
            return Err(invalid("capital_c", format!("must be positive, got {capital_c}")));
        }
        Ok(Self { kind: WeightKind::ClassAc, capital_c })
    }

    pub fn new(kind: WeightKind) -> Self {
        Self { kind, capital_c: 1.0 }
    }

    /// `phi_0'(s) = 1 - S(|s| - C)`, the cube root of `phi'` for the class weight.
    pub fn phi0_prime(&self, s: f64) -> f64 {
        1.0 - smooth_step(s.abs() - self.capital_c)
    }

    /// `[phi, phi', phi'']` at `s`.
    pub fn eval(&self, s: f64) -> [f64; 3] {
        match self.kind {
            WeightKind::ClassAc => {
                let c = self.capital_c;
                let table = cube_table();
                let m0 = table.total();
                let [st, st1, _] = smooth_step_derivs(s.abs() - c);
                let p = 1.0 - st;
                let dphi = p * p * p;
                let d2phi = -3.0 * p * p * st1 * s.signum();
                let phi = if s <= -c - 1.0 {
                    0.0
                } else if s <= -c {
                    table.eval(-s - c)
                } else if s <= c {
                    m0 + s + c
                } else if s <= c + 1.0 {
                    2.0 * m0 + 2.0 * c - table.eval(s - c)
                } else {
                    2.0 * m0 + 2.0 * c
                };
                [phi, dphi, d2phi]
            }
            WeightKind::LeftStep => {
                let [v, d1, d2] = smooth_step_derivs(s + 1.0);
                [1.0 - v, -d1, -d2]
            }
            WeightKind::Tilde => {
                let [v, d1, d2] = smooth_step_derivs(2.0 * (s + 0.75));
                [v, 2.0 * d1, 4.0 * d2]
            }
            WeightKind::CorollaryStep => smooth_step_derivs(s),
        }
    }

    pub fn phi(&self, s: f64) -> f64 {
        self.eval(s)[0]
    }

    pub fn dphi(&self, s: f64) -> f64 {
        self.eval(s)[1]
    }

    pub fn d2phi(&self, s: f64) -> f64 {
        self.eval(s)[2]
    }

    pub fn sample(&self, grid: &Arc<Grid>, scale: f64, shift: f64) -> WeightSamples {
        let n = grid.n();
        let mut out = WeightSamples {
            y: Vec::with_capacity(n),
            phi: Vec::with_capacity(n),
            dphi: Vec::with_capacity(n),
            d2phi: Vec::with_capacity(n),
        };
        for &x in grid.x() {
            let y = (x + shift) / scale;
            let [p, d1, d2] = self.eval(y);
            out.y.push(y);
            out.phi.push(p);
            out.dphi.push(d1);
            out.d2phi.push(d2);
        }
        out
    }
}
