//! Closed-form Fourier symbols of the ILW operators.
//!
//! Angular frequency `z` throughout. With `w = delta * z`:
//!
//! | function       | symbol                                             |
//! |----------------|----------------------------------------------------|
//! | [`omega`]      | `z^2 coth(w) - z/delta`                            |
//! | [`omega_prime`]| `2z coth(w) - delta z^2 csch^2(w) - 1/delta`       |
//! | [`q_symbol`]   | `sqrt(omega_prime)`                                |
//! | [`big_l`]      | `z coth(w) - 1/delta`                              |
//! | [`psi_symbol`] | `1/w - coth(w)`                                    |
//! | [`bo_ilw_gap`] | `z|z| - z^2 coth(w)`                               |
//!
//! The linear ILW flow is `u_hat' = i omega(z) u_hat`. Removable singularities at `z = 0`
//! take their limits. Every symbol is written through the two cancellation-free reduced
//! functions `g(w) = w coth w - 1` and `k(w) = 1 - w^2 csch^2 w`, evaluated by their
//! Taylor series for `|w| < 1` and in closed form beyond.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::spectral::{Field, Grid, Parity};

/// Below this `|w|`, [`coth`] and [`csch2`] use their three-term Laurent series.
pub const SERIES_SWITCH: f64 = 1e-3;

/// Below this `|w|`, the reduced functions use their Taylor series.
pub const REDUCED_SWITCH: f64 = 1.0;

// 2^{2n} B_{2n} / (2n)!, n = 1..22: Taylor coefficients of w coth w - 1 in w^{2n}.
const G_COEFFS: [f64; 22] = [
    0.333_333_333_333_333_33,
    -0.022_222_222_222_222_222,
    0.002_116_402_116_402_116_4,
    -0.000_211_640_211_640_211_64,
    2.137_779_915_557_693_335_5e-5,
    -2.164_404_280_806_397_208_5e-6,
    2.192_594_785_187_377_78e-7,
    -2.221_460_878_997_967_907_6e-8,
    2.250_784_651_680_899_285_4e-9,
    -2.280_515_120_459_218_286_6e-10,
    2.310_643_259_900_262_409_7e-11,
    -2.341_170_681_982_488_395_9e-12,
    2.372_101_740_023_365_429_5e-13,
    -2.403_441_533_330_770_617_9e-14,
    2.435_195_402_918_336_873_1e-15,
    -2.467_368_804_517_207_470_6e-16,
    2.499_967_277_122_080_898e-17,
    -2.532_996_435_740_634_831_5e-18,
    2.566_461_970_282_628_661_1e-19,
    -2.600_369_646_013_727_358_9e-20,
    2.634_725_304_415_380_134_2e-21,
    -2.669_534_864_157_394_953_5e-22,
];

/// Validated depth parameter `delta > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Depth(f64);

impl Depth {
    pub fn new(delta: f64) -> Result<Self> {
        if delta.is_finite() && delta > 0.0 {
            Ok(Self(delta))
        } else {
            Err(invalid("delta", format!("must be finite and positive, got {delta}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Depth {
    type Error = Error;

    fn try_from(delta: f64) -> Result<Self> {
        Self::new(delta)
    }
}

impl From<Depth> for f64 {
    fn from(d: Depth) -> f64 {
        d.0
    }
}

/// `coth(w)`, odd, with a pole at 0 (returns `inf` there).
pub fn coth(w: f64) -> f64 {
    let a = w.abs();
    if a < SERIES_SWITCH {
        if a == 0.0 {
            return f64::INFINITY.copysign(w);
        }
        1.0 / w + w / 3.0 - w * w * w / 45.0
    } else {
        (1.0 + 2.0 / (2.0 * a).exp_m1()).copysign(w)
    }
}

/// `csch^2(w)`, even, with a pole at 0.
pub fn csch2(w: f64) -> f64 {
    let a = w.abs();
    if a < SERIES_SWITCH {
        if a == 0.0 {
            return f64::INFINITY;
        }
        1.0 / (a * a) - 1.0 / 3.0 + a * a / 15.0
    } else {
        let e = (-a).exp();
        let d = -(-2.0 * a).exp_m1();
        4.0 * e * e / (d * d)
    }
}

fn taylor(w2: f64, weight: impl Fn(usize) -> f64) -> f64 {
    G_COEFFS.iter().enumerate().rev().fold(0.0, |acc, (i, c)| acc * w2 + c * weight(i + 1)) * w2
}

/// `g(w) = w coth(w) - 1`, even, `>= 0`.
pub fn reduced_g(w: f64) -> f64 {
    let a = w.abs();
    if a < REDUCED_SWITCH {
        taylor(a * a, |_| 1.0)
    } else {
        a - 1.0 + 2.0 * a / (2.0 * a).exp_m1()
    }
}

/// `k(w) = 1 - w^2 csch^2(w)`, even, in `[0, 1)`.
pub fn reduced_k(w: f64) -> f64 {
    let a = w.abs();
    if a < REDUCED_SWITCH {
        taylor(a * a, |n| (2 * n - 1) as f64)
    } else {
        let t = a * (-a).exp();
        let d = -(-2.0 * a).exp_m1();
        1.0 - 4.0 * t * t / (d * d)
    }
}

/// Dispersion symbol `Omega_delta(z)`, odd.
pub fn omega(delta: f64, z: f64) -> f64 {
    z * big_l(delta, z)
}

/// `Omega_delta'(z)`, even, nonnegative.
pub fn omega_prime(delta: f64, z: f64) -> f64 {
    let w = delta * z;
    (2.0 * reduced_g(w) + reduced_k(w)) / delta
}

/// `q(z) = sqrt(Omega_delta'(z))`, the symbol of the local smoothing operator.
pub fn q_symbol(delta: f64, z: f64) -> f64 {
    omega_prime(delta, z).sqrt()
}

/// Symbol of `-(T d_x + 1/delta)`, even, nonnegative.
pub fn big_l(delta: f64, z: f64) -> f64 {
    reduced_g(delta * z) / delta
}

/// `1/(delta z) - coth(delta z)`, odd, bounded by 1.
///
/// The operator `Psi` with symbol `-i psi_symbol` satisfies `d_x^2 Psi = T d_x^2 + d_x / delta`.
pub fn psi_symbol(delta: f64, z: f64) -> f64 {
    let w = delta * z;
    if w == 0.0 {
        0.0
    } else {
        -reduced_g(w) / w
    }
}

/// `z|z| - z^2 coth(delta z)`, the symbol gap between Benjamin-Ono and ILW (without the
/// `z/delta` drift). Exponentially small in `delta |z|`.
pub fn bo_ilw_gap(delta: f64, z: f64) -> f64 {
    if z == 0.0 {
        return 0.0;
    }
    let a = delta * z.abs();
    -2.0 * z * z.abs() / (2.0 * a).exp_m1()
}

/// Piecewise-linear odd dispersion symbol given by samples on `z >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolTable {
    z: Vec<f64>,
    omega: Vec<f64>,
}

impl SymbolTable {
    /// `z` must start at 0, increase strictly, and `omega[0]` must be 0.
    pub fn new(z: Vec<f64>, omega: Vec<f64>) -> Result<Self> {
        if z.len() < 2 || z.len() != omega.len() {
            return Err(invalid("symbol_table", "needs at least two (z, omega) pairs of equal length"));
        }
        if z[0] != 0.0 || omega[0] != 0.0 {
            return Err(invalid("symbol_table", "must start at (0, 0)"));
        }
        if z.windows(2).any(|p| p[1] <= p[0]) || z.iter().chain(&omega).any(|v| !v.is_finite()) {
            return Err(invalid("symbol_table", "z must increase strictly and all entries be finite"));
        }
        Ok(Self { z, omega })
    }

    fn segment(&self, a: f64) -> usize {
        match self.z.partition_point(|&zi| zi <= a) {
            0 => 0,
            i => (i - 1).min(self.z.len() - 2),
        }
    }

    pub fn omega(&self, z: f64) -> f64 {
        let a = z.abs();
        let i = self.segment(a);
        let s = (self.omega[i + 1] - self.omega[i]) / (self.z[i + 1] - self.z[i]);
        if z == 0.0 {
            0.0
        } else {
            (self.omega[i] + s * (a - self.z[i])) * z.signum()
        }
    }

    pub fn omega_prime(&self, z: f64) -> f64 {
        let i = self.segment(z.abs());
        (self.omega[i + 1] - self.omega[i]) / (self.z[i + 1] - self.z[i])
    }
}

/// Linear part of the evolution: `u_hat' = i omega(z) u_hat`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DispersionKind {
    Ilw(Depth),
    /// `omega = z|z|`, the `delta -> infinity` limit of ILW with the `z/delta` drift removed.
    Bo,
    /// `omega = z^3`.
    Kdv,
    Custom(SymbolTable),
}

impl DispersionKind {
    pub fn omega(&self, z: f64) -> f64 {
        match self {
            Self::Ilw(d) => omega(d.get(), z),
            Self::Bo => z * z.abs(),
            Self::Kdv => z * z * z,
            Self::Custom(t) => t.omega(z),
        }
    }

    pub fn omega_prime(&self, z: f64) -> f64 {
        match self {
            Self::Ilw(d) => omega_prime(d.get(), z),
            Self::Bo => 2.0 * z.abs(),
            Self::Kdv => 3.0 * z * z,
            Self::Custom(t) => t.omega_prime(z),
        }
    }

    /// Symbol of `-omega(z)/z^2`; the operator `Psi` with symbol `-i psi(z)` satisfies
    /// `L = -d_x^2 Psi` for the linear part `L`.
    pub fn psi(&self, z: f64) -> f64 {
        match self {
            Self::Ilw(d) => psi_symbol(d.get(), z),
            _ if z == 0.0 => 0.0,
            _ => -self.omega(z) / (z * z),
        }
    }

    pub fn depth(&self) -> Option<f64> {
        match self {
            Self::Ilw(d) => Some(d.get()),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolRow {
    pub xi: f64,
    pub omega: f64,
    pub omega_prime: f64,
    pub q: f64,
    pub big_l: f64,
    pub psi: f64,
    pub gap: f64,
}

pub const SYMBOL_TABLE_HEADER: &str = "xi,omega,omega_prime,q,big_l,psi,gap";

impl SymbolRow {
    pub fn at(delta: Depth, xi: f64) -> Self {
        let d = delta.get();
        Self {
            xi,
            omega: omega(d, xi),
            omega_prime: omega_prime(d, xi),
            q: q_symbol(d, xi),
            big_l: big_l(d, xi),
            psi: psi_symbol(d, xi),
            gap: bo_ilw_gap(d, xi),
        }
    }

    pub fn csv(&self) -> String {
        format!("{:e},{:e},{:e},{:e},{:e},{:e},{:e}", self.xi, self.omega, self.omega_prime, self.q, self.big_l, self.psi, self.gap)
    }
}

/// `samples` equispaced arguments from `xi_min` to `xi_max` inclusive.
pub fn symbol_table(delta: Depth, xi_min: f64, xi_max: f64, samples: usize) -> Result<Vec<SymbolRow>> {
    if samples < 2 || !(xi_min < xi_max) || !xi_min.is_finite() || !xi_max.is_finite() {
        return Err(invalid("symbol_table", "needs xi_min < xi_max and at least 2 samples"));
    }
    let h = (xi_max - xi_min) / (samples - 1) as f64;
    Ok((0..samples).map(|i| SymbolRow::at(delta, xi_min + h * i as f64)).collect())
}

/// Multiplication coordinate used by [`discrete_commutator_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommutatorCoordinate {
    /// The grid coordinate `x`, discontinuous across the periodic seam.
    Sawtooth,
    /// `X(x) = (L / 2 pi) sin(2 pi x / L)`, smooth and periodic, `X ~ x` near the origin.
    Chord,
}

/// L2 norm of `d_x [H, X] d_x u`, the commutator of the Hilbert transform with
/// multiplication by the coordinate `X`. On the line the commutator sends `v` to
/// `(1/pi) int v`, so the whole expression vanishes; on the grid it measures how well the
/// discrete operators reproduce that.
pub fn discrete_commutator_check(samples: &[f64], length: f64, coordinate: CommutatorCoordinate) -> Result<f64> {
    let n = samples.len();
    if !n.is_power_of_two() || n < 16 {
        return Err(Error::InvalidGrid(format!("commutator check needs a power-of-two size >= 16, got {n}")));
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(invalid("samples", "must be finite real values"));
    }
    let grid = Grid::new(n, length)?;
    let u = Field::from_values(&grid, samples.to_vec())?;
    let coord = match coordinate {
        CommutatorCoordinate::Sawtooth => Field::from_values(&grid, grid.x().to_vec())?,
        CommutatorCoordinate::Chord => {
            let k = 2.0 * std::f64::consts::PI / length;
            Field::from_fn(&grid, |x| (k * x).sin() / k)
        }
    };
    let hilbert = |f: &Field| f.apply_multiplier(|z| if z == 0.0 { 0.0 } else { -z.signum() }, Parity::Odd, true);
    let ux = u.dx();
    let h_xux = hilbert(&ux.zip_map(&coord, |a, b| a * b)?)?;
    let x_hux = hilbert(&ux)?.zip_map(&coord, |a, b| a * b)?;
    let c = h_xux.zip_map(&x_hux, |a, b| a - b)?;
    Ok(c.dx().l2_norm())
}

/// Grid-sampled symbol, shared by the operators that use it repeatedly.
pub fn sample_symbol(grid: &Arc<Grid>, symbol: impl Fn(f64) -> f64) -> Vec<f64> {
    grid.z().iter().map(|&z| symbol(z)).collect()
}
