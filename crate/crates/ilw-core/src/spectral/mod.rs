//! Periodic grid, real fields with cached spectra, Fourier multipliers and dealiased
//! nonlinear fluxes.
//!
//! The box `[-L/2, L/2)` carries `n` points `x_j = -L/2 + j L / n`. Spectra use the
//! standard DFT ordering; `k_signed` runs over `[-n/2, n/2)` and `z_k = 2 pi k_signed / L`.
//! The forward transform is unnormalized and the inverse divides by `n`.

mod io;
pub(crate) mod nonlinear;

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::symbols::DispersionKind;

pub use io::{read_binary, read_csv, write_binary, write_csv};
pub use nonlinear::{nonlinear_flux, Dealias, Nonlinearity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone)]
pub(crate) struct Transforms {
    pub(crate) forward: Arc<dyn Fft<f64>>,
    pub(crate) inverse: Arc<dyn Fft<f64>>,
}

impl Transforms {
    fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self { forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n) }
    }
}

pub struct Grid {
    n: usize,
    length: f64,
    x: Vec<f64>,
    z: Vec<f64>,
    k: Vec<i64>,
    transforms: Transforms,
    padded: Mutex<HashMap<usize, Transforms>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid").field("n", &self.n).field("length", &self.length).finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.length == other.length
    }
}

impl Grid {
    pub fn new(n: usize, length: f64) -> Result<Arc<Self>> {
        if n < 16 || n % 2 != 0 {
            return Err(Error::InvalidGrid(format!("n must be even and at least 16, got {n}")));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!("length must be finite and positive, got {length}")));
        }
        let h = length / n as f64;
        let x = (0..n).map(|j| -0.5 * length + h * j as f64).collect();
        let k: Vec<i64> = (0..n).map(|j| signed_index(j, n)).collect();
        let z = k.iter().map(|&k| 2.0 * PI * k as f64 / length).collect();
        Ok(Arc::new(Self { n, length, x, z, k, transforms: Transforms::new(n), padded: Mutex::new(HashMap::new()) }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// Angular frequencies in DFT order.
    pub fn z(&self) -> &[f64] {
        &self.z
    }

    /// Signed mode indices in DFT order.
    pub fn k(&self) -> &[i64] {
        &self.k
    }

    pub fn nyquist_index(&self) -> usize {
        self.n / 2
    }

    pub fn z_max(&self) -> f64 {
        PI * self.n as f64 / self.length
    }

    pub(crate) fn transforms(&self) -> &Transforms {
        &self.transforms
    }

    pub(crate) fn padded_transforms(&self, m: usize) -> Transforms {
        let mut cache = self.padded.lock().unwrap_or_else(|e| e.into_inner());
        cache.entry(m).or_insert_with(|| Transforms::new(m)).clone()
    }

    pub fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.transforms.forward.process(&mut buf);
        buf
    }

    /// Inverse transform keeping the real part.
    pub fn inverse(&self, spectrum: &[Complex64]) -> Vec<f64> {
        let mut buf = spectrum.to_vec();
        self.transforms.inverse.process(&mut buf);
        let s = 1.0 / self.n as f64;
        buf.iter().map(|c| c.re * s).collect()
    }

    /// Periodic quadrature `(L/n) sum_j v_j`, exact for trigonometric polynomials.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        values.iter().sum::<f64>() * self.dx()
    }
}

pub(crate) fn signed_index(j: usize, n: usize) -> i64 {
    if j < n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

/// Real field on a grid. The spectrum is computed on first use and cached.
#[derive(Clone)]
pub struct Field {
    grid: Arc<Grid>,
    values: Vec<f64>,
    spectrum: OnceLock<Vec<Complex64>>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field").field("grid", &self.grid).field("max_abs", &self.max_abs()).finish()
    }
}

impl Field {
    pub fn from_values(grid: &Arc<Grid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::InvalidGrid(format!("expected {} values, got {}", grid.n, values.len())));
        }
        Ok(Self { grid: grid.clone(), values, spectrum: OnceLock::new() })
    }

    pub fn from_fn(grid: &Arc<Grid>, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.x.iter().map(|&x| f(x)).collect();
        Self { grid: grid.clone(), values, spectrum: OnceLock::new() }
    }

    pub fn zeros(grid: &Arc<Grid>) -> Self {
        Self { grid: grid.clone(), values: vec![0.0; grid.n], spectrum: OnceLock::new() }
    }

    /// Field from spectral coefficients; imaginary parts of the inverse transform are dropped.
    pub fn from_spectrum(grid: &Arc<Grid>, spectrum: Vec<Complex64>) -> Result<Self> {
        if spectrum.len() != grid.n {
            return Err(Error::InvalidGrid(format!("expected {} coefficients, got {}", grid.n, spectrum.len())));
        }
        let values = grid.inverse(&spectrum);
        let spectrum = OnceLock::from(grid.forward(&values));
        Ok(Self { grid: grid.clone(), values, spectrum })
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn spectrum(&self) -> &[Complex64] {
        self.spectrum.get_or_init(|| self.grid.forward(&self.values))
    }

    pub fn integral(&self) -> f64 {
        self.grid.integrate(&self.values)
    }

    pub fn l2_norm(&self) -> f64 {
        self.dot_values(&self.values).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn dot_values(&self, other: &[f64]) -> f64 {
        self.values.iter().zip(other).map(|(a, b)| a * b).sum::<f64>() * self.grid.dx()
    }

    pub fn dot(&self, other: &Field) -> Result<f64> {
        self.check_grid(other)?;
        Ok(self.dot_values(&other.values))
    }

    fn check_grid(&self, other: &Field) -> Result<()> {
        if Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        let values = self.values.iter().map(|&v| f(v)).collect();
        Field { grid: self.grid.clone(), values, spectrum: OnceLock::new() }
    }

    /// Pointwise `f(x_j, u_j)`.
    pub fn map_with_x(&self, f: impl Fn(f64, f64) -> f64) -> Field {
        let values = self.grid.x.iter().zip(&self.values).map(|(&x, &v)| f(x, v)).collect();
        Field { grid: self.grid.clone(), values, spectrum: OnceLock::new() }
    }

    pub fn zip_map(&self, other: &Field, f: impl Fn(f64, f64) -> f64) -> Result<Field> {
        self.check_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Ok(Field { grid: self.grid.clone(), values, spectrum: OnceLock::new() })
    }

    pub fn scale(&self, s: f64) -> Field {
        self.map(|v| s * v)
    }

    /// `x -> -x` on the grid (the point `-L/2` maps to itself).
    pub fn reflect(&self) -> Field {
        let n = self.grid.n;
        let values = (0..n).map(|j| self.values[(n - j) % n]).collect();
        Field { grid: self.grid.clone(), values, spectrum: OnceLock::new() }
    }

    /// Multiply the spectrum by `m(z_k)`, times `i` when `factor_i`.
    ///
    /// Real output requires an even real multiplier or `i` times an odd one. The parity is
    /// checked on the grid. Odd multipliers zero the unpaired Nyquist mode.
    pub fn apply_multiplier(&self, m: impl Fn(f64) -> f64, parity: Parity, factor_i: bool) -> Result<Field> {
        let grid = &self.grid;
        let symbol: Vec<f64> = grid.z.iter().map(|&z| m(z)).collect();
        self.apply_sampled(&symbol, parity, factor_i)
    }

    /// As [`Field::apply_multiplier`] with the symbol already sampled in DFT order.
    pub fn apply_sampled(&self, symbol: &[f64], parity: Parity, factor_i: bool) -> Result<Field> {
        match (parity, factor_i) {
            (Parity::Even, false) | (Parity::Odd, true) => {}
            _ => return Err(Error::NonRealMultiplier { parity, factor_i }),
        }
        let n = self.grid.n;
        if symbol.len() != n {
            return Err(invalid("symbol", format!("expected {n} samples, got {}", symbol.len())));
        }
        if let Some(&bad) = symbol.iter().find(|v| !v.is_finite()) {
            return Err(invalid("symbol", format!("non-finite multiplier value {bad}")));
        }
        for j in 1..n / 2 {
            let (a, b) = (symbol[j], symbol[n - j]);
            let mismatch = match parity {
                Parity::Even => a - b,
                Parity::Odd => a + b,
            };
            if mismatch.abs() > 1e-12 * a.abs().max(b.abs()).max(f64::MIN_POSITIVE) {
                return Err(Error::ParityViolation { parity, z: self.grid.z[j], mismatch });
            }
        }
        let factor = if factor_i { Complex64::i() } else { Complex64::new(1.0, 0.0) };
        let mut out: Vec<Complex64> = self.spectrum().iter().zip(symbol).map(|(c, &s)| c * s * factor).collect();
        if parity == Parity::Odd {
            out[n / 2] = Complex64::new(0.0, 0.0);
            out[0] = Complex64::new(0.0, 0.0);
        }
        Field::from_spectrum(&self.grid, out)
    }

    /// Spectral derivative.
    pub fn dx(&self) -> Field {
        self.apply_multiplier(|z| z, Parity::Odd, true).expect("derivative is an odd multiplier")
    }

    /// `m`-th spectral derivative.
    pub fn dx_n(&self, m: u32) -> Field {
        let parity = if m % 2 == 0 { Parity::Even } else { Parity::Odd };
        let sign = if m % 4 >= 2 { -1.0 } else { 1.0 };
        self.apply_multiplier(|z| sign * z.powi(m as i32), parity, m % 2 == 1).expect("derivative multipliers have matching parity")
    }
}

/// Linear part of the flow applied to `f`: multiplication by `i omega(z)`. For ILW this
/// is `-(T d_x^2 + d_x / delta)`.
pub fn linear_part(f: &Field, dispersion: &DispersionKind) -> Field {
    f.apply_multiplier(|z| dispersion.omega(z), Parity::Odd, true).expect("dispersion symbols are odd")
}

/// `-(T d_x^2 + d_x / delta) f` for the ILW depth `delta`.
pub fn linear_ilw(f: &Field, delta: crate::symbols::Depth) -> Field {
    linear_part(f, &DispersionKind::Ilw(delta))
}

/// `T d_x f`, with the continuous symbol `-z coth(delta z)` (value `-1/delta` at `z = 0`).
pub fn t_dx(f: &Field, delta: f64) -> Field {
    f.apply_multiplier(|z| -crate::symbols::big_l(delta, z) - 1.0 / delta, Parity::Even, false).expect("T d_x is an even multiplier")
}
