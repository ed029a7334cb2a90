use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{signed_index, Field, Grid, Transforms};
use crate::error::{invalid, Error, Result};

/// Polynomial flux `F(s) = leading s^k + sum_j coeffs[j] s^(k+1+j)`; the equation carries
/// `-d_x F(u)`.
///
/// The classic ILW, BO and KdV equations use [`Nonlinearity::classic`], `F = u^2 / 2`.
/// The generalized families use [`Nonlinearity::power`], `F = u^k + p_k(u)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Nonlinearity {
    k: u32,
    leading: f64,
    coeffs: Vec<f64>,
}

impl Nonlinearity {
    pub fn new(k: u32, leading: f64, coeffs: Vec<f64>) -> Result<Self> {
        if k < 2 {
            return Err(invalid("k", format!("must be at least 2, got {k}")));
        }
        if !leading.is_finite() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(invalid("coeffs", "coefficients must be finite"));
        }
        Ok(Self { k, leading, coeffs })
    }

    /// `u u_x`, i.e. `F(u) = u^2 / 2`.
    pub fn classic() -> Self {
        Self { k: 2, leading: 0.5, coeffs: Vec::new() }
    }

    /// `F(u) = u^k + a_{k+1} u^{k+1} + ...`.
    pub fn power(k: u32, coeffs: Vec<f64>) -> Result<Self> {
        Self::new(k, 1.0, coeffs)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn leading(&self) -> f64 {
        self.leading
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> u32 {
        self.k + self.coeffs.len() as u32
    }

    fn terms(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        std::iter::once((self.k, self.leading)).chain(self.coeffs.iter().enumerate().map(move |(j, &c)| (self.k + 1 + j as u32, c)))
    }

    pub fn flux(&self, s: f64) -> f64 {
        self.terms().map(|(p, c)| c * s.powi(p as i32)).sum()
    }

    /// `G(s) = int_0^s F`.
    pub fn antiderivative(&self, s: f64) -> f64 {
        self.terms().map(|(p, c)| c * s.powi(p as i32 + 1) / (p + 1) as f64).sum()
    }

    /// `Phi(s) = int_0^s r F'(r) dr`, the density in the rate of `int x u^2`.
    pub fn moment_potential(&self, s: f64) -> f64 {
        self.terms().map(|(p, c)| c * p as f64 * s.powi(p as i32 + 1) / (p + 1) as f64).sum()
    }

    /// Highest-degree term that is non-finite at `s`.
    fn overflow_degree(&self, s: f64) -> u32 {
        self.terms().filter(|&(p, c)| !(c * s.powi(p as i32)).is_finite()).map(|(p, _)| p).max().unwrap_or(self.degree())
    }
}

/// Dealiasing rule for products evaluated in physical space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dealias {
    /// Keep `|k| < n/3` in the input and the output.
    #[default]
    TwoThirds,
    /// Evaluate on a grid of at least `(d+1) n / 2` points for a degree-`d` flux.
    ZeroPad,
    None,
}

impl Dealias {
    pub(crate) fn mask(self, n: usize) -> Vec<bool> {
        let cutoff = ((n - 1) / 3) as i64;
        (0..n)
            .map(|j| {
                let k = signed_index(j, n);
                k != -(n as i64) / 2 && (self != Dealias::TwoThirds || k.abs() <= cutoff)
            })
            .collect()
    }
}

/// Evaluates the dealiased spectrum of `F(u)` from the spectrum of `u`.
pub(crate) struct FluxEvaluator {
    nl: Nonlinearity,
    n: usize,
    mask: Vec<bool>,
    transforms: Transforms,
    m: usize,
    buf: Vec<Complex64>,
}

impl FluxEvaluator {
    pub(crate) fn new(grid: &Arc<Grid>, nl: &Nonlinearity, dealias: Dealias) -> Self {
        let n = grid.n();
        let m = match dealias {
            Dealias::ZeroPad => {
                let want = ((nl.degree() as usize + 1) * n).div_ceil(2);
                want + want % 2
            }
            _ => n,
        };
        let transforms = if m == n { grid.transforms().clone() } else { grid.padded_transforms(m) };
        Self { nl: nl.clone(), n, mask: dealias.mask(n), transforms, m, buf: vec![Complex64::default(); m] }
    }

    /// Writes the dealiased DFT of `F(u)` (length `n`, DFT order) into `out`.
    pub(crate) fn eval(&mut self, u_hat: &[Complex64], out: &mut [Complex64]) -> Result<()> {
        let (n, m) = (self.n, self.m);
        self.buf.iter_mut().for_each(|c| *c = Complex64::default());
        for j in 0..n {
            if self.mask[j] {
                let k = signed_index(j, n);
                let target = if k >= 0 { k as usize } else { (m as i64 + k) as usize };
                self.buf[target] = u_hat[j];
            }
        }
        self.transforms.inverse.process(&mut self.buf);
        let scale = 1.0 / n as f64;
        let mut worst: Option<f64> = None;
        for c in self.buf.iter_mut() {
            let u = c.re * scale;
            let f = self.nl.flux(u);
            if !f.is_finite() && worst.map_or(true, |w| u.abs() > w.abs()) {
                worst = Some(u);
            }
            *c = Complex64::new(f, 0.0);
        }
        if let Some(u) = worst {
            return Err(Error::NonlinearOverflow { degree: self.nl.overflow_degree(u) });
        }
        self.transforms.forward.process(&mut self.buf);
        let back = n as f64 / m as f64;
        for j in 0..n {
            out[j] = if self.mask[j] {
                let k = signed_index(j, n);
                let source = if k >= 0 { k as usize } else { (m as i64 + k) as usize };
                self.buf[source] * back
            } else {
                Complex64::default()
            };
        }
        Ok(())
    }
}

/// `d_x F(f)` with the given dealiasing rule. The output has zero mean.
pub fn nonlinear_flux(f: &Field, nl: &Nonlinearity, dealias: Dealias) -> Result<Field> {
    let grid = f.grid();
    let mut eval = FluxEvaluator::new(grid, nl, dealias);
    let mut out = vec![Complex64::default(); grid.n()];
    eval.eval(f.spectrum(), &mut out)?;
    for (c, &z) in out.iter_mut().zip(grid.z()) {
        *c *= Complex64::new(0.0, z);
    }
    out[0] = Complex64::default();
    out[grid.nyquist_index()] = Complex64::default();
    Field::from_spectrum(grid, out)
}
