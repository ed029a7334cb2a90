use thiserror::Error;

use crate::spectral::Parity;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("multiplier with parity {parity:?} and factor_i = {factor_i} does not map real fields to real fields")]
    NonRealMultiplier { parity: Parity, factor_i: bool },

    #[error("multiplier is not {parity:?} on the grid (mismatch {mismatch:e} at z = {z})")]
    ParityViolation { parity: Parity, z: f64, mismatch: f64 },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("nonlinearity overflowed at degree {degree}")]
    NonlinearOverflow { degree: u32 },

    #[error("step ending at t = {t} failed: {source}")]
    StepFailed { t: f64, source: Box<Error> },

    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },

    #[error("blow-up at t = {t}: max|u| = {max_abs:e} exceeds {limit:e}")]
    BlowUp { t: f64, max_abs: f64, limit: f64 },

    #[error("no soliton found for c = {c}, delta = {delta}: best relative residual {best_residual:e}")]
    SolitonNotFound { c: f64, delta: f64, best_residual: f64 },

    #[error("weight schedule undefined at t = {t}; it requires t >= 10")]
    ScheduleUndefined { t: f64 },

    #[error("window [{lo}, {hi}] does not fit in the periodic domain [{}, {})", -half, half)]
    WindowOutsideDomain { lo: f64, hi: f64, half: f64 },

    #[error("derivative order {m} exceeds the resolvable maximum {max}")]
    UnresolvableOrder { m: u32, max: u32 },

    #[error("snapshot format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { name, reason: reason.into() }
}
