//! Time scales `lambda(t)`, `mu(t)` of the virial functionals, defined for `t >= 10`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub const SCHEDULE_START: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "regime", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightSchedule {
    /// `lambda = t^b / log t`, `mu = t^a log^2 t`, window radius `C lambda`.
    Thm1 { a: f64, b: f64, capital_c: f64 },
    /// `lambda = mu = t log^(1+eps) t`.
    FarField { epsilon: f64 },
    /// `lambda = t log^(1+eps) t`, `mu = t`.
    Corollary { epsilon: f64 },
}

impl WeightSchedule {
    /// `b = 1 - a` with `a` in `[0, 1/2)`.
    pub fn thm1(a: f64, capital_c: f64) -> Result<Self> {
        let s = Self::Thm1 { a, b: 1.0 - a, capital_c };
        s.validate()?;
        Ok(s)
    }

    pub fn far_field(epsilon: f64) -> Result<Self> {
        let s = Self::FarField { epsilon };
        s.validate()?;
        Ok(s)
    }

    pub fn corollary(epsilon: f64) -> Result<Self> {
        let s = Self::Corollary { epsilon };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Thm1 { a, b, capital_c } => {
                if !(0.0..0.5).contains(&a) {
                    return Err(invalid("a", format!("must lie in [0, 1/2), got {a}")));
                }
                if (b - (1.0 - a)).abs() > 1e-12 {
                    return Err(invalid("b", format!("must equal 1 - a = {}, got {b}", 1.0 - a)));
                }
                if !(capital_c.is_finite() && capital_c > 0.0) {
                    return Err(invalid("capital_c", format!("must be positive, got {capital_c}")));
                }
            }
            Self::FarField { epsilon } | Self::Corollary { epsilon } => {
                if !(epsilon.is_finite() && epsilon > 0.0) {
                    return Err(invalid("epsilon", format!("must be positive, got {epsilon}")));
                }
            }
        }
        Ok(())
    }

    fn check(t: f64) -> Result<f64> {
        if t >= SCHEDULE_START && t.is_finite() {
            Ok(t.ln())
        } else {
            Err(Error::ScheduleUndefined { t })
        }
    }

    fn long_scale(t: f64, lg: f64, epsilon: f64) -> (f64, f64) {
        let v = t * lg.powf(1.0 + epsilon);
        (v, v * (1.0 / t + (1.0 + epsilon) / (t * lg)))
    }

    /// `(lambda, lambda')`.
    pub fn lambda(&self, t: f64) -> Result<(f64, f64)> {
        let lg = Self::check(t)?;
        Ok(match *self {
            Self::Thm1 { b, .. } => {
                let l = t.powf(b) / lg;
                (l, l / t * (b - 1.0 / lg))
            }
            Self::FarField { epsilon } | Self::Corollary { epsilon } => Self::long_scale(t, lg, epsilon),
        })
    }

    /// `(mu, mu')`.
    pub fn mu(&self, t: f64) -> Result<(f64, f64)> {
        let lg = Self::check(t)?;
        Ok(match *self {
            Self::Thm1 { a, .. } => {
                let m = t.powf(a) * lg * lg;
                (m, m / t * (a + 2.0 / lg))
            }
            Self::FarField { epsilon } => Self::long_scale(t, lg, epsilon),
            Self::Corollary { .. } => (t, 1.0),
        })
    }

    /// `C t^b / log t` for the first regime.
    pub fn window_radius(&self, t: f64) -> Result<f64> {
        match *self {
            Self::Thm1 { capital_c, .. } => Ok(capital_c * self.lambda(t)?.0),
            _ => Err(invalid("schedule", "the decay window is defined for the thm1 regime only")),
        }
    }
}
