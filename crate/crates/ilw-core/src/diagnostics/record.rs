//! One row of the diagnostics CSV.

use serde::{Deserialize, Serialize};

pub const CSV_COLUMNS: [&str; 18] = [
    "t",
    "i1",
    "i2",
    "i3",
    "i4",
    "v",
    "j",
    "je",
    "window_mass",
    "far_field_l2",
    "x_moment",
    "f_integral",
    "weighted_moment_pred",
    "local_hm_left",
    "local_hm_right",
    "smoothing_halfnorm",
    "corollary_integrand",
    "edge_mass_flag",
];

/// Snapshot diagnostics; `None` marks a quantity that does not apply to the run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticRecord {
    pub t: f64,
    pub i1: Option<f64>,
    pub i2: Option<f64>,
    pub i3: Option<f64>,
    pub i4: Option<f64>,
    pub v: Option<f64>,
    pub j: Option<f64>,
    pub je: Option<f64>,
    pub window_mass: Option<f64>,
    pub far_field_l2: Option<f64>,
    pub x_moment: Option<f64>,
    pub f_integral: Option<f64>,
    pub weighted_moment_pred: Option<f64>,
    pub local_hm_left: Option<f64>,
    pub local_hm_right: Option<f64>,
    pub smoothing_halfnorm: Option<f64>,
    pub corollary_integrand: Option<f64>,
    pub edge_mass_flag: Option<bool>,
}

impl DiagnosticRecord {
    pub fn at(t: f64) -> Self {
        Self { t, ..Self::default() }
    }

    pub fn csv_header() -> String {
        CSV_COLUMNS.join(",")
    }

    pub fn csv_row(&self) -> String {
        let cell = |v: Option<f64>| v.map(|v| format!("{v:e}")).unwrap_or_default();
        let mut cells = vec![format!("{:e}", self.t)];
        cells.extend(self.values().into_iter().map(cell));
        cells.push(self.edge_mass_flag.map(|b| u8::from(b).to_string()).unwrap_or_default());
        cells.join(",")
    }

    fn values(&self) -> [Option<f64>; 16] {
        [
            self.i1,
            self.i2,
            self.i3,
            self.i4,
            self.v,
            self.j,
            self.je,
            self.window_mass,
            self.far_field_l2,
            self.x_moment,
            self.f_integral,
            self.weighted_moment_pred,
            self.local_hm_left,
            self.local_hm_right,
            self.smoothing_halfnorm,
            self.corollary_integrand,
        ]
    }

    /// Every present numeric value is finite.
    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.values().iter().flatten().all(|v| v.is_finite())
    }
}
