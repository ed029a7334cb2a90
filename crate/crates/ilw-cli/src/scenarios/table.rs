use ilw_core::symbols::{symbol_table, SymbolRow, SYMBOL_TABLE_HEADER};
use ilw_core::Depth;

use super::*;

pub const THRESHOLDS: &[Threshold] = &[Threshold::new("q_squared_ulps", Relation::Le, 4.0)];

/// Largest `|q^2 - omega'|` over the rows, in units of the last place of `omega'`.
pub fn q_squared_ulps(rows: &[SymbolRow]) -> f64 {
    rows.iter()
        .map(|r| {
            let ulp = (r.omega_prime.abs() * f64::EPSILON).max(f64::MIN_POSITIVE);
            (r.q * r.q - r.omega_prime).abs() / ulp
        })
        .fold(0.0, f64::max)
}

pub fn run(cfg: &ScenarioConfig) -> Result<Outcome, RunError> {
    let t = cfg.table.expect("validated");
    let delta = Depth::new(t.delta).map_err(|e| config_error(Issue::new("table.delta", e.to_string())))?;
    let rows = symbol_table(delta, t.xi_min, t.xi_max, t.samples).map_err(RunError::Numerical)?;
    let mut out = Outcome::default();
    out.checks.push(THRESHOLDS[0].check(q_squared_ulps(&rows)));
    out.tables.push(Table {
        file: "symbols.csv".into(),
        header: SYMBOL_TABLE_HEADER.into(),
        rows: rows.iter().map(SymbolRow::csv).collect(),
    });
    Ok(out)
}
