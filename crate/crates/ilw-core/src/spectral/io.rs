use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use super::{Field, Grid};
use crate::error::{Error, Result};

const HEADER_BYTES: usize = 24;

/// Two-column CSV `x,u`.
pub fn write_csv(f: &Field, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "x,u")?;
    for (x, u) in f.grid().x().iter().zip(f.values()) {
        writeln!(w, "{x:e},{u:e}")?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a CSV written by [`write_csv`]; the grid is reconstructed from the first spacing.
pub fn read_csv(path: &Path) -> Result<Field> {
    let reader = BufReader::new(fs::File::open(path)?);
    let mut xs = Vec::new();
    let mut us = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if i == 0 {
            if line.trim() != "x,u" {
                return Err(Error::Format(format!("unexpected header `{line}`")));
            }
            continue;
        }
        let mut parts = line.split(',');
        let mut next = || -> Result<f64> {
            parts.next().and_then(|s| s.trim().parse().ok()).ok_or_else(|| Error::Format(format!("bad row {i}: `{line}`")))
        };
        xs.push(next()?);
        us.push(next()?);
    }
    if xs.len() < 2 {
        return Err(Error::Format("need at least two rows".into()));
    }
    let grid = Grid::new(xs.len(), -2.0 * xs[0])?;
    Field::from_values(&grid, us)
}

/// Raw snapshot: `n` as u64, `L` and `t` as f64, then `n` values, all little-endian.
pub fn write_binary(f: &Field, t: f64, path: &Path) -> Result<()> {
    let grid = f.grid();
    let mut bytes = Vec::with_capacity(HEADER_BYTES + 8 * grid.n());
    bytes.extend_from_slice(&(grid.n() as u64).to_le_bytes());
    bytes.extend_from_slice(&grid.length().to_le_bytes());
    bytes.extend_from_slice(&t.to_le_bytes());
    for v in f.values() {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    fs::write(path, bytes)?;
    Ok(())
}

/// Reads a snapshot written by [`write_binary`], returning the field and its time.
pub fn read_binary(path: &Path) -> Result<(Field, f64)> {
    let bytes = fs::read(path)?;
    if bytes.len() < HEADER_BYTES {
        return Err(Error::Format("truncated header".into()));
    }
    let word = |i: usize| -> [u8; 8] { bytes[8 * i..8 * i + 8].try_into().expect("8-byte slice") };
    let n = u64::from_le_bytes(word(0)) as usize;
    let length = f64::from_le_bytes(word(1));
    let t = f64::from_le_bytes(word(2));
    if bytes.len() != HEADER_BYTES + 8 * n {
        return Err(Error::Format(format!("expected {} payload values", n)));
    }
    let grid: Arc<Grid> = Grid::new(n, length)?;
    let values = (0..n).map(|j| f64::from_le_bytes(word(3 + j))).collect();
    Ok((Field::from_values(&grid, values)?, t))
}
