//! Tabulated initial conditions and CSV snapshots.

use std::io::{BufRead, Write};

use super::{Grid, LatticeWavefunction, PathIntegralError, Units};
use crate::amplitude::Amplitude;
use crate::experiments::format_significant;

pub const SNAPSHOT_HEADER: &str = "t,x,density,re,im";

/// Reads rows `x re im` (whitespace or comma separated, `#` starts a
/// comment). The `x` column must be uniform; it defines the grid.
pub fn read_tabulated<R: BufRead>(reader: R, units: Units) -> Result<LatticeWavefunction, PathIntegralError> {
    let mut xs = Vec::new();
    let mut values = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| PathIntegralError::Io(e.to_string()))?;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .collect();
        if fields.len() != 3 {
            return Err(PathIntegralError::Parse {
                line: i + 1,
                message: format!("expected 3 columns (x re im), found {}", fields.len()),
            });
        }
        let mut nums = [0.0; 3];
        for (slot, f) in nums.iter_mut().zip(&fields) {
            *slot = f
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| PathIntegralError::Parse {
                    line: i + 1,
                    message: format!("`{f}` is not a finite number"),
                })?;
        }
        xs.push(nums[0]);
        values.push(Amplitude::new(nums[1], nums[2]));
    }
    if xs.len() < 3 {
        return Err(PathIntegralError::Parse {
            line: 0,
            message: format!("need at least 3 rows, found {}", xs.len()),
        });
    }
    let grid = Grid::new(xs[0], xs[xs.len() - 1], xs.len())?;
    for (j, x) in xs.iter().enumerate() {
        if (x - grid.x(j)).abs() > 1e-6 * grid.dx() {
            return Err(PathIntegralError::NonUniform(j + 1));
        }
    }
    LatticeWavefunction::new(grid, values, units)
}

/// One row per grid point: time, position, `|ψ|²`, real and imaginary
/// parts, each with 12 significant digits. No header line.
pub fn write_snapshot_csv<W: Write>(mut out: W, psi: &LatticeWavefunction) -> std::io::Result<()> {
    let t = format_significant(psi.time(), 12);
    for (x, c) in psi.grid().points().zip(psi.values()) {
        writeln!(
            out,
            "{t},{},{},{},{}",
            format_significant(x, 12),
            format_significant(c.norm_sqr(), 12),
            format_significant(c.re, 12),
            format_significant(c.im, 12)
        )?;
    }
    Ok(())
}
