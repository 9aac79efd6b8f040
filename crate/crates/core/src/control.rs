//! Piecewise-constant integer controls on a uniform time grid.
//!
//! A feasible control takes one value from a finite integer level set `W`
//! on each of `N` cells of `(0,T)`. Its total variation is the sum of the
//! absolute jump heights at the interior cell interfaces; boundary values
//! contribute nothing (the seminorm lives on the open interval).

use crate::{Error, Result};
use std::io::{BufRead, Write};

/// Uniform partition of the time interval `(0, horizon)` into `n_cells`
/// cells of width `dt = horizon / n_cells`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    horizon: f64,
    n_cells: usize,
}

impl TimeGrid {
    pub fn new(horizon: f64, n_cells: usize) -> Result<Self> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::Invalid(format!("horizon must be positive, got {horizon}")));
        }
        if n_cells == 0 {
            return Err(Error::Invalid("grid needs at least one cell".into()));
        }
        Ok(Self { horizon, n_cells })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn dt(&self) -> f64 {
        self.horizon / self.n_cells as f64
    }

    /// Left endpoint of cell `i`.
    pub fn cell_start(&self, i: usize) -> f64 {
        i as f64 * self.dt()
    }

    /// Midpoint of cell `i`.
    pub fn cell_mid(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dt()
    }
}

/// The finite, strictly increasing set of integer levels the control may
/// take.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSet {
    levels: Vec<i64>,
}

impl LevelSet {
    pub fn new(levels: Vec<i64>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Invalid("level set must be nonempty".into()));
        }
        if !levels.windows(2).all(|p| p[0] < p[1]) {
            return Err(Error::Invalid("levels must be strictly increasing".into()));
        }
        Ok(Self { levels })
    }

    pub fn levels(&self) -> &[i64] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, v: i64) -> bool {
        self.levels.binary_search(&v).is_ok()
    }

    pub fn min(&self) -> i64 {
        self.levels[0]
    }

    pub fn max(&self) -> i64 {
        *self.levels.last().unwrap()
    }

    /// Position of `v` in the level list.
    pub fn index_of(&self, v: i64) -> Option<usize> {
        self.levels.binary_search(&v).ok()
    }
}

/// A jump of the control at an interior cell interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwitchPoint {
    /// Interface index `i` (between cells `i-1` and `i`), `1 <= i <= N-1`.
    pub interface: usize,
    /// Interface time `i * dt`.
    pub time: f64,
    /// Control value on the left cell.
    pub left: i64,
    /// Control value on the right cell.
    pub right: i64,
}

/// A feasible control: one level per cell.
///
/// Values are stored as raw integers rather than level-set indices so that
/// step arithmetic `w + d` stays direct; feasibility is checked on
/// construction. Immutable afterwards, hence safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlGrid {
    grid: TimeGrid,
    levels: LevelSet,
    values: Vec<i64>,
}

impl ControlGrid {
    pub fn new(grid: TimeGrid, levels: LevelSet, values: Vec<i64>) -> Result<Self> {
        if values.len() != grid.n_cells() {
            return Err(Error::LengthMismatch { expected: grid.n_cells(), got: values.len() });
        }
        if let Some(v) = values.iter().find(|v| !levels.contains(**v)) {
            return Err(Error::Invalid(format!("control value {v} is not in the level set")));
        }
        Ok(Self { grid, levels, values })
    }

    /// Constant control `w = level` on every cell.
    pub fn constant(grid: TimeGrid, levels: LevelSet, level: i64) -> Result<Self> {
        let values = vec![level; grid.n_cells()];
        Self::new(grid, levels, values)
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn levels(&self) -> &LevelSet {
        &self.levels
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn values_f64(&self) -> Vec<f64> {
        self.values.iter().map(|&v| v as f64).collect()
    }

    pub fn n_cells(&self) -> usize {
        self.values.len()
    }

    /// Total variation: sum of absolute jump heights over the interior
    /// interfaces. A nonnegative integer for integer levels.
    pub fn jump_tv(&self) -> u64 {
        self.values
            .windows(2)
            .map(|p| p[0].abs_diff(p[1]))
            .sum()
    }

    /// Interior interfaces where the control jumps, in increasing time
    /// order. The jump is located exactly at the shared interface `i*dt`.
    pub fn switch_times(&self) -> Vec<SwitchPoint> {
        let dt = self.grid.dt();
        self.values
            .windows(2)
            .enumerate()
            .filter(|(_, p)| p[0] != p[1])
            .map(|(i, p)| SwitchPoint {
                interface: i + 1,
                time: (i + 1) as f64 * dt,
                left: p[0],
                right: p[1],
            })
            .collect()
    }

    /// `L^1(0,T)` distance between two controls on the same grid and level
    /// set: `dt * sum_i |w1_i - w2_i|`.
    pub fn l1_distance(&self, other: &ControlGrid) -> Result<f64> {
        self.check_compatible(other)?;
        let units: u64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.abs_diff(*b))
            .sum();
        Ok(self.grid.dt() * units as f64)
    }

    /// The stepped control `w + d`, validated against the level set.
    pub fn with_step(&self, d: &[i64]) -> Result<Self> {
        if d.len() != self.values.len() {
            return Err(Error::LengthMismatch { expected: self.values.len(), got: d.len() });
        }
        let values: Vec<i64> = self.values.iter().zip(d).map(|(w, di)| w + di).collect();
        if let Some(v) = values.iter().find(|v| !self.levels.contains(**v)) {
            return Err(Error::InfeasibleStep(format!("stepped value {v} leaves the level set")));
        }
        Ok(Self { grid: self.grid, levels: self.levels.clone(), values })
    }

    fn check_compatible(&self, other: &ControlGrid) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!(
                "time grids differ: {:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        if self.levels != other.levels {
            return Err(Error::GridMismatch("level sets differ".into()));
        }
        Ok(())
    }

    /// Step-plot friendly CSV: header `t,w`, one row per cell left endpoint,
    /// plus a terminal row at `t = horizon` repeating the last value.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,w")?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(out, "{},{}", self.grid.cell_start(i), v)?;
        }
        writeln!(out, "{},{}", self.grid.horizon(), self.values.last().unwrap())
    }

    /// Parse a control written by [`ControlGrid::write_csv`] back onto the
    /// given level set. The horizon is recovered from the terminal row.
    pub fn read_csv<R: BufRead>(reader: R, levels: LevelSet) -> Result<Self> {
        let mut rows: Vec<(f64, i64)> = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::Invalid(format!("csv read: {e}")))?;
            let line = line.trim();
            if line.is_empty() || (lineno == 0 && line == "t,w") {
                continue;
            }
            let mut parts = line.split(',');
            let t: f64 = parts
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::Invalid(format!("bad csv row {lineno}: {line}")))?;
            let w: i64 = parts
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::Invalid(format!("bad csv row {lineno}: {line}")))?;
            rows.push((t, w));
        }
        if rows.len() < 2 {
            return Err(Error::Invalid("control csv needs at least two rows".into()));
        }
        let horizon = rows.last().unwrap().0;
        let n_cells = rows.len() - 1;
        let grid = TimeGrid::new(horizon, n_cells)?;
        let values = rows[..n_cells].iter().map(|r| r.1).collect();
        Self::new(grid, levels, values)
    }
}
