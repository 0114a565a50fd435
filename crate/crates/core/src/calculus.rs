//! Delta and nabla calculus for functions sampled on a [`SampleGrid`].
//!
//! The grid is treated as a purely discrete time scale: every quotient is the
//! scattered-point formula, which is exact on discrete scales and a one-sided
//! O(h) approximation on subdivided intervals. Integrals are rectangle sums,
//! left for Δ and right for ∇.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::format_real;
use crate::timescale::SampleGrid;

/// Real values attached to the points of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: SampleGrid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: SampleGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Contract(format!("{} values for {} grid points", values.len(), grid.len())));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Contract(format!("non-finite value at t = {}", grid.points()[i])));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: SampleGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.points().iter().map(|&t| f(t)).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &SampleGrid {
        &self.grid
    }

    pub fn points(&self) -> &[f64] {
        self.grid.points()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at an exact grid point.
    pub fn at(&self, t: f64) -> Result<f64> {
        self.grid.index_of(t).map(|i| self.values[i]).ok_or(Error::NotOnGrid(t))
    }

    pub fn map(&self, f: impl Fn(f64, f64) -> f64) -> GridFunction {
        let values = self.points().iter().zip(&self.values).map(|(&t, &v)| f(t, v)).collect();
        GridFunction { grid: self.grid.clone(), values }
    }

    /// Pointwise combination of two functions on the same grid.
    pub fn zip_with(&self, other: &GridFunction, f: impl Fn(f64, f64) -> f64) -> Result<GridFunction> {
        if self.points() != other.points() {
            return Err(Error::Contract("functions live on different grids".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(&x, &y)| f(x, y)).collect();
        Ok(GridFunction { grid: self.grid.clone(), values })
    }

    /// Restriction to `points[range]`.
    pub fn slice(&self, range: std::ops::Range<usize>) -> GridFunction {
        GridFunction { grid: self.grid.slice(range.clone()), values: self.values[range].to_vec() }
    }

    /// Drops the last point (domain `T^κ`).
    pub fn without_last(&self) -> GridFunction {
        self.slice(0..self.len().saturating_sub(1))
    }

    /// Drops the first point (domain `T_κ`).
    pub fn without_first(&self) -> GridFunction {
        self.slice(1.min(self.len())..self.len())
    }

    fn require_two(&self) -> Result<()> {
        if self.len() < 2 {
            return Err(Error::DegenerateScale("difference quotients need at least two grid points".into()));
        }
        Ok(())
    }

    /// `f^Δ(t_i) = (f(t_{i+1}) - f(t_i)) / (t_{i+1} - t_i)` on every point but the last.
    pub fn delta(&self) -> Result<GridFunction> {
        self.require_two()?;
        let t = self.points();
        let values = (0..self.len() - 1).map(|i| forward_quotient(t, &self.values, i)).collect();
        Ok(GridFunction { grid: self.grid.slice(0..self.len() - 1), values })
    }

    /// `f^∇(t_i) = (f(t_i) - f(t_{i-1})) / (t_i - t_{i-1})` on every point but the first.
    pub fn nabla(&self) -> Result<GridFunction> {
        self.require_two()?;
        let t = self.points();
        let values = (1..self.len()).map(|i| forward_quotient(t, &self.values, i - 1)).collect();
        Ok(GridFunction { grid: self.grid.slice(1..self.len()), values })
    }

    /// `f^σ = f ∘ σ`, defined on every point but the last.
    pub fn sigma_shift(&self) -> Result<GridFunction> {
        self.require_two()?;
        Ok(GridFunction { grid: self.grid.slice(0..self.len() - 1), values: self.values[1..].to_vec() })
    }

    /// `f^ρ = f ∘ ρ`, defined on every point but the first.
    pub fn rho_shift(&self) -> Result<GridFunction> {
        self.require_two()?;
        Ok(GridFunction { grid: self.grid.slice(1..self.len()), values: self.values[..self.len() - 1].to_vec() })
    }

    fn bounds(&self, c: f64, d: f64) -> Result<(usize, usize)> {
        let i = self.grid.index_of(c).ok_or(Error::NotOnGrid(c))?;
        let j = self.grid.index_of(d).ok_or(Error::NotOnGrid(d))?;
        if i > j {
            return Err(Error::Parameter(format!("integration bounds reversed: {c} > {d}")));
        }
        Ok((i, j))
    }

    /// `∫_c^d f Δt` as `Σ f(t_i) μ(t_i)` over `t_i ∈ [c, d)`.
    pub fn delta_integral(&self, c: f64, d: f64) -> Result<f64> {
        let (i, j) = self.bounds(c, d)?;
        let t = self.points();
        Ok((i..j).map(|k| self.values[k] * (t[k + 1] - t[k])).sum())
    }

    /// `∫_c^d f ∇t` as `Σ f(t_i) ν(t_i)` over `t_i ∈ (c, d]`.
    pub fn nabla_integral(&self, c: f64, d: f64) -> Result<f64> {
        let (i, j) = self.bounds(c, d)?;
        let t = self.points();
        Ok((i + 1..=j).map(|k| self.values[k] * (t[k] - t[k - 1])).sum())
    }

    /// CSV with header `t,value`, 17 significant digits per number.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,value\n");
        for (&t, &v) in self.points().iter().zip(&self.values) {
            let _ = writeln!(out, "{},{}", format_real(t), format_real(v));
        }
        out
    }
}

/// Slope of the chord over `[t_i, t_{i+1}]`. Every forward/backward quotient
/// in the crate goes through this so that equal chords compare bitwise equal.
pub(crate) fn forward_quotient(t: &[f64], f: &[f64], i: usize) -> f64 {
    (f[i + 1] - f[i]) / (t[i + 1] - t[i])
}

/// Reads the first `columns` fields of each CSV row as numbers. A
/// non-numeric first line is taken as a header; blank lines and lines
/// starting with `#` are skipped.
pub fn parse_csv_columns(text: &str, columns: usize) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    let mut seen_content = false;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let first_content = !seen_content;
        seen_content = true;
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if first_content && fields.first().is_some_and(|f| f.parse::<f64>().is_err()) {
            continue; // header
        }
        if fields.len() < columns {
            return Err(Error::Contract(format!(
                "line {}: expected {columns} columns, found {}",
                lineno + 1,
                fields.len()
            )));
        }
        let row = fields[..columns]
            .iter()
            .map(|f| f.parse::<f64>().map_err(|_| Error::Contract(format!("line {}: bad number '{f}'", lineno + 1))))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// Matches `t,value` rows against a grid, point by point.
///
/// Times must agree with the grid to within `1e-9 (1 + |t|)`; the grid's own
/// coordinates are kept.
pub fn grid_function_from_csv(grid: &SampleGrid, text: &str) -> Result<GridFunction> {
    let rows = parse_csv_columns(text, 2)?;
    if rows.len() != grid.len() {
        return Err(Error::Contract(format!("CSV has {} rows but the grid has {} points", rows.len(), grid.len())));
    }
    for (row, &t) in rows.iter().zip(grid.points()) {
        if (row[0] - t).abs() > 1e-9 * (1.0 + t.abs()) {
            return Err(Error::Contract(format!("CSV time {} does not match grid point {t}", row[0])));
        }
    }
    GridFunction::new(grid.clone(), rows.into_iter().map(|r| r[1]).collect())
}
