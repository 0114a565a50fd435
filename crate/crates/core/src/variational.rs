//! The unified variational problem on a time scale.
//!
//! For a direction `u ≠ 0` the functional is
//!
//! ```text
//! u > 0:  u Σ L(t_i, u y(σ(t_i)), u y^Δ(t_i)) μ(t_i)     over t_i ∈ [a, b)
//! u < 0:  u Σ L(t_i, u y(ρ(t_i)), u y^∇(t_i)) ν(t_i)     over t_i ∈ (a, b]
//! ```
//!
//! where `u y^Δ` and `u y^∇` are the contingent epiderivative of the
//! extension `ȳ` in direction `u`. Its Euler–Lagrange residual is
//!
//! ```text
//! R(t) = u g^Δ(t) - u ∂₂L(...)   (u > 0),     R(t) = u g^∇(t) - u ∂₂L(...)   (u < 0)
//! ```
//!
//! with `g = ∂₃L` evaluated along the same arguments. Dense parts of the scale
//! are discretized first and the refined grid is then treated as a purely
//! discrete time scale.
//!
//! Every interior unknown `y_j` has exactly one residual point: `t_{j-1}` for
//! `u > 0` and `t_{j+1}` for `u < 0`. There the gradient of the discretized
//! functional satisfies `∂F/∂y_j = -u · w · R`, `w` the graininess at the
//! residual point, so Newton's method is run on the weighted residual `w·R`.

use crate::calculus::GridFunction;
use crate::error::{Error, Result};
use crate::lagrangian::{Lagrangian, Partials};
use crate::timescale::{SampleGrid, TimeScale};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Stationarity tolerance on the weighted residual (and on `|K[y] - K|`).
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 100 }
    }
}

/// A Lagrangian paired with the direction it is evaluated in.
#[derive(Debug, Clone, Copy)]
struct Side<'a> {
    lagrangian: &'a Lagrangian,
    u: f64,
}

/// Arguments and partials of `L` on one cell.
#[derive(Debug, Clone, Copy)]
struct Cell {
    lo: usize,
    hi: usize,
    /// Node feeding the `y` slot (`σ` or `ρ` shift).
    shift: usize,
    width: f64,
    partials: Partials,
}

/// One Euler–Lagrange condition, attached to interior unknown `j`.
#[derive(Debug, Clone, Copy)]
struct Row {
    point: usize,
    width: f64,
    residual: f64,
    /// `∂R/∂y_k` for `k = j-1, j, j+1`.
    slope: [f64; 3],
}

impl<'a> Side<'a> {
    fn forward(&self) -> bool {
        self.u > 0.0
    }

    /// Nodes `(lo, hi, shift)` of the cell evaluated at point `p`.
    fn nodes(&self, p: usize) -> (usize, usize, usize) {
        if self.forward() {
            (p, p + 1, p + 1)
        } else {
            (p - 1, p, p - 1)
        }
    }

    fn cell_points(&self, len: usize) -> std::ops::Range<usize> {
        if self.forward() {
            0..len - 1
        } else {
            1..len
        }
    }

    /// Residual point of interior unknown `j`.
    fn residual_point(&self, j: usize) -> usize {
        if self.forward() {
            j - 1
        } else {
            j + 1
        }
    }

    fn args(&self, t: &[f64], y: &[f64], p: usize) -> (usize, usize, usize, f64, f64, f64) {
        let (lo, hi, shift) = self.nodes(p);
        let width = t[hi] - t[lo];
        let v = self.u * ((y[hi] - y[lo]) / width);
        (lo, hi, shift, width, self.u * y[shift], v)
    }

    fn cell(&self, t: &[f64], y: &[f64], p: usize) -> Result<Cell> {
        let (lo, hi, shift, width, ys, v) = self.args(t, y, p);
        let partials = self.lagrangian.partials(t[p], ys, v)?;
        Ok(Cell { lo, hi, shift, width, partials })
    }

    fn functional(&self, t: &[f64], y: &[f64]) -> Result<f64> {
        let mut sum = 0.0;
        for p in self.cell_points(t.len()) {
            let (_, _, _, width, ys, v) = self.args(t, y, p);
            sum += self.lagrangian.value(t[p], ys, v)? * width;
        }
        Ok(self.u * sum)
    }

    /// Gradient of the functional with respect to every node.
    fn functional_gradient(&self, t: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        let mut grad = vec![0.0; t.len()];
        let u = self.u;
        for p in self.cell_points(t.len()) {
            let c = self.cell(t, y, p)?;
            grad[c.shift] += u * u * c.partials.dy * c.width;
            grad[c.hi] += u * u * c.partials.dv;
            grad[c.lo] -= u * u * c.partials.dv;
        }
        Ok(grad)
    }

    /// Euler–Lagrange rows for the interior unknowns `1..len-1`.
    fn rows(&self, t: &[f64], y: &[f64]) -> Result<Vec<Row>> {
        let len = t.len();
        let mut cells = vec![None; len];
        for p in self.cell_points(len) {
            cells[p] = Some(self.cell(t, y, p)?);
        }
        let u = self.u;
        let mut rows = Vec::with_capacity(len.saturating_sub(2));
        for j in 1..len - 1 {
            let p = self.residual_point(j);
            let (c_lo, c_hi) = if self.forward() { (p, p + 1) } else { (p - 1, p) };
            let lower = cells[c_lo].expect("cell exists");
            let upper = cells[c_hi].expect("cell exists");
            let here = cells[p].expect("cell exists");
            let width = here.width;
            let residual = u * (upper.partials.dv - lower.partials.dv) / width - u * here.partials.dy;

            let mut slope = [0.0; 3];
            let mut add = |k: usize, x: f64| {
                // k ∈ {j-1, j, j+1} by construction
                slope[k + 1 - j] += x;
            };
            // d g(c) / d y_k and d ∂₂L(c) / d y_k
            let mut accumulate = |c: &Cell, scale_g: f64, scale_l2: f64| {
                let pd = &c.partials;
                add(c.shift, u * (scale_g * pd.dyv + scale_l2 * pd.dyy));
                add(c.hi, u * (scale_g * pd.dvv + scale_l2 * pd.dyv) / c.width);
                add(c.lo, -u * (scale_g * pd.dvv + scale_l2 * pd.dyv) / c.width);
            };
            accumulate(&upper, u / width, 0.0);
            accumulate(&lower, -u / width, 0.0);
            accumulate(&here, 0.0, -u);
            rows.push(Row { point: p, width, residual, slope });
        }
        Ok(rows)
    }

    fn residual_function(&self, grid: &SampleGrid, y: &[f64]) -> Result<GridFunction> {
        let rows = self.rows(grid.points(), y)?;
        let range = if self.forward() { 0..grid.len() - 2 } else { 2..grid.len() };
        debug_assert!(rows.iter().map(|r| r.point).eq(range.clone()));
        GridFunction::new(grid.slice(range), rows.iter().map(|r| r.residual).collect())
    }
}

/// Basic problem: extremize the unified functional subject to `y(a) = alpha`, `y(b) = beta`.
#[derive(Debug, Clone)]
pub struct Problem {
    scale: TimeScale,
    u: f64,
    lagrangian: Lagrangian,
    alpha: f64,
    beta: f64,
    h: f64,
    grid: SampleGrid,
}

impl Problem {
    pub fn new(scale: TimeScale, u: f64, lagrangian: Lagrangian, alpha: f64, beta: f64, h: f64) -> Result<Self> {
        check_direction("u", u)?;
        if !(alpha.is_finite() && beta.is_finite()) {
            return Err(Error::Parameter("boundary values must be finite".into()));
        }
        let grid = scale.discretize(h)?;
        if grid.len() < 2 {
            return Err(Error::DegenerateScale("the scale must contain at least two points".into()));
        }
        Ok(Self { scale, u, lagrangian, alpha, beta, h, grid })
    }

    pub fn scale(&self) -> &TimeScale {
        &self.scale
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn lagrangian(&self) -> &Lagrangian {
        &self.lagrangian
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn grid(&self) -> &SampleGrid {
        &self.grid
    }

    fn side(&self) -> Side<'_> {
        Side { lagrangian: &self.lagrangian, u: self.u }
    }

    /// Affine interpolant between `(a, alpha)` and `(b, beta)` on the grid,
    /// with the boundary values exact.
    pub fn affine_guess(&self) -> GridFunction {
        let (a, b) = (self.grid.first(), self.grid.last());
        let n = self.grid.len();
        let values = self
            .grid
            .points()
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                if i == 0 {
                    self.alpha
                } else if i == n - 1 {
                    self.beta
                } else {
                    self.alpha + (self.beta - self.alpha) * ((t - a) / (b - a))
                }
            })
            .collect();
        GridFunction::new(self.grid.clone(), values).expect("finite affine values")
    }

    fn check_trajectory(&self, y: &GridFunction) -> Result<()> {
        if y.points() != self.grid.points() {
            return Err(Error::Contract("trajectory is not sampled on the problem grid".into()));
        }
        let v = y.values();
        if v[0] != self.alpha || v[v.len() - 1] != self.beta {
            return Err(Error::Contract(format!(
                "boundary values ({}, {}) differ from (alpha, beta) = ({}, {})",
                v[0],
                v[v.len() - 1],
                self.alpha,
                self.beta
            )));
        }
        Ok(())
    }

    fn require_interior(&self) -> Result<()> {
        if self.grid.len() < 3 {
            return Err(Error::DegenerateScale("the discretized scale has no interior point to optimize".into()));
        }
        Ok(())
    }

    /// Discretized value of the unified functional along `y`.
    pub fn functional_value(&self, y: &GridFunction) -> Result<f64> {
        self.check_trajectory(y)?;
        self.side().functional(self.grid.points(), y.values())
    }

    /// Unified Euler–Lagrange residual along `y`, one value per interior
    /// unknown: on points `t_0..t_{n-2}` for `u > 0`, `t_2..t_n` for `u < 0`.
    pub fn el_residual(&self, y: &GridFunction) -> Result<GridFunction> {
        self.check_trajectory(y)?;
        self.require_interior()?;
        self.side().residual_function(&self.grid, y.values())
    }

    /// Gradient of the discretized functional with respect to the interior values.
    pub fn functional_gradient(&self, y: &GridFunction) -> Result<Vec<f64>> {
        self.check_trajectory(y)?;
        let g = self.side().functional_gradient(self.grid.points(), y.values())?;
        Ok(g[1..g.len() - 1].to_vec())
    }

    /// Newton's method with backtracking on the weighted residual, started
    /// from the affine interpolant.
    pub fn solve(&self, opts: &SolveOptions) -> Result<Solution> {
        check_tol(opts)?;
        self.require_interior()?;
        let t = self.grid.points();
        let side = self.side();
        let mut y = self.affine_guess().values().to_vec();

        let equations =
            |y: &[f64]| -> Result<Vec<f64>> { Ok(side.rows(t, y)?.iter().map(|r| r.width * r.residual).collect()) };
        let merit = |e: &[f64]| 0.5 * e.iter().map(|x| x * x).sum::<f64>();

        let mut iterations = 0;
        loop {
            let rows = side.rows(t, &y)?;
            let e: Vec<f64> = rows.iter().map(|r| r.width * r.residual).collect();
            let norm = max_abs(&e);
            if norm <= opts.tol {
                break;
            }
            if iterations >= opts.max_iter {
                return Err(self.iteration_limit(iterations, norm, y));
            }
            let jac = Tridiagonal::from_rows(&rows, |r| r.width);
            let rhs: Vec<f64> = e.iter().map(|x| -x).collect();
            let step = jac.solve(&rhs).ok_or(Error::SingularJacobian { iteration: iterations })?;
            y = line_search(&y, &step, merit(&e), |cand| Ok(merit(&equations(cand)?)))
                .ok_or(Error::LineSearch { iteration: iterations })?;
            iterations += 1;
        }

        let y = GridFunction::new(self.grid.clone(), y)?;
        let residual = self.side().residual_function(&self.grid, y.values())?;
        Ok(Solution {
            functional_value: self.side().functional(t, y.values())?,
            residual_max: max_abs(residual.values()),
            residual,
            y,
            iterations,
            lambda: None,
            lambda0: None,
            normal: None,
            constraint_residual_max: None,
            degenerate: false,
        })
    }

    fn iteration_limit(&self, iterations: usize, norm: f64, y: Vec<f64>) -> Error {
        let last = GridFunction::new(self.grid.clone(), y).unwrap_or_else(|_| self.affine_guess());
        Error::IterationLimit { iterations, norm, last: Box::new(last) }
    }

    /// Checks boundary conditions and the Euler–Lagrange residual of a candidate.
    pub fn verify(&self, y: &GridFunction, tol: f64) -> VerifyReport {
        let mut report = VerifyReport {
            boundary_ok: false,
            alpha_error: f64::NAN,
            beta_error: f64::NAN,
            residual_max: f64::NAN,
            functional_value: f64::NAN,
            passed: false,
            failures: Vec::new(),
        };
        if y.points() != self.grid.points() {
            report.failures.push("trajectory is not sampled on the problem grid".into());
            return report;
        }
        let v = y.values();
        report.alpha_error = (v[0] - self.alpha).abs();
        report.beta_error = (v[v.len() - 1] - self.beta).abs();
        report.boundary_ok = report.alpha_error == 0.0 && report.beta_error == 0.0;
        if !report.boundary_ok {
            report.failures.push(format!(
                "boundary values ({}, {}) differ from (alpha, beta) = ({}, {})",
                v[0],
                v[v.len() - 1],
                self.alpha,
                self.beta
            ));
        }
        let side = self.side();
        match side.functional(self.grid.points(), v) {
            Ok(f) => report.functional_value = f,
            Err(e) => report.failures.push(e.to_string()),
        }
        if self.grid.len() < 3 {
            report.failures.push("no interior points".into());
        } else {
            match side.residual_function(&self.grid, v) {
                Ok(r) => {
                    report.residual_max = max_abs(r.values());
                    if !(report.residual_max <= tol) {
                        report
                            .failures
                            .push(format!("Euler–Lagrange residual {:e} exceeds {tol:e}", report.residual_max));
                    }
                }
                Err(e) => report.failures.push(e.to_string()),
            }
        }
        report.passed = report.failures.is_empty();
        report
    }
}

/// Result of [`Problem::verify`].
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub boundary_ok: bool,
    pub alpha_error: f64,
    pub beta_error: f64,
    pub residual_max: f64,
    pub functional_value: f64,
    pub passed: bool,
    pub failures: Vec<String>,
}

/// Isoperimetric problem: the basic problem plus `K[y] = K`, where `K[y]`
/// is the unified functional of `G` in direction `w`.
#[derive(Debug, Clone)]
pub struct IsoProblem {
    base: Problem,
    constraint: Lagrangian,
    w: f64,
    k: f64,
}

impl IsoProblem {
    pub fn new(base: Problem, constraint: Lagrangian, w: f64, k: f64) -> Result<Self> {
        check_direction("w", w)?;
        if !k.is_finite() {
            return Err(Error::Parameter("K must be finite".into()));
        }
        Ok(Self { base, constraint, w, k })
    }

    pub fn base(&self) -> &Problem {
        &self.base
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn constraint(&self) -> &Lagrangian {
        &self.constraint
    }

    fn side(&self) -> Side<'_> {
        Side { lagrangian: &self.constraint, u: self.w }
    }

    /// `K[y]`.
    pub fn constraint_value(&self, y: &GridFunction) -> Result<f64> {
        self.base.check_trajectory(y)?;
        self.side().functional(self.base.grid.points(), y.values())
    }

    /// Euler–Lagrange residual of the constraint functional (direction `w`).
    pub fn constraint_residual(&self, y: &GridFunction) -> Result<GridFunction> {
        self.base.check_trajectory(y)?;
        self.base.require_interior()?;
        self.side().residual_function(&self.base.grid, y.values())
    }

    /// Newton's method on `(y, λ)` for
    ///
    /// ```text
    /// w_j (R_L - λ R_G) = 0   for every interior unknown,    K[y] - K = 0,
    /// ```
    ///
    /// each residual taken at the point its own direction assigns to `y_j`
    /// and `w_j` the graininess at the `L`-side point. Afterwards, if the
    /// weighted `G`-side residual is within `tol`, `y` is an extremal of
    /// `K` and is reported abnormal with `(λ₀, λ) = (0, 1)`; otherwise
    /// `(λ₀, λ) = (1, λ)`.
    pub fn solve(&self, opts: &SolveOptions) -> Result<Solution> {
        check_tol(opts)?;
        let base = &self.base;
        base.require_interior()?;
        let t = base.grid.points();
        let lside = base.side();
        let gside = self.side();
        let target = self.k;
        let degenerate = self.constraint.is_trajectory_independent();

        let mut y = base.affine_guess().values().to_vec();
        let mut lambda = 0.0;

        struct State {
            e: Vec<f64>,
            k: f64,
        }
        let evaluate = |y: &[f64], lambda: f64| -> Result<(State, Vec<Row>, Vec<Row>)> {
            let lrows = lside.rows(t, y)?;
            let grows = gside.rows(t, y)?;
            let e = lrows.iter().zip(&grows).map(|(l, g)| l.width * (l.residual - lambda * g.residual)).collect();
            let k = gside.functional(t, y)? - target;
            Ok((State { e, k }, lrows, grows))
        };
        let merit = |s: &State| 0.5 * (s.e.iter().map(|x| x * x).sum::<f64>() + s.k * s.k);

        let mut iterations = 0;
        loop {
            let (state, lrows, grows) = evaluate(&y, lambda)?;
            let norm = max_abs(&state.e).max(state.k.abs());
            if norm <= opts.tol {
                break;
            }
            if iterations >= opts.max_iter {
                return Err(base.iteration_limit(iterations, norm, y));
            }
            let combined: Vec<Row> = lrows
                .iter()
                .zip(&grows)
                .map(|(l, g)| Row {
                    point: l.point,
                    width: l.width,
                    residual: l.residual - lambda * g.residual,
                    slope: [
                        l.slope[0] - lambda * g.slope[0],
                        l.slope[1] - lambda * g.slope[1],
                        l.slope[2] - lambda * g.slope[2],
                    ],
                })
                .collect();
            let jac = Tridiagonal::from_rows(&combined, |r| r.width);
            let d_lambda_col: Vec<f64> = lrows.iter().zip(&grows).map(|(l, g)| -l.width * g.residual).collect();
            let grad_full = gside.functional_gradient(t, &y)?;
            let k_row = &grad_full[1..grad_full.len() - 1];

            let singular = Error::SingularJacobian { iteration: iterations };
            let neg_e: Vec<f64> = state.e.iter().map(|x| -x).collect();
            let x1 = jac.solve(&neg_e).ok_or(singular)?;

            let constraint_inert = max_abs(k_row) == 0.0 && max_abs(&d_lambda_col) == 0.0;
            let (dy, dl) = if constraint_inert {
                if state.k.abs() > opts.tol {
                    return Err(Error::Infeasible(format!(
                        "K[y] = {} does not depend on y and differs from K = {target}",
                        state.k + target
                    )));
                }
                (x1, 0.0)
            } else {
                let x2 = jac.solve(&d_lambda_col).ok_or(Error::SingularJacobian { iteration: iterations })?;
                let schur = dot(k_row, &x2);
                let scale = max_abs(k_row) * max_abs(&x2) * k_row.len() as f64;
                if schur.abs() <= 1e-13 * scale || schur == 0.0 {
                    if state.k.abs() > opts.tol {
                        return Err(Error::Infeasible(format!("no Newton progress on K[y] - K = {:e}", state.k)));
                    }
                    (x1, 0.0)
                } else {
                    let dl = (dot(k_row, &x1) + state.k) / schur;
                    let dy = x1.iter().zip(&x2).map(|(a, b)| a - b * dl).collect();
                    (dy, dl)
                }
            };

            let phi0 = merit(&state);
            let mut alpha = 1.0;
            let mut accepted = None;
            for _ in 0..MAX_BACKTRACK {
                let cand_y = add_interior(&y, &dy, alpha);
                let cand_l = lambda + alpha * dl;
                if let Ok((s, _, _)) = evaluate(&cand_y, cand_l) {
                    if merit(&s) <= phi0 * (1.0 - 2.0 * ARMIJO * alpha) {
                        accepted = Some((cand_y, cand_l));
                        break;
                    }
                }
                alpha *= 0.5;
            }
            let (ny, nl) = accepted.ok_or(Error::LineSearch { iteration: iterations })?;
            y = ny;
            lambda = nl;
            iterations += 1;
        }

        let grows = gside.rows(t, &y)?;
        let lrows = lside.rows(t, &y)?;
        let g_weighted = lrows.iter().zip(&grows).map(|(l, g)| (l.width * g.residual).abs()).fold(0.0, f64::max);
        let normal = g_weighted > opts.tol;
        let (lambda0, lambda) = if normal { (1.0, lambda) } else { (0.0, 1.0) };

        let y = GridFunction::new(base.grid.clone(), y)?;
        // rows pair by interior unknown; in the mixed-sign case the two sides sit on shifted points
        let combined = lrows.iter().zip(&grows).map(|(l, g)| lambda0 * l.residual - lambda * g.residual).collect();
        let rl = lside.residual_function(&base.grid, y.values())?;
        let residual = GridFunction::new(rl.grid().clone(), combined)?;
        Ok(Solution {
            functional_value: lside.functional(t, y.values())?,
            residual_max: max_abs(residual.values()),
            residual,
            y,
            iterations,
            lambda: Some(lambda),
            lambda0: Some(lambda0),
            normal: Some(normal),
            constraint_residual_max: Some(g_weighted),
            degenerate,
        })
    }
}

/// Output of [`Problem::solve`] and [`IsoProblem::solve`].
#[derive(Debug, Clone)]
pub struct Solution {
    pub y: GridFunction,
    pub functional_value: f64,
    /// Unified Euler–Lagrange residual at the residual points: of `L` alone,
    /// or `λ₀ R_L − λ R_G` for an isoperimetric problem.
    pub residual: GridFunction,
    pub residual_max: f64,
    pub iterations: usize,
    pub lambda: Option<f64>,
    pub lambda0: Option<f64>,
    /// `Some(false)` when `y` is an extremal of the constraint functional.
    pub normal: Option<bool>,
    /// Largest graininess-weighted `G`-side residual, compared against `tol`
    /// to decide abnormality.
    pub constraint_residual_max: Option<f64>,
    /// The constraint integrand depends on neither `y` nor `v`; `λ` is then arbitrary.
    pub degenerate: bool,
}

impl Solution {
    /// CSV with header `t,y,residual`; the residual is empty where it is undefined.
    pub fn to_csv(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::from("t,y,residual\n");
        for (&t, &y) in self.y.points().iter().zip(self.y.values()) {
            let r = self.residual.at(t).map(crate::format_real).unwrap_or_default();
            let _ = writeln!(out, "{},{},{}", crate::format_real(t), crate::format_real(y), r);
        }
        out
    }
}

const MAX_BACKTRACK: usize = 40;
const ARMIJO: f64 = 1e-4;

fn check_direction(name: &str, u: f64) -> Result<()> {
    if u == 0.0 {
        return Err(Error::Parameter(format!(
            "{name} = 0: the functional is constant and every admissible y is a solution"
        )));
    }
    if !u.is_finite() {
        return Err(Error::Parameter(format!("{name} must be finite")));
    }
    Ok(())
}

fn check_tol(opts: &SolveOptions) -> Result<()> {
    if !(opts.tol > 0.0) {
        return Err(Error::Parameter(format!("tolerance {} must be positive", opts.tol)));
    }
    Ok(())
}

fn max_abs(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `y + alpha * step` on the interior nodes; boundary nodes untouched.
fn add_interior(y: &[f64], step: &[f64], alpha: f64) -> Vec<f64> {
    let mut out = y.to_vec();
    for (o, s) in out[1..y.len() - 1].iter_mut().zip(step) {
        *o += alpha * s;
    }
    out
}

fn line_search(y: &[f64], step: &[f64], phi0: f64, merit: impl Fn(&[f64]) -> Result<f64>) -> Option<Vec<f64>> {
    let mut alpha = 1.0;
    for _ in 0..MAX_BACKTRACK {
        let cand = add_interior(y, step, alpha);
        if let Ok(phi) = merit(&cand) {
            if phi <= phi0 * (1.0 - 2.0 * ARMIJO * alpha) {
                return Some(cand);
            }
        }
        alpha *= 0.5;
    }
    None
}

/// Tridiagonal matrix, solved by LU with partial pivoting.
#[derive(Debug, Clone)]
pub(crate) struct Tridiagonal {
    sub: Vec<f64>,
    diag: Vec<f64>,
    sup: Vec<f64>,
}

impl Tridiagonal {
    pub(crate) fn new(sub: Vec<f64>, diag: Vec<f64>, sup: Vec<f64>) -> Self {
        debug_assert_eq!(sub.len() + 1, diag.len());
        debug_assert_eq!(sup.len() + 1, diag.len());
        Self { sub, diag, sup }
    }

    /// Rows of the weighted residual `weight(row) * R` in the interior unknowns.
    fn from_rows(rows: &[Row], weight: impl Fn(&Row) -> f64) -> Self {
        let n = rows.len();
        let mut sub = vec![0.0; n.saturating_sub(1)];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n.saturating_sub(1)];
        for (i, r) in rows.iter().enumerate() {
            let w = weight(r);
            if i > 0 {
                sub[i - 1] = w * r.slope[0];
            }
            diag[i] = w * r.slope[1];
            if i + 1 < n {
                sup[i] = w * r.slope[2];
            }
        }
        Self::new(sub, diag, sup)
    }

    pub(crate) fn solve(&self, rhs: &[f64]) -> Option<Vec<f64>> {
        let n = self.diag.len();
        if n == 0 {
            return Some(Vec::new());
        }
        let scale = self.diag.iter().chain(&self.sub).chain(&self.sup).fold(0.0f64, |m, v| m.max(v.abs()));
        if !(scale > 0.0) || !scale.is_finite() {
            return None;
        }
        let tiny = scale * f64::EPSILON * 4.0;
        let mut dl = self.sub.clone();
        let mut d = self.diag.clone();
        let mut du = self.sup.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i].abs() <= tiny {
                    return None;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        if d[n - 1].abs() <= tiny {
            return None;
        }
        let mut b = rhs.to_vec();
        for i in 0..n - 1 {
            if swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - dl[i] * b[i];
            } else {
                b[i + 1] -= dl[i] * b[i];
            }
        }
        b[n - 1] /= d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
        }
        b.iter().all(|x| x.is_finite()).then_some(b)
    }
}
