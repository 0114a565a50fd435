//! The demo's computations, free of any JavaScript types so they run and
//! test natively.

use epitime::lagrangian::Var;
use epitime::{Expr, GridFunction, IsoProblem, Lagrangian, PLFunction, Problem, Solution, SolveOptions, TimeScale};

/// Largest grid the page will solve on; keeps a slider drag responsive.
pub const MAX_POINTS: usize = 20_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub t: Vec<f64>,
    pub y: Vec<f64>,
    pub functional: f64,
    pub residual_max: f64,
    pub iterations: usize,
    /// `NaN` for unconstrained problems.
    pub lambda: f64,
    pub normal: Option<bool>,
}

impl From<Solution> for Curve {
    fn from(s: Solution) -> Self {
        Self {
            t: s.y.points().to_vec(),
            y: s.y.values().to_vec(),
            functional: s.functional_value,
            residual_max: s.residual_max,
            iterations: s.iterations,
            lambda: s.lambda.unwrap_or(f64::NAN),
            normal: s.normal,
        }
    }
}

fn scale(literal: &str) -> Result<TimeScale, String> {
    literal.parse().map_err(|e| format!("time scale: {e}"))
}

fn lagrangian(text: &str, what: &str) -> Result<Lagrangian, String> {
    text.parse().map_err(|e| format!("{what}: {e}"))
}

fn problem(scale_text: &str, l: &str, u: f64, alpha: f64, beta: f64, h: f64) -> Result<Problem, String> {
    let p = Problem::new(scale(scale_text)?, u, lagrangian(l, "L")?, alpha, beta, h).map_err(|e| e.to_string())?;
    if p.grid().len() > MAX_POINTS {
        return Err(format!("{} grid points; increase h (limit {MAX_POINTS})", p.grid().len()));
    }
    Ok(p)
}

/// `[a, b]` of a time-scale literal.
pub fn scale_bounds(literal: &str) -> Result<[f64; 2], String> {
    let s = scale(literal)?;
    Ok([s.a(), s.b()])
}

pub fn extremal(scale: &str, l: &str, u: f64, alpha: f64, beta: f64, h: f64) -> Result<Curve, String> {
    let p = problem(scale, l, u, alpha, beta, h)?;
    p.solve(&SolveOptions::default()).map(Curve::from).map_err(|e| e.to_string())
}

#[allow(clippy::too_many_arguments)]
pub fn isoperimetric(
    scale: &str,
    l: &str,
    g: &str,
    u: f64,
    w: f64,
    k: f64,
    alpha: f64,
    beta: f64,
    h: f64,
) -> Result<Curve, String> {
    let p = problem(scale, l, u, alpha, beta, h)?;
    let iso = IsoProblem::new(p, lagrangian(g, "G")?, w, k).map_err(|e| e.to_string())?;
    iso.solve(&SolveOptions::default()).map(Curve::from).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    /// Breakpoints and values of `f̄`.
    pub t: Vec<f64>,
    pub f: Vec<f64>,
    pub value: f64,
    /// `D↑f̄(t)(1)` and `D↑f̄(t)(-1)`, closed form.
    pub forward: f64,
    pub backward: f64,
    /// The same two numbers from difference quotients.
    pub forward_estimate: f64,
    pub backward_estimate: f64,
}

pub fn epiderivative_profile(scale_text: &str, f: &str, at: f64, h: f64) -> Result<Profile, String> {
    let e = Expr::parse(f).map_err(|e| format!("f: {e}"))?;
    if e.depends_on(Var::Y) || e.depends_on(Var::V) {
        return Err("f may only depend on t".into());
    }
    let grid = scale(scale_text)?.discretize(h).map_err(|e| e.to_string())?;
    if grid.len() > MAX_POINTS {
        return Err(format!("{} grid points; increase h (limit {MAX_POINTS})", grid.len()));
    }
    let values = grid
        .points()
        .iter()
        .map(|&t| e.eval(t, 0.0, 0.0))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| format!("f: {e}"))?;
    let sampled = GridFunction::new(grid, values).map_err(|e| e.to_string())?;
    let fbar = PLFunction::extend(&sampled).map_err(|e| e.to_string())?;
    let err = |e: epitime::Error| e.to_string();
    Ok(Profile {
        t: fbar.breakpoints().to_vec(),
        f: fbar.values().to_vec(),
        value: fbar.eval(at).map_err(err)?,
        forward: fbar.epiderivative(at, 1.0).map_err(err)?,
        backward: fbar.epiderivative(at, -1.0).map_err(err)?,
        forward_estimate: fbar.epiderivative_liminf_auto(at, 1.0).map_err(err)?,
        backward_estimate: fbar.epiderivative_liminf_auto(at, -1.0).map_err(err)?,
    })
}
