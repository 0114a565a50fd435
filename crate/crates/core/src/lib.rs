//! Calculus of variations on time scales, unified through the contingent
//! epiderivative.
//!
//! - [`timescale`]: time scales as finite unions of intervals and points,
//!   jump operators, graininess, κ-truncations, discretization.
//! - [`calculus`]: delta/nabla derivatives, shifts and integrals of sampled
//!   functions.
//! - [`epiderivative`]: the piecewise-linear extension `f̄` of a sampled
//!   function and its contingent epiderivative and cone.
//! - [`lagrangian`]: Lagrangians `L(t, y, v)` parsed from text, with exact
//!   symbolic partials.
//! - [`variational`]: the unified functional, its Euler–Lagrange residual for
//!   any direction `u ≠ 0`, and Newton solvers for the basic and the
//!   isoperimetric problem.
//! - [`problem_file`]: the line-oriented problem description read by the CLI.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calculus;
pub mod epiderivative;
pub mod error;
pub mod lagrangian;
pub mod problem_file;
pub mod timescale;
pub mod variational;

pub use calculus::GridFunction;
pub use epiderivative::{EpiCone, PLFunction};
pub use error::{Error, Result};
pub use lagrangian::{Expr, ExprError, Lagrangian, Var};
pub use timescale::{PointClass, SampleGrid, Segment, TimeScale};
pub use variational::{IsoProblem, Problem, Solution, SolveOptions, VerifyReport};

/// Formats a real with 17 significant digits (lossless for `f64`);
/// infinities print as `inf` / `-inf`.
pub fn format_real(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{x:.16e}")
}
