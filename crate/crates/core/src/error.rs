use thiserror::Error;

use crate::calculus::GridFunction;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a point of the time scale")]
    NotInScale(f64),

    #[error("{0} is not a grid point")]
    NotOnGrid(f64),

    #[error("{t} lies outside [{a}, {b}]")]
    OutOfDomain { t: f64, a: f64, b: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("degenerate time scale: {0}")]
    DegenerateScale(String),

    #[error("invalid time scale: {0}")]
    InvalidScale(String),

    #[error("point ({t}, {lambda}) lies below the graph (value {value})")]
    NotInEpigraph { t: f64, lambda: f64, value: f64 },

    #[error(transparent)]
    Expr(#[from] crate::lagrangian::ExprError),

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("no convergence after {iterations} iterations (stationarity norm {norm:e})")]
    IterationLimit { iterations: usize, norm: f64, last: Box<GridFunction> },

    #[error("singular Jacobian at iteration {iteration}")]
    SingularJacobian { iteration: usize },

    #[error("line search failed at iteration {iteration}")]
    LineSearch { iteration: usize },

    #[error("constraint cannot be met: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
