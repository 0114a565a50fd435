use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use epitime::calculus::grid_function_from_csv;
use epitime::lagrangian::Var;
use epitime::problem_file::{parse_timescale, ProblemFile, DEFAULT_H};
use epitime::{format_real, Error, Expr, ExprError, GridFunction, PLFunction, SampleGrid, SolveOptions, TimeScale};

#[derive(Parser)]
#[command(name = "epitime", version, about = "Variational problems on time scales")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the Euler–Lagrange equation of a problem file; writes `t,y,residual`.
    Solve {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        h: Option<f64>,
        #[arg(long, default_value_t = 1e-10, allow_hyphen_values = true)]
        tol: f64,
        #[arg(long, default_value_t = 100)]
        max_iter: usize,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the Euler–Lagrange residual of a given trajectory; writes `t,residual`.
    Residual {
        file: PathBuf,
        /// CSV with columns `t,y` on the problem's grid.
        #[arg(long)]
        y: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        h: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Contingent epiderivative of the piecewise-linear extension of f at t in direction u.
    Epideriv {
        #[command(flatten)]
        input: SampledInput,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, allow_hyphen_values = true)]
        u: f64,
    },
    /// Delta/nabla derivatives and integrals of sampled functions.
    Calc {
        op: CalcOp,
        #[command(flatten)]
        input: SampledInput,
        /// Lower integration bound (default: a).
        #[arg(long, allow_hyphen_values = true)]
        from: Option<f64>,
        /// Upper integration bound (default: b).
        #[arg(long, allow_hyphen_values = true)]
        to: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CalcOp {
    Deriv,
    Nabla,
    Int,
    Nint,
}

/// A time scale (file or inline literal) and a function sampled on its grid.
#[derive(Args)]
struct SampledInput {
    /// Time-scale file: a bare literal or a problem file's `[timescale]` section.
    scale_file: Option<PathBuf>,
    /// Inline time scale, e.g. "points 0 1 2; interval 3 4".
    #[arg(long, conflicts_with = "scale_file")]
    scale: Option<String>,
    /// CSV with columns `t,value` on the discretized grid.
    #[arg(long, required_unless_present = "expr", conflicts_with = "expr")]
    f: Option<PathBuf>,
    /// Sample f from an expression in t instead of a CSV.
    #[arg(long = "fn", id = "expr")]
    expr: Option<String>,
    /// Discretization step for interval parts of the scale.
    #[arg(long, default_value_t = DEFAULT_H)]
    h: f64,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::IterationLimit { .. }
            | Error::SingularJacobian { .. }
            | Error::LineSearch { .. }
            | Error::Infeasible(_)
            | Error::Expr(ExprError::Eval { .. }) => 3,
            _ => 2,
        };
        Self { code, message: e.to_string() }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&Path>) -> Outcome {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display()))),
        None => stdout(text),
    }
}

/// Writes to stdout; a closed pipe (`| head`) ends the output quietly.
fn stdout(text: &str) -> Outcome {
    use std::io::{ErrorKind, Write};
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(Failure::input(format!("stdout: {e}"))),
        _ => Ok(()),
    }
}

fn load_problem(path: &Path) -> Result<ProblemFile, Failure> {
    ProblemFile::parse(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

impl SampledInput {
    fn scale(&self) -> Result<TimeScale, Failure> {
        match (&self.scale_file, &self.scale) {
            (Some(path), _) => {
                parse_timescale(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
            }
            (None, Some(lit)) => lit.parse().map_err(|e: Error| Failure::input(format!("--scale: {e}"))),
            (None, None) => Err(Failure::input("give a time-scale file or --scale")),
        }
    }

    fn function(&self, grid: &SampleGrid) -> Result<GridFunction, Failure> {
        if let Some(text) = &self.expr {
            let e = Expr::parse(text).map_err(|e| Failure::input(format!("--fn: {e}")))?;
            if e.depends_on(Var::Y) || e.depends_on(Var::V) {
                return Err(Failure::input("--fn: the expression may only use t"));
            }
            let values = grid
                .points()
                .iter()
                .map(|&t| e.eval(t, 0.0, 0.0))
                .collect::<Result<Vec<_>, _>>()
                .map_err(Error::from)?;
            return Ok(GridFunction::new(grid.clone(), values)?);
        }
        let path = self.f.as_ref().expect("clap requires --f or --fn");
        grid_function_from_csv(grid, &read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
    }
}

fn solve(file: &Path, h: Option<f64>, tol: f64, max_iter: usize, out: Option<&Path>) -> Outcome {
    let pf = load_problem(file)?;
    let opts = SolveOptions { tol, max_iter };
    let solution = match pf.iso_problem(h)? {
        Some(iso) => iso.solve(&opts)?,
        None => pf.problem(h)?.solve(&opts)?,
    };
    let mut summary = String::new();
    let _ = writeln!(summary, "# functional_value = {}", format_real(solution.functional_value));
    let _ = writeln!(summary, "# residual_max = {}", format_real(solution.residual_max));
    let _ = writeln!(summary, "# iterations = {}", solution.iterations);
    if let (Some(l0), Some(l), Some(normal)) = (solution.lambda0, solution.lambda, solution.normal) {
        let _ = writeln!(summary, "# lambda0 = {}", format_real(l0));
        let _ = writeln!(summary, "# lambda = {}", format_real(l));
        let _ = writeln!(summary, "# normal = {normal}");
        if let Some(g) = solution.constraint_residual_max {
            let _ = writeln!(summary, "# constraint_residual_max = {}", format_real(g));
        }
        if solution.degenerate {
            let _ = writeln!(summary, "# degenerate = true");
        }
    }
    match out {
        Some(path) => {
            emit(&solution.to_csv(), Some(path))?;
            stdout(&summary.replace("# ", ""))
        }
        None => emit(&(summary + &solution.to_csv()), None),
    }
}

fn residual(file: &Path, y: &Path, h: Option<f64>, out: Option<&Path>) -> Outcome {
    let problem = load_problem(file)?.problem(h)?;
    let y = grid_function_from_csv(problem.grid(), &read(y)?)
        .map_err(|e| Failure::input(format!("{}: {e}", y.display())))?;
    let r = problem.el_residual(&y)?;
    let mut csv = String::from("t,residual\n");
    for (&t, &v) in r.points().iter().zip(r.values()) {
        let _ = writeln!(csv, "{},{}", format_real(t), format_real(v));
    }
    emit(&csv, out)
}

fn epideriv(input: &SampledInput, t: f64, u: f64) -> Outcome {
    let scale = input.scale()?;
    let f = input.function(&scale.discretize(input.h)?)?;
    let fbar = PLFunction::extend(&f)?;
    let closed = fbar.epiderivative(t, u)?;
    let estimate = fbar.epiderivative_liminf_auto(t, u)?;
    stdout(&format!("closed,liminf\n{},{}\n", format_real(closed), format_real(estimate)))
}

fn calc(op: CalcOp, input: &SampledInput, from: Option<f64>, to: Option<f64>, out: Option<&Path>) -> Outcome {
    let scale = input.scale()?;
    let f = input.function(&scale.discretize(input.h)?)?;
    let (c, d) = (from.unwrap_or(scale.a()), to.unwrap_or(scale.b()));
    match op {
        CalcOp::Deriv => emit(&f.delta()?.to_csv(), out),
        CalcOp::Nabla => emit(&f.nabla()?.to_csv(), out),
        CalcOp::Int => emit(&format!("{}\n", format_real(f.delta_integral(c, d)?)), out),
        CalcOp::Nint => emit(&format!("{}\n", format_real(f.nabla_integral(c, d)?)), out),
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Solve { file, h, tol, max_iter, out } => solve(&file, h, tol, max_iter, out.as_deref()),
        Command::Residual { file, y, h, out } => residual(&file, &y, h, out.as_deref()),
        Command::Epideriv { input, t, u } => epideriv(&input, t, u),
        Command::Calc { op, input, from, to, out } => calc(op, &input, from, to, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
