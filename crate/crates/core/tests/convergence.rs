//! Dense-scale behaviour: refinement error shrinks at least linearly in h
//! wherever the discrete problem is not already exact.

use epitime::{GridFunction, IsoProblem, Problem, SolveOptions, TimeScale};

fn unit() -> TimeScale {
    "interval 0 1".parse().unwrap()
}

#[test]
fn delta_integral_converges_at_first_order() {
    let err = |h: f64| {
        let grid = unit().discretize(h).unwrap();
        let f = GridFunction::from_fn(grid, f64::exp).unwrap();
        (f.delta_integral(0.0, 1.0).unwrap() - (1f64.exp() - 1.0)).abs()
    };
    let ratio = err(1e-2) / err(5e-3);
    assert!(ratio >= 1.8, "ratio {ratio}");
}

fn sinh_error(u: f64, h: f64) -> f64 {
    // y'' = y, y(0) = 0, y(1) = 1
    let p = Problem::new(unit(), u, "v^2 + y^2".parse().unwrap(), 0.0, 1.0, h).unwrap();
    let s = p.solve(&SolveOptions::default()).unwrap();
    s.y.points().iter().zip(s.y.values()).map(|(t, y)| (y - t.sinh() / 1f64.sinh()).abs()).fold(0.0, f64::max)
}

#[test]
fn solution_error_halves_with_h() {
    for u in [1.0, -1.0] {
        let (coarse, fine) = (sinh_error(u, 1e-2), sinh_error(u, 5e-3));
        assert!(coarse > 1e-8, "u = {u}: error {coarse} is not discretization error");
        assert!(coarse / fine >= 1.8, "u = {u}: {coarse} / {fine}");
    }
}

#[test]
fn mixed_sign_isoperimetric_matches_classical_limit() {
    let base = Problem::new(unit(), 1.0, "v^2".parse().unwrap(), 0.0, 0.0, 1e-3).unwrap();
    let iso = IsoProblem::new(base, "y".parse().unwrap(), -1.0, 1.0 / 6.0).unwrap();
    let s = iso.solve(&SolveOptions::default()).unwrap();
    assert!((s.y.at(0.5).unwrap() - 0.25).abs() <= 1e-3);
    // the constraint side is a nabla residual with the opposite sign
    assert!((s.lambda.unwrap() + 4.0).abs() <= 1e-2, "λ = {:?}", s.lambda);
    assert_eq!(s.normal, Some(true));
    assert!(s.residual_max < 1e-6, "{}", s.residual_max);
}
