//! Piecewise-linear extension of a sampled function and its contingent
//! epiderivative.
//!
//! For a function `f` sampled on a time scale, the extension `f̄` on `[a, b]`
//! is the function whose epigraph is the union of the epigraphs of `f` and of
//! the chords spanning every gap. Between consecutive samples `f̄` is affine,
//! so its contingent epiderivative has a closed form in terms of one-sided
//! slopes, and the difference quotients that define it become exact as soon
//! as the step no longer crosses a breakpoint.

use std::fmt::Write as _;

use crate::calculus::{forward_quotient, GridFunction};
use crate::error::{Error, Result};
use crate::format_real;

/// Continuous piecewise-affine function on `[a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PLFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl PLFunction {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::Contract("a piecewise-linear function needs at least two breakpoints".into()));
        }
        if breakpoints.len() != values.len() {
            return Err(Error::Contract(format!("{} breakpoints but {} values", breakpoints.len(), values.len())));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Contract("breakpoints must be strictly increasing".into()));
        }
        if breakpoints.iter().chain(&values).any(|x| !x.is_finite()) {
            return Err(Error::Contract("breakpoints and values must be finite".into()));
        }
        Ok(Self { breakpoints, values })
    }

    /// The extension `f̄` of a sampled function: equal to `f` on the grid and
    /// affine across every gap `(s, σ(s))` with slope `(f(σ(s)) - f(s)) / μ(s)`.
    pub fn extend(f: &GridFunction) -> Result<Self> {
        Self::new(f.points().to_vec(), f.values().to_vec())
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn a(&self) -> f64 {
        self.breakpoints[0]
    }

    pub fn b(&self) -> f64 {
        self.breakpoints[self.breakpoints.len() - 1]
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        if t >= self.a() && t <= self.b() {
            Ok(())
        } else {
            Err(Error::OutOfDomain { t, a: self.a(), b: self.b() })
        }
    }

    /// Index `i` of the piece `[t_i, t_{i+1})` containing `t`, clamped to the last piece.
    fn piece(&self, t: f64) -> usize {
        let i = self.breakpoints.partition_point(|&p| p <= t).saturating_sub(1);
        i.min(self.breakpoints.len() - 2)
    }

    fn slope(&self, piece: usize) -> f64 {
        forward_quotient(&self.breakpoints, &self.values, piece)
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        let i = self.piece(t);
        let t0 = self.breakpoints[i];
        if t == t0 {
            return Ok(self.values[i]);
        }
        if t == self.breakpoints[i + 1] {
            return Ok(self.values[i + 1]);
        }
        Ok(self.values[i] + self.slope(i) * (t - t0))
    }

    /// Slope of the piece `[t, next)`; `None` at `t = b`.
    pub fn right_slope(&self, t: f64) -> Result<Option<f64>> {
        self.check_domain(t)?;
        if t == self.b() {
            return Ok(None);
        }
        Ok(Some(self.slope(self.piece(t))))
    }

    /// Slope of the piece `(prev, t]`; `None` at `t = a`.
    pub fn left_slope(&self, t: f64) -> Result<Option<f64>> {
        self.check_domain(t)?;
        if t == self.a() {
            return Ok(None);
        }
        let j = self.breakpoints.partition_point(|&p| p < t);
        Ok(Some(self.slope(j - 1)))
    }

    /// Contingent epiderivative `D↑f̄(t)(u)` in closed form.
    ///
    /// `u·s⁺(t)` for `u > 0`, `u·s⁻(t)` for `u < 0`, `0` for `u = 0`. A
    /// direction pointing out of `[a, b]` has an empty contingent derivative
    /// and yields `+∞`.
    pub fn epiderivative(&self, t: f64, u: f64) -> Result<f64> {
        self.check_domain(t)?;
        if u == 0.0 {
            return Ok(0.0);
        }
        let slope = if u > 0.0 { self.right_slope(t)? } else { self.left_slope(t)? };
        Ok(slope.map_or(f64::INFINITY, |s| u * s))
    }

    /// Difference quotients `(f̄(t + h_k u) - f̄(t)) / h_k` for
    /// `h_k = h0 · 2^{-k}`, `k = 0..=k_max`; `None` where `t + h_k u` leaves `[a, b]`.
    pub fn quotients(&self, t: f64, u: f64, h0: f64, k_max: u32) -> Result<Vec<Option<f64>>> {
        self.check_domain(t)?;
        if !(h0 > 0.0) || !h0.is_finite() {
            return Err(Error::Parameter(format!("initial step h0 = {h0} must be positive")));
        }
        let base = self.eval(t)?;
        let mut out = Vec::with_capacity(k_max as usize + 1);
        let mut h = h0;
        for _ in 0..=k_max {
            let p = t + h * u;
            // divide by the step actually taken, (p - t) / u, so the rounding of p cancels
            let d = p - t;
            let q = if d == 0.0 || self.check_domain(p).is_err() {
                None
            } else {
                Some(self.increment(t, p, base)? * u / d)
            };
            out.push(q);
            h *= 0.5;
        }
        Ok(out)
    }

    /// `f̄(p) - f̄(t)`, as slope times displacement when both lie on one piece.
    fn increment(&self, t: f64, p: f64, base: f64) -> Result<f64> {
        let (lo, hi) = if t < p { (t, p) } else { (p, t) };
        let i = self.piece(lo);
        if self.breakpoints[i] <= lo && hi <= self.breakpoints[i + 1] {
            Ok(self.slope(i) * (p - t))
        } else {
            Ok(self.eval(p)? - base)
        }
    }

    pub fn epiderivative_liminf(&self, t: f64, u: f64, h0: f64, k_max: u32) -> Result<f64> {
        let qs = self.quotients(t, u, h0, k_max)?;
        Ok(qs.into_iter().rev().flatten().next().unwrap_or(f64::INFINITY))
    }

    /// Quotient estimate with a step chosen from the breakpoint layout: the
    /// first `h_k = (b - a) / |u| · 2^{-k}` whose displacement is at most half
    /// the distance from `t` to the nearest other breakpoint.
    pub fn epiderivative_liminf_auto(&self, t: f64, u: f64) -> Result<f64> {
        self.check_domain(t)?;
        if u == 0.0 {
            return Ok(0.0);
        }
        let gap = self.breakpoints.iter().filter(|&&p| p != t).map(|&p| (p - t).abs()).fold(f64::INFINITY, f64::min);
        let h0 = (self.b() - self.a()) / u.abs();
        let mut k = 0;
        while h0 * 0.5f64.powi(k as i32) * u.abs() > 0.5 * gap && k < 1000 {
            k += 1;
        }
        self.epiderivative_liminf(t, u, h0, k)
    }

    /// Contingent cone to the epigraph at `(t, lambda)`.
    pub fn contingent_cone(&self, t: f64, lambda: f64) -> Result<EpiCone> {
        let value = self.eval(t)?;
        if lambda < value {
            return Err(Error::NotInEpigraph { t, lambda, value });
        }
        Ok(EpiCone {
            t,
            lambda,
            slope_left: self.left_slope(t)?.unwrap_or(f64::INFINITY),
            slope_right: self.right_slope(t)?.unwrap_or(f64::INFINITY),
            interior: lambda > value,
        })
    }

    /// CSV with header `t,value`, breakpoints only.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,value\n");
        for (&t, &v) in self.breakpoints.iter().zip(&self.values) {
            let _ = writeln!(out, "{},{}", format_real(t), format_real(v));
        }
        out
    }
}

/// Contingent cone `T_K(p)` to `K = Epi(f̄)` at `p = (t, λ)`.
///
/// Boundary slopes are `+∞` where no direction exists (left of `a`, right of `b`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpiCone {
    pub t: f64,
    pub lambda: f64,
    pub slope_left: f64,
    pub slope_right: f64,
    /// `λ > f̄(t)`: the point is interior and the cone is the whole plane.
    pub interior: bool,
}

impl EpiCone {
    pub fn contains(&self, u: f64, v: f64) -> bool {
        if self.interior {
            return true;
        }
        if u > 0.0 {
            self.slope_right.is_finite() && v >= self.slope_right * u
        } else if u < 0.0 {
            self.slope_left.is_finite() && v >= self.slope_left * u
        } else {
            v >= 0.0
        }
    }

    /// Lowest `v` with `(u, v)` in the cone, i.e. the epiderivative in direction `u`.
    pub fn lower_boundary(&self, u: f64) -> f64 {
        if self.interior {
            return f64::NEG_INFINITY;
        }
        match u.partial_cmp(&0.0) {
            Some(std::cmp::Ordering::Greater) if self.slope_right.is_finite() => self.slope_right * u,
            Some(std::cmp::Ordering::Less) if self.slope_left.is_finite() => self.slope_left * u,
            Some(std::cmp::Ordering::Equal) => 0.0,
            _ => f64::INFINITY,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::timescale::{SampleGrid, TimeScale};

    fn abs_shift() -> PLFunction {
        PLFunction::new(vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0]).unwrap()
    }

    #[test]
    fn extension_interpolates_gaps() {
        let g = SampleGrid::from_points(vec![0.0, 1.0]).unwrap();
        let f = GridFunction::new(g, vec![0.0, 2.0]).unwrap();
        let fbar = PLFunction::extend(&f).unwrap();
        assert_eq!(fbar.eval(0.5).unwrap(), 1.0);
    }

    #[test]
    fn extension_of_dense_identity() {
        let g = "interval 0 1".parse::<TimeScale>().unwrap().discretize(0.1).unwrap();
        let f = GridFunction::from_fn(g.clone(), |t| t).unwrap();
        let fbar = PLFunction::extend(&f).unwrap();
        for &t in g.points() {
            assert_eq!(fbar.eval(t).unwrap(), t);
        }
    }

    #[test]
    fn eval_basics() {
        let f = PLFunction::new(vec![0.0, 1.0], vec![0.0, 2.0]).unwrap();
        assert_eq!(f.eval(0.0).unwrap(), 0.0);
        assert_eq!(f.eval(0.25).unwrap(), 0.5);
        assert_eq!(f.eval(1.0).unwrap(), 2.0);
        assert!(matches!(f.eval(1.1), Err(Error::OutOfDomain { .. })));
        assert!(f.eval(-0.1).is_err());
    }

    #[test]
    fn closed_form_at_a_kink() {
        let f = abs_shift();
        assert_eq!(f.epiderivative(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(f.epiderivative(1.0, -1.0).unwrap(), 1.0);
        assert_eq!(f.epiderivative(1.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn closed_form_on_a_smooth_piece() {
        let f = PLFunction::new(vec![0.0, 4.0], vec![1.0, -5.0]).unwrap();
        let m = -1.5;
        for u in [-2.0, -0.5, 0.0, 0.25, 3.0] {
            assert_eq!(f.epiderivative(1.3, u).unwrap(), m * u);
        }
    }

    #[test]
    fn closed_form_at_the_boundary() {
        let f = abs_shift();
        assert_eq!(f.epiderivative(0.0, -1.0).unwrap(), f64::INFINITY);
        assert_eq!(f.epiderivative(2.0, 1.0).unwrap(), f64::INFINITY);
        assert_eq!(f.epiderivative(0.0, 1.0).unwrap(), -1.0);
        assert!(f.epiderivative(2.5, 1.0).is_err());
    }

    #[test]
    fn liminf_estimates() {
        let affine = PLFunction::new(vec![0.0, 4.0], vec![1.0, -5.0]).unwrap();
        for q in affine.quotients(1.0, 0.5, 1.0, 10).unwrap() {
            assert!((q.unwrap() + 0.75).abs() < 1e-14);
        }
        let f = abs_shift();
        let qs = f.quotients(1.0, 1.0, 0.5, 20).unwrap();
        assert!(qs.iter().all(|q| *q == Some(1.0)));
        assert_eq!(f.epiderivative_liminf(1.0, 1.0, 0.5, 20).unwrap(), 1.0);
        assert_eq!(f.epiderivative_liminf(0.0, -1.0, 0.5, 20).unwrap(), f64::INFINITY);
        assert!(f.epiderivative_liminf(1.0, 1.0, 0.0, 3).is_err());
    }

    #[test]
    fn liminf_auto_matches_closed_form() {
        let f = PLFunction::new(vec![0.0, 0.3, 1.1, 2.0], vec![0.4, -1.0, 2.5, 2.0]).unwrap();
        for &t in &[0.0, 0.1, 0.3, 0.7, 1.1, 1.9, 2.0] {
            for &u in &[-1.5, -0.2, 0.3, 2.0] {
                let closed = f.epiderivative(t, u).unwrap();
                let est = f.epiderivative_liminf_auto(t, u).unwrap();
                if closed.is_infinite() {
                    assert!(est.is_infinite());
                } else {
                    assert!((closed - est).abs() < 1e-12, "t={t} u={u}: {closed} vs {est}");
                }
            }
        }
    }

    #[test]
    fn cone_interior_point_is_the_plane() {
        let cone = abs_shift().contingent_cone(1.0, 0.5).unwrap();
        assert!(cone.interior);
        assert!(cone.contains(-3.0, -100.0));
        assert!(cone.contains(0.0, -1.0));
    }

    #[test]
    fn cone_at_the_vertex_of_abs() {
        let f = PLFunction::new(vec![-1.0, 0.0, 1.0], vec![1.0, 0.0, 1.0]).unwrap();
        let cone = f.contingent_cone(0.0, 0.0).unwrap();
        assert!(!cone.interior);
        assert_eq!((cone.slope_left, cone.slope_right), (-1.0, 1.0));
        assert!(cone.contains(1.0, 1.0));
        assert!(cone.contains(-1.0, 1.0));
        assert!(cone.contains(0.0, 0.0));
        assert!(!cone.contains(1.0, 0.99));
        assert!(!cone.contains(-2.0, 1.5));
        assert!(!cone.contains(0.0, -1e-9));
    }

    #[test]
    fn cone_on_an_affine_piece_is_a_half_plane() {
        let f = PLFunction::new(vec![0.0, 2.0], vec![0.0, 3.0]).unwrap();
        let cone = f.contingent_cone(1.0, 1.5).unwrap();
        for u in [-2.0, -0.1, 0.0, 0.7] {
            assert!(cone.contains(u, 1.5 * u));
            assert!(!cone.contains(u, 1.5 * u - 1e-6));
            assert_eq!(cone.lower_boundary(u), 1.5 * u);
        }
    }

    #[test]
    fn cone_at_the_boundary_drops_outward_directions() {
        let cone = abs_shift().contingent_cone(0.0, 1.0).unwrap();
        assert_eq!(cone.slope_left, f64::INFINITY);
        assert!(!cone.contains(-1.0, 1e9));
        assert!(cone.contains(1.0, -1.0));
        assert_eq!(cone.lower_boundary(-1.0), f64::INFINITY);
    }

    #[test]
    fn cone_requires_epigraph_membership() {
        assert!(matches!(abs_shift().contingent_cone(1.0, -0.1), Err(Error::NotInEpigraph { .. })));
    }

    #[test]
    fn constructor_checks() {
        assert!(PLFunction::new(vec![0.0], vec![1.0]).is_err());
        assert!(PLFunction::new(vec![0.0, 0.0], vec![1.0, 2.0]).is_err());
        assert!(PLFunction::new(vec![0.0, 1.0], vec![1.0]).is_err());
    }
}
