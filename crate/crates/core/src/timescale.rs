//! Bounded time scales built from finitely many closed intervals and isolated
//! points, together with their jump operators and discretization.
//!
//! Endpoints are compared with exact floating-point equality. Two segments are
//! distinct only when a strictly positive gap separates them, so a scattered
//! point is never blurred into a neighbouring interval by rounding.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A closed interval `[left, right]`; `left == right` is an isolated point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub left: f64,
    pub right: f64,
}

impl Segment {
    pub fn interval(left: f64, right: f64) -> Self {
        Self { left, right }
    }

    pub fn point(p: f64) -> Self {
        Self { left: p, right: p }
    }

    pub fn is_point(&self) -> bool {
        self.left == self.right
    }

    pub fn len(&self) -> f64 {
        self.right - self.left
    }

    fn contains(&self, t: f64) -> bool {
        self.left <= t && t <= self.right
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Density {
    Dense,
    Scattered,
}

/// Classification of a point by its forward and backward jumps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointClass {
    pub right: Density,
    pub left: Density,
}

impl PointClass {
    pub fn is_isolated(&self) -> bool {
        self.right == Density::Scattered && self.left == Density::Scattered
    }

    pub fn is_dense(&self) -> bool {
        self.right == Density::Dense && self.left == Density::Dense
    }

    pub fn is_right_scattered(&self) -> bool {
        self.right == Density::Scattered
    }

    pub fn is_left_scattered(&self) -> bool {
        self.left == Density::Scattered
    }
}

/// A nonempty compact subset of the reals, stored as segments separated by
/// strictly positive gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeScale {
    segments: Vec<Segment>,
}

impl TimeScale {
    /// Builds a time scale from segments that are already sorted and separated.
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidScale("no segments".into()));
        }
        for s in &segments {
            if !(s.left.is_finite() && s.right.is_finite()) {
                return Err(Error::InvalidScale("non-finite endpoint".into()));
            }
            if s.left > s.right {
                return Err(Error::InvalidScale(format!("segment [{}, {}] has left > right", s.left, s.right)));
            }
        }
        for w in segments.windows(2) {
            if !(w[0].right < w[1].left) {
                return Err(Error::InvalidScale(format!(
                    "segments [{}, {}] and [{}, {}] are not separated by a gap",
                    w[0].left, w[0].right, w[1].left, w[1].right
                )));
            }
        }
        Ok(Self { segments })
    }

    /// Union of arbitrary segments: sorts them and merges any that overlap or touch.
    pub fn union(mut segments: Vec<Segment>) -> Result<Self> {
        if segments.iter().any(|s| s.left > s.right) {
            return Err(Error::InvalidScale("segment with left > right".into()));
        }
        segments.sort_by(|x, y| x.left.total_cmp(&y.left));
        let mut merged: Vec<Segment> = Vec::with_capacity(segments.len());
        for s in segments {
            match merged.last_mut() {
                Some(last) if s.left <= last.right => last.right = last.right.max(s.right),
                _ => merged.push(s),
            }
        }
        Self::new(merged)
    }

    /// `{start, start + step, ..., end}` for an integer count of steps.
    pub fn lattice(start: f64, step: f64, count: usize) -> Result<Self> {
        if !(step > 0.0) {
            return Err(Error::Parameter(format!("lattice step {step} must be positive")));
        }
        let pts = (0..=count).map(|k| Segment::point(start + step * k as f64)).collect();
        Self::new(pts)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Minimum of the scale.
    pub fn a(&self) -> f64 {
        self.segments[0].left
    }

    /// Maximum of the scale.
    pub fn b(&self) -> f64 {
        self.segments[self.segments.len() - 1].right
    }

    /// True when every segment is a single point.
    pub fn is_discrete(&self) -> bool {
        self.segments.iter().all(Segment::is_point)
    }

    fn locate(&self, t: f64) -> Option<usize> {
        let i = self.segments.partition_point(|s| s.right < t);
        (i < self.segments.len() && self.segments[i].contains(t)).then_some(i)
    }

    fn require(&self, t: f64) -> Result<usize> {
        self.locate(t).ok_or(Error::NotInScale(t))
    }

    pub fn contains(&self, t: f64) -> bool {
        self.locate(t).is_some()
    }

    /// Forward jump operator; `sigma(b) = b`.
    pub fn sigma(&self, t: f64) -> Result<f64> {
        let i = self.require(t)?;
        let seg = self.segments[i];
        Ok(if t < seg.right {
            t
        } else if i + 1 < self.segments.len() {
            self.segments[i + 1].left
        } else {
            t
        })
    }

    /// Backward jump operator; `rho(a) = a`.
    pub fn rho(&self, t: f64) -> Result<f64> {
        let i = self.require(t)?;
        let seg = self.segments[i];
        Ok(if t > seg.left {
            t
        } else if i > 0 {
            self.segments[i - 1].right
        } else {
            t
        })
    }

    /// Forward graininess `sigma(t) - t`.
    pub fn mu(&self, t: f64) -> Result<f64> {
        Ok(self.sigma(t)? - t)
    }

    /// Backward graininess `t - rho(t)`.
    pub fn nu(&self, t: f64) -> Result<f64> {
        Ok(t - self.rho(t)?)
    }

    pub fn classify(&self, t: f64) -> Result<PointClass> {
        let density = |jump: f64| if jump == t { Density::Dense } else { Density::Scattered };
        Ok(PointClass { right: density(self.sigma(t)?), left: density(self.rho(t)?) })
    }

    /// `T^κ`: drops the maximum when it is left-scattered.
    pub fn truncate_kappa(&self) -> TimeScale {
        let n = self.segments.len();
        if n > 1 && self.segments[n - 1].is_point() {
            Self { segments: self.segments[..n - 1].to_vec() }
        } else {
            self.clone()
        }
    }

    /// `T_κ`: drops the minimum when it is right-scattered.
    pub fn truncate_kappa_sub(&self) -> TimeScale {
        if self.segments.len() > 1 && self.segments[0].is_point() {
            Self { segments: self.segments[1..].to_vec() }
        } else {
            self.clone()
        }
    }

    /// `(T^κ)^κ ∩ (T_κ)_κ`, the set on which Euler–Lagrange conditions are stated.
    pub fn interior_kk2(&self) -> Result<TimeScale> {
        let upper = self.truncate_kappa().truncate_kappa();
        let lower = self.truncate_kappa_sub().truncate_kappa_sub();
        // Both truncations only drop whole segments from one end.
        let keep_hi = upper.segments.len();
        let keep_lo = self.segments.len() - lower.segments.len();
        if keep_lo >= keep_hi {
            return Err(Error::DegenerateScale(format!("doubly truncated interior of {self} is empty")));
        }
        Ok(Self { segments: self.segments[keep_lo..keep_hi].to_vec() })
    }

    /// Samples the scale: segment endpoints exactly, intervals split into equal
    /// steps no longer than `h`.
    pub fn discretize(&self, h: f64) -> Result<SampleGrid> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::Parameter(format!("step h = {h} must be positive")));
        }
        let mut points = Vec::new();
        let mut dense = Vec::new();
        for seg in &self.segments {
            points.push(seg.left);
            dense.push(false);
            if seg.is_point() {
                continue;
            }
            let len = seg.len();
            let ratio = len / h;
            let mut steps = ratio.ceil().max(1.0);
            // a step of h from the last full step would land on the endpoint
            if steps > 1.0 && len - (steps - 1.0) * h <= 1e-12 * len {
                steps -= 1.0;
            }
            let steps = steps as usize;
            for k in 1..steps {
                points.push(seg.left + len * (k as f64 / steps as f64));
                dense.push(true);
            }
            points.push(seg.right);
            dense.push(false);
        }
        Ok(SampleGrid { points, dense })
    }
}

impl fmt::Display for TimeScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.segments.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∪ ")?;
            }
            if s.is_point() {
                write!(f, "{{{}}}", s.left)?;
            } else {
                write!(f, "[{}, {}]", s.left, s.right)?;
            }
        }
        Ok(())
    }
}

impl TimeScale {
    /// Renders the scale in the line-oriented literal syntax accepted by `FromStr`.
    pub fn to_literal(&self) -> String {
        let mut out = String::new();
        for s in &self.segments {
            if s.is_point() {
                out.push_str(&format!("points {:?}\n", s.left));
            } else {
                out.push_str(&format!("interval {:?} {:?}\n", s.left, s.right));
            }
        }
        out
    }
}

/// Parses `interval l r` and `points p1 p2 ...` lines (or `;`-separated
/// clauses); the scale is the union of all of them. `#` starts a comment.
impl FromStr for TimeScale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut segments = Vec::new();
        for (lineno, raw) in s.split(['\n', ';']).enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            let keyword = words.next().unwrap_or_default();
            let nums = words
                .map(|w| {
                    w.parse::<f64>()
                        .map_err(|_| Error::InvalidScale(format!("clause {}: bad number '{w}'", lineno + 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            match keyword {
                "interval" => {
                    let [l, r] = nums[..] else {
                        return Err(Error::InvalidScale(format!(
                            "clause {}: 'interval' takes two numbers",
                            lineno + 1
                        )));
                    };
                    if l > r {
                        return Err(Error::InvalidScale(format!(
                            "clause {}: interval {l} {r} has left > right",
                            lineno + 1
                        )));
                    }
                    segments.push(Segment::interval(l, r));
                }
                "points" => {
                    if nums.is_empty() {
                        return Err(Error::InvalidScale(format!(
                            "clause {}: 'points' needs at least one number",
                            lineno + 1
                        )));
                    }
                    segments.extend(nums.into_iter().map(Segment::point));
                }
                other => return Err(Error::InvalidScale(format!("clause {}: unknown keyword '{other}'", lineno + 1))),
            }
        }
        if segments.iter().any(|s| !(s.left.is_finite() && s.right.is_finite())) {
            return Err(Error::InvalidScale("non-finite endpoint".into()));
        }
        Self::union(segments)
    }
}

/// Sample points of a discretized time scale.
///
/// `dense[i]` marks points introduced by subdividing an interval; all other
/// points are segment endpoints carried over exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleGrid {
    points: Vec<f64>,
    dense: Vec<bool>,
}

impl SampleGrid {
    /// A grid of exact points (no subdivision flags).
    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidScale("empty grid".into()));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidScale("non-finite grid point".into()));
        }
        if points.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidScale("grid points must be strictly increasing".into()));
        }
        let dense = vec![false; points.len()];
        Ok(Self { points, dense })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn dense_flags(&self) -> &[bool] {
        &self.dense
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.points[0]
    }

    pub fn last(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    /// Index of a point that is exactly on the grid.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let i = self.points.partition_point(|&p| p < t);
        (i < self.points.len() && self.points[i] == t).then_some(i)
    }

    /// Sub-grid `points[range]`.
    pub fn slice(&self, range: std::ops::Range<usize>) -> SampleGrid {
        SampleGrid { points: self.points[range.clone()].to_vec(), dense: self.dense[range].to_vec() }
    }

    /// The grid viewed as a purely discrete time scale.
    pub fn to_scale(&self) -> TimeScale {
        TimeScale { segments: self.points.iter().map(|&p| Segment::point(p)).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z04() -> TimeScale {
        TimeScale::lattice(0.0, 1.0, 4).unwrap()
    }

    fn interval_and_point() -> TimeScale {
        "interval 0 1\npoints 2".parse().unwrap()
    }

    #[test]
    fn membership() {
        let t = interval_and_point();
        assert!(t.contains(0.5));
        assert!(!t.contains(1.5));
        assert!(t.contains(2.0));
        assert!(!t.contains(-0.1));
        assert!(!t.contains(2.1));
    }

    #[test]
    fn jump_operators() {
        let z = z04();
        assert_eq!(z.sigma(1.0).unwrap(), 2.0);
        assert_eq!(z.rho(1.0).unwrap(), 0.0);
        assert_eq!(z.sigma(4.0).unwrap(), 4.0);
        assert_eq!(z.rho(0.0).unwrap(), 0.0);

        let unit: TimeScale = "interval 0 1".parse().unwrap();
        assert_eq!(unit.sigma(0.5).unwrap(), 0.5);
        assert_eq!(unit.rho(0.5).unwrap(), 0.5);
        assert_eq!(unit.mu(0.3).unwrap(), 0.0);
        assert_eq!(unit.nu(0.3).unwrap(), 0.0);

        let t = interval_and_point();
        assert_eq!(t.sigma(1.0).unwrap(), 2.0);
        assert_eq!(t.rho(2.0).unwrap(), 1.0);
        assert_eq!(t.mu(1.0).unwrap(), 1.0);
        assert_eq!(t.nu(1.0).unwrap(), 0.0);

        let quarter = TimeScale::lattice(0.0, 0.25, 4).unwrap();
        assert_eq!(quarter.mu(0.5).unwrap(), 0.25);
    }

    #[test]
    fn jump_outside_scale_is_an_error() {
        let t = interval_and_point();
        assert!(matches!(t.sigma(1.5), Err(Error::NotInScale(_))));
        assert!(matches!(t.rho(1.5), Err(Error::NotInScale(_))));
        assert!(t.classify(3.0).is_err());
    }

    #[test]
    fn classification() {
        let c = z04().classify(2.0).unwrap();
        assert!(c.is_isolated());
        let unit: TimeScale = "interval 0 1".parse().unwrap();
        assert!(unit.classify(0.5).unwrap().is_dense());
        let c = interval_and_point().classify(1.0).unwrap();
        assert_eq!(c.left, Density::Dense);
        assert_eq!(c.right, Density::Scattered);
    }

    #[test]
    fn kappa_truncations() {
        assert_eq!(z04().truncate_kappa(), TimeScale::lattice(0.0, 1.0, 3).unwrap());
        let unit: TimeScale = "interval 0 1".parse().unwrap();
        assert_eq!(unit.truncate_kappa(), unit);
        let t = interval_and_point();
        assert_eq!(t.truncate_kappa_sub(), t);
        assert_eq!(t.truncate_kappa(), unit);
    }

    #[test]
    fn doubly_truncated_interior() {
        // (T^κ)^κ = {0,1,2}, (T_κ)_κ = {2,3,4}
        let inner = z04().interior_kk2().unwrap();
        assert_eq!(inner.segments(), &[Segment::point(2.0)]);

        let unit: TimeScale = "interval 0 1".parse().unwrap();
        assert_eq!(unit.interior_kk2().unwrap(), unit);

        let two: TimeScale = "points 0 1".parse().unwrap();
        assert!(matches!(two.interior_kk2(), Err(Error::DegenerateScale(_))));

        let t = interval_and_point();
        assert_eq!(t.interior_kk2().unwrap(), unit);
    }

    #[test]
    fn discretization() {
        let d: TimeScale = "points 0 1 2".parse().unwrap();
        let g = d.discretize(0.37).unwrap();
        assert_eq!(g.points(), &[0.0, 1.0, 2.0]);
        assert!(g.dense_flags().iter().all(|f| !f));

        let unit: TimeScale = "interval 0 1".parse().unwrap();
        let g = unit.discretize(0.5).unwrap();
        assert_eq!(g.points(), &[0.0, 0.5, 1.0]);
        assert_eq!(g.dense_flags(), &[false, true, false]);

        let g = interval_and_point().discretize(0.5).unwrap();
        assert_eq!(g.points(), &[0.0, 0.5, 1.0, 2.0]);
        assert_eq!(g.dense_flags(), &[false, true, false, false]);

        assert!(matches!(unit.discretize(0.0), Err(Error::Parameter(_))));
        assert!(matches!(unit.discretize(-1.0), Err(Error::Parameter(_))));
    }

    #[test]
    fn discretization_step_bound() {
        let unit: TimeScale = "interval 0 1".parse().unwrap();
        for h in [1e-3, 0.3, 0.1, 0.7, 1.0, 2.0] {
            let g = unit.discretize(h).unwrap();
            assert!(g.points().windows(2).all(|w| w[1] - w[0] <= h * (1.0 + 1e-12)));
            assert_eq!(g.len(), (1.0f64 / h).ceil().max(1.0) as usize + 1);
        }
        // 2.1 / 0.7 rounds to just above 3; no sliver step is created
        let g = "interval 0 2.1".parse::<TimeScale>().unwrap().discretize(0.7).unwrap();
        assert_eq!(g.len(), 4);
    }

    #[test]
    fn literal_union_merges_overlaps() {
        let t: TimeScale = "interval 0 1\ninterval 0.5 2\npoints 1.5 3 # comment\npoints 3".parse().unwrap();
        assert_eq!(t.segments(), &[Segment::interval(0.0, 2.0), Segment::point(3.0)]);
        let round: TimeScale = t.to_literal().parse().unwrap();
        assert_eq!(round, t);
    }

    #[test]
    fn literal_errors() {
        assert!("interval 1".parse::<TimeScale>().is_err());
        assert!("interval 2 1".parse::<TimeScale>().is_err());
        assert!("segment 0 1".parse::<TimeScale>().is_err());
        assert!("points x".parse::<TimeScale>().is_err());
        assert!("".parse::<TimeScale>().is_err());
    }

    #[test]
    fn new_rejects_touching_segments() {
        let touching = vec![Segment::interval(0.0, 1.0), Segment::point(1.0)];
        assert!(TimeScale::new(touching).is_err());
    }
}
