//! Parametric plane curves.

use alloc::vec::Vec;

use crate::vec2::Vec2;

/// A piecewise-C¹ curve `t ↦ γ(t)` on a closed parameter interval.
pub trait PlaneCurve {
    /// Parameter interval `(start, end)`, `start < end`.
    fn range(&self) -> (f64, f64);
    fn point(&self, t: f64) -> Vec2;
    fn derivative(&self, t: f64) -> Vec2;
    /// Interior parameters where the derivative may jump or lose smoothness.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }

    fn start(&self) -> Vec2 {
        self.point(self.range().0)
    }

    fn end(&self) -> Vec2 {
        self.point(self.range().1)
    }

    /// `n + 1` equally spaced samples including both ends.
    fn sample(&self, n: usize) -> Vec<Vec2> {
        let (a, b) = self.range();
        (0..=n)
            .map(|i| self.point(a + (b - a) * i as f64 / n as f64))
            .collect()
    }
}

/// Straight segment parametrized on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Vec2,
    pub b: Vec2,
}

impl Segment {
    pub fn new(a: Vec2, b: Vec2) -> Self {
        Segment { a, b }
    }
}

impl PlaneCurve for Segment {
    fn range(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    fn point(&self, t: f64) -> Vec2 {
        self.a.lerp(self.b, t)
    }

    fn derivative(&self, _t: f64) -> Vec2 {
        self.b - self.a
    }
}

/// Polyline through `points`, parametrized on `[0, n − 1]` with one unit per edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<Vec2>,
}

impl Polyline {
    pub fn new(points: Vec<Vec2>) -> Self {
        debug_assert!(points.len() >= 2);
        Polyline { points }
    }

    fn edge(&self, t: f64) -> (usize, f64) {
        let last = self.points.len() - 2;
        let i = (libm::floor(t).max(0.0) as usize).min(last);
        (i, t - i as f64)
    }
}

impl PlaneCurve for Polyline {
    fn range(&self) -> (f64, f64) {
        (0.0, (self.points.len() - 1) as f64)
    }

    fn point(&self, t: f64) -> Vec2 {
        let (i, f) = self.edge(t);
        self.points[i].lerp(self.points[i + 1], f)
    }

    fn derivative(&self, t: f64) -> Vec2 {
        let (i, _) = self.edge(t);
        self.points[i + 1] - self.points[i]
    }

    fn breakpoints(&self) -> Vec<f64> {
        (1..self.points.len() - 1).map(|i| i as f64).collect()
    }
}

/// Curve given by closures for the point and its derivative.
pub struct FnCurve<P, D> {
    pub range: (f64, f64),
    pub point: P,
    pub derivative: D,
}

impl<P, D> FnCurve<P, D>
where
    P: Fn(f64) -> Vec2,
    D: Fn(f64) -> Vec2,
{
    pub fn new(range: (f64, f64), point: P, derivative: D) -> Self {
        FnCurve {
            range,
            point,
            derivative,
        }
    }
}

impl<P, D> PlaneCurve for FnCurve<P, D>
where
    P: Fn(f64) -> Vec2,
    D: Fn(f64) -> Vec2,
{
    fn range(&self) -> (f64, f64) {
        self.range
    }

    fn point(&self, t: f64) -> Vec2 {
        (self.point)(t)
    }

    fn derivative(&self, t: f64) -> Vec2 {
        (self.derivative)(t)
    }
}
