//! Bounded convex domains `Ω` and the cuts that split them.
//!
//! Every boundary is a closed counterclockwise curve `s ↦ b(s)`, `s ∈ [0, 1)`.
//! Areas come from Green's theorem: the integrand `½ b × b′` is tabulated
//! once per domain, so the area enclosed between a boundary stretch and a
//! cut costs a table lookup plus the cut's own Green integral.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::TAU;
use core::fmt;

use crate::curve::{PlaneCurve, Polyline, Segment};
use crate::error::{Error, Result};
use crate::norm::AnisotropicNorm;
use crate::optimize::brent_root;
use crate::quadrature::{composite_gl8, CumulativeTable};
use crate::vec2::Vec2;
use crate::wulff::{WulffArc, WulffArcCurve, WulffShape};

/// Number of Green cells for smooth boundaries. A multiple of four so the
/// quarter-turn seams of piecewise norms fall on cell nodes.
pub const BOUNDARY_CELLS: usize = 4096;
const AREA_REL_TOL: f64 = 1e-9;
/// Distance within which a point counts as lying on `∂Ω`.
pub const ON_BOUNDARY_TOL: f64 = 1e-9;

/// Which sublevel set of the run's norm a `norm_level` domain is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelMode {
    /// `{H° < r}`: a scaled Wulff shape.
    Polar,
    /// `{H < r}`.
    Sublevel,
    /// `{H(−y, x) < r}`: `{H < r}` turned by a right angle.
    Rotated,
}

pub type BoundaryPointFn = Arc<dyn Fn(f64) -> Vec2 + Send + Sync>;

#[derive(Clone)]
enum Boundary {
    Polygon(Vec<Vec2>),
    /// Semi-axes `a`, `b`, centered at the origin.
    Ellipse { a: f64, b: f64 },
    NormLevel {
        norm: AnisotropicNorm,
        level: f64,
        mode: LevelMode,
    },
    Parametric {
        point: BoundaryPointFn,
        derivative: BoundaryPointFn,
    },
}

impl fmt::Debug for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::Polygon(v) => f.debug_tuple("Polygon").field(v).finish(),
            Boundary::Ellipse { a, b } => f.debug_struct("Ellipse").field("a", a).field("b", b).finish(),
            Boundary::NormLevel { norm, level, mode } => f
                .debug_struct("NormLevel")
                .field("norm", norm.family())
                .field("level", level)
                .field("mode", mode)
                .finish(),
            Boundary::Parametric { .. } => f.write_str("Parametric"),
        }
    }
}

impl Boundary {
    fn point(&self, s: f64) -> Vec2 {
        match self {
            Boundary::Polygon(v) => {
                let n = v.len();
                let x = crate::wrap(s, 1.0) * n as f64;
                let i = (x as usize).min(n - 1);
                v[i].lerp(v[(i + 1) % n], x - i as f64)
            }
            Boundary::Ellipse { a, b } => {
                let t = TAU * s;
                Vec2::new(a * libm::cos(t), b * libm::sin(t))
            }
            Boundary::NormLevel { norm, level, mode } => {
                let u = Vec2::from_angle(TAU * s);
                match mode {
                    LevelMode::Polar => norm.grad(u) * *level,
                    LevelMode::Sublevel => u * (*level / norm.value(u)),
                    LevelMode::Rotated => (u * (*level / norm.value(u))).perp(),
                }
            }
            Boundary::Parametric { point, .. } => point(crate::wrap(s, 1.0)),
        }
    }

    fn derivative(&self, s: f64) -> Vec2 {
        match self {
            Boundary::Polygon(v) => {
                let n = v.len();
                let i = ((crate::wrap(s, 1.0) * n as f64) as usize).min(n - 1);
                (v[(i + 1) % n] - v[i]) * n as f64
            }
            Boundary::Ellipse { a, b } => {
                let t = TAU * s;
                Vec2::new(-a * libm::sin(t), b * libm::cos(t)) * TAU
            }
            Boundary::NormLevel { norm, level, mode } => {
                let u = Vec2::from_angle(TAU * s);
                let du = u.perp();
                match mode {
                    LevelMode::Polar => norm.hessian(u).apply(du) * (*level * TAU),
                    LevelMode::Sublevel | LevelMode::Rotated => {
                        let h = norm.value(u);
                        let dh = norm.grad(u).dot(du);
                        let d = (du / h - u * (dh / (h * h))) * (*level * TAU);
                        if *mode == LevelMode::Rotated {
                            d.perp()
                        } else {
                            d
                        }
                    }
                }
            }
            Boundary::Parametric { derivative, .. } => derivative(crate::wrap(s, 1.0)),
        }
    }

    fn green_density(&self, s: f64) -> f64 {
        match self {
            Boundary::Ellipse { a, b } => 0.5 * a * b * TAU,
            Boundary::NormLevel { norm, level, mode } if *mode != LevelMode::Polar => {
                let h = norm.value(Vec2::from_angle(TAU * s));
                0.5 * level * level * TAU / (h * h)
            }
            _ => 0.5 * self.point(s).cross(self.derivative(s)),
        }
    }
}

/// Point, unit tangent and unit outer normal of `∂Ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub point: Vec2,
    pub tangent: Vec2,
    pub normal: Vec2,
    /// Set for one-sided frames taken at a polygon vertex.
    pub corner: bool,
}

/// Which one-sided frame to take at a corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OneSide {
    /// The edge arriving at the point.
    Before,
    /// The edge leaving the point.
    After,
}

/// Exit point of a ray on `∂Ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayHit {
    pub point: Vec2,
    pub s: f64,
    /// The exit point is a polygon vertex.
    pub corner: bool,
}

/// A bounded convex domain with a counterclockwise boundary.
#[derive(Debug, Clone)]
pub struct ConvexDomain {
    boundary: Boundary,
    green: CumulativeTable,
    area: f64,
    centroid: Vec2,
    diameter: f64,
    symmetric_about: Option<Vec2>,
}

impl ConvexDomain {
    /// Convex polygon. Clockwise input is reoriented; repeated vertices,
    /// collinear triples and reflex or self-intersecting outlines are rejected.
    pub fn polygon(vertices: Vec<Vec2>) -> Result<Self> {
        let mut v = vertices;
        if v.len() < 3 {
            return Err(Error::Input("a polygon needs at least three vertices".into()));
        }
        if v.iter().any(|p| !p.is_finite()) {
            return Err(Error::Input("non-finite polygon vertex".into()));
        }
        let signed: f64 = (0..v.len()).map(|i| v[i].cross(v[(i + 1) % v.len()])).sum();
        if signed < 0.0 {
            v.reverse();
        }
        let n = v.len();
        let mut turning = 0.0;
        for i in 0..n {
            let e0 = v[(i + 1) % n] - v[i];
            let e1 = v[(i + 2) % n] - v[(i + 1) % n];
            if e0.norm() == 0.0 {
                return Err(Error::Input(format!("repeated polygon vertex at index {i}")));
            }
            let c = e0.cross(e1);
            if c <= 0.0 {
                return Err(Error::Input(format!(
                    "polygon is not strictly convex at vertex {}",
                    (i + 1) % n
                )));
            }
            turning += libm::atan2(c, e0.dot(e1));
        }
        if (turning - TAU).abs() > 1e-9 {
            return Err(Error::Input("polygon outline is self-intersecting".into()));
        }
        Self::build(Boundary::Polygon(v), None)
    }

    /// Axis-aligned square `[−r, r]²`.
    pub fn square(r: f64) -> Result<Self> {
        Self::polygon(alloc::vec![
            Vec2::new(-r, -r),
            Vec2::new(r, -r),
            Vec2::new(r, r),
            Vec2::new(-r, r),
        ])
    }

    /// Ellipse `x²/a² + y²/b² < 1` centered at the origin.
    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0) {
            return Err(Error::Input(format!("ellipse needs positive semi-axes, got ({a}, {b})")));
        }
        Self::build(Boundary::Ellipse { a, b }, Some(Vec2::ZERO))
    }

    pub fn disk(r: f64) -> Result<Self> {
        Self::ellipse(r, r)
    }

    /// A sublevel set of `norm` (see [`LevelMode`]). For the max-norm the
    /// domain is the exact square or diamond polygon.
    pub fn norm_level(norm: &AnisotropicNorm, level: f64, mode: LevelMode) -> Result<Self> {
        if !(level.is_finite() && level > 0.0) {
            return Err(Error::Input(format!("level must be positive, got {level}")));
        }
        if !norm.is_smooth() {
            let r = level;
            let square = || ConvexDomain::square(r);
            return match mode {
                LevelMode::Sublevel | LevelMode::Rotated => square(),
                LevelMode::Polar => ConvexDomain::polygon(alloc::vec![
                    Vec2::new(r, 0.0),
                    Vec2::new(0.0, r),
                    Vec2::new(-r, 0.0),
                    Vec2::new(0.0, -r),
                ]),
            };
        }
        Self::build(
            Boundary::NormLevel {
                norm: norm.clone(),
                level,
                mode,
            },
            Some(Vec2::ZERO),
        )
    }

    /// A convex domain from a counterclockwise parametrization of its
    /// boundary on `[0, 1)` and the derivative of that parametrization.
    pub fn parametric(point: BoundaryPointFn, derivative: BoundaryPointFn) -> Result<Self> {
        let boundary = Boundary::Parametric { point, derivative };
        let n = BOUNDARY_CELLS;
        let mut turning = 0.0;
        for i in 0..n {
            let d0 = boundary.derivative(i as f64 / n as f64);
            let d1 = boundary.derivative((i + 1) as f64 / n as f64);
            if !(d0.is_finite() && d0.norm() > 0.0) {
                return Err(Error::Input(format!("degenerate boundary derivative at s = {}", i as f64 / n as f64)));
            }
            let c = d0.cross(d1);
            if c < -1e-12 * d0.norm() * d1.norm() {
                return Err(Error::Input("parametric boundary is not convex and counterclockwise".into()));
            }
            turning += libm::atan2(c, d0.dot(d1));
        }
        if (turning - TAU).abs() > 1e-6 {
            return Err(Error::Input("parametric boundary does not turn exactly once".into()));
        }
        Self::build(boundary, None)
    }

    fn build(boundary: Boundary, symmetric_about: Option<Vec2>) -> Result<Self> {
        let green = match &boundary {
            Boundary::Polygon(v) => CumulativeTable::build(|s| boundary.green_density(s), 1.0, v.len()),
            _ => CumulativeTable::build_converged(
                |s| boundary.green_density(s),
                1.0,
                BOUNDARY_CELLS,
                AREA_REL_TOL,
            )?,
        };
        let area = green.total();
        if !(area.is_finite() && area > 0.0) {
            return Err(Error::Input(format!("domain area must be positive, got {area}")));
        }
        let cells = green.cells();
        let mx = composite_gl8(
            |s| {
                let p = boundary.point(s);
                0.5 * p.x * p.x * boundary.derivative(s).y
            },
            0.0,
            1.0,
            cells,
        );
        let my = composite_gl8(
            |s| {
                let p = boundary.point(s);
                -0.5 * p.y * p.y * boundary.derivative(s).x
            },
            0.0,
            1.0,
            cells,
        );
        let centroid = Vec2::new(mx / area, my / area);
        let samples: Vec<Vec2> = (0..512).map(|i| boundary.point(i as f64 / 512.0)).collect();
        let mut diameter: f64 = 0.0;
        for (i, p) in samples.iter().enumerate() {
            for q in &samples[i + 1..] {
                diameter = diameter.max(p.distance(*q));
            }
        }
        let mut domain = ConvexDomain {
            boundary,
            green,
            area,
            centroid,
            diameter,
            symmetric_about,
        };
        if domain.symmetric_about.is_none() {
            domain.symmetric_about = domain.is_centrosymmetric(1e-9 * domain.diameter);
        }
        Ok(domain)
    }

    /// `|Ω|`.
    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn centroid(&self) -> Vec2 {
        self.centroid
    }

    /// Euclidean diameter, estimated on 512 boundary samples.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Center of symmetry, detected on construction.
    pub fn symmetric_about(&self) -> Option<Vec2> {
        self.symmetric_about
    }

    pub fn is_polygon(&self) -> bool {
        matches!(self.boundary, Boundary::Polygon(_))
    }

    pub fn vertices(&self) -> Option<&[Vec2]> {
        match &self.boundary {
            Boundary::Polygon(v) => Some(v),
            _ => None,
        }
    }

    /// Boundary parameters of the polygon vertices, empty for smooth domains.
    pub fn corner_params(&self) -> Vec<f64> {
        match &self.boundary {
            Boundary::Polygon(v) => (0..v.len()).map(|i| i as f64 / v.len() as f64).collect(),
            _ => Vec::new(),
        }
    }

    /// `b(s)`.
    pub fn point(&self, s: f64) -> Vec2 {
        self.boundary.point(s)
    }

    /// `b′(s)` (one-sided from the right at polygon vertices).
    pub fn derivative(&self, s: f64) -> Vec2 {
        self.boundary.derivative(s)
    }

    /// `n` boundary samples, equally spaced in `s`.
    pub fn polyline(&self, n: usize) -> Vec<Vec2> {
        (0..n).map(|i| self.point(i as f64 / n as f64)).collect()
    }

    /// `½∫(x dy − y dx)` along `∂Ω` counterclockwise from `s1` to `s2`
    /// (the parameter interval taken modulo one, so the result is in `[0, |Ω|)`).
    pub fn boundary_green(&self, s1: f64, s2: f64) -> f64 {
        let span = crate::wrap(s2 - s1, 1.0);
        self.green
            .between(|s| self.boundary.green_density(s), s1, s1 + span)
    }

    /// Distance from `s` to the nearest polygon vertex parameter, if within `tol`.
    pub(crate) fn corner_at(&self, s: f64, tol: f64) -> Option<usize> {
        match &self.boundary {
            Boundary::Polygon(v) => {
                let n = v.len() as f64;
                let x = crate::wrap(s, 1.0) * n;
                let k = libm::round(x);
                if (x - k).abs() <= tol * n {
                    Some((k as usize) % v.len())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// True when `s` is (within `1e-12`) a polygon vertex.
    pub fn is_corner(&self, s: f64) -> bool {
        self.corner_at(s, 1e-12).is_some()
    }

    /// Point, unit tangent and unit outer normal at `s`.
    pub fn boundary_frame(&self, s: f64) -> Result<Frame> {
        if self.is_corner(s) {
            return Err(Error::Corner { s });
        }
        Ok(self.frame_from(self.point(s), self.derivative(s), false))
    }

    /// One-sided frame; at smooth points both sides agree.
    pub fn boundary_frame_one_sided(&self, s: f64, side: OneSide) -> Frame {
        match (self.corner_at(s, 1e-12), &self.boundary) {
            (Some(k), Boundary::Polygon(v)) => {
                let n = v.len();
                let edge = match side {
                    OneSide::After => v[(k + 1) % n] - v[k],
                    OneSide::Before => v[k] - v[(k + n - 1) % n],
                };
                self.frame_from(v[k], edge, true)
            }
            _ => self.frame_from(self.point(s), self.derivative(s), false),
        }
    }

    fn frame_from(&self, point: Vec2, derivative: Vec2, corner: bool) -> Frame {
        let tangent = derivative.normalized();
        Frame {
            point,
            tangent,
            normal: Vec2::new(tangent.y, -tangent.x),
            corner,
        }
    }

    /// Minkowski gauge of `Ω` about its reference center: `< 1` inside,
    /// `= 1` on `∂Ω`, positively homogeneous about the center.
    pub fn gauge(&self, p: Vec2) -> f64 {
        match &self.boundary {
            Boundary::Polygon(v) => {
                let c = self.centroid;
                let n = v.len();
                (0..n)
                    .map(|i| {
                        let e = v[(i + 1) % n] - v[i];
                        let normal = Vec2::new(e.y, -e.x);
                        normal.dot(p - c) / normal.dot(v[i] - c)
                    })
                    .fold(f64::NEG_INFINITY, f64::max)
            }
            Boundary::Ellipse { a, b } => libm::hypot(p.x / a, p.y / b),
            Boundary::NormLevel { norm, level, mode } => match mode {
                LevelMode::Polar => norm.polar().value(p) / level,
                LevelMode::Sublevel => norm.value(p) / level,
                LevelMode::Rotated => norm.value(Vec2::new(-p.y, p.x)) / level,
            },
            Boundary::Parametric { .. } => {
                let c = self.centroid;
                let d = p - c;
                if d.is_zero() {
                    return 0.0;
                }
                let b = self.point(self.param_toward(d.angle()));
                d.norm() / (b - c).norm()
            }
        }
    }

    /// Reference center of [`gauge`](Self::gauge).
    fn gauge_center(&self) -> Vec2 {
        match &self.boundary {
            Boundary::Polygon(_) | Boundary::Parametric { .. } => self.centroid,
            _ => Vec2::ZERO,
        }
    }

    pub fn contains(&self, p: Vec2) -> bool {
        self.gauge(p) < 1.0
    }

    /// Euclidean distance estimate from a point near `∂Ω` to `∂Ω`.
    pub fn distance_to_boundary(&self, p: Vec2) -> f64 {
        let c = self.gauge_center();
        let g = self.gauge(p);
        if g == 0.0 {
            return self.param_distance_fallback(p);
        }
        (p - c).norm() * (1.0 - 1.0 / g).abs()
    }

    fn param_distance_fallback(&self, p: Vec2) -> f64 {
        let s = self.param_of(p + Vec2::new(1e-300, 0.0));
        self.point(s).distance(p)
    }

    /// Boundary parameter of the boundary point in direction `angle` from
    /// the centroid, by bisection on the monotone polar angle.
    fn param_toward(&self, angle: f64) -> f64 {
        let c = self.centroid;
        let phi0 = (self.point(0.0) - c).angle();
        let target = crate::wrap(angle - phi0, TAU);
        let delta = |s: f64| crate::wrap((self.point(s) - c).angle() - phi0, TAU);
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if delta(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Boundary parameter of the boundary point on the ray from the gauge
    /// center through `p` (exact for points of `∂Ω`).
    pub fn param_of(&self, p: Vec2) -> f64 {
        let s = match &self.boundary {
            Boundary::Polygon(v) => {
                let c = self.centroid;
                let n = v.len();
                let g = self.gauge(p);
                let q = c + (p - c) / g;
                let (i, _) = (0..n)
                    .map(|i| {
                        let e = v[(i + 1) % n] - v[i];
                        let normal = Vec2::new(e.y, -e.x);
                        (i, normal.dot(p - c) / normal.dot(v[i] - c))
                    })
                    .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
                let e = v[(i + 1) % n] - v[i];
                let t = ((q - v[i]).dot(e) / e.norm_squared()).clamp(0.0, 1.0);
                (i as f64 + t) / n as f64
            }
            Boundary::Ellipse { a, b } => libm::atan2(p.y / b, p.x / a) / TAU,
            Boundary::NormLevel { norm, mode, .. } => match mode {
                LevelMode::Polar => norm.polar().grad(p).angle() / TAU,
                LevelMode::Sublevel => p.angle() / TAU,
                LevelMode::Rotated => Vec2::new(p.y, -p.x).angle() / TAU,
            },
            Boundary::Parametric { .. } => self.param_toward((p - self.centroid).angle()),
        };
        let s = crate::wrap(s, 1.0);
        if s >= 1.0 {
            0.0
        } else {
            s
        }
    }

    /// Exit point of the ray `origin + t·direction`, `t ≥ 0`.
    pub fn ray_boundary_intersection(&self, origin: Vec2, direction: Vec2) -> Result<RayHit> {
        if !(origin.is_finite() && direction.is_finite()) || direction.is_zero() {
            return Err(Error::Input("ray needs a finite origin and a non-zero direction".into()));
        }
        if self.gauge(origin) > 1.0 + 1e-12 {
            return Err(Error::Input(format!(
                "ray origin ({}, {}) lies outside the domain",
                origin.x, origin.y
            )));
        }
        let g = |t: f64| self.gauge(origin + direction * t) - 1.0;
        let mut hi = self.diameter / direction.norm();
        while g(hi) <= 0.0 {
            hi *= 2.0;
        }
        let t = if g(0.0) >= 0.0 && g(1e-9 * hi) > 0.0 {
            0.0
        } else {
            let lo = if g(0.0) >= 0.0 { 1e-9 * hi } else { 0.0 };
            brent_root(g, lo, hi, 1e-15 * hi)?
        };
        let point = origin + direction * t;
        let s = self.param_of(point);
        let exact = self.point(s);
        let corner = self.corner_at(s, 1e-9).is_some();
        Ok(RayHit {
            point: if corner { self.point(libm::round(s * self.corner_params().len() as f64) / self.corner_params().len() as f64) } else { exact },
            s,
            corner,
        })
    }

    /// Center of symmetry if every reflected boundary sample lies within
    /// `tol` of `∂Ω`. `norm_level` and ellipse domains are symmetric about
    /// the origin by construction.
    pub fn is_centrosymmetric(&self, tol: f64) -> Option<Vec2> {
        if matches!(self.boundary, Boundary::NormLevel { .. } | Boundary::Ellipse { .. }) {
            return Some(Vec2::ZERO);
        }
        let c = self.centroid;
        let n = 1024;
        for i in 0..n {
            let q = c * 2.0 - self.point((i as f64 + 0.37) / n as f64);
            if self.distance_to_boundary(q) > tol {
                return None;
            }
        }
        Some(c)
    }

    /// The polygon through `n` equally spaced boundary samples.
    pub fn polygonize(&self, n: usize) -> Result<ConvexDomain> {
        ConvexDomain::polygon(self.polyline(n))
    }

    /// Boundary check for a point claimed to lie on `∂Ω`.
    pub(crate) fn check_on_boundary(&self, p: Vec2, what: &str) -> Result<()> {
        let d = self.distance_to_boundary(p);
        if d > ON_BOUNDARY_TOL * self.diameter.max(1.0) {
            return Err(Error::Geometry(format!(
                "{what} ({}, {}) is {d:e} away from the boundary",
                p.x, p.y
            )));
        }
        Ok(())
    }

    /// Straight cut between boundary parameters `s1` and `s2`.
    pub fn chord(&self, s1: f64, s2: f64, side_e: Side) -> Result<Cut> {
        let (a, b) = (self.point(s1), self.point(s2));
        self.finish_cut(CutKind::Chord, [s1, s2], [a, b], side_e)
    }

    /// Straight cut between two points of `∂Ω`.
    pub fn chord_through(&self, p1: Vec2, p2: Vec2, side_e: Side) -> Result<Cut> {
        self.check_on_boundary(p1, "cut endpoint")?;
        self.check_on_boundary(p2, "cut endpoint")?;
        self.finish_cut(CutKind::Chord, [self.param_of(p1), self.param_of(p2)], [p1, p2], side_e)
    }

    /// Cut along a Wulff arc; the arc's start and end must lie on `∂Ω`.
    pub fn arc_cut(&self, shape: Arc<WulffShape>, arc: WulffArc, side_e: Side) -> Result<Cut> {
        let p1 = arc.start(&shape);
        let p2 = arc.end(&shape);
        self.check_on_boundary(p1, "arc start")?;
        self.check_on_boundary(p2, "arc end")?;
        let params = [self.param_of(p1), self.param_of(p2)];
        self.finish_cut(CutKind::WulffArc { arc, shape }, params, [p1, p2], side_e)
    }

    /// Polyline cut from `b(s1)` through `interior` to `b(s2)`.
    pub fn polyline_cut(&self, s1: f64, s2: f64, interior: Vec<Vec2>, side_e: Side) -> Result<Cut> {
        let (a, b) = (self.point(s1), self.point(s2));
        let mut pts = Vec::with_capacity(interior.len() + 2);
        pts.push(a);
        pts.extend(interior);
        pts.push(b);
        self.finish_cut(CutKind::Polyline(pts), [s1, s2], [a, b], side_e)
    }

    fn finish_cut(&self, kind: CutKind, params: [f64; 2], endpoints: [Vec2; 2], side_e: Side) -> Result<Cut> {
        if endpoints[0].distance(endpoints[1]) <= 1e-12 * self.diameter {
            return Err(Error::Geometry("cut endpoints coincide".into()));
        }
        let mut cut = Cut {
            kind,
            params: [crate::wrap(params[0], 1.0), crate::wrap(params[1], 1.0)],
            endpoints,
            side_e,
            area_left: 0.0,
            area_right: 0.0,
        };
        let (right, left) = self.split_sides(&cut)?;
        if right.min(left) < 1e-9 * self.area {
            return Err(Error::Geometry(format!(
                "degenerate cut: one piece has area {:e}",
                right.min(left)
            )));
        }
        cut.area_right = right;
        cut.area_left = left;
        Ok(cut)
    }

    /// Areas `(right, left)` of the two pieces of `Ω` on either side of the
    /// directed cut, each by Green's theorem around its own boundary.
    fn split_sides(&self, cut: &Cut) -> Result<(f64, f64)> {
        let n = 64;
        let (lo, hi) = cut.range();
        for i in 1..n {
            let t = lo + (hi - lo) * i as f64 / n as f64;
            let q = cut.point(t);
            if self.gauge(q) > 1.0 + 1e-9 {
                return Err(Error::Geometry(format!(
                    "cut leaves the domain at ({}, {})",
                    q.x, q.y
                )));
            }
        }
        let [s1, s2] = cut.params;
        let g = cut.green_integral();
        let right = self.boundary_green(s1, s2) - g;
        let left = self.boundary_green(s2, s1) + g;
        if right < -1e-12 * self.area || left < -1e-12 * self.area {
            return Err(Error::Geometry("cut pieces have inconsistent orientation".into()));
        }
        Ok((right.max(0.0), left.max(0.0)))
    }

    /// `(|E|, |Ω∖E|)` for a cut.
    pub fn split(&self, cut: &Cut) -> Result<(f64, f64)> {
        self.check_on_boundary(cut.endpoints[0], "cut endpoint")?;
        self.check_on_boundary(cut.endpoints[1], "cut endpoint")?;
        let (right, left) = self.split_sides(cut)?;
        Ok(match cut.side_e {
            Side::Right => (right, left),
            Side::Left => (left, right),
        })
    }
}

/// Side of a directed cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

#[derive(Debug, Clone)]
pub enum CutKind {
    Chord,
    WulffArc { arc: WulffArc, shape: Arc<WulffShape> },
    /// Vertices including both endpoints.
    Polyline(Vec<Vec2>),
}

impl CutKind {
    pub fn name(&self) -> &'static str {
        match self {
            CutKind::Chord => "chord",
            CutKind::WulffArc { .. } => "wulff_arc",
            CutKind::Polyline(_) => "polyline",
        }
    }
}

/// A curve from `endpoints[0]` to `endpoints[1]` across `Ω`; `E` lies on
/// `side_e` of it.
#[derive(Debug, Clone)]
pub struct Cut {
    pub kind: CutKind,
    /// Boundary parameters of the endpoints.
    pub params: [f64; 2],
    pub endpoints: [Vec2; 2],
    pub side_e: Side,
    area_left: f64,
    area_right: f64,
}

impl Cut {
    /// `½∫(x dy − y dx)` along the cut from its first to its second endpoint.
    pub fn green_integral(&self) -> f64 {
        match &self.kind {
            CutKind::Chord => 0.5 * self.endpoints[0].cross(self.endpoints[1]),
            CutKind::WulffArc { arc, shape } => arc.green_integral(shape),
            CutKind::Polyline(pts) => pts.windows(2).map(|w| 0.5 * w[0].cross(w[1])).sum(),
        }
    }

    /// `|E|` as computed on construction.
    pub fn area_e(&self) -> f64 {
        match self.side_e {
            Side::Left => self.area_left,
            Side::Right => self.area_right,
        }
    }

    /// `|Ω∖E|` as computed on construction.
    pub fn area_complement(&self) -> f64 {
        match self.side_e {
            Side::Left => self.area_right,
            Side::Right => self.area_left,
        }
    }

    pub fn min_area(&self) -> f64 {
        self.area_left.min(self.area_right)
    }

    /// The same cut with `E` on the side of smaller area.
    pub fn with_small_side(mut self) -> Self {
        self.side_e = if self.area_right <= self.area_left {
            Side::Right
        } else {
            Side::Left
        };
        self
    }

    pub fn with_side(mut self, side_e: Side) -> Self {
        self.side_e = side_e;
        self
    }

    /// Euclidean unit normal of the cut at one endpoint (0 or 1), pointing
    /// out of `E`.
    pub fn normal_out_of_e(&self, end: usize) -> Vec2 {
        let (lo, hi) = self.range();
        let t = if end == 0 { lo } else { hi };
        let tangent = self.derivative(t).normalized();
        // the left normal points out of the right-hand piece
        match self.side_e {
            Side::Right => tangent.perp(),
            Side::Left => -tangent.perp(),
        }
    }

    pub fn describe(&self) -> String {
        format!(
            "{} from ({:.6}, {:.6}) to ({:.6}, {:.6})",
            self.kind.name(),
            self.endpoints[0].x,
            self.endpoints[0].y,
            self.endpoints[1].x,
            self.endpoints[1].y
        )
    }

    fn arc_curve(&self) -> Option<WulffArcCurve<'_>> {
        match &self.kind {
            CutKind::WulffArc { arc, shape } => Some(arc.curve(shape)),
            _ => None,
        }
    }
}

impl PlaneCurve for Cut {
    fn range(&self) -> (f64, f64) {
        match &self.kind {
            CutKind::Chord => (0.0, 1.0),
            CutKind::WulffArc { .. } => self.arc_curve().expect("arc").range(),
            CutKind::Polyline(pts) => (0.0, (pts.len() - 1) as f64),
        }
    }

    fn point(&self, t: f64) -> Vec2 {
        match &self.kind {
            CutKind::Chord => Segment::new(self.endpoints[0], self.endpoints[1]).point(t),
            CutKind::WulffArc { .. } => self.arc_curve().expect("arc").point(t),
            CutKind::Polyline(pts) => Polyline::new(pts.clone()).point(t),
        }
    }

    fn derivative(&self, t: f64) -> Vec2 {
        match &self.kind {
            CutKind::Chord => self.endpoints[1] - self.endpoints[0],
            CutKind::WulffArc { .. } => self.arc_curve().expect("arc").derivative(t),
            CutKind::Polyline(pts) => Polyline::new(pts.clone()).derivative(t),
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        match &self.kind {
            CutKind::Chord => Vec::new(),
            CutKind::WulffArc { .. } => self.arc_curve().expect("arc").breakpoints(),
            CutKind::Polyline(pts) => (1..pts.len() - 1).map(|i| i as f64).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wulff::{make_wulff_arc, ArcSweep};
    use core::f64::consts::PI;
    use std::vec;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn area_examples() {
        assert!(close(ConvexDomain::square(1.0).unwrap().area(), 4.0, 1e-15));
        let el = AnisotropicNorm::elliptic(2.0, 1.0).unwrap();
        let omega = ConvexDomain::norm_level(&el, 1.0, LevelMode::Polar).unwrap();
        assert!(close(omega.area(), PI / 2.0, 1e-9));
        assert!(close(ConvexDomain::disk(1.0).unwrap().area(), PI, 1e-12));
    }

    #[test]
    fn polygon_validation() {
        let cw = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(1.0, 0.0),
        ];
        assert!(close(ConvexDomain::polygon(cw).unwrap().area(), 1.0, 1e-15));
        let reflex = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(2.0, 0.0),
            Vec2::new(1.0, 0.3),
            Vec2::new(2.0, 2.0),
            Vec2::new(0.0, 2.0),
        ];
        assert!(matches!(ConvexDomain::polygon(reflex), Err(Error::Input(_))));
        let bowtie_star = vec![
            Vec2::new(1.0, 0.0),
            Vec2::new(-0.809, 0.588),
            Vec2::new(0.309, -0.951),
            Vec2::new(0.309, 0.951),
            Vec2::new(-0.809, -0.588),
        ];
        assert!(matches!(ConvexDomain::polygon(bowtie_star), Err(Error::Input(_))));
    }

    #[test]
    fn frames() {
        let disk = ConvexDomain::disk(1.0).unwrap();
        let f = disk.boundary_frame(0.0).unwrap();
        assert!((f.point - Vec2::new(1.0, 0.0)).max_abs() < 1e-15);
        assert!((f.tangent - Vec2::new(0.0, 1.0)).max_abs() < 1e-15);
        assert!((f.normal - Vec2::new(1.0, 0.0)).max_abs() < 1e-15);
        let sq = ConvexDomain::square(1.0).unwrap();
        // right edge runs from vertex 1 to vertex 2: s in (1/4, 1/2)
        let f = sq.boundary_frame(0.3).unwrap();
        assert!((f.normal - Vec2::new(1.0, 0.0)).max_abs() < 1e-15);
        assert!(matches!(sq.boundary_frame(0.25), Err(Error::Corner { .. })));
        let before = sq.boundary_frame_one_sided(0.25, OneSide::Before);
        let after = sq.boundary_frame_one_sided(0.25, OneSide::After);
        assert!(before.corner && after.corner);
        assert!((before.normal - Vec2::new(0.0, -1.0)).max_abs() < 1e-15);
        assert!((after.normal - Vec2::new(1.0, 0.0)).max_abs() < 1e-15);
        let el = AnisotropicNorm::elliptic(2.0, 1.0).unwrap();
        let omega = ConvexDomain::norm_level(&el, 1.0, LevelMode::Polar).unwrap();
        for i in 0..50 {
            let f = omega.boundary_frame(i as f64 / 50.0 + 0.003).unwrap();
            assert!(f.normal.dot(f.tangent).abs() < 1e-12);
            assert!(f.normal.dot(f.point - omega.centroid()) > 0.0);
        }
    }

    #[test]
    fn splits() {
        let disk = ConvexDomain::disk(1.0).unwrap();
        let cut = disk.chord(0.0, 0.5, Side::Right).unwrap();
        let (e, c) = disk.split(&cut).unwrap();
        assert!(close(e, PI / 2.0, 1e-12) && close(c, PI / 2.0, 1e-12));
        let sq = ConvexDomain::square(1.0).unwrap();
        let cut = sq
            .chord_through(Vec2::new(0.0, -1.0), Vec2::new(0.0, 1.0), Side::Left)
            .unwrap();
        let (e, c) = sq.split(&cut).unwrap();
        assert!(close(e, 2.0, 1e-14) && close(c, 2.0, 1e-14));
    }

    #[test]
    fn degenerate_cuts_are_rejected() {
        let disk = ConvexDomain::disk(1.0).unwrap();
        assert!(matches!(disk.chord(0.2, 0.2, Side::Left), Err(Error::Geometry(_))));
        assert!(matches!(disk.chord(0.2, 0.2 + 1e-7, Side::Left), Err(Error::Geometry(_))));
    }

    #[test]
    fn cut_leaving_the_domain_is_rejected() {
        let disk = ConvexDomain::disk(1.0).unwrap();
        let eu = Arc::new(WulffShape::new(&AnisotropicNorm::euclidean()).unwrap());
        // circle of radius √2 about (0, 1) through (±1, 0); its upper arc leaves the disk
        let r = libm::sqrt(2.0);
        let arc = make_wulff_arc(
            &eu,
            Vec2::new(0.0, 1.0),
            r,
            Vec2::new(1.0, 0.0),
            Vec2::new(-1.0, 0.0),
            ArcSweep::CounterClockwise,
        )
        .unwrap();
        assert!(matches!(disk.arc_cut(eu, arc, Side::Left), Err(Error::Geometry(_))));
    }

    #[test]
    fn centrosymmetry() {
        let el = AnisotropicNorm::elliptic(2.0, 1.0).unwrap();
        let omega = ConvexDomain::norm_level(&el, 1.0, LevelMode::Sublevel).unwrap();
        assert_eq!(omega.is_centrosymmetric(1e-9), Some(Vec2::ZERO));
        let sq = ConvexDomain::square(1.0).unwrap();
        assert!(sq.is_centrosymmetric(1e-9).unwrap().norm() < 1e-12);
        let tri = ConvexDomain::polygon(vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
        ])
        .unwrap();
        assert_eq!(tri.is_centrosymmetric(1e-6), None);
        let shifted = ConvexDomain::polygon(vec![
            Vec2::new(2.0, 1.0),
            Vec2::new(4.0, 1.0),
            Vec2::new(5.0, 3.0),
            Vec2::new(3.0, 3.0),
        ])
        .unwrap();
        let c = shifted.symmetric_about().unwrap();
        assert!((c - Vec2::new(3.5, 2.0)).norm() < 1e-12);
    }

    #[test]
    fn rays() {
        let disk = ConvexDomain::disk(1.0).unwrap();
        let hit = disk.ray_boundary_intersection(Vec2::ZERO, Vec2::new(1.0, 0.0)).unwrap();
        assert!((hit.point - Vec2::new(1.0, 0.0)).norm() < 1e-12);
        assert!(hit.s < 1e-12 || hit.s > 1.0 - 1e-12);
        let sq = ConvexDomain::square(1.0).unwrap();
        let hit = sq.ray_boundary_intersection(Vec2::ZERO, Vec2::new(1.0, 1.0)).unwrap();
        assert!(hit.corner);
        assert!((hit.point - Vec2::new(1.0, 1.0)).norm() < 1e-12);
        let el = AnisotropicNorm::elliptic(2.0, 1.0).unwrap();
        let omega = ConvexDomain::norm_level(&el, 1.0, LevelMode::Polar).unwrap();
        let hit = omega.ray_boundary_intersection(Vec2::ZERO, Vec2::new(0.0, 1.0)).unwrap();
        assert!((hit.point - Vec2::new(0.0, 1.0)).norm() < 1e-12);
        assert!(matches!(
            disk.ray_boundary_intersection(Vec2::new(2.0, 0.0), Vec2::new(1.0, 0.0)),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn parametric_domain_matches_closed_form() {
        let omega = ConvexDomain::parametric(
            Arc::new(|s: f64| Vec2::new(2.0 * libm::cos(TAU * s), libm::sin(TAU * s))),
            Arc::new(|s: f64| Vec2::new(-2.0 * libm::sin(TAU * s), libm::cos(TAU * s)) * TAU),
        )
        .unwrap();
        assert!(close(omega.area(), 2.0 * PI, 1e-10));
        assert!(omega.symmetric_about().is_some());
        assert!(omega.contains(Vec2::new(1.9, 0.0)));
        assert!(!omega.contains(Vec2::new(0.0, 1.01)));
        let hit = omega.ray_boundary_intersection(Vec2::ZERO, Vec2::new(1.0, 1.0)).unwrap();
        assert!(omega.distance_to_boundary(hit.point) < 1e-12);
    }
}
