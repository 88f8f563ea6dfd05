//! The Wulff shape `W = {H° < 1}`, arcs of its homothetic copies and the
//! anisotropic curvature of plane curves.
//!
//! `∂W` is parametrized by the Euclidean outer normal angle `θ`:
//! `w(θ) = ∇H(cos θ, sin θ)`. Sector areas `½∫ w × w′ dθ` are tabulated once,
//! which makes both areas swept by Wulff arcs and their anisotropic lengths
//! table lookups: the anisotropic length of `ρ·w([θa, θb])` equals twice `ρ`
//! times the sector area over the same angles.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, TAU};

use crate::curve::PlaneCurve;
use crate::error::{Error, Result};
use crate::norm::AnisotropicNorm;
use crate::optimize::{brent_root, golden_min};
use crate::quadrature::{gauss_legendre8, CumulativeTable};
use crate::vec2::Vec2;

/// Initial number of θ-cells for the tabulated integrals over `∂W`.
pub const WULFF_CELLS: usize = 4096;
const AREA_REL_TOL: f64 = 1e-10;
/// Sweeps shorter than this are integrated directly instead of by table
/// differences, which would cancel.
const SHORT_SWEEP: f64 = 1e-2;

#[derive(Debug, Clone)]
pub struct WulffShape {
    norm: AnisotropicNorm,
    sectors: CumulativeTable,
    kappa: f64,
}

impl WulffShape {
    pub fn new(norm: &AnisotropicNorm) -> Result<Self> {
        if !norm.is_smooth() {
            return Err(Error::Unsupported(
                "Wulff shape of a non-smooth norm; build it from a p-norm approximant".into(),
            ));
        }
        let sectors = CumulativeTable::build_converged(
            |t| sector_density(norm, t),
            TAU,
            WULFF_CELLS,
            AREA_REL_TOL,
        )?;
        let kappa_table = CumulativeTable::build_converged(
            |t| {
                let h = norm.value(Vec2::from_angle(t));
                0.5 / (h * h)
            },
            TAU,
            WULFF_CELLS,
            AREA_REL_TOL,
        )?;
        Ok(WulffShape {
            norm: norm.clone(),
            sectors,
            kappa: kappa_table.total(),
        })
    }

    pub fn norm(&self) -> &AnisotropicNorm {
        &self.norm
    }

    /// `|W|`, by Green's theorem `½∮(x dy − y dx)` over the θ-parametrization.
    pub fn area(&self) -> f64 {
        self.sectors.total()
    }

    /// `κ_H = |{H < 1}|`.
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// `w(θ) = ∇H(cos θ, sin θ)`, the point of `∂W` with outer normal angle `θ`.
    pub fn boundary_point(&self, theta: f64) -> Vec2 {
        self.norm.grad(Vec2::from_angle(theta))
    }

    /// `dw/dθ = D²H(u) u′`.
    pub fn boundary_derivative(&self, theta: f64) -> Vec2 {
        let u = Vec2::from_angle(theta);
        self.norm.hessian(u).apply(u.perp())
    }

    /// Outer normal angle of `∂W` at a point `q` (only its direction matters).
    pub fn normal_angle(&self, q: Vec2) -> f64 {
        self.norm.polar().grad(q).angle()
    }

    /// Signed area swept by the segment from the origin to `w(θ)` as `θ`
    /// runs from `from` to `to`.
    pub fn sector_area(&self, from: f64, to: f64) -> f64 {
        if (to - from).abs() < SHORT_SWEEP {
            return self.short_integral(|t| sector_density(&self.norm, t), from, to);
        }
        self.sectors.between(|t| sector_density(&self.norm, t), from, to)
    }

    /// `w(t + sweep) − w(t)`; integrated from `w′` for short sweeps so the
    /// difference keeps full relative precision.
    pub fn chord_vector(&self, t: f64, sweep: f64) -> Vec2 {
        if sweep.abs() < SHORT_SWEEP {
            Vec2::new(
                self.short_integral(|s| self.boundary_derivative(s).x, t, t + sweep),
                self.short_integral(|s| self.boundary_derivative(s).y, t, t + sweep),
            )
        } else {
            self.boundary_point(t + sweep) - self.boundary_point(t)
        }
    }

    /// Gauss–Legendre rule over `[a, b]`, split at the axis seams of
    /// piecewise norms.
    fn short_integral<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let sign = if a <= b { 1.0 } else { -1.0 };
        let mut total = 0.0;
        let mut x = lo;
        if self.norm.has_axis_seams() {
            let mut k = libm::floor(lo / FRAC_PI_2) + 1.0;
            while k * FRAC_PI_2 < hi {
                let seam = k * FRAC_PI_2;
                total += gauss_legendre8(&mut f, x, seam);
                x = seam;
                k += 1.0;
            }
        }
        total += gauss_legendre8(&mut f, x, hi);
        sign * total
    }

    /// `n` samples `(θ, w(θ))` of the boundary, equally spaced in θ.
    pub fn polyline(&self, n: usize) -> Vec<(f64, Vec2)> {
        (0..n)
            .map(|i| {
                let t = TAU * i as f64 / n as f64;
                (t, self.boundary_point(t))
            })
            .collect()
    }

    /// The full boundary `t·∂W + center` as a closed curve in θ.
    pub fn scaled_boundary(&self, center: Vec2, scale: f64) -> WulffArcCurve<'_> {
        WulffArcCurve {
            shape: self,
            arc: WulffArc::new(self, center, scale, 0.0, TAU),
        }
    }
}

/// `½ w × w′` at angle `t`.
fn sector_density(norm: &AnisotropicNorm, t: f64) -> f64 {
    let u = Vec2::from_angle(t);
    let w = norm.grad(u);
    let dw = norm.hessian(u).apply(u.perp());
    0.5 * w.cross(dw)
}

/// Which way an arc runs from its first to its second endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcSweep {
    CounterClockwise,
    Clockwise,
    /// The direction with the smaller θ-sweep.
    Minor,
    /// The direction with the larger θ-sweep.
    Major,
}

/// An arc `center + radius·w(θ)` for θ from `theta_start` to `theta_end`.
///
/// `theta_end < theta_start` means the arc runs clockwise. The curvature of
/// the arc is `1 / radius`. Points are measured from `start_point`, which
/// keeps nearly straight arcs (huge radius, far-away center) accurate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WulffArc {
    pub center: Vec2,
    pub radius: f64,
    pub theta_start: f64,
    pub theta_end: f64,
    pub start_point: Vec2,
}

impl WulffArc {
    pub fn new(shape: &WulffShape, center: Vec2, radius: f64, theta_start: f64, theta_end: f64) -> Self {
        WulffArc {
            center,
            radius,
            theta_start,
            theta_end,
            start_point: center + shape.boundary_point(theta_start) * radius,
        }
    }

    pub fn curve<'a>(&self, shape: &'a WulffShape) -> WulffArcCurve<'a> {
        WulffArcCurve { shape, arc: *self }
    }

    pub fn point(&self, shape: &WulffShape, theta: f64) -> Vec2 {
        self.start_point + shape.chord_vector(self.theta_start, theta - self.theta_start) * self.radius
    }

    pub fn start(&self, _shape: &WulffShape) -> Vec2 {
        self.start_point
    }

    pub fn end(&self, shape: &WulffShape) -> Vec2 {
        self.point(shape, self.theta_end)
    }

    pub fn curvature(&self) -> f64 {
        1.0 / self.radius
    }

    pub fn reversed(&self, shape: &WulffShape) -> WulffArc {
        WulffArc {
            theta_start: self.theta_end,
            theta_end: self.theta_start,
            start_point: self.end(shape),
            ..*self
        }
    }

    /// `½∫(x dy − y dx)` along the arc in its direction of travel.
    pub fn green_integral(&self, shape: &WulffShape) -> f64 {
        0.5 * self.start(shape).cross(self.end(shape)) + self.segment_area(shape)
    }

    /// Signed area between the arc and its chord, `½∫(q − q_start) × dq`;
    /// positive when the arc runs counterclockwise about its center.
    pub fn segment_area(&self, shape: &WulffShape) -> f64 {
        let (ta, tb) = (self.theta_start, self.theta_end);
        let r2 = self.radius * self.radius;
        if (tb - ta).abs() >= SHORT_SWEEP {
            let wa = shape.boundary_point(ta);
            let wb = shape.boundary_point(tb);
            return r2 * (shape.sector_area(ta, tb) - 0.5 * wa.cross(wb));
        }
        let f = |t: f64| 0.5 * shape.chord_vector(ta, t - ta).cross(shape.boundary_derivative(t));
        r2 * shape.short_integral(f, ta, tb)
    }

    /// Anisotropic length and [`segment_area`](Self::segment_area) together,
    /// sharing one sector integral.
    pub fn length_and_segment(&self, shape: &WulffShape) -> (f64, f64) {
        let (ta, tb) = (self.theta_start, self.theta_end);
        if (tb - ta).abs() < SHORT_SWEEP {
            return (self.anisotropic_length(shape), self.segment_area(shape));
        }
        let s = shape.sector_area(ta, tb);
        let wa = shape.boundary_point(ta);
        let wb = shape.boundary_point(tb);
        let r = self.radius;
        (2.0 * r * s.abs(), r * r * (s - 0.5 * wa.cross(wb)))
    }

    /// Anisotropic length `∫ H(−y′, x′)`, from the sector table.
    pub fn anisotropic_length(&self, shape: &WulffShape) -> f64 {
        2.0 * self.radius * shape.sector_area(self.theta_start, self.theta_end).abs()
    }
}

/// A [`WulffArc`] bound to its shape, usable as a [`PlaneCurve`] in θ.
#[derive(Debug, Clone, Copy)]
pub struct WulffArcCurve<'a> {
    shape: &'a WulffShape,
    arc: WulffArc,
}

impl WulffArcCurve<'_> {
    fn direction(&self) -> f64 {
        if self.arc.theta_end >= self.arc.theta_start {
            1.0
        } else {
            -1.0
        }
    }

    fn theta(&self, t: f64) -> f64 {
        if self.direction() > 0.0 {
            t
        } else {
            self.arc.theta_start + self.arc.theta_end - t
        }
    }
}

impl PlaneCurve for WulffArcCurve<'_> {
    /// The parameter is θ itself for counterclockwise arcs and runs over
    /// the mirrored interval for clockwise ones, so the range is increasing.
    fn range(&self) -> (f64, f64) {
        let (a, b) = (self.arc.theta_start, self.arc.theta_end);
        (a.min(b), a.max(b))
    }

    fn point(&self, t: f64) -> Vec2 {
        self.arc.point(self.shape, self.theta(t))
    }

    fn derivative(&self, t: f64) -> Vec2 {
        self.shape.boundary_derivative(self.theta(t)) * (self.arc.radius * self.direction())
    }

    fn breakpoints(&self) -> Vec<f64> {
        if !self.shape.norm.has_axis_seams() {
            return Vec::new();
        }
        let (lo, hi) = self.range();
        let mut out = Vec::new();
        let mut k = libm::ceil(lo / FRAC_PI_2);
        while k * FRAC_PI_2 < hi {
            let t = k * FRAC_PI_2;
            if t > lo {
                out.push(if self.direction() > 0.0 {
                    t
                } else {
                    self.arc.theta_start + self.arc.theta_end - t
                });
            }
            k += 1.0;
        }
        out.sort_by(f64::total_cmp);
        out
    }
}

/// Relative tolerance on `H°(p − center) = radius` for arc endpoints.
pub const ENDPOINT_TOL: f64 = 1e-8;

/// The arc of `center + radius·∂W` from `p1` to `p2`.
pub fn make_wulff_arc(
    shape: &WulffShape,
    center: Vec2,
    radius: f64,
    p1: Vec2,
    p2: Vec2,
    sweep: ArcSweep,
) -> Result<WulffArc> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::Input(format!("arc radius must be positive, got {radius}")));
    }
    if p1 == p2 {
        return Err(Error::Input("arc endpoints coincide".into()));
    }
    let polar = shape.norm.polar();
    for p in [p1, p2] {
        let r = polar.value(p - center);
        if (r - radius).abs() > ENDPOINT_TOL * radius {
            return Err(Error::Input(format!(
                "endpoint ({}, {}) is at polar distance {r} from the center, not {radius}",
                p.x, p.y
            )));
        }
    }
    let t1 = shape.normal_angle(p1 - center);
    let t2 = shape.normal_angle(p2 - center);
    let ccw = crate::wrap(t2 - t1, TAU);
    let ccw_sweep = match sweep {
        ArcSweep::CounterClockwise => true,
        ArcSweep::Clockwise => false,
        ArcSweep::Minor => ccw <= TAU - ccw,
        ArcSweep::Major => ccw > TAU - ccw,
    };
    let theta_end = if ccw_sweep { t1 + ccw } else { t1 - (TAU - ccw) };
    Ok(WulffArc {
        center,
        radius,
        theta_start: t1,
        theta_end,
        start_point: p1,
    })
}

/// The arc from `p1` to `p2` along which the outer normal angle turns by
/// `sweep` (counterclockwise when positive).
///
/// `|sweep| < π` gives the arc bulging away from its center, `π` the half
/// boundary, and `π < |sweep| < 2π` the arc wrapping around its center.
/// The start angle solves `w(t + sweep) − w(t) ∥ p2 − p1`; the radius then
/// follows from the chord length, which keeps nearly straight arcs well
/// conditioned.
pub fn arc_with_sweep(shape: &WulffShape, p1: Vec2, p2: Vec2, sweep: f64) -> Result<WulffArc> {
    let d = p2 - p1;
    if d.is_zero() {
        return Err(Error::Input("arc endpoints coincide".into()));
    }
    if !(sweep.is_finite() && sweep != 0.0 && sweep.abs() < TAU) {
        return Err(Error::Input(format!("sweep must lie in (−2π, 2π) without 0, got {sweep}")));
    }
    let phi = d.angle();
    let g = |t: f64| {
        let a = shape.chord_vector(t, sweep).angle() - phi;
        crate::wrap(a + core::f64::consts::PI, TAU) - core::f64::consts::PI
    };
    let t0 = phi - 0.5 * sweep - sweep.signum() * FRAC_PI_2;
    // the chord direction turns monotonically in t, so a coarse scan usually
    // brackets the single crossing
    let bracket = |n: usize| {
        let step = TAU / n as f64;
        let mut best: Option<(f64, f64)> = None;
        let mut a = t0 - core::f64::consts::PI;
        let mut ga = g(a);
        for _ in 0..n {
            let b = a + step;
            let gb = g(b);
            if ga <= 0.0 && gb > 0.0 && ga > -FRAC_PI_2 && gb < FRAC_PI_2 {
                let mid = 0.5 * (a + b);
                if best.is_none_or(|(m, _)| (mid - t0).abs() < (m - t0).abs()) {
                    best = Some((mid, a));
                }
            }
            a = b;
            ga = gb;
        }
        best.map(|(_, lo)| (lo, lo + step))
    };
    let (lo, hi) = bracket(16)
        .or_else(|| bracket(64))
        .ok_or_else(|| Error::Numeric("no start angle matches the chord direction".into()))?;
    let t1 = brent_root(g, lo, hi, 1e-15)?;
    let c = shape.chord_vector(t1, sweep);
    let radius = d.norm() / c.norm();
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::Numeric(format!("degenerate arc radius {radius}")));
    }
    Ok(WulffArc {
        center: p1 - shape.boundary_point(t1) * radius,
        radius,
        theta_start: t1,
        theta_end: t1 + sweep,
        start_point: p1,
    })
}

/// Centers of the scaled Wulff boundaries of a given radius through two points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArcCenters {
    /// The radius is the smallest feasible one; both solutions coincide at
    /// the chord midpoint.
    Tangent(Vec2),
    /// `left` lies to the left of the directed chord `p1 → p2`.
    Pair { left: Vec2, right: Vec2 },
}

impl ArcCenters {
    pub fn centers(&self) -> Vec<Vec2> {
        match *self {
            ArcCenters::Tangent(c) => alloc::vec![c],
            ArcCenters::Pair { left, right } => alloc::vec![left, right],
        }
    }
}

const FIT_GRID: usize = 128;

/// Smallest radius of a scaled Wulff boundary through both points:
/// `H°(p2 − p1) / 2`.
pub fn min_fit_radius(shape: &WulffShape, p1: Vec2, p2: Vec2) -> f64 {
    0.5 * shape.norm.polar().value(p2 - p1)
}

/// Solves `H°(p1 − c) = H°(p2 − c) = radius` for the center `c`.
///
/// Roots are bracketed along `∂W` (the two points `q` with `q + (p2 − p1)/radius`
/// also on `∂W`) and then polished with Newton's method on the 2×2 system.
pub fn fit_wulff_arc_through(shape: &WulffShape, p1: Vec2, p2: Vec2, radius: f64) -> Result<ArcCenters> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::Input(format!("radius must be positive, got {radius}")));
    }
    let chord = p2 - p1;
    if chord.is_zero() {
        return Err(Error::Input("arc endpoints coincide".into()));
    }
    let r_min = min_fit_radius(shape, p1, p2);
    if radius < r_min * (1.0 - 1e-12) {
        return Err(Error::Infeasible(format!(
            "radius {radius} is below the smallest feasible radius {r_min}"
        )));
    }
    if radius <= r_min * (1.0 + 1e-12) {
        return Ok(ArcCenters::Tangent(p1.lerp(p2, 0.5)));
    }
    let polar = shape.norm.polar();
    let d = chord / radius;
    let f = |t: f64| polar.value(shape.boundary_point(t) + d) - 1.0;

    let step = TAU / FIT_GRID as f64;
    let vals: Vec<f64> = (0..FIT_GRID).map(|i| f(step * i as f64)).collect();
    let mut roots: Vec<f64> = Vec::with_capacity(2);
    for i in 0..FIT_GRID {
        let j = (i + 1) % FIT_GRID;
        if vals[i] == 0.0 {
            roots.push(step * i as f64);
        } else if vals[i] * vals[j] < 0.0 {
            let a = step * i as f64;
            roots.push(brent_root(f, a, a + step, 1e-15)?);
        }
    }
    if roots.len() < 2 {
        // nearly tangent: both roots sit inside one grid cell around the minimum
        let (imin, _) = vals
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("grid is non-empty");
        let tc = step * imin as f64;
        let (tm, fm) = golden_min(f, tc - step, tc + step, 1e-15);
        if fm >= 0.0 {
            return Ok(ArcCenters::Tangent(p1.lerp(p2, 0.5)));
        }
        roots.clear();
        roots.push(brent_root(f, tc - step, tm, 1e-15)?);
        roots.push(brent_root(f, tm, tc + step, 1e-15)?);
    }
    if roots.len() != 2 {
        return Err(Error::Numeric(format!(
            "expected two center solutions, found {}",
            roots.len()
        )));
    }
    let mut centers = [Vec2::ZERO; 2];
    for (c, &t) in centers.iter_mut().zip(roots.iter()) {
        *c = newton_polish(shape, p1, p2, radius, p1 - shape.boundary_point(t) * radius)?;
    }
    if (centers[0] - centers[1]).norm() <= 1e-12 * radius {
        return Ok(ArcCenters::Tangent(centers[0]));
    }
    let side = |c: Vec2| chord.cross(c - p1);
    let (left, right) = if side(centers[0]) >= side(centers[1]) {
        (centers[0], centers[1])
    } else {
        (centers[1], centers[0])
    };
    Ok(ArcCenters::Pair { left, right })
}

fn newton_polish(shape: &WulffShape, p1: Vec2, p2: Vec2, radius: f64, seed: Vec2) -> Result<Vec2> {
    let polar = shape.norm.polar();
    let residual = |c: Vec2| {
        Vec2::new(
            polar.value(p1 - c) - radius,
            polar.value(p2 - c) - radius,
        )
    };
    let mut c = seed;
    let mut r = residual(c);
    for _ in 0..100 {
        if r.max_abs() <= 1e-12 * radius {
            return Ok(c);
        }
        let g1 = -polar.grad(p1 - c);
        let g2 = -polar.grad(p2 - c);
        let det = g1.cross(g2);
        if det.abs() < 1e-300 {
            break;
        }
        // solve [g1; g2] δ = −r
        let delta = Vec2::new(-r.x * g2.y + r.y * g1.y, -g1.x * r.y + g2.x * r.x) / det;
        let next = c + delta;
        let rn = residual(next);
        if rn.max_abs() >= r.max_abs() {
            break;
        }
        c = next;
        r = rn;
    }
    // bracketed roots are already accurate; Newton only stalls at round-off
    if r.max_abs() <= 1e-9 * radius {
        Ok(c)
    } else {
        Err(Error::Numeric(format!(
            "center fit did not converge (residual {:e})",
            r.max_abs()
        )))
    }
}

/// Anisotropic curvature `k_H` of `curve` at parameter `t`.
///
/// The curve is rotated so its tangent at `t` is horizontal, with the side
/// to the left of the direction of travel above; there the enclosed region
/// is locally the epigraph of a graph `v` and
/// `k_H = −d/dx H_x(−v′(x), 1)`, evaluated with the rotated anisotropy.
/// Curves bending like a counterclockwise `∂W` have positive curvature.
pub fn anisotropic_curvature<C: PlaneCurve + ?Sized>(norm: &AnisotropicNorm, curve: &C, t: f64) -> Result<f64> {
    if !norm.is_smooth() {
        return Err(Error::Unsupported("anisotropic curvature needs a smooth norm".into()));
    }
    let tangent = curve.derivative(t);
    if !(tangent.is_finite() && tangent.norm() > 0.0) {
        return Err(Error::Numeric(format!("degenerate tangent at t = {t}")));
    }
    let phi = tangent.angle();
    let to_local = |v: Vec2| v.rotate(-phi);
    let e1_global = Vec2::new(1.0, 0.0).rotate(phi);
    let (lo, hi) = curve.range();
    let delta = 1e-5 * (hi - lo).max(1e-3);
    let g = |s: f64| -> Result<f64> {
        let d = to_local(curve.derivative(s));
        if d.x.abs() <= 1e-12 * d.norm() {
            return Err(Error::Numeric(format!(
                "tangent turned vertical in the local chart near t = {s}"
            )));
        }
        let slope = d.y / d.x;
        let eta = Vec2::new(-slope, 1.0).rotate(phi);
        Ok(e1_global.dot(norm.grad(eta)))
    };
    let (a, b) = if t - delta < lo {
        (t, t + 2.0 * delta)
    } else if t + delta > hi {
        (t - 2.0 * delta, t)
    } else {
        (t - delta, t + delta)
    };
    let dg = (g(b)? - g(a)?) / (b - a);
    let dx_dt = to_local(tangent).x;
    Ok(-dg / dx_dt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{FnCurve, Segment};
    use core::f64::consts::PI;

    fn shape(norm: AnisotropicNorm) -> WulffShape {
        WulffShape::new(&norm).unwrap()
    }

    #[test]
    fn boundary_point_examples() {
        let eu = shape(AnisotropicNorm::euclidean());
        assert!((eu.boundary_point(FRAC_PI_2) - Vec2::new(0.0, 1.0)).max_abs() < 1e-15);
        let el = shape(AnisotropicNorm::elliptic(2.0, 1.0).unwrap());
        let p = el.boundary_point(0.0);
        assert!((p - Vec2::new(0.5, 0.0)).max_abs() < 1e-15);
        assert!((el.norm().polar().value(p) - 1.0).abs() < 1e-15);
        let p4 = shape(AnisotropicNorm::p_norm(4.0).unwrap());
        let q = p4.boundary_point(PI / 4.0);
        assert!((p4.norm().polar().value(q) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn boundary_normal_is_the_parameter_direction() {
        let p4 = shape(AnisotropicNorm::p_norm(4.0).unwrap());
        for i in 0..32 {
            let t = 0.1 + TAU * i as f64 / 32.0;
            let tangent = p4.boundary_derivative(t);
            assert!(tangent.dot(Vec2::from_angle(t)).abs() < 1e-12 * tangent.norm());
            assert!((p4.normal_angle(p4.boundary_point(t)) - t).rem_euclid(TAU) < 1e-9
                || (p4.normal_angle(p4.boundary_point(t)) - t).rem_euclid(TAU) > TAU - 1e-9);
        }
    }

    #[test]
    fn area_and_kappa_closed_forms() {
        let eu = shape(AnisotropicNorm::euclidean());
        assert!((eu.area() - PI).abs() < 1e-9);
        assert!((eu.kappa() - PI).abs() < 1e-9);
        let el = shape(AnisotropicNorm::elliptic(2.0, 1.0).unwrap());
        assert!((el.area() - PI / 2.0).abs() < 1e-8);
        assert!((el.kappa() - 2.0 * PI).abs() < 1e-8);
    }

    #[test]
    fn non_smooth_norm_is_rejected() {
        let m = AnisotropicNorm::max_approx(alloc::vec![8.0, 16.0]).unwrap();
        assert!(matches!(WulffShape::new(&m), Err(Error::Unsupported(_))));
    }

    #[test]
    fn quarter_circle_arc() {
        let eu = shape(AnisotropicNorm::euclidean());
        let arc = make_wulff_arc(
            &eu,
            Vec2::ZERO,
            1.0,
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
            ArcSweep::Minor,
        )
        .unwrap();
        assert!((arc.theta_end - arc.theta_start - FRAC_PI_2).abs() < 1e-12);
        assert!((arc.anisotropic_length(&eu) - FRAC_PI_2).abs() < 1e-10);
        let long = make_wulff_arc(
            &eu,
            Vec2::ZERO,
            1.0,
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
            ArcSweep::Major,
        )
        .unwrap();
        assert!((long.theta_end - long.theta_start + 1.5 * PI).abs() < 1e-12);
    }

    #[test]
    fn elliptic_arc_points_lie_on_scaled_boundary() {
        let el = shape(AnisotropicNorm::elliptic(2.0, 1.0).unwrap());
        let c = Vec2::new(0.3, -0.2);
        let p1 = c + el.boundary_point(0.0) * 2.0;
        let p2 = c + el.boundary_point(PI) * 2.0;
        let arc = make_wulff_arc(&el, c, 2.0, p1, p2, ArcSweep::CounterClockwise).unwrap();
        let polar = el.norm().polar();
        for q in arc.curve(&el).sample(50) {
            assert!((polar.value(q - c) - 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn arc_rejects_bad_endpoints() {
        let eu = shape(AnisotropicNorm::euclidean());
        let p = Vec2::new(1.0, 0.0);
        assert!(matches!(
            make_wulff_arc(&eu, Vec2::ZERO, 1.0, p, p, ArcSweep::Minor),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            make_wulff_arc(&eu, Vec2::ZERO, 1.0, p, Vec2::new(0.0, 2.0), ArcSweep::Minor),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn fit_examples() {
        let eu = shape(AnisotropicNorm::euclidean());
        let a = Vec2::new(-1.0, 0.0);
        let b = Vec2::new(1.0, 0.0);
        match fit_wulff_arc_through(&eu, a, b, 1.0).unwrap() {
            ArcCenters::Tangent(c) => assert!(c.norm() < 1e-12),
            other => panic!("expected tangent case, got {other:?}"),
        }
        match fit_wulff_arc_through(&eu, a, b, libm::sqrt(2.0)).unwrap() {
            ArcCenters::Pair { left, right } => {
                assert!((left - Vec2::new(0.0, 1.0)).norm() < 1e-12);
                assert!((right - Vec2::new(0.0, -1.0)).norm() < 1e-12);
            }
            other => panic!("expected two centers, got {other:?}"),
        }
        let p4 = shape(AnisotropicNorm::p_norm(4.0).unwrap());
        let polar = p4.norm().polar();
        let cs = fit_wulff_arc_through(&p4, a, b, 1.3).unwrap().centers();
        assert_eq!(cs.len(), 2);
        for c in cs {
            let res = (polar.value(a - c) - 1.3).abs().max((polar.value(b - c) - 1.3).abs());
            assert!(res < 1e-10, "{res}");
        }
        assert!(matches!(
            fit_wulff_arc_through(&eu, a, b, 0.9),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn fit_near_tangent_radius() {
        let p4 = shape(AnisotropicNorm::p_norm(4.0).unwrap());
        let (a, b) = (Vec2::new(-0.4, 0.1), Vec2::new(0.7, 0.5));
        let r_min = min_fit_radius(&p4, a, b);
        let polar = p4.norm().polar();
        for eps in [1e-9, 1e-6, 1e-3] {
            let rho = r_min * (1.0 + eps);
            for c in fit_wulff_arc_through(&p4, a, b, rho).unwrap().centers() {
                assert!((polar.value(a - c) - rho).abs() < 1e-9);
                assert!((polar.value(b - c) - rho).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn curvature_of_segment_and_circle() {
        let n = AnisotropicNorm::euclidean();
        let s = Segment::new(Vec2::new(0.0, 0.0), Vec2::new(2.0, 1.0));
        assert!(anisotropic_curvature(&n, &s, 0.4).unwrap().abs() < 1e-9);
        let eu = shape(n.clone());
        let half = eu.scaled_boundary(Vec2::new(0.2, 0.1), 0.5);
        for t in [0.3, 1.6, 3.3, 5.0] {
            let k = anisotropic_curvature(&n, &half, t).unwrap();
            assert!((k - 2.0).abs() < 1e-6, "{k}");
        }
    }

    #[test]
    fn curvature_is_constant_on_scaled_p4_wulff_boundary() {
        let n = AnisotropicNorm::p_norm(4.0).unwrap();
        let w = shape(n.clone());
        let big = w.scaled_boundary(Vec2::ZERO, 2.0);
        for t in [0.2, 0.9, 2.0, 3.6, 5.5] {
            let k = anisotropic_curvature(&n, &big, t).unwrap();
            assert!((k - 0.5).abs() < 1e-5, "{t}: {k}");
        }
    }

    #[test]
    fn curvature_sign_flips_with_orientation() {
        let n = AnisotropicNorm::euclidean();
        let cw = FnCurve::new(
            (0.0, TAU),
            |t: f64| Vec2::new(libm::cos(-t), libm::sin(-t)),
            |t: f64| Vec2::new(libm::sin(-t), -libm::cos(-t)),
        );
        assert!((anisotropic_curvature(&n, &cw, 1.0).unwrap() + 1.0).abs() < 1e-6);
    }

    #[test]
    fn sweep_arcs_hit_both_endpoints() {
        let (p1, p2) = (Vec2::new(-1.0, 0.2), Vec2::new(0.8, 0.5));
        for norm in [
            AnisotropicNorm::euclidean(),
            AnisotropicNorm::elliptic(3.0, 0.5).unwrap(),
            AnisotropicNorm::piecewise_pq(4.0, 3.0).unwrap(),
        ] {
            let w = shape(norm);
            for sweep in [1e-9, -1e-5, 0.3, -1.0, PI, 4.0, -5.5] {
                let arc = arc_with_sweep(&w, p1, p2, sweep).unwrap();
                assert!((arc.start(&w) - p1).norm() < 1e-9, "{sweep}");
                assert!((arc.end(&w) - p2).norm() < 1e-9, "{sweep}");
                let polar = w.norm().polar();
                let mid = arc.point(&w, arc.theta_start + 0.5 * sweep);
                assert!((polar.value(mid - arc.center) / arc.radius - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn euclidean_sweep_arc_matches_circle_geometry() {
        let w = shape(AnisotropicNorm::euclidean());
        // quarter turn through (1, 0) and (0, 1): the unit circle about the origin
        let arc = arc_with_sweep(&w, Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0), FRAC_PI_2).unwrap();
        assert!(arc.center.norm() < 1e-12);
        assert!((arc.radius - 1.0).abs() < 1e-12);
        // circular segment area r²(φ − sin φ)/2
        assert!((arc.segment_area(&w) - 0.5 * (FRAC_PI_2 - 1.0)).abs() < 1e-12);
        // nearly straight arcs: segment area ≈ r²φ³/12 with r = L/φ
        let phi = 1e-6;
        let arc = arc_with_sweep(&w, Vec2::ZERO, Vec2::new(2.0, 0.0), phi).unwrap();
        let r = 1.0 / libm::sin(phi / 2.0);
        // φ − sin φ by its series, which does not cancel
        let expect = 0.5 * r * r * (phi * phi * phi / 6.0 - libm::pow(phi, 5.0) / 120.0);
        let got = arc.segment_area(&w);
        assert!((got - expect).abs() < 1e-9 * expect, "{got:e} vs {expect:e}");
        assert!((arc.anisotropic_length(&w) - r * phi).abs() < 1e-12);
    }

    #[test]
    fn green_integral_of_full_boundary_is_area() {
        let p4 = shape(AnisotropicNorm::p_norm(4.0).unwrap());
        let full = WulffArc::new(&p4, Vec2::new(0.7, -0.3), 1.5, 0.4, 0.4 + TAU);
        assert!((full.green_integral(&p4) - 2.25 * p4.area()).abs() < 1e-10);
        assert!((full.reversed(&p4).green_integral(&p4) + 2.25 * p4.area()).abs() < 1e-10);
    }
}
