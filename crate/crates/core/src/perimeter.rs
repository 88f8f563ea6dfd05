//! Anisotropic length `L_H(γ) = ∫ H(−y′, x′) dt`, relative perimeters and
//! the isoperimetric quotient.

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curve::{FnCurve, PlaneCurve, Segment};
use crate::error::{Error, Result};
use crate::geometry::{ConvexDomain, Cut};
use crate::norm::AnisotropicNorm;
use crate::optimize::bisect;
use crate::quadrature::adaptive_simpson;
use crate::vec2::Vec2;

/// Absolute quadrature tolerance per smooth piece.
pub const PIECE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerimeterReport {
    /// `P_H`.
    pub value: f64,
    /// Euclidean length `P`.
    pub euclidean_value: f64,
    pub quadrature_error_estimate: f64,
}

impl PerimeterReport {
    /// Checks `α·P ≤ P_H ≤ β·P` with a small relative slack.
    pub fn within_sandwich(&self, norm: &AnisotropicNorm) -> bool {
        let slack = 1e-9 * self.euclidean_value + self.quadrature_error_estimate;
        norm.alpha() * self.euclidean_value <= self.value + slack
            && self.value <= norm.beta() * self.euclidean_value + slack
    }
}

/// Parameters inside `(lo, hi)` where a derivative component changes sign,
/// located on a 64-sample scan and refined by bisection.
fn axis_crossings<C: PlaneCurve + ?Sized>(curve: &C, lo: f64, hi: f64) -> Vec<f64> {
    let n = 64;
    let mut out = Vec::new();
    for comp in 0..2 {
        let g = |t: f64| {
            let d = curve.derivative(t);
            if comp == 0 {
                d.x
            } else {
                d.y
            }
        };
        let mut a = lo;
        let mut ga = g(a);
        for i in 1..=n {
            let b = lo + (hi - lo) * i as f64 / n as f64;
            let gb = g(b);
            if ga * gb < 0.0 {
                if let Ok(t) = bisect(g, a, b, 1e-14 * (hi - lo).max(1.0)) {
                    out.push(t);
                }
            }
            a = b;
            ga = gb;
        }
    }
    out
}

/// `L_H(γ)` and the Euclidean length by adaptive Simpson over the smooth
/// pieces of `γ`. For norms with axis seams the pieces are further split
/// where `x′` or `y′` changes sign.
pub fn curve_length_h<C: PlaneCurve + ?Sized>(norm: &AnisotropicNorm, curve: &C) -> Result<PerimeterReport> {
    let (lo, hi) = curve.range();
    if !(lo.is_finite() && hi.is_finite()) || hi < lo {
        return Err(Error::Input("curve needs a finite increasing parameter range".into()));
    }
    let mut cuts = curve.breakpoints();
    if norm.has_axis_seams() || !norm.is_smooth() {
        let pieces: Vec<f64> = core::iter::once(lo)
            .chain(cuts.iter().copied())
            .chain(core::iter::once(hi))
            .collect();
        for w in pieces.windows(2) {
            cuts.extend(axis_crossings(curve, w[0], w[1]));
        }
    }
    cuts.retain(|&t| t > lo && t < hi);
    cuts.sort_by(f64::total_cmp);
    let mut knots = Vec::with_capacity(cuts.len() + 2);
    knots.push(lo);
    knots.extend(cuts);
    knots.push(hi);

    let mut report = PerimeterReport {
        value: 0.0,
        euclidean_value: 0.0,
        quadrature_error_estimate: 0.0,
    };
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b - a <= 0.0 {
            continue;
        }
        let h = adaptive_simpson(|t| norm.value(curve.derivative(t).perp()), a, b, PIECE_TOL)
            .map_err(|e| Error::Numeric(alloc::format!("curve is not rectifiable: {e}")))?;
        let e = adaptive_simpson(|t| curve.derivative(t).norm(), a, b, PIECE_TOL)
            .map_err(|e| Error::Numeric(alloc::format!("curve is not rectifiable: {e}")))?;
        report.value += h.value;
        report.euclidean_value += e.value;
        report.quadrature_error_estimate += h.error_estimate;
    }
    Ok(report)
}

/// `P_H(E; Ω)`: only the cut curve `∂E ∩ Ω` counts.
pub fn relative_perimeter(norm: &AnisotropicNorm, omega: &ConvexDomain, cut: &Cut) -> Result<PerimeterReport> {
    omega.check_on_boundary(cut.endpoints[0], "cut endpoint")?;
    omega.check_on_boundary(cut.endpoints[1], "cut endpoint")?;
    curve_length_h(norm, cut)
}

/// `Q = P_H²(E; Ω) / min(|E|, |Ω∖E|)`.
pub fn quotient(norm: &AnisotropicNorm, omega: &ConvexDomain, cut: &Cut) -> Result<f64> {
    let (e, c) = omega.split(cut)?;
    let m = e.min(c);
    if m < 1e-9 * omega.area() {
        return Err(Error::Geometry(alloc::format!("degenerate split with area {m:e}")));
    }
    let p = relative_perimeter(norm, omega, cut)?.value;
    Ok(p * p / m)
}

/// Outcome of [`segment_minimality_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentCheck {
    pub segment_length: f64,
    /// Smallest `L_H(perturbed) − L_H(segment)` seen.
    pub worst_margin: f64,
    pub perturbations: usize,
}

/// Compares `L_H` of the segment `p0p1` with `n` random smooth graph
/// perturbations `γ(t) = p0 + t(p1 − p0) + Σ aₖ sin(kπt)·n̂` that keep the
/// endpoints fixed.
pub fn segment_minimality_check(
    norm: &AnisotropicNorm,
    p0: Vec2,
    p1: Vec2,
    n_perturbations: usize,
    seed: u64,
) -> Result<SegmentCheck> {
    let d = p1 - p0;
    if d.is_zero() {
        return Err(Error::Input("segment endpoints coincide".into()));
    }
    let base = curve_length_h(norm, &Segment::new(p0, p1))?.value;
    let normal = d.perp() / d.norm();
    let scale = d.norm();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    for _ in 0..n_perturbations {
        let mut amp = [0.0; 4];
        for (k, a) in amp.iter_mut().enumerate() {
            *a = rng.gen_range(-0.2..0.2) * scale / (k + 1) as f64;
        }
        let curve = FnCurve::new(
            (0.0, 1.0),
            move |t: f64| {
                let off: f64 = amp
                    .iter()
                    .enumerate()
                    .map(|(k, a)| a * libm::sin((k + 1) as f64 * PI * t))
                    .sum();
                p0 + d * t + normal * off
            },
            move |t: f64| {
                let doff: f64 = amp
                    .iter()
                    .enumerate()
                    .map(|(k, a)| {
                        let w = (k + 1) as f64 * PI;
                        a * w * libm::cos(w * t)
                    })
                    .sum();
                d + normal * doff
            },
        );
        let len = curve_length_h(norm, &curve)?.value;
        worst = worst.min(len - base);
    }
    Ok(SegmentCheck {
        segment_length: base,
        worst_margin: worst,
        perturbations: n_perturbations,
    })
}
