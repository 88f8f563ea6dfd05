//! Cuts of prescribed area and the profile `μ(k)`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::candidate::{Candidate, Problem};
use super::{minimize_cyclic, SolverOptions};
use crate::error::{Error, Result};
use crate::geometry::ConvexDomain;
use crate::norm::AnisotropicNorm;
use crate::optimize::brent_root;
use crate::wulff::WulffArc;

const SWEEP_LO: f64 = 1e-8;
const SWEEP_HI: f64 = PI * (1.0 - 1e-6);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub k: f64,
    pub mu: f64,
    /// `"chord"` or `"wulff_arc"`.
    pub kind: &'static str,
    /// Boundary parameters of the optimal cut.
    pub params: [f64; 2],
}

/// Cut families with one free boundary parameter once the area is fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Family {
    /// Chord from `s1` leaving area `k` on its right.
    Chord,
    /// Wulff arc starting at `s1` in contact with `∂Ω`, built from the Wulff
    /// boundary point `σ·τ̂`; `body` selects whether the piece on the arc's
    /// center side or the other one has area `k`.
    Anchored { sigma: f64, body: bool },
}

impl Family {
    pub fn all(half: bool) -> Vec<Family> {
        let mut out = alloc::vec![Family::Chord];
        for sigma in [1.0, -1.0] {
            out.push(Family::Anchored { sigma, body: true });
            if !half {
                out.push(Family::Anchored { sigma, body: false });
            }
        }
        out
    }
}

impl Problem<'_> {
    pub(crate) fn chord_at_area(&self, s1: f64, k: f64) -> Option<Candidate> {
        let p1 = self.omega.point(s1);
        let right = |span: f64| self.omega.boundary_green(s1, s1 + span) - 0.5 * p1.cross(self.omega.point(s1 + span)) - k;
        let span = brent_root(right, 1e-12, 1.0 - 1e-12, 1e-15).ok()?;
        self.chord(s1, s1 + span)
    }

    /// The anchored arc with sweep magnitude `x ∈ (0, π)`, and the area of
    /// its center-side piece.
    pub(crate) fn anchored_arc(&self, s1: f64, sigma: f64, x: f64) -> Option<(Candidate, f64)> {
        let s1 = crate::wrap(s1, 1.0);
        let frame = self.omega.boundary_frame(s1).ok()?;
        let tau = frame.tangent * (sigma / self.norm.polar().value(frame.tangent));
        let theta = self.shape.normal_angle(tau);
        let sign = if self.shape.boundary_derivative(theta).dot(frame.normal) < 0.0 {
            1.0
        } else {
            -1.0
        };
        let sweep = sign * x;
        let dir = self.shape.chord_vector(theta, sweep);
        let p1 = frame.point;
        let hit = self.omega.ray_boundary_intersection(p1, dir).ok()?;
        let radius = hit.point.distance(p1) / dir.norm();
        if !(radius > 0.0 && radius.is_finite()) {
            return None;
        }
        let arc = WulffArc {
            center: p1 - self.shape.boundary_point(theta) * radius,
            radius,
            theta_start: theta,
            theta_end: theta + sweep,
            start_point: p1,
        };
        let c = self.finish(s1, hit.s, p1, hit.point, Some(arc))?;
        let body = if sweep > 0.0 { c.left } else { c.right };
        Some((c, body))
    }

    /// Anchored arc whose selected piece has area `k`.
    pub(crate) fn anchored_at_area(&self, s1: f64, sigma: f64, body: bool, k: f64) -> Option<Candidate> {
        let target = if body { k } else { self.omega.area() - k };
        let f = |x: f64| self.anchored_arc(s1, sigma, x).map_or(f64::NAN, |(_, a)| a - target);
        // the center-side area shrinks as the sweep grows
        let (mut lo, mut hi) = (SWEEP_LO, SWEEP_HI);
        let (mut flo, mut fhi) = (f(lo), f(hi));
        if flo.is_nan() || fhi.is_nan() {
            let n = 32;
            let xs: Vec<(f64, f64)> = (0..=n)
                .map(|i| {
                    let x = SWEEP_LO + (SWEEP_HI - SWEEP_LO) * i as f64 / n as f64;
                    (x, f(x))
                })
                .collect();
            let pair = xs.windows(2).find(|w| w[0].1 > 0.0 && w[1].1 <= 0.0)?;
            (lo, hi, flo, fhi) = (pair[0].0, pair[1].0, pair[0].1, pair[1].1);
        }
        if !(flo > 0.0 && fhi <= 0.0) {
            return None;
        }
        let x = brent_root(f, lo, hi, 1e-15).ok()?;
        self.anchored_arc(s1, sigma, x).map(|(c, _)| c)
    }

    pub(crate) fn at_area(&self, family: Family, s1: f64, k: f64) -> Option<Candidate> {
        match family {
            Family::Chord => self.chord_at_area(s1, k),
            Family::Anchored { sigma, body } => self.anchored_at_area(s1, sigma, body, k),
        }
    }

    /// Best cut of each family splitting off area `k`, best first.
    pub(crate) fn best_at_area(&self, k: f64, options: &SolverOptions) -> Vec<Candidate> {
        let half = (k - 0.5 * self.omega.area()).abs() <= 1e-12 * self.omega.area();
        let mut out: Vec<Candidate> = Vec::new();
        for family in Family::all(half) {
            let g = |s: f64| self.at_area(family, s, k).map_or(f64::INFINITY, |c| c.perimeter * c.perimeter / k);
            let found = minimize_cyclic(options.executor.as_ref(), &g, options.profile_grid, 3);
            if let Some(&(s, _)) = found.first() {
                if let Some(c) = self.at_area(family, s, k) {
                    out.push(c);
                }
            }
        }
        out.sort_by(|a, b| a.q.total_cmp(&b.q));
        out
    }
}

/// `μ(k) = min P_H²/k` over chords and Wulff arcs splitting off area `k`.
pub fn area_profile(
    norm: &AnisotropicNorm,
    omega: &ConvexDomain,
    k_values: &[f64],
    options: &SolverOptions,
) -> Result<Vec<ProfilePoint>> {
    let half = 0.5 * omega.area();
    for &k in k_values {
        if !(k > 0.0 && k <= half * (1.0 + 1e-12)) {
            return Err(Error::Input(format!("area {k} is outside (0, |Ω|/2] = (0, {half}]")));
        }
    }
    let problem = Problem::new(norm, omega)?;
    let mut out = Vec::with_capacity(k_values.len());
    for &k in k_values {
        let k = k.min(half);
        let best = problem.best_at_area(k, options);
        let c = best
            .iter()
            .min_by(|a, b| a.perimeter.total_cmp(&b.perimeter))
            .ok_or_else(|| Error::Numeric(format!("no feasible cut of area {k}")))?;
        out.push(ProfilePoint {
            k,
            mu: c.perimeter * c.perimeter / k,
            kind: c.kind(),
            params: [c.s1, c.s2],
        });
    }
    Ok(out)
}
