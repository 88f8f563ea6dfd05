//! Evaluation of chord and Wulff-arc cuts from boundary parameters.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{ConvexDomain, Cut, CutKind, Side};
use crate::norm::AnisotropicNorm;
use crate::vec2::Vec2;
use crate::wulff::{arc_with_sweep, WulffArc, WulffShape};

/// Parameter distance below which an endpoint counts as sitting on a corner.
pub(crate) const CORNER_GUARD: f64 = 1e-9;
const ARC_SAMPLES: usize = 24;

/// A cut reported by the solver with its quotient and contact data.
#[derive(Debug, Clone)]
pub struct Minimizer {
    pub cut: Cut,
    pub q: f64,
    pub perimeter: f64,
    pub area_e: f64,
    pub area_complement: f64,
    /// `⟨∇H(ν_E), ν_Ω⟩` at both endpoints; `None` at a corner.
    pub residuals: [Option<f64>; 2],
    /// For arcs: whether the center of the arc lies on the `E` side.
    pub center_on_e_side: Option<bool>,
}

impl Minimizer {
    pub fn max_residual(&self) -> Option<f64> {
        match self.residuals {
            [Some(a), Some(b)] => Some(a.abs().max(b.abs())),
            [Some(a), None] | [None, Some(a)] => Some(a.abs()),
            [None, None] => None,
        }
    }
}

/// `⟨∇H(ν_E), ν_Ω⟩` at endpoint `end` (0 or 1) of `cut`, where `ν_E` is
/// the unit normal of the cut pointing out of `E`.
pub fn contact_residual(norm: &AnisotropicNorm, omega: &ConvexDomain, cut: &Cut, end: usize) -> Result<f64> {
    if end > 1 {
        return Err(Error::Input(format!("endpoint selector must be 0 or 1, got {end}")));
    }
    let s = cut.params[end];
    let frame = omega.boundary_frame(s)?;
    let nu_e = cut.normal_out_of_e(end);
    Ok(norm.gradient(nu_e)?.dot(frame.normal))
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Candidate {
    pub s1: f64,
    pub s2: f64,
    pub p1: Vec2,
    pub p2: Vec2,
    pub arc: Option<WulffArc>,
    pub perimeter: f64,
    /// Area to the right of the directed cut `p1 → p2`.
    pub right: f64,
    pub left: f64,
    pub q: f64,
    /// Point of the cut halfway along its parameter range.
    pub mid: Vec2,
}

impl Candidate {
    pub fn kind(&self) -> &'static str {
        if self.arc.is_some() {
            "wulff_arc"
        } else {
            "chord"
        }
    }

    /// True when both candidates describe the same curve up to `tol`.
    pub fn same_as(&self, other: &Candidate, tol: f64) -> bool {
        let direct = self.p1.distance(other.p1) + self.p2.distance(other.p2);
        let swapped = self.p1.distance(other.p2) + self.p2.distance(other.p1);
        direct.min(swapped) <= tol && self.mid.distance(other.mid) <= tol
    }
}

pub(crate) struct Problem<'a> {
    pub norm: &'a AnisotropicNorm,
    pub omega: &'a ConvexDomain,
    pub shape: Arc<WulffShape>,
}

impl<'a> Problem<'a> {
    pub fn new(norm: &'a AnisotropicNorm, omega: &'a ConvexDomain) -> Result<Self> {
        if !norm.is_smooth() {
            return Err(Error::Unsupported(format!(
                "the search needs a smooth norm; '{}' is not",
                norm.family().name()
            )));
        }
        Ok(Problem {
            norm,
            omega,
            shape: Arc::new(WulffShape::new(norm)?),
        })
    }

    fn near_corner(&self, s: f64) -> bool {
        self.omega.corner_at(s, CORNER_GUARD).is_some()
    }

    pub fn chord(&self, s1: f64, s2: f64) -> Option<Candidate> {
        let (s1, s2) = (crate::wrap(s1, 1.0), crate::wrap(s2, 1.0));
        self.finish(s1, s2, self.omega.point(s1), self.omega.point(s2), None)
    }

    /// Chord or Wulff arc from `s1` to `s2` with normal-angle sweep `sweep`;
    /// a zero sweep is the chord.
    pub fn arc(&self, s1: f64, s2: f64, sweep: f64) -> Option<Candidate> {
        if sweep == 0.0 {
            return self.chord(s1, s2);
        }
        if !(sweep.abs() < 2.0 * PI) {
            return None;
        }
        let (s1, s2) = (crate::wrap(s1, 1.0), crate::wrap(s2, 1.0));
        let (p1, p2) = (self.omega.point(s1), self.omega.point(s2));
        if p1.distance(p2) < 1e-12 * self.omega.diameter() {
            return None;
        }
        let arc = arc_with_sweep(&self.shape, p1, p2, sweep).ok()?;
        self.finish(s1, s2, p1, p2, Some(arc))
    }

    pub fn arc_inside(&self, arc: &WulffArc) -> bool {
        let sweep = arc.theta_end - arc.theta_start;
        (1..ARC_SAMPLES).all(|i| {
            let t = arc.theta_start + sweep * i as f64 / ARC_SAMPLES as f64;
            let p = if (t - arc.theta_start).abs() < 1e-2 {
                arc.point(&self.shape, t)
            } else {
                arc.center + self.shape.boundary_point(t) * arc.radius
            };
            self.omega.gauge(p) <= 1.0 + 1e-9
        })
    }

    pub fn finish(&self, s1: f64, s2: f64, p1: Vec2, p2: Vec2, arc: Option<WulffArc>) -> Option<Candidate> {
        if self.near_corner(s1) || self.near_corner(s2) {
            return None;
        }
        let d = p2 - p1;
        let area = self.omega.area();
        if d.norm() < 1e-12 * self.omega.diameter() {
            return None;
        }
        let chord_green = 0.5 * p1.cross(p2);
        let (perimeter, green, mid) = match &arc {
            None => (self.norm.value(d.perp()), chord_green, p1.lerp(p2, 0.5)),
            Some(a) => {
                if !self.arc_inside(a) {
                    return None;
                }
                let (length, segment) = a.length_and_segment(&self.shape);
                (
                    length,
                    chord_green + segment,
                    a.point(&self.shape, 0.5 * (a.theta_start + a.theta_end)),
                )
            }
        };
        let right = self.omega.boundary_green(s1, s2) - green;
        let left = self.omega.boundary_green(s2, s1) + green;
        let m = right.min(left);
        if !(m > 1e-9 * area) || !perimeter.is_finite() {
            return None;
        }
        Some(Candidate {
            s1,
            s2,
            p1,
            p2,
            arc,
            perimeter,
            right,
            left,
            q: perimeter * perimeter / m,
            mid,
        })
    }

    /// Quotient or `+∞` when infeasible.
    pub fn q_chord(&self, s1: f64, s2: f64) -> f64 {
        self.chord(s1, s2).map_or(f64::INFINITY, |c| c.q)
    }

    pub fn q_arc(&self, s1: f64, s2: f64, sweep: f64) -> f64 {
        self.arc(s1, s2, sweep).map_or(f64::INFINITY, |c| c.q)
    }

    pub fn cut(&self, c: &Candidate, side: Option<Side>) -> Result<Cut> {
        let cut = match c.arc {
            None if c.p1 == self.omega.point(c.s1) && c.p2 == self.omega.point(c.s2) => {
                self.omega.chord(c.s1, c.s2, Side::Right)?
            }
            None => self.omega.chord_through(c.p1, c.p2, Side::Right)?,
            Some(a) => self.omega.arc_cut(self.shape.clone(), a, Side::Right)?,
        };
        Ok(match side {
            Some(side) => cut.with_side(side),
            None => cut.with_small_side(),
        })
    }

    pub fn minimizer(&self, c: &Candidate, side: Option<Side>) -> Result<Minimizer> {
        let cut = self.cut(c, side)?;
        Ok(self.minimizer_from_cut(cut, c.perimeter))
    }

    pub fn minimizer_from_cut(&self, cut: Cut, perimeter: f64) -> Minimizer {
        let residuals = [0, 1].map(|end| contact_residual(self.norm, self.omega, &cut, end).ok());
        let center_on_e_side = match &cut.kind {
            CutKind::WulffArc { arc, .. } => {
                let d = cut.endpoints[1] - cut.endpoints[0];
                let left = d.cross(arc.center - cut.endpoints[0]) > 0.0;
                Some(left == (cut.side_e == Side::Left))
            }
            _ => None,
        };
        let area_e = cut.area_e();
        let area_complement = cut.area_complement();
        Minimizer {
            q: perimeter * perimeter / area_e.min(area_complement),
            perimeter,
            area_e,
            area_complement,
            residuals,
            center_on_e_side,
            cut,
        }
    }
}

pub(crate) fn describe(c: &Candidate) -> String {
    format!(
        "{} s=({:.9}, {:.9}) Q={:.12}",
        c.kind(),
        c.s1,
        c.s2,
        c.q
    )
}
