//! JSON, CSV and SVG writers.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use anisoperim::solver::{IsoResult, Minimizer, ProfilePoint, SectorCandidate, VerificationSummary};
use anisoperim::{ConvexDomain, CutKind, Side, Vec2, WulffShape};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;
use serde_json::Value;

/// A float written with 17 significant digits; non-finite values become `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(fmt_num(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

/// `x` with 17 significant digits, the shortest width that always round-trips.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn point(p: Vec2) -> [Num; 2] {
    [Num(p.x), Num(p.y)]
}

#[derive(Debug, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub norm: Value,
    pub domain: Option<Value>,
    pub seed: u64,
    pub samples: usize,
    pub tolerances: BTreeMap<String, Num>,
}

#[derive(Debug, Serialize)]
pub struct ArcJson {
    pub center: [Num; 2],
    pub radius: Num,
    pub theta_start: Num,
    pub theta_end: Num,
}

#[derive(Debug, Serialize)]
pub struct MinimizerJson {
    pub kind: &'static str,
    pub params: [Num; 2],
    pub endpoints: [[Num; 2]; 2],
    pub side_e: &'static str,
    pub q: Num,
    pub perimeter: Num,
    pub area_e: Num,
    pub area_complement: Num,
    pub residuals: [Option<Num>; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center_on_e_side: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub arc: Option<ArcJson>,
}

impl From<&Minimizer> for MinimizerJson {
    fn from(m: &Minimizer) -> Self {
        let arc = match &m.cut.kind {
            CutKind::WulffArc { arc, .. } => Some(ArcJson {
                center: point(arc.center),
                radius: Num(arc.radius),
                theta_start: Num(arc.theta_start),
                theta_end: Num(arc.theta_end),
            }),
            _ => None,
        };
        MinimizerJson {
            kind: m.cut.kind.name(),
            params: [Num(m.cut.params[0]), Num(m.cut.params[1])],
            endpoints: [point(m.cut.endpoints[0]), point(m.cut.endpoints[1])],
            side_e: match m.cut.side_e {
                Side::Left => "left",
                Side::Right => "right",
            },
            q: Num(m.q),
            perimeter: Num(m.perimeter),
            area_e: Num(m.area_e),
            area_complement: Num(m.area_complement),
            residuals: m.residuals.map(|r| r.map(Num)),
            center_on_e_side: m.center_on_e_side,
            arc,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SectorJson {
    pub vertex: usize,
    pub point: [Num; 2],
    pub cone_area: Num,
    pub q: Num,
}

impl From<&SectorCandidate> for SectorJson {
    fn from(s: &SectorCandidate) -> Self {
        SectorJson {
            vertex: s.vertex,
            point: point(s.point),
            cone_area: Num(s.cone_area),
            q: Num(s.q),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerificationJson {
    pub c: Num,
    pub seed: u64,
    pub samples: usize,
    pub worst_ratio: Num,
    pub violations: usize,
    pub worst_endpoints: Option<[[Num; 2]; 2]>,
}

impl From<&VerificationSummary> for VerificationJson {
    fn from(v: &VerificationSummary) -> Self {
        VerificationJson {
            c: Num(v.c),
            seed: v.seed,
            samples: v.samples,
            worst_ratio: Num(v.worst_ratio),
            violations: v.violations,
            worst_endpoints: v.worst_endpoints.map(|[a, b]| [point(a), point(b)]),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PLimitJson {
    pub per_p: Vec<[Num; 2]>,
    pub c_inf: Num,
    pub slope: Num,
}

#[derive(Debug, Serialize)]
pub struct ResultJson {
    pub c_h: Num,
    pub method: &'static str,
    pub r_h: Option<Num>,
    pub continuum: bool,
    pub minimizers: Vec<MinimizerJson>,
    pub half_area_companion: Option<MinimizerJson>,
    pub sectors: Vec<SectorJson>,
    pub p_limit: Option<PLimitJson>,
    pub verification: Option<VerificationJson>,
    pub diagnostics: Vec<String>,
}

impl From<&IsoResult> for ResultJson {
    fn from(r: &IsoResult) -> Self {
        ResultJson {
            c_h: Num(r.c_h),
            method: r.method.name(),
            r_h: r.r_h.map(Num),
            continuum: r.continuum,
            minimizers: r.minimizers.iter().map(MinimizerJson::from).collect(),
            half_area_companion: r.half_area_companion.as_ref().map(MinimizerJson::from),
            sectors: r.sectors.iter().map(SectorJson::from).collect(),
            p_limit: r.p_limit.as_ref().map(|f| PLimitJson {
                per_p: f.per_p.iter().map(|&(p, c)| [Num(p), Num(c)]).collect(),
                c_inf: Num(f.c_inf),
                slope: Num(f.slope),
            }),
            verification: r.verification.as_ref().map(VerificationJson::from),
            diagnostics: r.diagnostics.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Document<T: Serialize> {
    pub provenance: Provenance,
    #[serde(flatten)]
    pub body: T,
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("output documents serialize");
    s.push('\n');
    s
}

pub fn profile_csv(points: &[ProfilePoint]) -> String {
    let mut s = String::from("k,mu,kind,s1,s2\n");
    for p in points {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            fmt_num(p.k),
            fmt_num(p.mu),
            p.kind,
            fmt_num(p.params[0]),
            fmt_num(p.params[1])
        );
    }
    s
}

pub fn wulff_csv(shape: &WulffShape, n: usize) -> String {
    let mut s = String::from("theta,x,y\n");
    for (theta, p) in shape.polyline(n) {
        let _ = writeln!(s, "{},{},{}", fmt_num(theta), fmt_num(p.x), fmt_num(p.y));
    }
    s
}

/// A minimal SVG canvas in world coordinates, y pointing up.
pub struct Svg {
    min: Vec2,
    max: Vec2,
    body: String,
}

const SVG_SIZE: f64 = 640.0;

impl Svg {
    /// Canvas covering the given points with a 5% margin.
    pub fn covering(points: &[Vec2]) -> Self {
        let mut min = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut max = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points.iter().filter(|p| p.is_finite()) {
            min = Vec2::new(min.x.min(p.x), min.y.min(p.y));
            max = Vec2::new(max.x.max(p.x), max.y.max(p.y));
        }
        if !(min.is_finite() && max.is_finite()) {
            min = Vec2::new(-1.0, -1.0);
            max = Vec2::new(1.0, 1.0);
        }
        let pad = 0.05 * (max.x - min.x).max(max.y - min.y).max(1e-9);
        Svg {
            min: min - Vec2::new(pad, pad),
            max: max + Vec2::new(pad, pad),
            body: String::new(),
        }
    }

    fn scale(&self) -> f64 {
        SVG_SIZE / (self.max.x - self.min.x).max(self.max.y - self.min.y)
    }

    fn map(&self, p: Vec2) -> (f64, f64) {
        let k = self.scale();
        ((p.x - self.min.x) * k, (self.max.y - p.y) * k)
    }

    fn path_data(&self, pts: &[Vec2], closed: bool) -> String {
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let (x, y) = self.map(*p);
            let _ = write!(d, "{}{x:.3},{y:.3} ", if i == 0 { "M" } else { "L" });
        }
        if closed {
            d.push('Z');
        }
        d
    }

    pub fn polyline(&mut self, pts: &[Vec2], closed: bool, stroke: &str, width: f64, fill: &str) {
        let d = self.path_data(pts, closed);
        let _ = writeln!(
            self.body,
            r#"  <path d="{d}" fill="{fill}" stroke="{stroke}" stroke-width="{width}"/>"#
        );
    }

    pub fn dashed(&mut self, pts: &[Vec2], closed: bool, stroke: &str) {
        let d = self.path_data(pts, closed);
        let _ = writeln!(
            self.body,
            r#"  <path d="{d}" fill="none" stroke="{stroke}" stroke-width="1" stroke-dasharray="4 3"/>"#
        );
    }

    pub fn arrow(&mut self, from: Vec2, to: Vec2, stroke: &str) {
        let (x1, y1) = self.map(from);
        let (x2, y2) = self.map(to);
        let _ = writeln!(
            self.body,
            r#"  <line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="{stroke}" stroke-width="1.2" marker-end="url(#head)"/>"#
        );
    }

    pub fn dot(&mut self, p: Vec2, fill: &str) {
        let (x, y) = self.map(p);
        let _ = writeln!(self.body, r#"  <circle cx="{x:.3}" cy="{y:.3}" r="2.5" fill="{fill}"/>"#);
    }

    pub fn caption(&mut self, text: &str) {
        let escaped = text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;");
        let _ = writeln!(
            self.body,
            r#"  <text x="8" y="18" font-family="sans-serif" font-size="13">{escaped}</text>"#
        );
    }

    pub fn finish(self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">"#
        );
        s.push_str(
            "  <defs><marker id=\"head\" markerWidth=\"8\" markerHeight=\"8\" refX=\"7\" refY=\"4\" orient=\"auto\">\
             <path d=\"M0,0 L8,4 L0,8 Z\" fill=\"context-stroke\"/></marker></defs>\n",
        );
        s.push_str("  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
        s.push_str(&self.body);
        s.push_str("</svg>\n");
        s
    }
}

/// Points along a cut, for drawing.
pub fn cut_points(m: &Minimizer, n: usize) -> Vec<Vec2> {
    use anisoperim::curve::PlaneCurve;
    m.cut.sample(n)
}

pub fn domain_points(omega: &ConvexDomain) -> Vec<Vec2> {
    match omega.vertices() {
        Some(v) => v.to_vec(),
        None => omega.polyline(512),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [1.0 / 3.0, 8.0 / std::f64::consts::PI, 1e-300, -2.5e17, 0.0] {
            let s = serde_json::to_string(&Num(x)).unwrap();
            let back: f64 = serde_json::from_str(&s).unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(serde_json::to_string(&Num(f64::NAN)).unwrap(), "null");
    }
}
