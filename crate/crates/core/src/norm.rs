//! Anisotropic norms `H`, their derivatives and their polars `H°`.
//!
//! Every built-in family is even, positively 1-homogeneous and has a
//! strictly convex square. The polar is
//! `H°(v) = sup_{ξ ≠ 0} ⟨ξ, v⟩ / H(ξ)`, evaluated in closed form where one
//! is known and by a direction search otherwise.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::optimize::golden_min;
use crate::vec2::{Sym2, Vec2};

/// Default exponents used to approximate the max-norm.
pub const DEFAULT_MAX_APPROX_SEQUENCE: [f64; 4] = [8.0, 16.0, 32.0, 64.0];

/// Angular grid used by the numeric polar and by extremum searches on the circle.
const DIRECTION_GRID: usize = 720;

pub type EvalFn = Arc<dyn Fn(Vec2) -> f64 + Send + Sync>;
pub type GradientFn = Arc<dyn Fn(Vec2) -> Vec2 + Send + Sync>;

/// A user-supplied norm. Only available through the library API.
#[derive(Clone)]
pub struct CustomNorm {
    pub name: String,
    pub eval: EvalFn,
    pub gradient: Option<GradientFn>,
}

impl fmt::Debug for CustomNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomNorm")
            .field("name", &self.name)
            .field("gradient", &self.gradient.is_some())
            .finish()
    }
}

#[derive(Debug, Clone)]
pub enum NormFamily {
    Euclidean,
    /// `H(x, y) = (x²/a² + y²/b²)^{1/2}`.
    Elliptic { a: f64, b: f64 },
    /// `H(x, y) = (|x|^p + |y|^p)^{1/p}`, `p ≥ 2`.
    PNorm { p: f64 },
    /// p-norm on the quadrants where `xy ≥ 0`, q-norm where `xy ≤ 0`; `p > q > 2`.
    PiecewisePQ { p: f64, q: f64 },
    /// `H = max(|x|, |y|)`, handled through the p-norms of `p_sequence`.
    MaxApprox { p_sequence: Vec<f64> },
    Custom(CustomNorm),
}

impl NormFamily {
    pub fn name(&self) -> &str {
        match self {
            NormFamily::Euclidean => "euclidean",
            NormFamily::Elliptic { .. } => "elliptic",
            NormFamily::PNorm { .. } => "p_norm",
            NormFamily::PiecewisePQ { .. } => "piecewise_pq",
            NormFamily::MaxApprox { .. } => "max_approx",
            NormFamily::Custom(c) => &c.name,
        }
    }
}

/// The anisotropy `H` together with its linearity bounds
/// `alpha·|ξ| ≤ H(ξ) ≤ beta·|ξ|`.
#[derive(Debug, Clone)]
pub struct AnisotropicNorm {
    family: NormFamily,
    alpha: f64,
    beta: f64,
    smooth: bool,
}

impl AnisotropicNorm {
    pub fn euclidean() -> Self {
        Self::from_family(NormFamily::Euclidean)
    }

    pub fn elliptic(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0) {
            return Err(Error::Input(format!("elliptic norm needs a, b > 0, got ({a}, {b})")));
        }
        Ok(Self::from_family(NormFamily::Elliptic { a, b }))
    }

    pub fn p_norm(p: f64) -> Result<Self> {
        if !(p.is_finite() && p >= 2.0) {
            return Err(Error::Input(format!("p-norm needs finite p >= 2, got {p}")));
        }
        Ok(Self::from_family(NormFamily::PNorm { p }))
    }

    pub fn piecewise_pq(p: f64, q: f64) -> Result<Self> {
        if !(p.is_finite() && q.is_finite() && q > 2.0 && p > q) {
            return Err(Error::Input(format!(
                "piecewise p/q norm needs p > q > 2, got p = {p}, q = {q}"
            )));
        }
        Ok(Self::from_family(NormFamily::PiecewisePQ { p, q }))
    }

    pub fn max_approx(p_sequence: Vec<f64>) -> Result<Self> {
        if p_sequence.is_empty() {
            return Err(Error::Input("max-norm approximation needs at least one exponent".into()));
        }
        for w in p_sequence.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Input("p_sequence must be strictly increasing".into()));
            }
        }
        if let Some(p) = p_sequence.iter().find(|p| !(p.is_finite() && **p >= 2.0)) {
            return Err(Error::Input(format!("p_sequence entries must be finite and >= 2, got {p}")));
        }
        Ok(Self::from_family(NormFamily::MaxApprox { p_sequence }))
    }

    /// A norm given by callbacks. Without a gradient callback, gradients use
    /// central differences with step `1e-6·max(1, |ξ|)`.
    pub fn custom(name: impl Into<String>, eval: EvalFn, gradient: Option<GradientFn>) -> Self {
        Self::from_family(NormFamily::Custom(CustomNorm {
            name: name.into(),
            eval,
            gradient,
        }))
    }

    fn from_family(family: NormFamily) -> Self {
        let smooth = !matches!(family, NormFamily::MaxApprox { .. });
        let mut norm = AnisotropicNorm {
            family,
            alpha: 1.0,
            beta: 1.0,
            smooth,
        };
        let (lo, hi) = extrema_on_circle(|u| norm.value(u));
        norm.alpha = lo;
        norm.beta = hi;
        norm
    }

    pub fn family(&self) -> &NormFamily {
        &self.family
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `false` only for the max-norm, which is handled through approximants.
    pub fn is_smooth(&self) -> bool {
        self.smooth
    }

    /// True when `H` is only C¹ across the coordinate axes.
    pub fn has_axis_seams(&self) -> bool {
        matches!(self.family, NormFamily::PiecewisePQ { .. })
    }

    /// The smooth p-norm approximants of a max-norm family; `None` otherwise.
    pub fn approximants(&self) -> Option<Vec<(f64, AnisotropicNorm)>> {
        match &self.family {
            NormFamily::MaxApprox { p_sequence } => Some(
                p_sequence
                    .iter()
                    .map(|&p| (p, AnisotropicNorm::p_norm(p).expect("validated on construction")))
                    .collect(),
            ),
            _ => None,
        }
    }

    /// `H(ξ)`, checked.
    pub fn eval(&self, xi: Vec2) -> Result<f64> {
        if !xi.is_finite() {
            return Err(Error::Input(format!("non-finite vector ({}, {})", xi.x, xi.y)));
        }
        Ok(self.value(xi))
    }

    /// `∇H(ξ)`, checked.
    pub fn gradient(&self, xi: Vec2) -> Result<Vec2> {
        if !xi.is_finite() {
            return Err(Error::Input(format!("non-finite vector ({}, {})", xi.x, xi.y)));
        }
        if xi.is_zero() {
            return Err(Error::Singularity);
        }
        if !self.smooth {
            return Err(Error::Unsupported(
                "the max-norm has no gradient; use its p-norm approximants".into(),
            ));
        }
        Ok(self.grad(xi))
    }

    /// `H(ξ)` without input checks.
    pub fn value(&self, xi: Vec2) -> f64 {
        match &self.family {
            NormFamily::Euclidean => xi.norm(),
            NormFamily::Elliptic { a, b } => libm::hypot(xi.x / a, xi.y / b),
            NormFamily::PNorm { p } => pnorm_value(*p, xi),
            NormFamily::PiecewisePQ { p, q } => pnorm_value(seam_exponent(*p, *q, xi), xi),
            NormFamily::MaxApprox { .. } => xi.max_abs(),
            NormFamily::Custom(c) => (c.eval)(xi),
        }
    }

    /// `∇H(ξ)` without input checks. Returns NaNs for the max-norm.
    pub fn grad(&self, xi: Vec2) -> Vec2 {
        match &self.family {
            NormFamily::Euclidean => xi / xi.norm(),
            NormFamily::Elliptic { a, b } => {
                let m = Vec2::new(xi.x / (a * a), xi.y / (b * b));
                m / libm::hypot(xi.x / a, xi.y / b)
            }
            NormFamily::PNorm { p } => pnorm_grad(*p, xi),
            NormFamily::PiecewisePQ { p, q } => pnorm_grad(seam_exponent(*p, *q, xi), xi),
            NormFamily::MaxApprox { .. } => Vec2::new(f64::NAN, f64::NAN),
            NormFamily::Custom(c) => match &c.gradient {
                Some(g) => g(xi),
                None => central_gradient(|v| (c.eval)(v), xi),
            },
        }
    }

    /// Hessian `D²H(ξ)`. Analytic for the built-in families; finite
    /// differences for custom norms. NaNs for the max-norm.
    pub fn hessian(&self, xi: Vec2) -> Sym2 {
        match &self.family {
            NormFamily::Euclidean => {
                let r = xi.norm();
                let r3 = r * r * r;
                Sym2 {
                    xx: xi.y * xi.y / r3,
                    xy: -xi.x * xi.y / r3,
                    yy: xi.x * xi.x / r3,
                }
            }
            NormFamily::Elliptic { a, b } => {
                let h = libm::hypot(xi.x / a, xi.y / b);
                let (ia, ib) = (1.0 / (a * a), 1.0 / (b * b));
                let m = Vec2::new(xi.x * ia, xi.y * ib);
                let h3 = h * h * h;
                Sym2 {
                    xx: ia / h - m.x * m.x / h3,
                    xy: -m.x * m.y / h3,
                    yy: ib / h - m.y * m.y / h3,
                }
            }
            NormFamily::PNorm { p } => pnorm_hessian(*p, xi),
            NormFamily::PiecewisePQ { p, q } => pnorm_hessian(seam_exponent(*p, *q, xi), xi),
            NormFamily::MaxApprox { .. } => Sym2 {
                xx: f64::NAN,
                xy: f64::NAN,
                yy: f64::NAN,
            },
            NormFamily::Custom(c) => {
                let h = 1e-4 * xi.norm().max(1.0);
                match &c.gradient {
                    Some(g) => {
                        let dx = (g(xi + Vec2::new(h, 0.0)) - g(xi - Vec2::new(h, 0.0))) / (2.0 * h);
                        let dy = (g(xi + Vec2::new(0.0, h)) - g(xi - Vec2::new(0.0, h))) / (2.0 * h);
                        Sym2 {
                            xx: dx.x,
                            xy: 0.5 * (dx.y + dy.x),
                            yy: dy.y,
                        }
                    }
                    None => {
                        let f = |v: Vec2| (c.eval)(v);
                        let f0 = f(xi);
                        let ex = Vec2::new(h, 0.0);
                        let ey = Vec2::new(0.0, h);
                        Sym2 {
                            xx: (f(xi + ex) - 2.0 * f0 + f(xi - ex)) / (h * h),
                            yy: (f(xi + ey) - 2.0 * f0 + f(xi - ey)) / (h * h),
                            xy: (f(xi + ex + ey) - f(xi + ex - ey) - f(xi - ex + ey) + f(xi - ex - ey))
                                / (4.0 * h * h),
                        }
                    }
                }
            }
        }
    }

    pub fn polar(&self) -> PolarNorm<'_> {
        let closed_form = match &self.family {
            NormFamily::Euclidean => Some(PolarForm::Euclidean),
            NormFamily::Elliptic { a, b } => Some(PolarForm::Elliptic { a: *a, b: *b }),
            NormFamily::PNorm { p } => Some(PolarForm::PNorm { p: conjugate(*p) }),
            NormFamily::PiecewisePQ { p, q } => Some(PolarForm::PiecewisePQ {
                p: conjugate(*p),
                q: conjugate(*q),
            }),
            NormFamily::MaxApprox { .. } => Some(PolarForm::L1),
            NormFamily::Custom(_) => None,
        };
        PolarNorm {
            base: self,
            closed_form,
        }
    }

    /// Samples the structural hypotheses: even 1-homogeneity, the linearity
    /// bounds and midpoint convexity of `H²`.
    pub fn validate(&self, n_samples: usize) -> Result<ValidationReport> {
        if n_samples == 0 {
            return Err(Error::Input("validation needs at least one sample".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5_eed0_fa11);
        let mut report = ValidationReport {
            samples: n_samples,
            homogeneity_residual: 0.0,
            alpha: f64::INFINITY,
            beta: 0.0,
            convexity_violation: 0.0,
        };
        for _ in 0..n_samples {
            let u = Vec2::from_angle(rng.gen_range(0.0..TAU));
            let h_u = self.value(u);
            if !(h_u.is_finite() && h_u > 0.0) {
                return Err(Error::Validation {
                    what: "positivity".into(),
                    sample: u,
                    residual: h_u,
                });
            }
            report.alpha = report.alpha.min(h_u);
            report.beta = report.beta.max(h_u);

            let r = libm::exp(rng.gen_range(-3.0..3.0));
            let xi = u * r;
            let t = rng.gen_range(-10.0..10.0);
            let h_xi = self.value(xi);
            let res = (self.value(xi * t) - t.abs() * h_xi).abs() / h_xi;
            if res > report.homogeneity_residual {
                report.homogeneity_residual = res;
                if res > HOMOGENEITY_TOL {
                    return Err(Error::Validation {
                        what: "homogeneity".into(),
                        sample: xi,
                        residual: res,
                    });
                }
            }

            let eta = Vec2::from_angle(rng.gen_range(0.0..TAU)) * libm::exp(rng.gen_range(-3.0..3.0));
            let h2 = |v: Vec2| {
                let h = self.value(v);
                h * h
            };
            let rhs = 0.5 * (h2(xi) + h2(eta));
            let viol = (h2((xi + eta) * 0.5) - rhs) / rhs;
            if viol > report.convexity_violation {
                report.convexity_violation = viol;
                if viol > CONVEXITY_TOL {
                    return Err(Error::Validation {
                        what: "midpoint convexity of H²".into(),
                        sample: xi,
                        residual: viol,
                    });
                }
            }
        }
        Ok(report)
    }

    /// Residuals of `H(∇H°(ξ)) = 1` and `H°(ξ)·∇H(∇H°(ξ)) = ξ`.
    pub fn duality_identities(&self, xi: Vec2) -> Result<(f64, f64)> {
        if xi.is_zero() {
            return Err(Error::Singularity);
        }
        if !self.smooth {
            return Err(Error::Unsupported("duality identities need a smooth norm".into()));
        }
        let polar = self.polar();
        let g = polar.gradient(xi)?;
        let first = (self.value(g) - 1.0).abs();
        let back = self.grad(g) * polar.value(xi) - xi;
        Ok((first, back.max_abs()))
    }
}

const HOMOGENEITY_TOL: f64 = 1e-12;
const CONVEXITY_TOL: f64 = 1e-12;

/// Outcome of [`AnisotropicNorm::validate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    pub samples: usize,
    /// Worst `|H(tξ) − |t|H(ξ)| / (|t| H(ξ))`.
    pub homogeneity_residual: f64,
    /// Smallest sampled value of `H` on the unit circle.
    pub alpha: f64,
    /// Largest sampled value of `H` on the unit circle.
    pub beta: f64,
    /// Worst relative excess of `H²` at a midpoint over the chord average.
    pub convexity_violation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolarForm {
    Euclidean,
    /// `H°(x, y) = (a²x² + b²y²)^{1/2}`.
    Elliptic { a: f64, b: f64 },
    /// Conjugate exponent norm.
    PNorm { p: f64 },
    /// Conjugate exponents on the matching quadrants.
    PiecewisePQ { p: f64, q: f64 },
    /// Polar of the max-norm.
    L1,
}

/// The polar norm `H°` of an [`AnisotropicNorm`].
#[derive(Debug, Clone, Copy)]
pub struct PolarNorm<'a> {
    base: &'a AnisotropicNorm,
    closed_form: Option<PolarForm>,
}

impl<'a> PolarNorm<'a> {
    pub fn base(&self) -> &'a AnisotropicNorm {
        self.base
    }

    pub fn closed_form(&self) -> Option<PolarForm> {
        self.closed_form
    }

    /// `H°(v)`, checked.
    pub fn eval(&self, v: Vec2) -> Result<f64> {
        if !v.is_finite() {
            return Err(Error::Input(format!("non-finite vector ({}, {})", v.x, v.y)));
        }
        Ok(self.value(v))
    }

    pub fn value(&self, v: Vec2) -> f64 {
        if v.is_zero() {
            return 0.0;
        }
        match self.closed_form {
            Some(PolarForm::Euclidean) => v.norm(),
            Some(PolarForm::Elliptic { a, b }) => libm::hypot(a * v.x, b * v.y),
            Some(PolarForm::PNorm { p }) => pnorm_value(p, v),
            Some(PolarForm::PiecewisePQ { p, q }) => pnorm_value(seam_exponent(p, q, v), v),
            Some(PolarForm::L1) => v.x.abs() + v.y.abs(),
            None => numeric_dual(|xi| self.base.value(xi), v).0,
        }
    }

    /// `∇H°(v)`; for the numeric polar this is the maximizing direction
    /// scaled to `H = 1`.
    pub fn gradient(&self, v: Vec2) -> Result<Vec2> {
        if !v.is_finite() {
            return Err(Error::Input(format!("non-finite vector ({}, {})", v.x, v.y)));
        }
        if v.is_zero() {
            return Err(Error::Singularity);
        }
        Ok(self.grad(v))
    }

    pub fn grad(&self, v: Vec2) -> Vec2 {
        match self.closed_form {
            Some(PolarForm::Euclidean) => v / v.norm(),
            Some(PolarForm::Elliptic { a, b }) => {
                Vec2::new(a * a * v.x, b * b * v.y) / libm::hypot(a * v.x, b * v.y)
            }
            Some(PolarForm::PNorm { p }) => pnorm_grad(p, v),
            Some(PolarForm::PiecewisePQ { p, q }) => pnorm_grad(seam_exponent(p, q, v), v),
            Some(PolarForm::L1) => Vec2::new(sign(v.x), sign(v.y)),
            None => numeric_dual(|xi| self.base.value(xi), v).1,
        }
    }
}

/// `sup_θ ⟨u(θ), v⟩ / f(u(θ))` over unit directions, by a 720-point grid
/// followed by golden-section refinement to `1e-12` in the angle.
///
/// Returns the supremum and the maximizer rescaled to `f = 1`, which is the
/// gradient of the dual gauge at `v`.
pub fn numeric_dual<F: Fn(Vec2) -> f64>(f: F, v: Vec2) -> (f64, Vec2) {
    let ratio = |theta: f64| {
        let u = Vec2::from_angle(theta);
        u.dot(v) / f(u)
    };
    let step = TAU / DIRECTION_GRID as f64;
    let base = v.angle();
    let mut best = (0usize, f64::NEG_INFINITY);
    for i in 0..DIRECTION_GRID {
        let r = ratio(base + step * i as f64 - PI);
        if r > best.1 {
            best = (i, r);
        }
    }
    let centre = base + step * best.0 as f64 - PI;
    let (theta, neg) = golden_min(|t| -ratio(t), centre - step, centre + step, 1e-12);
    let u = Vec2::from_angle(theta);
    (-neg, u / f(u))
}

/// Minimum and maximum of `f` on the Euclidean unit circle.
pub fn extrema_on_circle<F: Fn(Vec2) -> f64>(f: F) -> (f64, f64) {
    let step = TAU / DIRECTION_GRID as f64;
    let vals: Vec<f64> = (0..DIRECTION_GRID)
        .map(|i| f(Vec2::from_angle(step * i as f64)))
        .collect();
    let n = vals.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let (prev, cur, next) = (vals[(i + n - 1) % n], vals[i], vals[(i + 1) % n]);
        let t = step * i as f64;
        if cur <= prev && cur <= next {
            let (_, m) = golden_min(|s| f(Vec2::from_angle(s)), t - step, t + step, 1e-12);
            lo = lo.min(m).min(cur);
        }
        if cur >= prev && cur >= next {
            let (_, m) = golden_min(|s| -f(Vec2::from_angle(s)), t - step, t + step, 1e-12);
            hi = hi.max(-m).max(cur);
        }
    }
    (lo, hi)
}

/// Conjugate exponent `p' = p / (p − 1)`.
pub fn conjugate(p: f64) -> f64 {
    p / (p - 1.0)
}

#[inline]
fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

#[inline]
fn seam_exponent(p: f64, q: f64, v: Vec2) -> f64 {
    if v.x * v.y >= 0.0 {
        p
    } else {
        q
    }
}

/// `(|x|^p + |y|^p)^{1/p}`, rescaled by the larger component to avoid
/// overflow and underflow.
pub fn pnorm_value(p: f64, v: Vec2) -> f64 {
    let m = v.max_abs();
    if m == 0.0 {
        return 0.0;
    }
    let (u, w) = (v.x.abs() / m, v.y.abs() / m);
    m * libm::pow(libm::pow(u, p) + libm::pow(w, p), 1.0 / p)
}

/// Gradient of the p-norm; 0-homogeneous.
pub fn pnorm_grad(p: f64, v: Vec2) -> Vec2 {
    let m = v.max_abs();
    let (u, w) = (v.x.abs() / m, v.y.abs() / m);
    let s = libm::pow(u, p) + libm::pow(w, p);
    let scale = libm::pow(s, 1.0 / p - 1.0);
    Vec2::new(
        sign(v.x) * libm::pow(u, p - 1.0) * scale,
        sign(v.y) * libm::pow(w, p - 1.0) * scale,
    )
}

/// Hessian of the p-norm:
/// `(p − 1) [diag(|v_i|^{p−2}) S^{1/p−1} − ∇H ∇Hᵀ / H]`, `S = Σ|v_i|^p`.
pub fn pnorm_hessian(p: f64, v: Vec2) -> Sym2 {
    let m = v.max_abs();
    let (u, w) = (v.x.abs() / m, v.y.abs() / m);
    let s = libm::pow(u, p) + libm::pow(w, p);
    let h = libm::pow(s, 1.0 / p);
    let scale = libm::pow(s, 1.0 / p - 1.0);
    let g = Vec2::new(
        sign(v.x) * libm::pow(u, p - 1.0) * scale,
        sign(v.y) * libm::pow(w, p - 1.0) * scale,
    );
    let k = (p - 1.0) / m;
    Sym2 {
        xx: k * (libm::pow(u, p - 2.0) * scale - g.x * g.x / h),
        xy: -k * g.x * g.y / h,
        yy: k * (libm::pow(w, p - 2.0) * scale - g.y * g.y / h),
    }
}

/// Central-difference gradient with step `1e-6·max(1, |ξ|)`.
pub fn central_gradient<F: Fn(Vec2) -> f64>(f: F, xi: Vec2) -> Vec2 {
    let h = 1e-6 * xi.norm().max(1.0);
    let ex = Vec2::new(h, 0.0);
    let ey = Vec2::new(0.0, h);
    Vec2::new(
        (f(xi + ex) - f(xi - ex)) / (2.0 * h),
        (f(xi + ey) - f(xi - ey)) / (2.0 * h),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::vec;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn eval_examples() {
        assert_eq!(AnisotropicNorm::euclidean().eval(Vec2::new(1.0, 0.0)).unwrap(), 1.0);
        let e = AnisotropicNorm::elliptic(2.0, 1.0).unwrap();
        assert_eq!(e.eval(Vec2::new(2.0, 0.0)).unwrap(), 1.0);
        let p4 = AnisotropicNorm::p_norm(4.0).unwrap();
        assert!(close(p4.eval(Vec2::new(1.0, 1.0)).unwrap(), libm::pow(2.0, 0.25), 1e-15));
    }

    #[test]
    fn eval_zero_only_at_origin() {
        let p4 = AnisotropicNorm::p_norm(4.0).unwrap();
        assert_eq!(p4.value(Vec2::ZERO), 0.0);
        assert!(p4.value(Vec2::new(1e-300, 0.0)) > 0.0);
    }

    #[test]
    fn eval_rejects_non_finite() {
        let n = AnisotropicNorm::euclidean();
        assert!(matches!(n.eval(Vec2::new(f64::NAN, 0.0)), Err(Error::Input(_))));
        assert!(matches!(n.eval(Vec2::new(f64::INFINITY, 0.0)), Err(Error::Input(_))));
    }

    #[test]
    fn gradient_examples() {
        let g = AnisotropicNorm::euclidean().gradient(Vec2::new(0.0, 1.0)).unwrap();
        assert_eq!(g, Vec2::new(0.0, 1.0));
        let e = AnisotropicNorm::elliptic(2.0, 1.0).unwrap();
        let g = e.gradient(Vec2::new(2.0, 0.0)).unwrap();
        assert!(close(g.x, 0.5, 1e-15) && g.y == 0.0);
    }

    #[test]
    fn p4_gradient_matches_finite_differences() {
        let p4 = AnisotropicNorm::p_norm(4.0).unwrap();
        let xi = Vec2::new(1.0, 1.0);
        let h = 1e-6;
        let fd = Vec2::new(
            (p4.value(xi + Vec2::new(h, 0.0)) - p4.value(xi - Vec2::new(h, 0.0))) / (2.0 * h),
            (p4.value(xi + Vec2::new(0.0, h)) - p4.value(xi - Vec2::new(0.0, h))) / (2.0 * h),
        );
        let g = p4.gradient(xi).unwrap();
        assert!((g - fd).max_abs() < 1e-8, "{g:?} vs {fd:?}");
    }

    #[test]
    fn gradient_errors() {
        let n = AnisotropicNorm::euclidean();
        assert_eq!(n.gradient(Vec2::ZERO), Err(Error::Singularity));
        let m = AnisotropicNorm::max_approx(vec![8.0, 16.0, 32.0]).unwrap();
        assert!(matches!(m.gradient(Vec2::new(1.0, 0.5)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn hessians_match_finite_differences_of_gradients() {
        let norms = [
            AnisotropicNorm::euclidean(),
            AnisotropicNorm::elliptic(3.0, 0.5).unwrap(),
            AnisotropicNorm::p_norm(4.0).unwrap(),
            AnisotropicNorm::piecewise_pq(4.0, 3.0).unwrap(),
        ];
        for n in &norms {
            for &xi in &[Vec2::new(0.7, 0.4), Vec2::new(-1.2, 0.3), Vec2::new(0.2, -2.0)] {
                let h = 1e-6;
                let dx = (n.grad(xi + Vec2::new(h, 0.0)) - n.grad(xi - Vec2::new(h, 0.0))) / (2.0 * h);
                let dy = (n.grad(xi + Vec2::new(0.0, h)) - n.grad(xi - Vec2::new(0.0, h))) / (2.0 * h);
                let hs = n.hessian(xi);
                assert!(close(hs.xx, dx.x, 1e-6), "{n:?} {xi:?}");
                assert!(close(hs.xy, dx.y, 1e-6));
                assert!(close(hs.xy, dy.x, 1e-6));
                assert!(close(hs.yy, dy.y, 1e-6));
            }
        }
    }

    #[test]
    fn closed_form_polars() {
        let e = AnisotropicNorm::elliptic(2.0, 1.0).unwrap();
        let v = Vec2::new(0.3, -0.7);
        assert!(close(e.polar().value(v), libm::sqrt(4.0 * 0.09 + 0.49), 1e-15));
        let p4 = AnisotropicNorm::p_norm(4.0).unwrap();
        let pc = 4.0 / 3.0;
        let expect = libm::pow(libm::pow(0.3, pc) + libm::pow(0.7, pc), 1.0 / pc);
        assert!(close(p4.polar().value(v), expect, 1e-14));
        let eu = AnisotropicNorm::euclidean();
        assert!(close(eu.polar().value(Vec2::new(3.0, 4.0)), 5.0, 1e-15));
    }

    #[test]
    fn numeric_polar_agrees_with_closed_forms() {
        let norms = [
            AnisotropicNorm::elliptic(2.0, 1.0).unwrap(),
            AnisotropicNorm::p_norm(4.0).unwrap(),
            AnisotropicNorm::piecewise_pq(4.0, 3.0).unwrap(),
        ];
        for n in &norms {
            for i in 0..37 {
                let v = Vec2::from_angle(0.17 * i as f64) * (0.5 + 0.1 * i as f64);
                let (num, arg) = numeric_dual(|xi| n.value(xi), v);
                let closed = n.polar().value(v);
                assert!(close(num, closed, 1e-12 * closed), "{n:?} {v:?}: {num} vs {closed}");
                assert!(close(arg.dot(v), closed, 1e-12 * closed));
                assert!(close(n.value(arg), 1.0, 1e-12));
                // on the axes the p = 4 ratio is flat to fourth order and the maximizer is ill-conditioned
                if v.x.abs().min(v.y.abs()) > 0.05 * v.norm() {
                    let err = (arg - n.polar().grad(v)).max_abs();
                    assert!(err < 1e-6, "{:?} {v:?}: {err:e}", n.family());
                }
            }
        }
    }

    #[test]
    fn alpha_beta_examples() {
        let e = AnisotropicNorm::euclidean();
        assert!(close(e.alpha(), 1.0, 1e-12) && close(e.beta(), 1.0, 1e-12));
        let el = AnisotropicNorm::elliptic(2.0, 1.0).unwrap();
        assert!(close(el.alpha(), 0.5, 1e-12));
        assert!(close(el.beta(), 1.0, 1e-12));
        let p4 = AnisotropicNorm::p_norm(4.0).unwrap();
        assert!(close(p4.alpha(), libm::pow(2.0, 0.25 - 0.5), 1e-12));
        assert!(close(p4.beta(), 1.0, 1e-12));
    }

    #[test]
    fn validate_examples() {
        let r = AnisotropicNorm::euclidean().validate(1000).unwrap();
        assert!(close(r.alpha, 1.0, 1e-12) && close(r.beta, 1.0, 1e-12));
        let r = AnisotropicNorm::piecewise_pq(4.0, 3.0).unwrap().validate(10_000).unwrap();
        assert!(r.homogeneity_residual <= 1e-12);
        assert!(r.convexity_violation <= 0.0);
    }

    #[test]
    fn validate_flags_non_convex_custom_norm() {
        // an l^{1/2} quasi-norm is homogeneous but not convex
        let bad = AnisotropicNorm::custom(
            "half",
            Arc::new(|v: Vec2| {
                let s = libm::sqrt(v.x.abs()) + libm::sqrt(v.y.abs());
                s * s
            }),
            None,
        );
        match bad.validate(1000) {
            Err(Error::Validation { what, .. }) => assert!(what.contains("convexity")),
            other => panic!("expected validation failure, got {other:?}"),
        }
    }

    #[test]
    fn duality_examples() {
        let (a, b) = AnisotropicNorm::euclidean()
            .duality_identities(Vec2::new(3.0, 4.0))
            .unwrap();
        assert!(a < 1e-15 && b < 1e-14);
        let (a, b) = AnisotropicNorm::elliptic(2.0, 1.0)
            .unwrap()
            .duality_identities(Vec2::new(1.0, 1.0))
            .unwrap();
        assert!(a < 1e-9 && b < 1e-9);
        let (a, b) = AnisotropicNorm::p_norm(4.0)
            .unwrap()
            .duality_identities(Vec2::new(0.3, -2.0))
            .unwrap();
        assert!(a < 1e-9 && b < 1e-9);
        assert_eq!(
            AnisotropicNorm::euclidean().duality_identities(Vec2::ZERO),
            Err(Error::Singularity)
        );
    }

    #[test]
    fn constructor_hypotheses() {
        assert!(AnisotropicNorm::p_norm(1.5).is_err());
        assert!(AnisotropicNorm::piecewise_pq(3.0, 4.0).is_err());
        assert!(AnisotropicNorm::piecewise_pq(4.0, 2.0).is_err());
        assert!(AnisotropicNorm::elliptic(0.0, 1.0).is_err());
        assert!(AnisotropicNorm::max_approx(vec![]).is_err());
        assert!(AnisotropicNorm::max_approx(vec![16.0, 8.0]).is_err());
    }

    #[test]
    fn custom_norm_without_gradient_uses_differences() {
        let c = AnisotropicNorm::custom(
            "ellipse",
            Arc::new(|v: Vec2| libm::hypot(v.x / 2.0, v.y)),
            None,
        );
        let e = AnisotropicNorm::elliptic(2.0, 1.0).unwrap();
        let xi = Vec2::new(0.4, -1.3);
        assert!((c.grad(xi) - e.grad(xi)).max_abs() < 1e-8);
        assert!(c.polar().closed_form().is_none());
        assert!(close(c.polar().value(xi), e.polar().value(xi), 1e-12));
    }
}
