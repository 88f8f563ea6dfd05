//! Centrosymmetric domains: `r_H` and the closed-form constant.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::candidate::{Minimizer, Problem};
use super::{IsoResult, Method, SolverOptions};
use crate::error::{Error, Result};
use crate::geometry::{ConvexDomain, Side};
use crate::norm::AnisotropicNorm;
use crate::optimize::golden_min;
use crate::vec2::Vec2;

const RH_GRID: usize = 2048;
const SYMMETRY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct RhResult {
    pub value: f64,
    /// Boundary parameters attaining the minimum. When `constant` is set
    /// these are the grid points.
    pub argmins: Vec<f64>,
    pub center: Vec2,
    /// `H(−y, x)` is constant on `∂Ω`, so every boundary point is an argmin.
    pub constant: bool,
}

/// `min H(−y, x)` over boundary points `T = (x, y)` measured from the
/// center of symmetry.
pub fn r_h(norm: &AnisotropicNorm, omega: &ConvexDomain) -> Result<RhResult> {
    let center = omega
        .symmetric_about()
        .or_else(|| omega.is_centrosymmetric(SYMMETRY_TOL * omega.diameter()))
        .ok_or_else(|| Error::Precondition("the domain is not centrosymmetric".into()))?;
    let l = |s: f64| norm.value((omega.point(s) - center).perp());
    let xs: Vec<f64> = super::grid(RH_GRID).collect();
    let values: Vec<f64> = xs.iter().map(|&s| l(s)).collect();
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(0.0, f64::max);
    if hi - lo <= 1e-12 * hi {
        return Ok(RhResult {
            value: lo,
            argmins: xs,
            center,
            constant: true,
        });
    }
    let step = 1.0 / RH_GRID as f64;
    let mut found: Vec<(f64, f64)> = super::cyclic_minima(&values)
        .into_iter()
        .map(|i| {
            let (s, v) = golden_min(l, xs[i] - step, xs[i] + step, 1e-13);
            let (s, v) = super::polish_stationary(&l, s, v, 0.25 * step);
            (crate::wrap(s, 1.0), v)
        })
        .collect();
    let best = found.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    found.retain(|p| p.1 <= best + 1e-9);
    found.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut argmins: Vec<f64> = Vec::new();
    for (s, _) in found {
        let dup = argmins.iter().any(|&t| {
            let d = (s - t).abs();
            d.min(1.0 - d) < 1e-7
        });
        if !dup {
            argmins.push(s);
        }
    }
    Ok(RhResult {
        value: best,
        argmins,
        center,
        constant: false,
    })
}

/// `C_H = 8 r_H² / |Ω|` with the center chords through the argmins of `r_H`.
pub fn constant_symmetric(norm: &AnisotropicNorm, omega: &ConvexDomain, options: &SolverOptions) -> Result<IsoResult> {
    let problem = Problem::new(norm, omega)?;
    let rh = r_h(norm, omega)?;
    let c_h = 8.0 * rh.value * rh.value / omega.area();
    let mut diagnostics = Vec::new();

    // each center chord appears twice among the argmins, once per end
    let mut starts: Vec<f64> = Vec::new();
    let candidates: Vec<f64> = if rh.constant {
        let n = options.max_reported.max(1);
        (0..n).map(|i| (i as f64 + 0.25) / (2 * n) as f64).collect()
    } else {
        rh.argmins.clone()
    };
    for s in candidates {
        let t = omega.point(s);
        let opposite = omega.param_of(rh.center * 2.0 - t);
        let dup = starts.iter().any(|&u| {
            let d = (opposite - u).abs();
            d.min(1.0 - d) < 1e-6
        });
        if !dup {
            starts.push(s);
        }
    }

    let mut minimizers: Vec<Minimizer> = Vec::new();
    for &s in &starts {
        let t = omega.point(s);
        let far = omega.point(omega.param_of(rh.center * 2.0 - t));
        let cut = match omega.chord_through(t, far, Side::Right) {
            Ok(cut) => cut.with_small_side(),
            Err(e) => {
                diagnostics.push(format!("center chord at s = {s:.9} rejected: {e}"));
                continue;
            }
        };
        let perimeter = norm.value((far - t).perp());
        let m = problem.minimizer_from_cut(cut, perimeter);
        if (m.q - c_h).abs() > options.tie_rel_tol * c_h {
            diagnostics.push(format!(
                "center chord at s = {s:.9} has Q = {:.12} against the closed form {:.12}",
                m.q, c_h
            ));
        }
        minimizers.push(m);
    }
    if rh.constant {
        diagnostics.push("H(-y, x) is constant on the boundary: every center chord is optimal".into());
    }
    let verification = if options.verify_samples > 0 {
        Some(super::verify_lower_bound(norm, omega, c_h, options.verify_samples, options.seed, options)?)
    } else {
        None
    };
    Ok(IsoResult {
        c_h,
        method: Method::SymmetricClosedForm,
        minimizers,
        continuum: rh.constant,
        r_h: Some(rh.value),
        half_area_companion: None,
        sectors: vec![],
        p_limit: None,
        verification,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::LevelMode;
    use core::f64::consts::PI;

    #[test]
    fn disk_is_constant() {
        let r = r_h(&AnisotropicNorm::euclidean(), &ConvexDomain::disk(1.0).unwrap()).unwrap();
        assert!(r.constant);
        assert!((r.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn sublevel_ellipse_argmins_on_short_axis() {
        let h = AnisotropicNorm::elliptic(2.0, 1.0).unwrap();
        let omega = ConvexDomain::norm_level(&h, 1.0, LevelMode::Sublevel).unwrap();
        let r = r_h(&h, &omega).unwrap();
        assert!(!r.constant);
        assert!((r.value - 0.5).abs() < 1e-12, "{}", r.value);
        assert_eq!(r.argmins.len(), 2);
        for s in r.argmins {
            let p = omega.point(s);
            assert!(p.x.abs() < 1e-6 && (p.y.abs() - 1.0).abs() < 1e-9, "{p:?}");
        }
    }

    #[test]
    fn closed_form_ellipse() {
        let h = AnisotropicNorm::elliptic(2.0, 1.0).unwrap();
        let opts = SolverOptions::default();
        let polar = ConvexDomain::norm_level(&h, 1.0, LevelMode::Polar).unwrap();
        let res = constant_symmetric(&h, &polar, &opts).unwrap();
        assert!((res.c_h - 4.0 / PI).abs() < 1e-9);
        assert!(res.continuum);
        for m in &res.minimizers {
            assert!(m.max_residual().unwrap() < 1e-8);
            assert!((m.q - res.c_h).abs() < 1e-9 * res.c_h);
        }
        let sub = ConvexDomain::norm_level(&h, 1.0, LevelMode::Sublevel).unwrap();
        let res = constant_symmetric(&h, &sub, &opts).unwrap();
        assert!((res.c_h - 1.0 / PI).abs() < 1e-9);
        assert_eq!(res.minimizers.len(), 1);
        let m = &res.minimizers[0];
        assert!(m.max_residual().unwrap() < 1e-8, "{:?} {:?}", m.residuals, m.cut.endpoints);
    }

    #[test]
    fn asymmetric_domain_is_rejected() {
        let tri = ConvexDomain::polygon(vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)]).unwrap();
        let err = r_h(&AnisotropicNorm::euclidean(), &tri).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }
}
