//! The max-norm constant as the limit of p-norm constants.

use alloc::format;
use alloc::vec::Vec;

use super::{constant_symmetric, solve_general, IsoResult, Method, SolverOptions};
use crate::error::{Error, Result};
use crate::geometry::ConvexDomain;
use crate::norm::AnisotropicNorm;

/// Monotonicity slack, relative to the constant.
const TREND_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct PLimitFit {
    /// `(p, c(p))` for each approximant.
    pub per_p: Vec<(f64, f64)>,
    /// Least-squares fit `c(p) = c_inf + slope/p` on the last three values.
    pub c_inf: f64,
    pub slope: f64,
}

/// Fits `c_inf + slope/p` to the points by least squares.
fn fit_inverse_p(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), &(p, c)| (a + 1.0 / p, b + c));
    let (mx, my) = (sx / n, sy / n);
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &(p, c) in points {
        let dx = 1.0 / p - mx;
        sxx += dx * dx;
        sxy += dx * (c - my);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (my - slope * mx, slope)
}

pub fn solve_p_limit(norm: &AnisotropicNorm, omega: &ConvexDomain, options: &SolverOptions) -> Result<IsoResult> {
    let approximants = norm
        .approximants()
        .ok_or_else(|| Error::Precondition("the p-limit needs a max_approx norm".into()))?;
    if approximants.len() < 3 {
        return Err(Error::Precondition(format!(
            "the p-limit needs at least three exponents, got {}",
            approximants.len()
        )));
    }
    let symmetric = omega.symmetric_about().is_some() || omega.is_centrosymmetric(1e-9 * omega.diameter()).is_some();
    let inner = SolverOptions {
        verify_samples: 0,
        ..options.clone()
    };
    let mut per_p = Vec::with_capacity(approximants.len());
    let mut last = None;
    for (p, h) in &approximants {
        let res = if symmetric {
            constant_symmetric(h, omega, &inner)?
        } else {
            solve_general(h, omega, &inner)?
        };
        per_p.push((*p, res.c_h));
        last = Some((h.clone(), res));
    }
    let rising = per_p.windows(2).any(|w| w[1].1 > w[0].1 * (1.0 + TREND_TOL));
    let falling = per_p.windows(2).any(|w| w[1].1 < w[0].1 * (1.0 - TREND_TOL));
    if rising && falling {
        return Err(Error::Numeric(format!("c(p) is not monotone in p: {per_p:?}")));
    }
    let (c_inf, slope) = fit_inverse_p(&per_p[per_p.len() - 3..]);
    let (h_last, last) = last.expect("at least three approximants");
    let mut diagnostics = last.diagnostics;
    diagnostics.push(format!(
        "minimizers are listed for p = {}; the limit problem has further minimizers",
        per_p[per_p.len() - 1].0
    ));
    let verification = if options.verify_samples > 0 {
        Some(super::verify_lower_bound(
            &h_last,
            omega,
            last.c_h,
            options.verify_samples,
            options.seed,
            options,
        )?)
    } else {
        None
    };
    Ok(IsoResult {
        c_h: c_inf,
        method: Method::PLimit,
        minimizers: last.minimizers,
        continuum: true,
        r_h: None,
        half_area_companion: None,
        sectors: last.sectors,
        p_limit: Some(PLimitFit { per_p, c_inf, slope }),
        verification,
        diagnostics,
    })
}
