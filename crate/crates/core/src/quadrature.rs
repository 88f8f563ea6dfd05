//! One-dimensional quadrature rules.

use crate::error::{Error, Result};
use alloc::format;
use alloc::vec::Vec;

const GL8_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL8_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// 8-point Gauss–Legendre rule on `[a, b]`.
pub fn gauss_legendre8<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (x, w) in GL8_NODES.iter().zip(GL8_WEIGHTS.iter()) {
        acc += w * (f(mid - half * x) + f(mid + half * x));
    }
    acc * half
}

/// Composite 8-point Gauss–Legendre over `cells` equal cells.
pub fn composite_gl8<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, cells: usize) -> f64 {
    let h = (b - a) / cells as f64;
    let mut acc = 0.0;
    for i in 0..cells {
        let lo = a + h * i as f64;
        acc += gauss_legendre8(&mut f, lo, lo + h);
    }
    acc
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
}

const MAX_DEPTH: u32 = 48;

/// Adaptive Simpson quadrature with Richardson correction.
///
/// Fails with [`Error::Numeric`] when the recursion limit is reached before
/// the local error estimates fall below `abs_tol`, or the integrand is not
/// finite.
pub fn adaptive_simpson<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
) -> Result<Integral> {
    if a == b {
        return Ok(Integral {
            value: 0.0,
            error_estimate: 0.0,
        });
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut err = 0.0;
    let mut ok = true;
    let value = simpson_rec(&mut f, a, b, fa, fm, fb, whole, abs_tol, MAX_DEPTH, &mut err, &mut ok);
    if !value.is_finite() {
        return Err(Error::Numeric(format!(
            "non-finite integrand on [{a}, {b}]"
        )));
    }
    if !ok {
        return Err(Error::Numeric(format!(
            "adaptive Simpson hit depth limit on [{a}, {b}] (error estimate {err:e})"
        )));
    }
    Ok(Integral {
        value,
        error_estimate: err,
    })
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    err: &mut f64,
    ok: &mut bool,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    // the minimum depth guards against symmetric integrands fooling the first estimate
    if depth < MAX_DEPTH - 4 && delta.abs() <= 15.0 * tol || !delta.is_finite() {
        *err += delta.abs() / 15.0;
        return left + right + delta / 15.0;
    }
    if depth == 0 {
        *ok = false;
        *err += delta.abs() / 15.0;
        return left + right + delta / 15.0;
    }
    simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, err, ok)
        + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, err, ok)
}

/// Cumulative integral of a periodic integrand sampled on equal cells.
///
/// Node values are exact to the 8-point Gauss–Legendre rule on each cell;
/// values between nodes add one partial-cell rule, so the integrand must be
/// supplied again at query time.
#[derive(Debug, Clone)]
pub struct CumulativeTable {
    period: f64,
    nodes: Vec<f64>,
}

impl CumulativeTable {
    pub fn build<F: FnMut(f64) -> f64>(mut f: F, period: f64, cells: usize) -> Self {
        let h = period / cells as f64;
        let mut nodes = Vec::with_capacity(cells + 1);
        let mut acc = 0.0;
        nodes.push(0.0);
        for i in 0..cells {
            let lo = h * i as f64;
            acc += gauss_legendre8(&mut f, lo, lo + h);
            nodes.push(acc);
        }
        CumulativeTable { period, nodes }
    }

    /// Builds with `initial_cells`, doubling until the total changes by at
    /// most `rel_tol` relative.
    pub fn build_converged<F: FnMut(f64) -> f64>(
        mut f: F,
        period: f64,
        initial_cells: usize,
        rel_tol: f64,
    ) -> Result<Self> {
        let mut table = Self::build(&mut f, period, initial_cells);
        let mut cells = initial_cells;
        while cells < 1 << 18 {
            cells *= 2;
            let finer = Self::build(&mut f, period, cells);
            if !finer.total().is_finite() {
                return Err(Error::Numeric("non-finite periodic integral".into()));
            }
            if (finer.total() - table.total()).abs() <= rel_tol * finer.total().abs() {
                return Ok(table);
            }
            table = finer;
        }
        Err(Error::Numeric(format!(
            "periodic quadrature did not converge (total {})",
            table.total()
        )))
    }

    pub fn cells(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Integral over one full period.
    pub fn total(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// `∫_0^x f`, extended periodically to all real `x`.
    pub fn antiderivative<F: FnMut(f64) -> f64>(&self, f: F, x: f64) -> f64 {
        let wraps = libm::floor(x / self.period);
        let local = x - wraps * self.period;
        let cells = self.cells();
        let h = self.period / cells as f64;
        let k = ((local / h) as usize).min(cells - 1);
        let lo = h * k as f64;
        let partial = if local > lo {
            gauss_legendre8(f, lo, local)
        } else {
            0.0
        };
        wraps * self.total() + self.nodes[k] + partial
    }

    /// `∫_a^b f` (signed; `b < a` gives the negative).
    pub fn between<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        self.antiderivative(&mut f, b) - self.antiderivative(&mut f, a)
    }
}
