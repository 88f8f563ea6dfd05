//! The optimal constant `C_H(Ω)`, its minimizing cuts, the area profile
//! `μ(k)` and a randomized check of the inequality.

mod candidate;
mod general;
mod plimit;
mod profile;
mod symmetric;
mod verify;

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::optimize::{brent_min, brent_root, NelderMeadOptions};
use crate::vec2::Vec2;

pub use candidate::{contact_residual, Minimizer};
pub use general::{solve_general, SectorCandidate};
pub use plimit::{solve_p_limit, PLimitFit};
pub use profile::{area_profile, ProfilePoint};
pub use symmetric::{constant_symmetric, r_h, RhResult};
pub use verify::verify_lower_bound;

/// Runs independent jobs, possibly in parallel. Results come back in index order.
pub trait Executor: Send + Sync {
    fn map(&self, n: usize, job: &(dyn Fn(usize) -> Vec<f64> + Sync)) -> Vec<Vec<f64>>;
}

/// Runs jobs one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map(&self, n: usize, job: &(dyn Fn(usize) -> Vec<f64> + Sync)) -> Vec<Vec<f64>> {
        (0..n).map(job).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    SymmetricClosedForm,
    GeneralSearch,
    PLimit,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::SymmetricClosedForm => "symmetric_closed_form",
            Method::GeneralSearch => "general_search",
            Method::PLimit => "p_limit",
        }
    }
}

#[derive(Clone)]
pub struct SolverOptions {
    /// Points per side of the coarse chord grid.
    pub chord_grid: usize,
    /// Points per side of the coarse arc endpoint grid.
    pub arc_pair_grid: usize,
    /// Number of halvings of the sweep `π` used for minor arcs.
    pub arc_sweep_levels: usize,
    /// Seeds refined by the simplex search in each family.
    pub seeds: usize,
    /// Grid over the anchor parameter of the fixed-area families.
    pub profile_grid: usize,
    pub nelder_mead: NelderMeadOptions,
    /// Relative tolerance for reporting ties with the best cut.
    pub tie_rel_tol: f64,
    pub contact_tol: f64,
    /// Cap on the number of reported cuts of a continuum of minimizers.
    pub max_reported: usize,
    /// Samples for the built-in lower-bound check; 0 skips it.
    pub verify_samples: usize,
    pub seed: u64,
    pub executor: Arc<dyn Executor>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            chord_grid: 128,
            arc_pair_grid: 48,
            arc_sweep_levels: 12,
            seeds: 8,
            profile_grid: 128,
            nelder_mead: NelderMeadOptions::default(),
            tie_rel_tol: 1e-6,
            contact_tol: 1e-6,
            max_reported: 16,
            verify_samples: 0,
            seed: 0,
            executor: Arc::new(Sequential),
        }
    }
}

impl fmt::Debug for SolverOptions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SolverOptions")
            .field("chord_grid", &self.chord_grid)
            .field("arc_pair_grid", &self.arc_pair_grid)
            .field("arc_sweep_levels", &self.arc_sweep_levels)
            .field("seeds", &self.seeds)
            .field("profile_grid", &self.profile_grid)
            .field("nelder_mead", &self.nelder_mead)
            .field("tie_rel_tol", &self.tie_rel_tol)
            .field("contact_tol", &self.contact_tol)
            .field("max_reported", &self.max_reported)
            .field("verify_samples", &self.verify_samples)
            .field("seed", &self.seed)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerificationSummary {
    pub samples: usize,
    /// `min Q/c` over the samples.
    pub worst_ratio: f64,
    pub violations: usize,
    pub c: f64,
    pub seed: u64,
    /// Endpoints of the sample attaining `worst_ratio`.
    pub worst_endpoints: Option<[Vec2; 2]>,
}

#[derive(Debug, Clone)]
pub struct IsoResult {
    pub c_h: f64,
    pub method: Method,
    /// Cuts within the tie tolerance of `c_h`, best first.
    pub minimizers: Vec<Minimizer>,
    /// The minimizers form a continuum; only a sample of it is listed.
    pub continuum: bool,
    pub r_h: Option<f64>,
    /// A half-area cut matching `c_h` when the best cut splits off less than half.
    pub half_area_companion: Option<Minimizer>,
    pub sectors: Vec<SectorCandidate>,
    pub p_limit: Option<PLimitFit>,
    pub verification: Option<VerificationSummary>,
    pub diagnostics: Vec<String>,
}

impl IsoResult {
    pub fn best(&self) -> Option<&Minimizer> {
        self.minimizers.first()
    }
}

/// Parameters `(i + ½)/n` of a uniform cyclic grid.
pub(crate) fn grid(n: usize) -> impl Iterator<Item = f64> + Clone {
    (0..n).map(move |i| (i as f64 + 0.5) / n as f64)
}

/// Indices of local minima of a cyclic sequence, best first.
pub(crate) fn cyclic_minima(values: &[f64]) -> Vec<usize> {
    let n = values.len();
    let mut idx: Vec<usize> = (0..n)
        .filter(|&i| {
            let v = values[i];
            v.is_finite() && v <= values[(i + n - 1) % n] && v <= values[(i + 1) % n]
        })
        .collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    idx
}

/// Minimizes `f` on `[a, b]`, then sharpens the argmin with [`polish_stationary`].
pub(crate) fn refine_1d<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let (x, fx) = brent_min(f, a, b, 1e-12);
    polish_stationary(f, x, fx, 0.125 * (b - a))
}

/// Replaces the minimizer `x` of `f` by a zero of the central difference
/// quotient within `w` of it, when that is no worse. Value comparisons alone
/// locate a smooth minimum only to about `√ε`.
pub(crate) fn polish_stationary<F: Fn(f64) -> f64>(f: &F, x: f64, fx: f64, w: f64) -> (f64, f64) {
    let h = 1e-5 * (8.0 * w).max(1e-3);
    let slope = |s: f64| (f(s + h) - f(s - h)) / (2.0 * h);
    let (lo, hi) = (x - w, x + w);
    if slope(lo) < 0.0 && slope(hi) > 0.0 {
        if let Ok(r) = brent_root(slope, lo, hi, 1e-14) {
            let fr = f(r);
            if fr <= fx * (1.0 + 1e-12) {
                return (r, fr);
            }
        }
    }
    (x, fx)
}

/// Best point of a 1-D cyclic scan refined around the `keep` best basins.
pub(crate) fn minimize_cyclic<F: Fn(f64) -> f64 + Sync>(
    executor: &dyn Executor,
    f: &F,
    n: usize,
    keep: usize,
) -> Vec<(f64, f64)> {
    let xs: Vec<f64> = grid(n).collect();
    let values: Vec<f64> = executor
        .map(n, &|i| alloc::vec![f(xs[i])])
        .into_iter()
        .map(|v| v[0])
        .collect();
    let basins: Vec<usize> = cyclic_minima(&values).into_iter().take(keep).collect();
    let step = 1.0 / n as f64;
    let refined = executor.map(basins.len(), &|j| {
        let x = xs[basins[j]];
        let (s, v) = refine_1d(f, x - step, x + step);
        alloc::vec![crate::wrap(s, 1.0), v]
    });
    let mut out: Vec<(f64, f64)> = refined.into_iter().map(|v| (v[0], v[1])).filter(|p| p.1.is_finite()).collect();
    out.sort_by(|a, b| a.1.total_cmp(&b.1));
    out
}
