//! Anisotropic perimeters, Wulff shapes and the optimal constant of the
//! anisotropic relative isoperimetric inequality for planar convex domains.
//!
//! The crate is `no_std` and only needs `alloc`. Floating point functions
//! come from [`libm`].
//!
//! Module map:
//! - [`norm`]: the anisotropy `H`, its gradient, Hessian and polar `H°`.
//! - [`wulff`]: the Wulff shape `W = {H° < 1}`, Wulff arcs, anisotropic curvature.
//! - [`geometry`]: convex domains, cuts and the areas they split off.
//! - [`perimeter`]: anisotropic length of curves, relative perimeter, quotient.
//! - [`solver`]: `C_H(Ω)`, its minimizers, the area profile `μ(k)` and a
//!   randomized lower-bound verifier.
#![no_std]
// `!(x < y)` is how NaN gets rejected here
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod curve;
pub mod error;
pub mod geometry;
pub mod norm;
pub mod optimize;
pub mod perimeter;
pub mod quadrature;
pub mod solver;
pub mod vec2;
pub mod wulff;

pub use error::{Error, Result};
pub use geometry::{ConvexDomain, Cut, CutKind, Frame, LevelMode, Side};
pub use norm::{AnisotropicNorm, NormFamily, PolarNorm};
pub use perimeter::PerimeterReport;
pub use solver::{IsoResult, Method, SolverOptions, VerificationSummary};
pub use vec2::Vec2;
pub use wulff::{ArcSweep, WulffArc, WulffShape};

/// `x mod m` in `[0, m)`.
pub(crate) fn wrap(x: f64, m: f64) -> f64 {
    let r = x - m * libm::floor(x / m);
    if r >= m {
        0.0
    } else {
        r
    }
}

/// Library version string.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
