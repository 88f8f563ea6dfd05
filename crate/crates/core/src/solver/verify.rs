//! Randomized check of `P_H² ≥ c·min(|E|, |Ω∖E|)`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::candidate::{Candidate, Problem};
use super::{SolverOptions, VerificationSummary};
use crate::error::{Error, Result};
use crate::geometry::ConvexDomain;
use crate::norm::AnisotropicNorm;
use crate::vec2::Vec2;

const CHUNK: usize = 256;
const ATTEMPTS: usize = 16;
pub(crate) const VIOLATION_REL_TOL: f64 = 1e-6;

/// Samples `n_samples` cuts (chords, chords near the center, Wulff arcs and
/// convex polylines) and counts those with `Q < c(1 − 1e-6)`. Each chunk of
/// samples draws from its own ChaCha stream, so the result does not depend
/// on the executor.
pub fn verify_lower_bound(
    norm: &AnisotropicNorm,
    omega: &ConvexDomain,
    c: f64,
    n_samples: usize,
    seed: u64,
    options: &SolverOptions,
) -> Result<VerificationSummary> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Input(alloc::format!("the constant must be positive, got {c}")));
    }
    let pb = Problem::new(norm, omega)?;
    let center = omega.symmetric_about().unwrap_or_else(|| omega.centroid());
    let chunks = n_samples.div_ceil(CHUNK);
    let results = options.executor.map(chunks, &|ci| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(ci as u64);
        let count = CHUNK.min(n_samples - ci * CHUNK);
        let mut out = vec![f64::INFINITY, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        for _ in 0..count {
            for _ in 0..ATTEMPTS {
                let Some(cand) = sample(&pb, &mut rng, center) else {
                    continue;
                };
                let ratio = cand.q / c;
                out[2] += 1.0;
                if ratio < 1.0 - VIOLATION_REL_TOL {
                    out[1] += 1.0;
                }
                if ratio < out[0] {
                    out[0] = ratio;
                    out[3..7].copy_from_slice(&[cand.p1.x, cand.p1.y, cand.p2.x, cand.p2.y]);
                }
                break;
            }
        }
        out
    });
    let mut summary = VerificationSummary {
        samples: 0,
        worst_ratio: f64::INFINITY,
        violations: 0,
        c,
        seed,
        worst_endpoints: None,
    };
    for r in results {
        summary.samples += r[2] as usize;
        summary.violations += r[1] as usize;
        if r[0] < summary.worst_ratio {
            summary.worst_ratio = r[0];
            summary.worst_endpoints = Some([Vec2::new(r[3], r[4]), Vec2::new(r[5], r[6])]);
        }
    }
    Ok(summary)
}

fn sample(pb: &Problem<'_>, rng: &mut ChaCha8Rng, center: Vec2) -> Option<Candidate> {
    let kind: f64 = rng.gen();
    if kind < 0.3 {
        pb.chord(rng.gen(), rng.gen())
    } else if kind < 0.5 {
        let dir = Vec2::from_angle(rng.gen::<f64>() * TAU);
        let offset = if rng.gen_bool(0.5) {
            0.0
        } else {
            (rng.gen::<f64>() - 0.5) * 0.1 * pb.omega.diameter()
        };
        let origin = center + dir.perp() * offset;
        let a = pb.omega.ray_boundary_intersection(origin, -dir).ok()?;
        let b = pb.omega.ray_boundary_intersection(origin, dir).ok()?;
        pb.finish(a.s, b.s, a.point, b.point, None)
    } else if kind < 0.8 {
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let magnitude = if rng.gen_bool(0.8) {
            PI * libm::exp2(-12.0 * rng.gen::<f64>())
        } else {
            PI * (1.0 + 0.999 * rng.gen::<f64>())
        };
        pb.arc(rng.gen(), rng.gen(), sign * magnitude)
    } else {
        polyline(pb, rng)
    }
}

/// A polyline over the chord `b(s1) b(s2)` whose heights follow a concave
/// profile, so the trace bounds a convex bump.
fn polyline(pb: &Problem<'_>, rng: &mut ChaCha8Rng) -> Option<Candidate> {
    let omega = pb.omega;
    let (s1, s2): (f64, f64) = (rng.gen(), rng.gen());
    let (p1, p2) = (omega.point(s1), omega.point(s2));
    let d = p2 - p1;
    if d.norm() < 1e-9 * omega.diameter() {
        return None;
    }
    let count = rng.gen_range(3..=8);
    let amp = (rng.gen::<f64>() - 0.5) * d.norm();
    let mut pts: Vec<(f64, f64)> = (0..count)
        .map(|_| {
            let t: f64 = rng.gen();
            (t, 4.0 * t * (1.0 - t) * (0.5 + rng.gen::<f64>()))
        })
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    // upper hull of the profile
    let mut hull: Vec<(f64, f64)> = vec![(0.0, 0.0)];
    for p in pts.into_iter().chain(core::iter::once((1.0, 0.0))) {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let turn = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if turn >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let normal = d.perp().normalized();
    let verts: Vec<Vec2> = hull.iter().map(|&(t, h)| p1 + d * t + normal * (amp * h)).collect();
    if verts.len() < 3 || verts[1..verts.len() - 1].iter().any(|&v| omega.gauge(v) >= 1.0 - 1e-12) {
        return None;
    }
    let perimeter: f64 = verts.windows(2).map(|w| pb.norm.value((w[1] - w[0]).perp())).sum();
    let green: f64 = verts.windows(2).map(|w| 0.5 * w[0].cross(w[1])).sum();
    let (s1, s2) = (crate::wrap(s1, 1.0), crate::wrap(s2, 1.0));
    let right = omega.boundary_green(s1, s2) - green;
    let left = omega.boundary_green(s2, s1) + green;
    let m = right.min(left);
    if !(m > 1e-9 * omega.area()) {
        return None;
    }
    Some(Candidate {
        s1,
        s2,
        p1,
        p2,
        arc: None,
        perimeter,
        right,
        left,
        q: perimeter * perimeter / m,
        mid: verts[verts.len() / 2],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_bound_holds_and_inflated_bound_fails() {
        let h = AnisotropicNorm::euclidean();
        let omega = ConvexDomain::disk(1.0).unwrap();
        let opts = SolverOptions::default();
        let c = 8.0 / PI;
        let ok = verify_lower_bound(&h, &omega, c, 2000, 7, &opts).unwrap();
        assert_eq!(ok.violations, 0);
        assert_eq!(ok.samples, 2000);
        assert!(ok.worst_ratio >= 1.0 - 1e-6 && ok.worst_ratio < 1.0 + 1e-9, "{}", ok.worst_ratio);
        let bad = verify_lower_bound(&h, &omega, 1.05 * c, 2000, 7, &opts).unwrap();
        assert!(bad.violations > 0);
    }

    #[test]
    fn deterministic_under_seed() {
        let h = AnisotropicNorm::elliptic(2.0, 1.0).unwrap();
        let omega = ConvexDomain::ellipse(1.0, 0.7).unwrap();
        let opts = SolverOptions::default();
        let a = verify_lower_bound(&h, &omega, 0.5, 700, 3, &opts).unwrap();
        let b = verify_lower_bound(&h, &omega, 0.5, 700, 3, &opts).unwrap();
        assert_eq!(a, b);
        let c = verify_lower_bound(&h, &omega, 0.5, 700, 4, &opts).unwrap();
        assert_ne!(a.worst_ratio, c.worst_ratio);
    }
}
