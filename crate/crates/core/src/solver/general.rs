//! Search over chords and Wulff arcs for domains without a closed form.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, TAU};

use super::candidate::{describe, Candidate, Minimizer, Problem};
use super::{grid, IsoResult, Method, SolverOptions};
use crate::error::{Error, Result};
use crate::geometry::{ConvexDomain, Side};
use crate::norm::AnisotropicNorm;
use crate::optimize::nelder_mead;
use crate::quadrature::gauss_legendre8;
use crate::vec2::Vec2;
use crate::wulff::WulffArc;

/// Cuts closer than this fraction of the diameter count as one minimizer.
const CLUSTER_REL: f64 = 0.02;

/// A scaled Wulff sector sitting in the cone of a polygon vertex.
#[derive(Debug, Clone)]
pub struct SectorCandidate {
    pub vertex: usize,
    pub point: Vec2,
    /// `|W ∩ A|` for the vertex cone `A`.
    pub cone_area: f64,
    /// `4|W ∩ A|`, the quotient of every sector in the cone.
    pub q: f64,
    /// The largest sector that fits, as a cut.
    pub cut: Option<Minimizer>,
}

fn cyclic_gap(a: f64, b: f64) -> f64 {
    let d = crate::wrap(a - b, 1.0);
    d.min(1.0 - d)
}

/// Best entries of `cells = (q, s1, s2, tag)` that are pairwise at least
/// `radius` apart in parameter space; entries with different tags never clash.
fn pick_seeds(cells: &mut [(f64, f64, f64, f64)], count: usize, radius: f64) -> Vec<(f64, f64, f64, f64)> {
    cells.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64, f64, f64)> = Vec::new();
    for &c in cells.iter() {
        if out.len() >= count {
            break;
        }
        let clash = out.iter().any(|o| {
            if o.3.signum() != c.3.signum() {
                return false;
            }
            let direct = cyclic_gap(o.1, c.1).max(cyclic_gap(o.2, c.2));
            let swapped = cyclic_gap(o.1, c.2).max(cyclic_gap(o.2, c.1));
            direct.min(swapped) < radius
        });
        if !clash {
            out.push(c);
        }
    }
    out
}

fn sweeps(levels: usize) -> Vec<f64> {
    let mut out = Vec::new();
    for j in 0..levels {
        let x = PI * libm::ldexp(1.0, -(j as i32));
        out.push(x);
        out.push(-x);
    }
    for j in 1..=3 {
        let x = PI * (2.0 - libm::ldexp(1.0, -j));
        out.push(x);
        out.push(-x);
    }
    out
}

impl Problem<'_> {
    fn chord_search(&self, options: &SolverOptions) -> Vec<Candidate> {
        let n = options.chord_grid.max(4);
        let xs: Vec<f64> = grid(n).collect();
        let rows = options
            .executor
            .map(n, &|i| (0..n).map(|j| if j > i { self.q_chord(xs[i], xs[j]) } else { f64::INFINITY }).collect());
        let mut cells: Vec<(f64, f64, f64, f64)> = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            for (j, &q) in row.iter().enumerate() {
                if q.is_finite() {
                    cells.push((q, xs[i], xs[j], 0.0));
                }
            }
        }
        let seeds = pick_seeds(&mut cells, options.seeds, 2.5 / n as f64);
        let step = 1.0 / n as f64;
        let nm = options.nelder_mead;
        let refined = options.executor.map(seeds.len(), &|k| {
            let (_, a, b, _) = seeds[k];
            let r = nelder_mead(|x: &[f64; 2]| self.q_chord(x[0], x[1]), [a, b], [step, step], nm);
            vec![r.x[0], r.x[1]]
        });
        refined.iter().filter_map(|x| self.chord(x[0], x[1])).collect()
    }

    fn arc_search(&self, options: &SolverOptions) -> Vec<Candidate> {
        let m = options.arc_pair_grid.max(4);
        let xs: Vec<f64> = grid(m).collect();
        let sw = sweeps(options.arc_sweep_levels);
        let rows = options.executor.map(m, &|i| {
            let mut row = Vec::with_capacity(m * sw.len());
            for j in 0..m {
                for &d in &sw {
                    row.push(if j > i { self.q_arc(xs[i], xs[j], d) } else { f64::INFINITY });
                }
            }
            row
        });
        let mut cells: Vec<(f64, f64, f64, f64)> = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            for (idx, &q) in row.iter().enumerate() {
                if q.is_finite() {
                    let (j, k) = (idx / sw.len(), idx % sw.len());
                    cells.push((q, xs[i], xs[j], sw[k] / PI));
                }
            }
        }
        let seeds = pick_seeds(&mut cells, options.seeds, 1.5 / m as f64);
        let step = 1.0 / m as f64;
        let nm = options.nelder_mead;
        let refined = options.executor.map(seeds.len(), &|k| {
            let (_, a, b, u) = seeds[k];
            let f = |x: &[f64; 3]| {
                if x[2].abs() >= 2.0 {
                    f64::INFINITY
                } else {
                    self.q_arc(x[0], x[1], PI * x[2])
                }
            };
            let r = nelder_mead(f, [a, b, u], [step, step, (0.25 * u.abs()).max(1e-4)], nm);
            vec![r.x[0], r.x[1], r.x[2]]
        });
        refined.iter().filter_map(|x| self.arc(x[0], x[1], PI * x[2])).collect()
    }

    fn sectors(&self) -> Vec<SectorCandidate> {
        let Some(vertices) = self.omega.vertices() else {
            return Vec::new();
        };
        let n = vertices.len();
        let polar = self.norm.polar();
        let radial = |phi: f64| {
            let h = polar.value(Vec2::from_angle(phi));
            0.5 / (h * h)
        };
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let v = vertices[i];
            let next = vertices[(i + 1) % n] - v;
            let prev = vertices[(i + n - 1) % n] - v;
            let phi_a = next.angle();
            let phi_b = phi_a + crate::wrap(prev.angle() - phi_a, TAU);
            let cone_area = split_at_quadrants(radial, phi_a, phi_b);
            let cut = self.sector_cut(v, next, prev, phi_a, phi_b);
            out.push(SectorCandidate {
                vertex: i,
                point: v,
                cone_area,
                q: 4.0 * cone_area,
                cut,
            });
        }
        out
    }

    fn sector_cut(&self, v: Vec2, next: Vec2, prev: Vec2, phi_a: f64, phi_b: f64) -> Option<Minimizer> {
        let shape = &self.shape;
        let ta = shape.normal_angle(Vec2::from_angle(phi_a));
        let tb = ta + crate::wrap(shape.normal_angle(Vec2::from_angle(phi_b)) - ta, TAU);
        let (wa, wb) = (shape.boundary_point(ta), shape.boundary_point(tb));
        let s = shape.sector_area(ta, tb);
        let mut radius = (0.999 * next.norm() / wa.norm())
            .min(0.999 * prev.norm() / wb.norm())
            .min(libm::sqrt(0.5 * self.omega.area() / s));
        for _ in 0..40 {
            let arc = WulffArc::new(shape, v, radius, ta, tb);
            if self.arc_inside(&arc) {
                let cut = self.omega.arc_cut(shape.clone(), arc, Side::Left).ok()?;
                return Some(self.minimizer_from_cut(cut, arc.anisotropic_length(shape)));
            }
            radius *= 0.8;
        }
        None
    }
}

fn split_at_quadrants<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let cells = 64;
    let mut knots = vec![a];
    let mut k = libm::floor(a / FRAC_PI_2) + 1.0;
    while k * FRAC_PI_2 < b {
        knots.push(k * FRAC_PI_2);
        k += 1.0;
    }
    knots.push(b);
    knots
        .windows(2)
        .map(|w| {
            let h = (w[1] - w[0]) / cells as f64;
            (0..cells).map(|i| gauss_legendre8(&f, w[0] + i as f64 * h, w[0] + (i + 1) as f64 * h)).sum::<f64>()
        })
        .sum()
}

/// Minimizes `Q` over chords and Wulff arcs, then over cuts of half the
/// area, and reports every cut tying with the best.
pub fn solve_general(norm: &AnisotropicNorm, omega: &ConvexDomain, options: &SolverOptions) -> Result<IsoResult> {
    let pb = Problem::new(norm, omega)?;
    let half = 0.5 * omega.area();
    let mut diagnostics = Vec::new();

    let mut pool = pb.chord_search(options);
    pool.extend(pb.arc_search(options));
    let halves = pb.best_at_area(half, options);
    pool.extend(halves.iter().copied());
    pool.sort_by(|a, b| a.q.total_cmp(&b.q));
    let best = *pool
        .first()
        .ok_or_else(|| Error::Numeric("no feasible chord or Wulff arc was found".into()))?;
    diagnostics.push(format!("best searched cut: {}", describe(&best)));

    let sectors = pb.sectors();
    let best_sector = sectors
        .iter()
        .filter(|s| s.cut.is_some())
        .min_by(|a, b| a.q.total_cmp(&b.q));
    let mut c_h = best.q;
    let mut minimizers: Vec<(Candidate, Minimizer)> = Vec::new();
    if let Some(sector) = best_sector {
        diagnostics.push(format!("best vertex sector: vertex {} with Q = {:.12}", sector.vertex, sector.q));
        if sector.q < best.q * (1.0 - options.tie_rel_tol) {
            c_h = sector.q;
            diagnostics.push("a Wulff sector at a vertex beats every chord and arc".into());
        }
    }

    // Q is quadratic near a minimizer, so a tie in Q admits cuts up to about
    // √tie away from it; keep the most stationary cut of each cluster
    let mut ties: Vec<(Candidate, Minimizer, f64)> = Vec::new();
    for c in pool.iter().filter(|c| c.q <= c_h * (1.0 + options.tie_rel_tol)) {
        match pb.minimizer(c, None) {
            Ok(m) => {
                let score = m.max_residual().unwrap_or(f64::INFINITY);
                ties.push((*c, m, score));
            }
            Err(e) => diagnostics.push(format!("dropped {}: {e}", describe(c))),
        }
    }
    ties.sort_by(|a, b| a.2.total_cmp(&b.2).then(a.0.q.total_cmp(&b.0.q)));
    let cluster = CLUSTER_REL * omega.diameter();
    for (c, m, _) in ties {
        if !minimizers.iter().any(|(o, _)| o.same_as(&c, cluster)) {
            minimizers.push((c, m));
        }
    }
    // a near-tie that fails the contact condition is not a minimizer, unless nothing better exists
    let stationary = |m: &Minimizer| m.max_residual().is_some_and(|r| r <= options.contact_tol);
    if minimizers.iter().any(|(_, m)| stationary(m)) {
        let before = minimizers.len();
        minimizers.retain(|(_, m)| stationary(m));
        if minimizers.len() < before {
            diagnostics.push(format!(
                "dropped {} near-tie cuts that fail the contact condition",
                before - minimizers.len()
            ));
        }
    }
    let mut minimizers: Vec<Minimizer> = minimizers.into_iter().map(|(_, m)| m).collect();
    let mut sector_family = false;
    if let Some(sector) = best_sector {
        if sector.q <= c_h * (1.0 + options.tie_rel_tol) {
            if let Some(m) = &sector.cut {
                minimizers.push(m.clone());
            }
            sector_family = true;
        }
    }
    minimizers.sort_by(|a, b| a.q.total_cmp(&b.q));
    if minimizers.is_empty() {
        return Err(Error::Numeric(format!(
            "the best cut could not be validated: {}",
            diagnostics.join("; ")
        )));
    }
    for m in &minimizers {
        if let Some(r) = m.max_residual() {
            if r > options.contact_tol {
                diagnostics.push(format!("contact residual {r:e} for {}", m.cut.describe()));
            }
        }
    }

    let rh = super::r_h(norm, omega).ok();
    // sectors of every radius in the winning cone tie with each other
    let mut continuum = sector_family || rh.as_ref().is_some_and(|r| r.constant);
    if minimizers.len() > options.max_reported {
        continuum = true;
        let n = minimizers.len();
        let keep = options.max_reported.max(1);
        minimizers = (0..keep).map(|i| minimizers[i * n / keep].clone()).collect();
    }

    let half_area_companion = if minimizers[0].cut.min_area() < half * (1.0 - 1e-6) {
        halves.first().and_then(|c| pb.minimizer(c, None).ok()).inspect(|m| {
            diagnostics.push(format!(
                "the best cut splits off {:.9} of {:.9}; half-area companion has Q = {:.12}",
                minimizers[0].cut.min_area(),
                omega.area(),
                m.q
            ));
        })
    } else {
        None
    };

    let verification = if options.verify_samples > 0 {
        Some(super::verify_lower_bound(norm, omega, c_h, options.verify_samples, options.seed, options)?)
    } else {
        None
    };
    Ok(IsoResult {
        c_h,
        method: Method::GeneralSearch,
        minimizers,
        continuum,
        r_h: rh.map(|r| r.value),
        half_area_companion,
        sectors,
        p_limit: None,
        verification,
        diagnostics,
    })
}
