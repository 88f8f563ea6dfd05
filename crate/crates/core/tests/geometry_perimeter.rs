use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use anisoperim::curve::{FnCurve, PlaneCurve};
use anisoperim::geometry::LevelMode;
use anisoperim::perimeter::{curve_length_h, quotient};
use anisoperim::wulff::arc_with_sweep;
use anisoperim::{AnisotropicNorm, ConvexDomain, Side, Vec2, WulffShape};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ellipse_arc(a: f64, b: f64, scale: f64) -> impl PlaneCurve {
    FnCurve::new(
        (0.2, 2.9),
        move |t: f64| Vec2::new(a * t.cos(), b * t.sin()) * scale,
        move |t: f64| Vec2::new(-a * t.sin(), b * t.cos()) * scale,
    )
}

#[test]
fn length_is_parametrization_free() {
    let h = AnisotropicNorm::piecewise_pq(4.0, 3.0).unwrap();
    let (a, b) = (1.5, 0.7);
    let base = curve_length_h(&h, &ellipse_arc(a, b, 1.0)).unwrap().value;

    // t = φ(τ) = 0.2 + 2.7 τ², monotone on [0, 1]
    let phi = |x: f64| 0.2 + 2.7 * x * x;
    let reparam = FnCurve::new(
        (0.0, 1.0),
        move |x: f64| Vec2::new(a * phi(x).cos(), b * phi(x).sin()),
        move |x: f64| Vec2::new(-a * phi(x).sin(), b * phi(x).cos()) * (5.4 * x),
    );
    let r = curve_length_h(&h, &reparam).unwrap().value;
    assert!((r - base).abs() <= 1e-10 * base, "{r} vs {base}");

    let reversed = FnCurve::new(
        (-2.9, -0.2),
        move |t: f64| Vec2::new(a * (-t).cos(), b * (-t).sin()),
        move |t: f64| Vec2::new(a * (-t).sin(), -b * (-t).cos()),
    );
    let rev = curve_length_h(&h, &reversed).unwrap().value;
    assert!((rev - base).abs() <= 1e-10 * base);

    for t in [0.5, 3.0] {
        let s = curve_length_h(&h, &ellipse_arc(a, b, t)).unwrap().value;
        assert!((s - t * base).abs() <= 1e-10 * t * base);
    }
}

#[test]
fn quotient_is_scale_invariant() {
    let h = AnisotropicNorm::elliptic(2.0, 1.0).unwrap();
    let w = Arc::new(WulffShape::new(&h).unwrap());
    let base = ConvexDomain::ellipse(1.2, 0.8).unwrap();
    for t in [0.5, 3.0] {
        let scaled = ConvexDomain::ellipse(1.2 * t, 0.8 * t).unwrap();
        let q0 = quotient(&h, &base, &base.chord(0.1, 0.45, Side::Right).unwrap()).unwrap();
        let q1 = quotient(&h, &scaled, &scaled.chord(0.1, 0.45, Side::Right).unwrap()).unwrap();
        assert!((q0 - q1).abs() < 1e-8 * q0);

        let (p1, p2) = (base.point(0.05), base.point(0.3));
        let arc = arc_with_sweep(&w, p1, p2, 0.8).unwrap();
        let cut = base.arc_cut(w.clone(), arc, Side::Left).unwrap();
        let arc_t = arc_with_sweep(&w, p1 * t, p2 * t, 0.8).unwrap();
        let cut_t = scaled.arc_cut(w.clone(), arc_t, Side::Left).unwrap();
        let (a, b) = (quotient(&h, &base, &cut).unwrap(), quotient(&h, &scaled, &cut_t).unwrap());
        assert!((a - b).abs() < 1e-8 * a, "{a} vs {b}");
    }
}

#[test]
fn split_areas_add_up() {
    let h = AnisotropicNorm::p_norm(4.0).unwrap();
    let w = Arc::new(WulffShape::new(&h).unwrap());
    let domains = vec![
        ConvexDomain::disk(1.0).unwrap(),
        ConvexDomain::ellipse(2.0, 0.5).unwrap(),
        ConvexDomain::norm_level(&h, 1.0, LevelMode::Polar).unwrap(),
        ConvexDomain::polygon(vec![Vec2::new(0.0, 0.0), Vec2::new(2.0, 0.1), Vec2::new(1.5, 1.0), Vec2::new(0.2, 0.9)])
            .unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for omega in &domains {
        let mut checked = 0;
        while checked < 30 {
            let (s1, s2): (f64, f64) = (rng.gen(), rng.gen());
            let sweep = rng.gen_range(-3.0..3.0);
            let cut = if rng.gen_bool(0.5) {
                omega.chord(s1, s2, Side::Right)
            } else {
                let Ok(arc) = arc_with_sweep(&w, omega.point(s1), omega.point(s2), sweep) else {
                    continue;
                };
                omega.arc_cut(w.clone(), arc, Side::Left)
            };
            let Ok(cut) = cut else { continue };
            let (e, rest) = omega.split(&cut).unwrap();
            assert!((e + rest - omega.area()).abs() < 1e-9 * omega.area());
            checked += 1;
        }
    }
}

#[test]
fn polygonized_parametric_domain_keeps_its_area() {
    // a smooth convex curve r(φ) = 1 + 0.1 cos 3φ
    let point = Arc::new(|s: f64| {
        let phi = TAU * s;
        Vec2::from_angle(phi) * (1.0 + 0.1 * (3.0 * phi).cos())
    });
    let derivative = Arc::new(|s: f64| {
        let phi = TAU * s;
        let r = 1.0 + 0.1 * (3.0 * phi).cos();
        let dr = -0.3 * (3.0 * phi).sin();
        (Vec2::from_angle(phi) * dr + Vec2::from_angle(phi).perp() * r) * TAU
    });
    let omega = ConvexDomain::parametric(point, derivative).unwrap();
    // ½∫r² dφ = π(1 + 0.005)
    assert!((omega.area() - PI * 1.005).abs() < 1e-10);
    let poly = omega.polygonize(4096).unwrap();
    assert!((poly.area() - omega.area()).abs() < 1e-6 * omega.area());
}

#[test]
fn frames_point_outward() {
    let h = AnisotropicNorm::piecewise_pq(4.0, 3.0).unwrap();
    for omega in [
        ConvexDomain::norm_level(&h, 1.0, LevelMode::Sublevel).unwrap(),
        ConvexDomain::norm_level(&h, 1.0, LevelMode::Rotated).unwrap(),
        ConvexDomain::ellipse(1.0, 3.0).unwrap(),
    ] {
        for i in 0..64 {
            let f = omega.boundary_frame(i as f64 / 64.0 + 0.003).unwrap();
            assert!((f.normal - f.tangent.perp() * -1.0).max_abs() < 1e-12);
            assert!(!omega.contains(f.point + f.normal * 1e-6));
            assert!(omega.contains(f.point - f.normal * 1e-6));
        }
    }
}

#[test]
fn disk_segment_area_oracle() {
    let omega = ConvexDomain::disk(1.0).unwrap();
    let x = 0.75f64.sqrt();
    let cut = omega.chord_through(Vec2::new(x, 0.5), Vec2::new(-x, 0.5), Side::Right).unwrap();
    // cap above y = 1/2: acos(1/2) − ½·√(3/4)
    let cap = (0.5f64).acos() - 0.5 * x;
    assert!((cut.min_area() - cap).abs() < 1e-10);
}

#[test]
fn orthogonal_circle_lens_against_monte_carlo() {
    let h = AnisotropicNorm::euclidean();
    let w = Arc::new(WulffShape::new(&h).unwrap());
    let omega = ConvexDomain::disk(1.0).unwrap();
    let c = Vec2::new(2f64.sqrt(), 0.0);
    let r = 0.5f64.sqrt();
    let (p1, p2) = (Vec2::new(r, -r), Vec2::new(r, r));
    let arc = arc_with_sweep(&w, p1, p2, -PI / 2.0).unwrap();
    assert!((arc.center - c).max_abs() < 1e-12 && (arc.radius - 1.0).abs() < 1e-12);
    let cut = omega.arc_cut(w.clone(), arc, Side::Left).unwrap();
    let lens = cut.min_area();

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 1_000_000;
    let mut hits = 0usize;
    for _ in 0..n {
        let p = Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if p.norm() < 1.0 && p.distance(c) < 1.0 {
            hits += 1;
        }
    }
    let frac = hits as f64 / n as f64;
    let estimate = 4.0 * frac;
    let sigma = 4.0 * (frac * (1.0 - frac) / n as f64).sqrt();
    assert!((estimate - lens).abs() < 4.0 * sigma, "{estimate} ± {sigma} vs {lens}");
    // two sectors of half-angle π/4 minus the kite O, p1, c, p2 of area 1
    let exact = PI / 4.0 + PI / 4.0 - 1.0;
    assert!((lens - exact).abs() < 1e-10, "{lens} vs {exact}");
}
