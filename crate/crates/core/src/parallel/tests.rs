use std::f64::consts::{FRAC_PI_2, PI, TAU};

use proptest::prelude::*;

use super::*;
use crate::error::Error;
use crate::geometry::{Point2, Primitive, Shape};

fn p(x: f64, y: f64) -> Point2 {
    Point2::new(x, y)
}

fn shape(prims: Vec<Primitive>) -> Shape {
    Shape::new("t", prims).unwrap()
}

fn segment() -> Shape {
    shape(vec![Primitive::segment(p(-1.0, 0.0), p(1.0, 0.0)).unwrap()])
}

fn hook() -> Shape {
    shape(vec![
        Primitive::segment(p(-1.0, 1.0), p(0.0, 1.0)).unwrap(),
        Primitive::arc(p(0.0, 0.0), 1.0, 0.0, FRAC_PI_2).unwrap(),
        Primitive::segment(p(1.0, 0.0), p(1.0, -1.0)).unwrap(),
    ])
}

fn one_sided(a: &[Point2], s: &Shape) -> f64 {
    a.iter().map(|q| s.distance(*q)).fold(0.0, f64::max)
}

#[test]
fn point_offset_is_circle() {
    let s = shape(vec![Primitive::point(p(0.0, 0.0))]);
    let o = offset_boundary(&s, 1.0, OffsetMethod::Analytic).unwrap();
    assert_eq!(o.loops.len(), 1);
    assert!((o.length() - TAU).abs() < 1e-3);
}

#[test]
fn segment_offset_is_stadium() {
    let o = offset_boundary(&segment(), 0.5, OffsetMethod::Analytic).unwrap();
    assert_eq!(o.loops.len(), 1);
    assert!((o.length() - (PI + 4.0)).abs() < 1e-3);
    assert!(o.loops[0].signed_area() > 0.0);
    assert!(o.max_level_error() < 1e-12);
}

#[test]
fn circle_offset_has_two_loops() {
    let s = shape(vec![Primitive::circle(p(0.0, 0.0), 1.0).unwrap()]);
    let o = offset_boundary(&s, 0.5, OffsetMethod::Analytic).unwrap();
    assert_eq!(o.loops.len(), 2);
    let mut lens: Vec<f64> = o.loops.iter().map(|c| c.length).collect();
    lens.sort_by(f64::total_cmp);
    assert!((lens[0] - PI).abs() < 1e-9 && (lens[1] - 3.0 * PI).abs() < 1e-9);
    // at r equal to the reach the inner loop collapses to the center
    let o = offset_boundary(&s, 1.0, OffsetMethod::Analytic).unwrap();
    assert_eq!(o.loops.len(), 1);
}

#[test]
fn hook_offset_at_reach_has_a_corner() {
    let o = offset_boundary(&hook(), 1.0, OffsetMethod::Analytic).unwrap();
    assert_eq!(o.loops.len(), 1);
    assert!(o.loops[0].max_corner_jump() > 0.1);
    let smooth = offset_boundary(&hook(), 0.5, OffsetMethod::Analytic).unwrap();
    assert!(smooth.loops[0].max_corner_jump() < 1e-6);
}

#[test]
fn analytic_offset_beyond_reach_is_refused() {
    let s = shape(vec![Primitive::circle(p(0.0, 0.0), 1.0).unwrap()]);
    assert!(matches!(offset_boundary(&s, 1.5, OffsetMethod::Analytic), Err(crate::Error::ReachExceeded { .. })));
    let two = shape(vec![Primitive::point(p(-1.0, 0.0)), Primitive::point(p(1.0, 0.0))]);
    assert!(matches!(offset_boundary(&two, 1.5, OffsetMethod::Analytic), Err(crate::Error::ReachExceeded { .. })));
}

#[test]
fn contour_matches_analytic() {
    let h = 0.02;
    for s in [segment(), hook()] {
        let a = offset_boundary(&s, 0.5, OffsetMethod::Analytic).unwrap();
        let c = offset_boundary(&s, 0.5, OffsetMethod::Contour { h }).unwrap();
        assert_eq!(a.loops.len(), c.loops.len());
        let (sa, sc) = (a.as_shape().unwrap(), c.as_shape().unwrap());
        let pa: Vec<Point2> = a.loops.iter().flat_map(|l| l.points()).collect();
        let pc: Vec<Point2> = c.loops.iter().flat_map(|l| l.points()).collect();
        assert!(one_sided(&pc, &sa).max(one_sided(&pa, &sc)) <= 2.0 * h);
        assert!(c.max_level_error() <= 2.0 * h);
        for l in &c.loops {
            assert!(l.signed_area() > 0.0);
        }
    }
}

#[test]
fn contour_holes_run_clockwise() {
    let s = shape(vec![Primitive::circle(p(0.0, 0.0), 1.0).unwrap()]);
    let c = offset_boundary(&s, 0.5, OffsetMethod::Contour { h: 0.02 }).unwrap();
    let mut areas: Vec<f64> = c.loops.iter().map(|l| l.signed_area()).collect();
    areas.sort_by(f64::total_cmp);
    assert!((areas[0] + PI * 0.25).abs() < 0.01 && (areas[1] - PI * 2.25).abs() < 0.01, "{areas:?}");
}

#[test]
fn recover_concentric_circle() {
    let s = shape(vec![Primitive::circle(p(0.0, 0.0), 1.0).unwrap()]);
    let o = offset_boundary(&s, 1.0, OffsetMethod::Analytic).unwrap();
    let eta = recover_core(&o.loops[0], 1.0, Some(&s)).unwrap();
    assert!(eta.iter().all(|e| (e.norm() - 1.0).abs() < 1e-6));
}

#[test]
fn recover_stadium_core_and_hook() {
    let ds = 0.005;
    for (core, r) in [(segment(), 0.5), (hook(), 1.0)] {
        let o = offset_boundary_with(&core, r, OffsetMethod::Analytic, ds).unwrap();
        let eta = recover_core(&o.loops[0], r, Some(&core)).unwrap();
        assert!(one_sided(&eta, &core) <= 5.0 * ds);
        let back = core.sample(ds).iter().map(|q| eta.iter().map(|e| e.dist(q.point)).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max);
        assert!(back <= 5.0 * ds, "{back}");
    }
}

#[test]
fn recover_core_detects_reversed_orientation() {
    let o = offset_boundary(&segment(), 0.5, OffsetMethod::Analytic).unwrap();
    let rev = o.loops[0].reversed();
    let eta = recover_core(&rev, 0.5, Some(&segment())).unwrap();
    assert!(one_sided(&eta, &segment()) < 1e-9);
}

#[test]
fn mu_on_circle_and_stadium() {
    let s = shape(vec![Primitive::circle(p(0.0, 0.0), 1.0).unwrap()]);
    let o = offset_boundary(&s, 1.0, OffsetMethod::Analytic).unwrap();
    let m = mu_profile(&o.loops[0], 1.0);
    assert!(m.mu.iter().all(|v| (v - 0.5).abs() < 1e-12));

    let o = offset_boundary(&segment(), 0.5, OffsetMethod::Analytic).unwrap();
    let m = mu_profile(&o.loops[0], 0.5);
    assert!(m.min_mu.abs() < 1e-12);
    let straight = m.eta.iter().zip(&m.mu).filter(|(e, _)| e.x.abs() < 0.99);
    assert!(straight.clone().count() > 10);
    for (_, mu) in straight {
        assert!((mu - 1.0).abs() < 1e-12);
    }
    // caps sit over the endpoints and are excluded from the interior inequality
    assert!(m.interior_min(&segment(), 1e-3) >= -1e-3);
}

#[test]
fn tube_area_point() {
    let s = shape(vec![Primitive::point(p(0.0, 0.0))]);
    let t = tube_area(&s, &[0.2, 0.4, 0.6]).unwrap();
    for (r, a) in t.radii.iter().zip(&t.areas) {
        assert!((a - PI * r * r).abs() < 1e-3, "{r} {a}");
    }
    assert!((t.fit[2] - PI).abs() < 1e-2 && t.fit[0].abs() < 1e-2 && t.fit[1].abs() < 1e-2, "{:?}", t.fit);
}

#[test]
fn tube_area_circle_annulus() {
    let s = shape(vec![Primitive::circle(p(0.0, 0.0), 1.0).unwrap()]);
    let t = tube_area(&s, &[0.3]).unwrap();
    assert!((t.areas[0] - 1.2 * PI).abs() < 0.02);
    let t = tube_area(&s, &[0.1, 0.2, 0.3, 0.4]).unwrap();
    assert!((t.fit[1] - 4.0 * PI).abs() < 5e-2 && t.fit[2].abs() < 5e-2, "{:?}", t.fit);
}

#[test]
fn tube_area_segment_two_radii() {
    let t = tube_area(&segment(), &[0.2, 0.4]).unwrap();
    assert!((t.fit[1] - 4.0).abs() < 2e-2 && (t.fit[2] - PI).abs() < 2e-2, "{:?}", t.fit);
}

#[test]
fn quadratic_fit_is_exact_on_parabolas() {
    let x = [0.1, 0.2, 0.5, 0.9];
    let y: Vec<f64> = x.iter().map(|r| 1.0 - 2.0 * r + 3.0 * r * r).collect();
    let c = quadratic_fit(&x, &y);
    assert!((c[0] - 1.0).abs() < 1e-9 && (c[1] + 2.0).abs() < 1e-9 && (c[2] - 3.0).abs() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hook_tubes_are_level_sets_with_nonnegative_mu(r in 0.05..0.95f64) {
        let o = offset_boundary(&hook(), r, OffsetMethod::Analytic).unwrap();
        prop_assert!(o.max_level_error() <= 1e-6);
        for l in &o.loops {
            let m = mu_profile(l, r);
            prop_assert!(m.min_mu >= -1e-3);
            prop_assert!(m.interior_min(&hook(), 1e-6) >= -1e-3);
        }
    }

    #[test]
    fn circle_tube_inner_loop_recovers_the_core(radius in 0.5..3.0f64, frac in 0.05..0.8f64) {
        let s = shape(vec![Primitive::circle(p(0.3, -0.2), radius).unwrap()]);
        let r = frac * radius;
        let o = offset_boundary(&s, r, OffsetMethod::Analytic).unwrap();
        prop_assert_eq!(o.loops.len(), 2);
        for l in &o.loops {
            let eta = recover_core(l, r, None).unwrap();
            prop_assert!(one_sided(&eta, &s) < 1e-9);
        }
    }
}

#[test]
fn tube_lemma_on_cores() {
    let h = 0.04;
    let cases = [
        (shape(vec![Primitive::point(p(0.0, 0.0))]), 1.0),
        (segment(), 0.5),
        (shape(vec![Primitive::circle(p(0.0, 0.0), 1.0).unwrap()]), 0.5),
        (hook(), 0.5),
    ];
    for (s, r) in cases {
        let rep = tube_lemma_check(&s, r, h).unwrap();
        assert!(rep.passes(), "{}: {rep:?}", s.label);
    }
}

#[test]
fn tube_lemma_refusals() {
    assert!(matches!(tube_lemma_check(&hook(), 1.2, 0.04), Err(Error::ReachExceeded { .. })));
    let two = shape(vec![Primitive::point(p(0.0, 0.0)), Primitive::point(p(5.0, 0.0))]);
    assert!(matches!(tube_lemma_check(&two, 0.5, 0.04), Err(Error::NotApplicable(_))));
}
