use std::f64::consts::{FRAC_PI_2, TAU};

use proptest::prelude::*;

use super::*;
use crate::geometry::{BBox, Point2, Primitive, Shape};

fn p(x: f64, y: f64) -> Point2 {
    Point2::new(x, y)
}

fn shape(prims: Vec<Primitive>) -> Shape {
    Shape::new("t", prims).unwrap()
}

fn unit_circle() -> Shape {
    shape(vec![Primitive::circle(p(0.0, 0.0), 1.0).unwrap()])
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

fn stadium_curve() -> Shape {
    shape(vec![
        Primitive::segment(p(-1.0, -1.0), p(1.0, -1.0)).unwrap(),
        Primitive::arc(p(1.0, 0.0), 1.0, -FRAC_PI_2, FRAC_PI_2).unwrap(),
        Primitive::segment(p(1.0, 1.0), p(-1.0, 1.0)).unwrap(),
        Primitive::arc(p(-1.0, 0.0), 1.0, FRAC_PI_2, 3.0 * FRAC_PI_2).unwrap(),
    ])
}

fn ellipse_polygon(n: usize) -> Vec<Point2> {
    (0..n).map(|k| {
        let t = TAU * k as f64 / n as f64;
        p(2.0 * t.cos(), t.sin())
    }).collect()
}

#[test]
fn circle_radial_distance() {
    let r = eval_distance(&unit_circle(), p(0.3, 0.0));
    assert!((r.distance - 0.7).abs() < 1e-15);
    assert!(r.projections[0].dist(p(1.0, 0.0)) < 1e-15);
}

#[test]
fn two_points_far_query() {
    let s = shape(vec![Primitive::point(p(-1.0, 0.0)), Primitive::point(p(1.0, 0.0))]);
    let r = eval_distance(&s, p(0.0, 5.0));
    assert!((r.distance - 26f64.sqrt()).abs() < 1e-15);
    assert_eq!(r.multiplicity, 2);
}

/// Dense boundary sampling oracle for two circles of radius 1.5 at (±1, 0).
#[test]
fn two_circle_union_matches_sampling() {
    let s = shape(vec![Primitive::circle(p(-1.0, 0.0), 1.5).unwrap(), Primitive::circle(p(1.0, 0.0), 1.5).unwrap()]);
    let n = 500_000;
    let oracle = (0..n)
        .flat_map(|k| {
            let t = TAU * k as f64 / n as f64;
            [p(-1.0 + 1.5 * t.cos(), 1.5 * t.sin()), p(1.0 + 1.5 * t.cos(), 1.5 * t.sin())]
        })
        .map(|q| q.norm())
        .fold(f64::INFINITY, f64::min);
    assert!((oracle - 0.5).abs() < 1e-9);
    let r = eval_distance(&s, p(0.0, 0.0));
    assert!((r.distance - oracle).abs() < 1e-9);
    assert_eq!(r.multiplicity, 2);
}

#[test]
fn gradient_examples() {
    assert_eq!(gradient(&unit_circle(), p(2.0, 0.0)).unwrap().as_vec(), p(1.0, 0.0));
    assert_eq!(gradient(&segment(), p(0.0, 3.0)).unwrap().as_vec(), p(0.0, 1.0));
    assert!(matches!(gradient(&segment(), p(0.5, 0.0)), Err(crate::Error::OnSet)));
    let two = shape(vec![Primitive::point(p(-1.0, 0.0)), Primitive::point(p(1.0, 0.0))]);
    assert!(matches!(gradient(&two, p(0.0, 1.0)), Err(crate::Error::MultipleProjections(2))));
}

#[test]
fn gradient_matches_finite_difference_on_stadium() {
    let s = stadium_curve();
    let x = p(1.7, 0.9);
    let g = gradient(&s, x).unwrap().as_vec();
    let h = 1e-5;
    let fd = p(
        (s.distance(x + p(h, 0.0)) - s.distance(x - p(h, 0.0))) / (2.0 * h),
        (s.distance(x + p(0.0, h)) - s.distance(x - p(0.0, h))) / (2.0 * h),
    );
    assert!(fd.dist(g) < 1e-6);
    let c = gradient_fd_check(&s, 300, 7);
    assert_eq!(c.checked, 300);
    assert!(c.max_error < 1e-6, "{c:?}");
}

#[test]
fn grid_corner_value() {
    let f = grid_transform(&unit_circle(), &BBox::new(p(-2.0, -2.0), p(2.0, 2.0)), 0.5).unwrap();
    assert_eq!((f.nx, f.ny), (9, 9));
    assert!((f.value(8, 8) - (8f64.sqrt() - 1.0)).abs() < 1e-15);
    assert!(f.proj_multiplicity[f.index(4, 4)] >= 2);
    assert!(f.max_lipschitz_ratio() <= 1.0 + 1e-12);
}

#[test]
fn grid_rectangle_center() {
    let rect = Domain::new(
        "rect",
        vec![Primitive::polycurve(vec![p(0.0, 0.0), p(4.0, 0.0), p(4.0, 2.0), p(0.0, 2.0)], true).unwrap()],
        vec![],
        Regularity::C0,
    )
    .unwrap();
    let f = grid_transform(&rect, &rect.bbox(), 0.5).unwrap();
    assert_eq!(f.value(4, 2), 1.0);
    assert!(f.inside.as_ref().unwrap()[f.index(4, 2)]);
    assert!(!f.inside.as_ref().unwrap()[f.index(0, 0)] || rect.boundary_distance(f.node(0, 0)) == 0.0);
}

/// Polar sampling oracle with 10⁶ ellipse points.
#[test]
fn grid_ellipse_center() {
    let n = 1_000_000;
    let oracle = (0..n)
        .map(|k| {
            let t = TAU * k as f64 / n as f64;
            p(2.0 * t.cos(), t.sin()).norm()
        })
        .fold(f64::INFINITY, f64::min);
    assert!((oracle - 1.0).abs() < 1e-12);
    let e = shape(vec![Primitive::polycurve(ellipse_polygon(2048), true).unwrap()]);
    let f = grid_transform(&e, &BBox::new(p(-2.0, -1.0), p(2.0, 1.0)), 0.25).unwrap();
    let (ix, iy) = f.nearest_node(p(0.0, 0.0)).unwrap();
    assert!((f.value(ix, iy) - oracle).abs() < 1e-6);
}

#[test]
fn grid_budget_and_degenerate_box() {
    let b = BBox::new(p(0.0, 0.0), p(1.0, 1.0));
    assert!(matches!(grid_transform_with(&segment(), &b, 0.01, 100), Err(crate::Error::GridTooLarge { .. })));
    assert!(matches!(grid_transform(&segment(), &b, 0.0), Err(crate::Error::DegenerateGrid)));
}

#[test]
fn grid_csv_rows() {
    let f = grid_transform(&segment(), &BBox::new(p(-1.0, -1.0), p(1.0, 1.0)), 1.0).unwrap();
    let mut buf = Vec::new();
    f.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().count(), 10);
    assert_eq!(text.lines().nth(1).unwrap(), "0,0,-1,-1,1,1");
}

#[test]
fn eikonal_on_grid() {
    let h = 0.05;
    let f = grid_transform(&stadium_curve(), &BBox::new(p(-3.0, -2.5), p(3.0, 2.5)), h).unwrap();
    let (lo, hi) = f.eikonal_range();
    assert!(lo >= 1.0 - 3.0 * h && hi <= 1.0 + 3.0 * h, "{lo} {hi}");
}

#[test]
fn complement_identity_examples() {
    // d_S = 0.2 at (1.2, 0), so the offset boundary is 0.3 away
    let circle = unit_circle();
    let b = crate::parallel::offset_boundary(&circle, 0.5, crate::parallel::OffsetMethod::Analytic).unwrap().as_shape().unwrap();
    assert!((b.distance(p(1.2, 0.0)) - 0.3).abs() < 1e-6);
    let b = crate::parallel::offset_boundary(&segment(), 0.4, crate::parallel::OffsetMethod::Analytic).unwrap().as_shape().unwrap();
    assert!((b.distance(p(0.0, 0.9)) - 0.5).abs() < 1e-6);
    let rep = check_complement_identity(&hook(), 0.8, 10_000, 1).unwrap();
    assert!(rep.inner_samples > 100 && rep.outer_samples > 100);
    assert!(rep.max_violation() <= 5e-6, "{rep:?}");
}

#[test]
fn complement_identity_refuses_large_radius() {
    assert!(matches!(check_complement_identity(&unit_circle(), 1.2, 100, 1), Err(crate::Error::ReachExceeded { .. })));
}

#[test]
fn lipschitz_examples() {
    let c = projection_lipschitz_probe(&unit_circle(), 0.5, 1.0, 2000, 3).unwrap();
    assert!(c.max_ratio <= 2.0 + 1e-3 && c.max_ratio > 1.5, "{c:?}");
    let s = projection_lipschitz_probe(&segment(), 1.0, 10.0, 2000, 3).unwrap();
    assert!(s.max_ratio <= 10.0 / 9.0 + 1e-3);
    let pt = shape(vec![Primitive::point(p(0.0, 0.0))]);
    let q = projection_lipschitz_probe(&pt, 0.5, 4.0, 500, 3).unwrap();
    assert_eq!(q.max_ratio, 0.0);
}

#[test]
fn sampler_is_reproducible() {
    let (a, b) = (LowDiscrepancy::new(5), LowDiscrepancy::new(5));
    for i in 0..100 {
        assert_eq!(a.unit(i), b.unit(i));
    }
    assert_ne!(LowDiscrepancy::new(6).unit(0), a.unit(0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn grid_is_one_lipschitz(cx in -1.0..1.0f64, cy in -1.0..1.0f64, rad in 0.2..1.5f64, h in 0.05..0.3f64) {
        let s = shape(vec![Primitive::circle(p(cx, cy), rad).unwrap(), Primitive::point(p(-cx, cy))]);
        let f = grid_transform(&s, &BBox::new(p(-2.0, -2.0), p(2.0, 2.0)), h).unwrap();
        prop_assert!(f.values.iter().all(|v| *v >= 0.0));
        prop_assert!(f.max_lipschitz_ratio() <= 1.0 + 1e-9);
    }

    #[test]
    fn gradient_is_unit_and_matches_differences(x in -3.0..3.0f64, y in -3.0..3.0f64) {
        let s = hook();
        let q = p(x, y);
        if let Ok(g) = gradient(&s, q) {
            prop_assert!((g.as_vec().norm() - 1.0).abs() < 1e-12);
            let r = s.project(q);
            let h = 1e-5;
            let lip = (s.project(q + p(h, 0.0)).nearest().dist(s.project(q - p(h, 0.0)).nearest())
                + s.project(q + p(0.0, h)).nearest().dist(s.project(q - p(0.0, h)).nearest())) / (2.0 * h);
            if r.distance > 1e-2 && lip < 100.0 {
                let fd = p(
                    (s.distance(q + p(h, 0.0)) - s.distance(q - p(h, 0.0))) / (2.0 * h),
                    (s.distance(q + p(0.0, h)) - s.distance(q - p(0.0, h))) / (2.0 * h),
                );
                prop_assert!(fd.dist(g.as_vec()) < 1e-6);
            }
        }
    }

    #[test]
    fn lipschitz_bound_holds_on_circles(rad in 0.5..2.0f64, frac in 0.1..0.9f64, seed in 0u64..1000) {
        let s = shape(vec![Primitive::circle(p(0.0, 0.0), rad).unwrap()]);
        let rep = projection_lipschitz_probe(&s, frac * rad, rad * 0.9995, 300, seed).unwrap();
        prop_assert!(rep.passes(), "{:?}", rep);
    }
}
