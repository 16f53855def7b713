use std::f64::consts::TAU;

use proptest::prelude::*;

use super::*;
use crate::distance::{Domain, Regularity};
use crate::Primitive;

fn p(x: f64, y: f64) -> Point2 {
    Point2::new(x, y)
}

fn disk() -> Domain {
    Domain::new("disk", vec![Primitive::circle(p(0.0, 0.0), 2.0).unwrap()], vec![], Regularity::C2).unwrap()
}

fn rect() -> Domain {
    let v = vec![p(0.0, 0.0), p(4.0, 0.0), p(4.0, 2.0), p(0.0, 2.0)];
    Domain::new("rect", vec![Primitive::polycurve(v, true).unwrap()], vec![], Regularity::C0).unwrap()
}

fn ellipse() -> Domain {
    let n = 2048;
    let v = (0..n).map(|k| {
        let t = TAU * k as f64 / n as f64;
        p(2.0 * t.cos(), t.sin())
    });
    Domain::new("ellipse", vec![Primitive::polycurve(v.collect(), true).unwrap()], vec![], Regularity::C2).unwrap()
}

fn annulus() -> Domain {
    Domain::new(
        "annulus",
        vec![Primitive::circle(p(0.0, 0.0), 3.0).unwrap()],
        vec![vec![Primitive::circle(p(0.0, 0.0), 1.0).unwrap()]],
        Regularity::C2,
    )
    .unwrap()
}

fn extent_x(pts: &[Point2]) -> (f64, f64) {
    pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), q| (a.min(q.x), b.max(q.x)))
}

#[test]
fn disk_sets_collapse_to_center() {
    let h = 0.04;
    let d = disk();
    let sf = analyze(&d, h).unwrap();
    let rep = inclusion_chain_report(&d, &sf).unwrap();
    assert!((rep.rho - 2.0).abs() <= h);
    for set in [&rep.high_ridge, &rep.skeleton, &rep.central, &rep.cut] {
        assert!(!set.is_empty());
        assert!(set.iter().all(|q| q.norm() <= 2.0 * h), "{set:?}");
    }
    assert!(rep.chain.inclusions_ok);
    assert_eq!(rep.chain.strict, [false; 3]);
    assert_eq!(rep.chain.c2_central_eq_cut, Some(true));
    assert_eq!(rep.components["skeleton"].count, 1);
}

#[test]
fn rectangle_ridge_and_fishbone() {
    let h = 0.04;
    let d = rect();
    let sf = analyze(&d, h).unwrap();
    let rep = inclusion_chain_report(&d, &sf).unwrap();
    assert!((rep.rho - 1.0).abs() <= h);
    let (lo, hi) = extent_x(&rep.high_ridge);
    assert!((lo - 1.0).abs() <= 2.0 * h && (hi - 3.0).abs() <= 2.0 * h, "{lo} {hi}");
    assert!(rep.high_ridge.iter().all(|q| (q.y - 1.0).abs() <= 2.0 * h));
    // fishbone oracle: the segment plus the four diagonals
    let oracle = |q: Point2| {
        let seg = crate::geometry::segment_nearest(p(1.0, 1.0), p(3.0, 1.0), q).0;
        let diag = [(p(0.0, 0.0), p(1.0, 1.0)), (p(0.0, 2.0), p(1.0, 1.0)), (p(4.0, 0.0), p(3.0, 1.0)), (p(4.0, 2.0), p(3.0, 1.0))]
            .iter()
            .map(|(a, b)| crate::geometry::segment_nearest(*a, *b, q).0)
            .fold(f64::INFINITY, f64::min);
        seg.min(diag)
    };
    assert!(rep.skeleton.iter().all(|q| oracle(*q) <= 1.5 * h), "skeleton off the fishbone");
    for t in [0.1, 0.5, 0.9] {
        for c in [p(t, t), p(t, 2.0 - t), p(4.0 - t, t), p(2.0, 1.0)] {
            assert!(PointIndex::new(&rep.skeleton).distance(c) <= 2.0 * h, "{c:?}");
        }
    }
    // cut reaches the corners, the skeleton stops short of them
    let corner = p(0.0, 0.0);
    let near = |set: &[Point2]| PointIndex::new(set).distance(corner);
    assert!(near(&rep.cut) <= 2.0 * h);
    assert!(near(&rep.cut) < near(&rep.skeleton) || near(&rep.skeleton) <= 2.0 * h);
    assert!(rep.chain.inclusions_ok, "{:?}", rep.chain);
    assert!(rep.chain.strict[0]);
    assert!(!rep.chain.strict[1]);
    assert_eq!(rep.components["skeleton"].count, 1);
    assert!(!rep.components["skeleton"].cycle);
}

#[test]
fn ellipse_high_ridge_smaller_than_skeleton() {
    let h = 0.04;
    let d = ellipse();
    let sf = analyze(&d, h).unwrap();
    let rep = inclusion_chain_report(&d, &sf).unwrap();
    assert!((rep.rho - 1.0).abs() <= h);
    // d(x, 0) = sqrt(1 − x²/3) on the skeleton, so the band has half-width √(3(1 − (1 − 1.5h)²))
    let band = (3.0 * (1.0 - (1.0 - 1.5 * h).powi(2))).sqrt();
    let (lo, hi) = extent_x(&rep.high_ridge);
    assert!(hi <= band + h && lo >= -band - h, "{lo} {hi} {band}");
    let (lo, hi) = extent_x(&rep.skeleton);
    assert!((hi - 1.5).abs() <= 2.0 * h && (lo + 1.5).abs() <= 2.0 * h, "{lo} {hi}");
    assert!(rep.skeleton.iter().all(|q| q.y.abs() <= 1.5 * h));
    assert!(rep.chain.inclusions_ok, "{:?}", rep.chain);
    assert!(rep.chain.strict[0]);
    assert!(!rep.chain.strict[2]);
    assert_eq!(rep.chain.c2_central_eq_cut, Some(true));
}

#[test]
fn annulus_skeleton_is_a_cycle() {
    let h = 0.04;
    let d = annulus();
    let sf = analyze(&d, h).unwrap();
    let sk = skeleton(&sf);
    assert!(sk.iter().all(|q| (q.norm() - 2.0).abs() <= 1.5 * h));
    let info = component_count(&sk, 2.0 * h);
    assert_eq!(info.count, 1);
    assert!(info.cycle);
    let mask = mask_components(&sf);
    assert_eq!((mask.count, mask.holes), (1, 1));
}

#[test]
fn two_disk_cut_is_the_segment() {
    let (a, r) = (0.8f64, 1.2f64);
    let phi = (a / r).acos();
    let d = Domain::new(
        "two-disk",
        vec![
            Primitive::arc(p(a, 0.0), r, -(std::f64::consts::PI - phi), std::f64::consts::PI - phi).unwrap(),
            Primitive::arc(p(-a, 0.0), r, phi, TAU - phi).unwrap(),
        ],
        vec![],
        Regularity::C0,
    )
    .unwrap();
    let h = 0.04;
    let sf = analyze(&d, h).unwrap();
    let rep = inclusion_chain_report(&d, &sf).unwrap();
    assert!((rep.rho - r).abs() <= h);
    let seg = |q: &Point2| crate::geometry::segment_nearest(p(-a, 0.0), p(a, 0.0), *q).0;
    assert!(rep.cut.iter().all(|q| seg(q) <= 2.0 * h));
    for t in [-0.8, -0.4, 0.0, 0.4, 0.8] {
        assert!(PointIndex::new(&rep.cut).distance(p(t, 0.0)) <= 2.0 * h);
    }
    assert_eq!(rep.components["high_ridge"].count, 2);
    assert!(hausdorff(&rep.high_ridge, &rep.cut) > 5.0 * h);
}

#[test]
fn empty_sets_and_components() {
    assert_eq!(one_sided_hausdorff(&[], &[p(0.0, 0.0)]), 0.0);
    assert!(one_sided_hausdorff(&[p(0.0, 0.0)], &[]).is_infinite());
    assert_eq!(component_count(&[], 1.0).count, 0);
    let two = [p(0.0, 0.0), p(10.0, 0.0)];
    assert_eq!(component_count(&two, 1.0).count, 2);
    let ring: Vec<Point2> = (0..200).map(|k| Point2::from_polar(p(0.0, 0.0), 5.0, TAU * k as f64 / 200.0)).collect();
    assert!(component_count(&ring, 0.3).cycle);
    assert!(!component_count(&ring[..100], 0.3).cycle);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn point_index_matches_brute_force(
        pts in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..60),
        q in (-8.0f64..8.0, -8.0f64..8.0),
    ) {
        let pts: Vec<Point2> = pts.into_iter().map(|(x, y)| p(x, y)).collect();
        let q = p(q.0, q.1);
        let brute = pts.iter().map(|a| a.dist(q)).fold(f64::INFINITY, f64::min);
        prop_assert!((PointIndex::new(&pts).distance(q) - brute).abs() <= 1e-12);
    }

    #[test]
    fn chain_holds_on_rectangles(w in 1.0f64..3.0, ht in 0.6f64..1.5) {
        let h = 0.05;
        let v = vec![p(0.0, 0.0), p(w, 0.0), p(w, ht), p(0.0, ht)];
        let d = Domain::new("r", vec![Primitive::polycurve(v, true).unwrap()], vec![], Regularity::C0).unwrap();
        let sf = analyze(&d, h).unwrap();
        let rep = inclusion_chain_report(&d, &sf).unwrap();
        prop_assert!(rep.chain.inclusions_ok, "{:?}", rep.chain);
        prop_assert!((rep.rho - 0.5 * w.min(ht)).abs() <= h);
        prop_assert_eq!(rep.components["skeleton"].count, 1);
        // nodes well away from the cut have a single projection
        let idx = PointIndex::new(&rep.cut);
        for k in 0..sf.active.len() {
            let q = sf.field.node(k % sf.field.nx, k / sf.field.nx);
            if sf.active[k] && idx.distance(q) > 3.0 * h {
                prop_assert!(sf.own_spread[k] <= 1e-9);
            }
        }
    }
}

