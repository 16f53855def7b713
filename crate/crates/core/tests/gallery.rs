use std::path::Path;

use planar_reach::distance::Regularity;
use planar_reach::gallery;
use planar_reach::normal::{lambda_profile, verify_high_equals_cut};
use planar_reach::reach::{estimate_reach, ReachParams};
use planar_reach::scene::{parse_scene, serialize_scene};
use planar_reach::singular::{analyze, inclusion_chain_report};
use planar_reach::contact::boundary_points;
use planar_reach::Point2;

fn dir() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("gallery")
}

#[test]
fn files_match_the_built_in_scenes() {
    let scenes = gallery::scenes();
    let names = [
        "disk", "rectangle", "ellipse", "annulus", "stadium", "hook", "two_disk", "tangent_circles", "abs_graph", "point",
        "segment", "unit_circle",
    ];
    for n in names {
        assert!(scenes.iter().any(|s| s.name == n), "missing {n}");
    }
    for s in &scenes {
        let text = std::fs::read_to_string(dir().join(format!("{}.json", s.name))).unwrap();
        assert_eq!(text, serialize_scene(s), "{} is stale", s.name);
        assert_eq!(&parse_scene(&text).unwrap(), s);
    }
    assert_eq!(std::fs::read_dir(dir()).unwrap().count(), scenes.len());
}

#[test]
fn shape_expectations() {
    for s in gallery::scenes() {
        for spec in &s.shapes {
            let shape = spec.build().unwrap();
            if let Some(want) = spec.expect.get("reach") {
                let est = estimate_reach(&shape, &ReachParams::default());
                match want.as_f64() {
                    Some(r) => assert!((est.upper - r).abs() <= 1e-3 && (est.lower - r).abs() <= 1e-3, "{}: {est:?}", s.name),
                    None => assert!(est.is_infinite(), "{}", s.name),
                }
            }
            if let Some(want) = spec.expect.get("boundary_points").and_then(|v| v.as_array()) {
                let got = boundary_points(&shape, 0.5, 200).unwrap();
                assert_eq!(got.len(), want.len(), "{}", s.name);
                for w in want {
                    let q = Point2::new(w[0].as_f64().unwrap(), w[1].as_f64().unwrap());
                    assert!(got.iter().any(|g| g.dist(q) <= 0.05), "{}: {q:?}", s.name);
                }
            }
        }
    }
}

#[test]
fn domain_expectations_at_coarse_grid() {
    let h = 0.04;
    for s in gallery::scenes() {
        for spec in &s.domains {
            let d = spec.build().unwrap();
            let sf = analyze(&d, h).unwrap();
            let rep = inclusion_chain_report(&d, &sf).unwrap();
            if let Some(rho) = spec.expect.get("rho").and_then(|v| v.as_f64()) {
                assert!((rep.rho - rho).abs() <= h, "{}: {}", s.name, rep.rho);
            }
            if let Some(want) = spec.expect.get("high_eq_cut").and_then(|v| v.as_bool()) {
                let v = verify_high_equals_cut(&d, &sf).unwrap();
                assert_eq!(v.hypothesis_ok, want, "{}: {}", s.name, v.high_cut_distance);
                if want {
                    assert!(v.tube_hausdorff.unwrap() <= 2.0 * h, "{}: {:?}", s.name, v.tube_hausdorff);
                }
                if let Some(disk) = spec.expect.get("disk").and_then(|v| v.as_bool()) {
                    assert_eq!(v.disk_verdict, Some(disk));
                }
            }
            if let Some(want) = spec.expect.get("lambda_constant").and_then(|v| v.as_bool()) {
                assert_eq!(lambda_profile(&d, 100, h).unwrap().constant, want, "{}", s.name);
            }
            if let Some(want) = spec.expect.get("skeleton_cycle").and_then(|v| v.as_bool()) {
                assert_eq!(rep.components["skeleton"].cycle, want);
            }
        }
    }
}

#[test]
fn chain_inclusions_and_homotopy_proxy_on_every_domain() {
    for h in [0.04, 0.02] {
        for s in gallery::scenes() {
            for spec in &s.domains {
                let d = spec.build().unwrap();
                let sf = analyze(&d, h).unwrap();
                let rep = inclusion_chain_report(&d, &sf).unwrap();
                assert!(rep.chain.inclusions_ok, "{} h={h}: {:?}", s.name, rep.chain.inclusion);
                assert!(rep.high_ridge.iter().chain(&rep.cut).all(|q| d.contains_closed(*q, 1e-9)));
                assert_eq!(rep.components["skeleton"].count, rep.components["domain"].count, "{}", s.name);
                assert_eq!(rep.components["skeleton"].holes, rep.components["domain"].holes, "{}", s.name);
                if spec.regularity == Regularity::C2 {
                    assert_eq!(rep.chain.c2_central_eq_cut, Some(true), "{} h={h}: {:?}", s.name, rep.chain.gaps);
                }
            }
        }
    }
}

#[test]
fn inclusion_distances_shrink_with_the_grid() {
    for name in ["disk", "rectangle", "stadium", "two_disk"] {
        let d = gallery::domain(name).unwrap();
        let worst = |h: f64| {
            let rep = inclusion_chain_report(&d, &analyze(&d, h).unwrap()).unwrap();
            rep.chain.inclusion.iter().cloned().fold(0.0, f64::max)
        };
        let (a, b) = (worst(0.02), worst(0.01));
        assert!(b <= 2.0 * 0.01 * (1.0 + 1e-9), "{name}: {b}");
        assert!(b <= 0.5 * a + 1e-9 || a <= 0.02 + 1e-9, "{name}: {a} {b}");
    }
}
