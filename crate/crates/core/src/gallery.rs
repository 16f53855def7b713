//! Built-in example scenes, one per file under `gallery/`, each carrying its
//! expected verdicts.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::path::Path;

use serde_json::{json, Value};

use crate::distance::{Domain, Regularity};
use crate::error::{Error, Result};
use crate::geometry::{Point2, Primitive, Shape};
use crate::parallel::tube_domain;
use crate::scene::{serialize_scene, DomainSpec, Expect, Scene, ShapeSpec};

fn p(x: f64, y: f64) -> Point2 {
    Point2::new(x, y)
}

fn expect(pairs: &[(&str, Value)]) -> Expect {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn shape_scene(name: &str, primitives: Vec<Primitive>, e: &[(&str, Value)]) -> Scene {
    Scene {
        name: name.into(),
        shapes: vec![ShapeSpec { label: name.into(), primitives, expect: expect(e) }],
        domains: vec![],
    }
}

fn domain_scene(name: &str, outer: Vec<Primitive>, holes: Vec<Vec<Primitive>>, reg: Regularity, e: &[(&str, Value)]) -> Scene {
    Scene {
        name: name.into(),
        shapes: vec![],
        domains: vec![DomainSpec {
            label: name.into(),
            simply_connected: holes.is_empty(),
            outer,
            holes,
            regularity: reg,
            expect: expect(e),
        }],
    }
}

fn ok<T>(r: Result<T>) -> T {
    r.expect("gallery primitives are valid")
}

pub fn hook_primitives() -> Vec<Primitive> {
    vec![
        ok(Primitive::segment(p(-1.0, 1.0), p(0.0, 1.0))),
        ok(Primitive::arc(p(0.0, 0.0), 1.0, 0.0, FRAC_PI_2)),
        ok(Primitive::segment(p(1.0, 0.0), p(1.0, -1.0))),
    ]
}

fn stadium_primitives() -> Vec<Primitive> {
    vec![
        ok(Primitive::segment(p(-1.0, -1.0), p(1.0, -1.0))),
        ok(Primitive::arc(p(1.0, 0.0), 1.0, -FRAC_PI_2, FRAC_PI_2)),
        ok(Primitive::segment(p(1.0, 1.0), p(-1.0, 1.0))),
        ok(Primitive::arc(p(-1.0, 0.0), 1.0, FRAC_PI_2, 3.0 * FRAC_PI_2)),
    ]
}

fn ellipse_polyline(n: usize) -> Primitive {
    let v = (0..n).map(|k| {
        let t = TAU * k as f64 / n as f64;
        p(2.0 * t.cos(), t.sin())
    });
    ok(Primitive::polycurve(v.collect(), true))
}

fn hook_tube(name: &str, r: f64, reg: Regularity) -> Scene {
    let core = ok(Shape::new("hook", hook_primitives()));
    let d = ok(tube_domain(&core, r));
    let e = [("high_eq_cut", json!(true)), ("tube_built", json!(true)), ("core", json!("hook")), ("r", json!(r))];
    domain_scene(name, d.loops[0].clone(), d.loops[1..].to_vec(), reg, &e)
}

/// Every gallery scene, in a fixed order.
pub fn scenes() -> Vec<Scene> {
    let (a, rr) = (0.8f64, 1.2f64);
    let phi = (a / rr).acos();
    vec![
        shape_scene("point", vec![Primitive::point(p(0.0, 0.0))], &[("reach", json!("inf")), ("tube_area", json!([0.0, 0.0, PI]))]),
        shape_scene(
            "segment",
            vec![ok(Primitive::segment(p(-1.0, 0.0), p(1.0, 0.0)))],
            &[("reach", json!("inf")), ("tube_area", json!([0.0, 4.0, PI])), ("boundary_points", json!([[-1.0, 0.0], [1.0, 0.0]]))],
        ),
        shape_scene(
            "unit_circle",
            vec![ok(Primitive::circle(p(0.0, 0.0), 1.0))],
            &[("reach", json!(1.0)), ("tube_area", json!([0.0, 4.0 * PI, 0.0])), ("boundary_points", json!([]))],
        ),
        shape_scene("hook", hook_primitives(), &[("reach", json!(1.0)), ("boundary_points", json!([[-1.0, 1.0], [1.0, -1.0]]))]),
        shape_scene(
            "tangent_circles",
            vec![ok(Primitive::circle(p(-1.0, 0.0), 1.0)), ok(Primitive::circle(p(1.0, 0.0), 1.0))],
            &[("reach", json!(0.0)), ("exterior_sphere_r", json!(0.5))],
        ),
        shape_scene(
            "abs_graph",
            vec![ok(Primitive::polycurve(vec![p(-1.0, 1.0), p(0.0, 0.0), p(1.0, 1.0)], false))],
            &[("reach", json!(0.0))],
        ),
        shape_scene("two_points", vec![Primitive::point(p(-1.0, 0.0)), Primitive::point(p(1.0, 0.0))], &[("reach", json!(1.0))]),
        shape_scene("stadium_curve", stadium_primitives(), &[("reach", json!(1.0)), ("boundary_points", json!([]))]),
        domain_scene(
            "disk",
            vec![ok(Primitive::circle(p(0.0, 0.0), 2.0))],
            vec![],
            Regularity::C2,
            &[
                ("rho", json!(2.0)),
                ("chain", json!("high=sigma=M=cut")),
                ("high_eq_cut", json!(true)),
                ("disk", json!(true)),
                ("lambda_constant", json!(true)),
                ("tube_built", json!(true)),
            ],
        ),
        domain_scene(
            "rectangle",
            vec![ok(Primitive::polycurve(vec![p(0.0, 0.0), p(4.0, 0.0), p(4.0, 2.0), p(0.0, 2.0)], true))],
            vec![],
            Regularity::C0,
            &[("rho", json!(1.0)), ("chain", json!("high<sigma=M<cut")), ("high_eq_cut", json!(false))],
        ),
        domain_scene(
            "ellipse",
            vec![ellipse_polyline(2048)],
            vec![],
            Regularity::C2,
            &[
                ("rho", json!(1.0)),
                ("chain", json!("high<sigma<M=cut")),
                ("high_eq_cut", json!(false)),
                ("lambda_constant", json!(false)),
            ],
        ),
        domain_scene(
            "annulus",
            vec![ok(Primitive::circle(p(0.0, 0.0), 3.0))],
            vec![vec![ok(Primitive::circle(p(0.0, 0.0), 1.0))]],
            Regularity::C2,
            &[
                ("rho", json!(1.0)),
                ("high_eq_cut", json!(true)),
                ("lambda_constant", json!(true)),
                ("skeleton_cycle", json!(true)),
                ("tube_built", json!(true)),
            ],
        ),
        domain_scene(
            "stadium",
            stadium_primitives(),
            vec![],
            Regularity::C1,
            &[("rho", json!(1.0)), ("high_eq_cut", json!(true)), ("lambda_constant", json!(true)), ("tube_built", json!(true))],
        ),
        domain_scene(
            "two_disk",
            vec![ok(Primitive::arc(p(a, 0.0), rr, -(PI - phi), PI - phi)), ok(Primitive::arc(p(-a, 0.0), rr, phi, TAU - phi))],
            vec![],
            Regularity::C0,
            &[("rho", json!(rr)), ("high_eq_cut", json!(false)), ("lambda_constant", json!(true))],
        ),
        hook_tube("hook_tube_half", 0.5, Regularity::C1),
        hook_tube("hook_tube_reach", 1.0, Regularity::C0),
    ]
}

/// Gallery scene by name.
pub fn scene(name: &str) -> Result<Scene> {
    scenes()
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::NotApplicable(format!("no gallery entry named `{name}`")))
}

pub fn shape(name: &str) -> Result<Shape> {
    scene(name)?.shapes.first().ok_or_else(|| Error::NotApplicable(format!("`{name}` is not a shape")))?.build()
}

pub fn domain(name: &str) -> Result<Domain> {
    scene(name)?.domains.first().ok_or_else(|| Error::NotApplicable(format!("`{name}` is not a domain")))?.build()
}

/// Writes every scene to `dir/<name>.json`.
pub fn write_all(dir: &Path) -> Result<Vec<String>> {
    std::fs::create_dir_all(dir)?;
    let mut out = Vec::new();
    for s in scenes() {
        let path = dir.join(format!("{}.json", s.name));
        std::fs::write(&path, serialize_scene(&s))?;
        out.push(path.display().to_string());
    }
    Ok(out)
}
