//! JSON scene files: shapes and domains with optional expected verdicts.
//!
//! ```json
//! {"name": "demo",
//!  "shapes": [{"type": "segment", "a": [-1, 0], "b": [1, 0]},
//!             {"label": "hook", "primitives": [...]}],
//!  "domains": [{"label": "disk", "outer": [{"type": "circle", "center": [0, 0], "radius": 2}],
//!               "holes": [], "tags": {"regularity": "C2", "simply_connected": true}}]}
//! ```
//!
//! Primitive types are `point` (`p`), `segment` (`a`, `b`), `arc` (`center`,
//! `radius`, `start`, `end`), `circle` (`center`, `radius`) and `polyline`
//! (`points`, `closed`). Angles are radians, counterclockwise.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use serde_json::{json, Map, Value};

use crate::distance::{Domain, Regularity};
use crate::error::{Error, Result};
use crate::geometry::{Point2, Primitive, Shape};

pub type Expect = BTreeMap<String, Value>;

#[derive(Debug, Clone, PartialEq)]
pub struct ShapeSpec {
    pub label: String,
    pub primitives: Vec<Primitive>,
    pub expect: Expect,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec {
    pub label: String,
    pub outer: Vec<Primitive>,
    pub holes: Vec<Vec<Primitive>>,
    pub regularity: Regularity,
    pub simply_connected: bool,
    pub expect: Expect,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub name: String,
    pub shapes: Vec<ShapeSpec>,
    pub domains: Vec<DomainSpec>,
}

impl ShapeSpec {
    pub fn build(&self) -> Result<Shape> {
        Shape::new(self.label.clone(), self.primitives.clone())
    }
}

impl DomainSpec {
    pub fn build(&self) -> Result<Domain> {
        Domain::new(self.label.clone(), self.outer.clone(), self.holes.clone(), self.regularity)
    }
}

fn schema(path: &str, message: impl Into<String>) -> Error {
    Error::Schema { path: path.to_string(), message: message.into() }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| schema(path, format!("missing field `{key}`")))
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| schema(path, "expected an object"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

fn number(v: &Value, path: &str) -> Result<f64> {
    v.as_f64().filter(|x| x.is_finite()).ok_or_else(|| schema(path, "expected a finite number"))
}

fn point(v: &Value, path: &str) -> Result<Point2> {
    let a = array(v, path)?;
    if a.len() != 2 {
        return Err(schema(path, "expected [x, y]"));
    }
    Ok(Point2::new(number(&a[0], &format!("{path}[0]"))?, number(&a[1], &format!("{path}[1]"))?))
}

fn checked(p: Result<Primitive>, path: &str) -> Result<Primitive> {
    p.map_err(|e| schema(path, e.to_string()))
}

fn primitive(v: &Value, path: &str) -> Result<Primitive> {
    let o = object(v, path)?;
    let kind = field(o, "type", path)?.as_str().ok_or_else(|| schema(&format!("{path}.type"), "expected a string"))?;
    let get = |k: &str| field(o, k, path);
    let sub = |k: &str| format!("{path}.{k}");
    let radius = |o: &Map<String, Value>| -> Result<f64> {
        let r = number(field(o, "radius", path)?, &sub("radius"))?;
        if r > 0.0 {
            Ok(r)
        } else {
            Err(schema(&sub("radius"), "radius must be positive"))
        }
    };
    match kind {
        "point" => Ok(Primitive::point(point(get("p")?, &sub("p"))?)),
        "segment" => checked(Primitive::segment(point(get("a")?, &sub("a"))?, point(get("b")?, &sub("b"))?), path),
        "circle" => checked(Primitive::circle(point(get("center")?, &sub("center"))?, radius(o)?), path),
        "arc" => {
            let (c, r) = (point(get("center")?, &sub("center"))?, radius(o)?);
            let (s, e) = (number(get("start")?, &sub("start"))?, number(get("end")?, &sub("end"))?);
            checked(Primitive::arc(c, r, s, e), path)
        }
        "polyline" => {
            let pts = array(get("points")?, &sub("points"))?
                .iter()
                .enumerate()
                .map(|(i, q)| point(q, &format!("{path}.points[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            let closed = match o.get("closed") {
                None => false,
                Some(b) => b.as_bool().ok_or_else(|| schema(&sub("closed"), "expected a boolean"))?,
            };
            checked(Primitive::polycurve(pts, closed), path)
        }
        other => Err(schema(&format!("{path}.type"), format!("unknown primitive type `{other}`"))),
    }
}

fn primitives(v: &Value, path: &str) -> Result<Vec<Primitive>> {
    let a = array(v, path)?;
    if a.is_empty() {
        return Err(schema(path, "expected at least one primitive"));
    }
    a.iter().enumerate().map(|(i, p)| primitive(p, &format!("{path}[{i}]"))).collect()
}

fn expect(o: &Map<String, Value>, path: &str) -> Result<Expect> {
    match o.get("expect") {
        None => Ok(Expect::new()),
        Some(v) => Ok(object(v, &format!("{path}.expect"))?.iter().map(|(k, v)| (k.clone(), v.clone())).collect()),
    }
}

fn label(o: &Map<String, Value>, path: &str, default: String) -> Result<String> {
    match o.get("label") {
        None => Ok(default),
        Some(v) => v.as_str().map(str::to_string).ok_or_else(|| schema(&format!("{path}.label"), "expected a string")),
    }
}

fn shape_spec(v: &Value, i: usize) -> Result<ShapeSpec> {
    let path = format!("shapes[{i}]");
    let o = object(v, &path)?;
    let primitives = if o.contains_key("type") {
        vec![primitive(v, &path)?]
    } else {
        primitives(field(o, "primitives", &path)?, &format!("{path}.primitives"))?
    };
    Ok(ShapeSpec { label: label(o, &path, format!("shape{i}"))?, primitives, expect: expect(o, &path)? })
}

fn domain_spec(v: &Value, i: usize) -> Result<DomainSpec> {
    let path = format!("domains[{i}]");
    let o = object(v, &path)?;
    let outer = primitives(field(o, "outer", &path)?, &format!("{path}.outer"))?;
    let holes = match o.get("holes") {
        None => Vec::new(),
        Some(h) => array(h, &format!("{path}.holes"))?
            .iter()
            .enumerate()
            .map(|(k, l)| primitives(l, &format!("{path}.holes[{k}]")))
            .collect::<Result<Vec<_>>>()?,
    };
    let tags_path = format!("{path}.tags");
    let empty = Map::new();
    let tags = match o.get("tags") {
        None => &empty,
        Some(t) => object(t, &tags_path)?,
    };
    let regularity = match tags.get("regularity").map(|r| r.as_str()) {
        None => Regularity::C0,
        Some(Some("C0")) => Regularity::C0,
        Some(Some("C1")) => Regularity::C1,
        Some(Some("C2")) => Regularity::C2,
        Some(_) => return Err(schema(&format!("{tags_path}.regularity"), "expected \"C0\", \"C1\" or \"C2\"")),
    };
    let simply_connected = match tags.get("simply_connected") {
        None => holes.is_empty(),
        Some(b) => b.as_bool().ok_or_else(|| schema(&format!("{tags_path}.simply_connected"), "expected a boolean"))?,
    };
    if simply_connected != holes.is_empty() {
        return Err(schema(&format!("{tags_path}.simply_connected"), "disagrees with the hole count"));
    }
    Ok(DomainSpec { label: label(o, &path, format!("domain{i}"))?, outer, holes, regularity, simply_connected, expect: expect(o, &path)? })
}

/// Parses and validates a scene. Errors name the offending JSON path, or
/// the line and column of a syntax error.
pub fn parse_scene(text: &str) -> Result<Scene> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| schema(&format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    let o = object(&v, "$")?;
    let list = |k: &str| -> Result<Vec<Value>> {
        match o.get(k) {
            None => Ok(Vec::new()),
            Some(a) => Ok(array(a, k)?.clone()),
        }
    };
    let shapes = list("shapes")?.iter().enumerate().map(|(i, s)| shape_spec(s, i)).collect::<Result<Vec<_>>>()?;
    let domains = list("domains")?.iter().enumerate().map(|(i, d)| domain_spec(d, i)).collect::<Result<Vec<_>>>()?;
    if shapes.is_empty() && domains.is_empty() {
        return Err(schema("$", "a scene needs at least one shape or domain"));
    }
    let name = match o.get("name") {
        None => "scene".to_string(),
        Some(n) => n.as_str().ok_or_else(|| schema("name", "expected a string"))?.to_string(),
    };
    for (i, s) in shapes.iter().enumerate() {
        s.build().map_err(|e| schema(&format!("shapes[{i}]"), e.to_string()))?;
    }
    for (i, d) in domains.iter().enumerate() {
        d.build().map_err(|e| schema(&format!("domains[{i}]"), e.to_string()))?;
    }
    Ok(Scene { name, shapes, domains })
}

fn pt(p: Point2) -> Value {
    json!([p.x, p.y])
}

fn primitive_json(p: &Primitive) -> Value {
    match p {
        Primitive::SitePoint(q) => json!({"type": "point", "p": pt(*q)}),
        Primitive::Segment { a, b } => json!({"type": "segment", "a": pt(*a), "b": pt(*b)}),
        Primitive::CircArc { center, radius, start, end } if *start == 0.0 && *end == TAU => {
            json!({"type": "circle", "center": pt(*center), "radius": radius})
        }
        Primitive::CircArc { center, radius, start, end } => {
            json!({"type": "arc", "center": pt(*center), "radius": radius, "start": start, "end": end})
        }
        Primitive::Polycurve(pc) => json!({
            "type": "polyline",
            "points": pc.vertices().iter().map(|q| pt(*q)).collect::<Vec<_>>(),
            "closed": pc.is_closed(),
        }),
    }
}

fn prims_json(ps: &[Primitive]) -> Value {
    Value::Array(ps.iter().map(primitive_json).collect())
}

fn regularity_str(r: Regularity) -> &'static str {
    match r {
        Regularity::C0 => "C0",
        Regularity::C1 => "C1",
        Regularity::C2 => "C2",
    }
}

pub fn scene_to_value(scene: &Scene) -> Value {
    let shapes: Vec<Value> = scene
        .shapes
        .iter()
        .map(|s| json!({"label": s.label, "primitives": prims_json(&s.primitives), "expect": s.expect}))
        .collect();
    let domains: Vec<Value> = scene
        .domains
        .iter()
        .map(|d| {
            json!({
                "label": d.label,
                "outer": prims_json(&d.outer),
                "holes": d.holes.iter().map(|h| prims_json(h)).collect::<Vec<_>>(),
                "tags": {"regularity": regularity_str(d.regularity), "simply_connected": d.simply_connected},
                "expect": d.expect,
            })
        })
        .collect();
    json!({"name": scene.name, "shapes": shapes, "domains": domains})
}

/// Pretty-printed JSON accepted by [`parse_scene`].
pub fn serialize_scene(scene: &Scene) -> String {
    serde_json::to_string_pretty(&scene_to_value(scene)).expect("scene values are finite") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_segment_scene() {
        let s = parse_scene(r#"{"shapes":[{"type":"segment","a":[-1,0],"b":[1,0]}]}"#).unwrap();
        assert_eq!(s.shapes.len(), 1);
        assert_eq!(s.shapes[0].primitives, vec![Primitive::segment((-1.0, 0.0), (1.0, 0.0)).unwrap()]);
    }

    #[test]
    fn errors_name_the_path() {
        let e = parse_scene(r#"{"shapes":[{"type":"circle","center":[0,0],"radius":-1}]}"#).unwrap_err();
        assert!(matches!(&e, Error::Schema { path, .. } if path == "shapes[0].radius"), "{e}");
        let e = parse_scene(r#"{"shapes":[{"label":"x","primitives":[{"type":"point","p":[0]}]}]}"#).unwrap_err();
        assert!(matches!(&e, Error::Schema { path, .. } if path == "shapes[0].primitives[0].p"), "{e}");
        let e = parse_scene("{\"shapes\":\n[}").unwrap_err();
        assert!(matches!(&e, Error::Schema { path, .. } if path.starts_with("line 2")), "{e}");
        let e = parse_scene(r#"{"domains":[{"outer":[{"type":"circle","center":[0,0],"radius":1}],"tags":{"simply_connected":false}}]}"#)
            .unwrap_err();
        assert!(matches!(&e, Error::Schema { path, .. } if path == "domains[0].tags.simply_connected"), "{e}");
        assert!(parse_scene("{}").is_err());
        assert!(parse_scene(r#"{"shapes":[{"type":"spline"}]}"#).is_err());
    }

    #[test]
    fn round_trip() {
        let text = r#"{"name":"t","shapes":[{"label":"hook","primitives":[
            {"type":"segment","a":[-1,1],"b":[0,1]},
            {"type":"arc","center":[0,0],"radius":1,"start":0,"end":1.5707963267948966},
            {"type":"polyline","points":[[1,0],[1,-1],[2,-1]]}],"expect":{"reach":1.0}}],
            "domains":[{"label":"ring","outer":[{"type":"circle","center":[0,0],"radius":3}],
            "holes":[[{"type":"circle","center":[0,0],"radius":1}]],"tags":{"regularity":"C2","simply_connected":false}}]}"#;
        let s = parse_scene(text).unwrap();
        assert_eq!(parse_scene(&serialize_scene(&s)).unwrap(), s);
        assert_eq!(serialize_scene(&s), serialize_scene(&parse_scene(&serialize_scene(&s)).unwrap()));
    }
}
