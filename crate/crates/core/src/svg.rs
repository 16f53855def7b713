//! Deterministic SVG figures made of styled layers.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;
use crate::geometry::{BBox, Point2};

#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    /// Dots of the given radius.
    Points(Vec<Point2>, f64),
    Polyline { points: Vec<Point2>, closed: bool },
    /// Counterclockwise arc sampled as a polyline.
    Arc { center: Point2, radius: f64, start: f64, sweep: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub name: String,
    pub color: String,
    pub width: f64,
    pub items: Vec<Item>,
}

impl Layer {
    pub fn new(name: impl Into<String>, color: impl Into<String>) -> Self {
        Layer { name: name.into(), color: color.into(), width: 1.0, items: Vec::new() }
    }

    pub fn with(mut self, item: Item) -> Self {
        self.items.push(item);
        self
    }
}

fn arc_points(center: Point2, radius: f64, start: f64, sweep: f64) -> Vec<Point2> {
    let k = ((sweep.abs() / 0.02).ceil() as usize).max(2);
    (0..=k).map(|j| Point2::from_polar(center, radius, start + sweep * j as f64 / k as f64)).collect()
}

fn extent(layers: &[Layer]) -> BBox {
    let mut b = BBox::empty();
    for l in layers {
        for it in &l.items {
            match it {
                Item::Points(ps, r) => ps.iter().for_each(|q| {
                    b.include(*q + Point2::new(*r, *r));
                    b.include(*q - Point2::new(*r, *r));
                }),
                Item::Polyline { points, .. } => points.iter().for_each(|q| b.include(*q)),
                Item::Arc { center, radius, start, sweep } => arc_points(*center, *radius, *start, *sweep).into_iter().for_each(|q| b.include(q)),
            }
        }
    }
    if b.min.x > b.max.x {
        return BBox::new(Point2::new(-1.0, -1.0), Point2::new(1.0, 1.0));
    }
    b
}

/// Renders layers into a standalone SVG document. The y axis points up.
pub fn render_svg(layers: &[Layer]) -> String {
    let b = extent(layers);
    let pad = 0.05 * b.width().max(b.height()).max(1e-9);
    let b = b.expand(pad);
    let size = 800.0;
    let scale = size / b.width().max(b.height());
    let (w, h) = (b.width() * scale, b.height() * scale);
    let map = |q: Point2| ((q.x - b.min.x) * scale, (b.max.y - q.y) * scale);
    let path = |pts: &[Point2], closed: bool| {
        let mut d = String::new();
        for (i, q) in pts.iter().enumerate() {
            let (x, y) = map(*q);
            let _ = write!(d, "{}{x:.3},{y:.3}", if i == 0 { "M" } else { " L" });
        }
        if closed {
            d.push_str(" Z");
        }
        d
    };
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.3} {h:.3}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for l in layers {
        let _ = writeln!(s, r#"<g id="{}" stroke="{}" fill="none" stroke-width="{}">"#, l.name, l.color, l.width);
        for it in &l.items {
            match it {
                Item::Points(ps, r) => {
                    for q in ps {
                        let (x, y) = map(*q);
                        let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{:.3}" fill="{}" stroke="none"/>"#, (r * scale).max(1.0), l.color);
                    }
                }
                Item::Polyline { points, closed } => {
                    let _ = writeln!(s, r#"<path d="{}"/>"#, path(points, *closed));
                }
                Item::Arc { center, radius, start, sweep } => {
                    let _ = writeln!(s, r#"<path d="{}"/>"#, path(&arc_points(*center, *radius, *start, *sweep), false));
                }
            }
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}

pub fn emit_svg(layers: &[Layer], path: &Path) -> Result<()> {
    std::fs::write(path, render_svg(layers))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_with_one_group_per_layer() {
        let layers = vec![
            Layer::new("skeleton", "red").with(Item::Points(vec![Point2::new(1.0, 1.0), Point2::new(3.0, 1.0)], 0.02)),
            Layer::new("boundary", "black").with(Item::Polyline {
                points: vec![Point2::new(0.0, 0.0), Point2::new(4.0, 0.0), Point2::new(4.0, 2.0), Point2::new(0.0, 2.0)],
                closed: true,
            }),
        ];
        let a = render_svg(&layers);
        assert_eq!(a, render_svg(&layers));
        assert_eq!(a.matches("<g id=").count(), 2);
        assert!(a.starts_with("<svg") && a.ends_with("</svg>\n"));
        let dir = tempfile::tempdir().unwrap();
        let f = dir.path().join("x.svg");
        emit_svg(&layers, &f).unwrap();
        assert_eq!(std::fs::read_to_string(f).unwrap(), a);
    }

    #[test]
    fn missing_directory_is_an_io_error() {
        let e = emit_svg(&[], Path::new("/nonexistent/dir/x.svg")).unwrap_err();
        assert!(matches!(e, crate::Error::Io(_)));
    }
}
