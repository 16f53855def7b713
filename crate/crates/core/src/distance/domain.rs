use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{build_arclength_with, ArcCurve, BBox, Component, Piece, Point2, Primitive, Shape};

/// Boundary regularity declared by the scene author.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regularity {
    C0,
    C1,
    C2,
}

/// Bounded open domain given by one outer loop and optional holes.
///
/// The outer loop runs counterclockwise and holes run clockwise, so the
/// domain is always on the left. Exact distances go through `boundary`.
#[derive(Debug, Clone)]
pub struct Domain {
    pub label: String,
    pub outer: ArcCurve,
    pub holes: Vec<ArcCurve>,
    pub regularity: Regularity,
    pub boundary: Shape,
    /// Source primitives per loop, outer first, as given.
    pub loops: Vec<Vec<Primitive>>,
    polygons: Vec<Vec<Point2>>,
}

fn loop_pieces(label: &str, prims: &[Primitive]) -> Result<Vec<Piece>> {
    let shape = Shape::new(label, prims.to_vec())?;
    let comps = shape.components();
    if !comps.branch_points.is_empty() || comps.items.len() != 1 {
        return Err(Error::InvalidPrimitive(format!("{label}: loop must be a single simple closed curve")));
    }
    match &comps.items[0] {
        Component::Chain(ch) if ch.closed => Ok(ch.pieces.clone()),
        _ => Err(Error::InvalidPrimitive(format!("{label}: loop is not closed"))),
    }
}

fn reverse_pieces(pieces: Vec<Piece>) -> Vec<Piece> {
    pieces.into_iter().rev().map(Piece::reverse).collect()
}

/// Ray-crossing test against a closed polygon.
pub(crate) fn point_in_polygon(poly: &[Point2], p: Point2) -> bool {
    let n = poly.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (poly[i], poly[j]);
        if (a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x {
            inside = !inside;
        }
        j = i;
    }
    inside
}

impl Domain {
    pub fn new(
        label: impl Into<String>,
        outer: Vec<Primitive>,
        holes: Vec<Vec<Primitive>>,
        regularity: Regularity,
    ) -> Result<Self> {
        let label = label.into();
        let mut all = outer.clone();
        for h in &holes {
            all.extend(h.iter().cloned());
        }
        let boundary = Shape::new(label.clone(), all)?;
        let perimeter = boundary.length();
        if perimeter <= 0.0 {
            return Err(Error::EmptyDomain);
        }
        let ds = (perimeter / 2000.0).min(0.005);
        let build = |prims: &[Primitive], ccw: bool| -> Result<ArcCurve> {
            let mut pieces = loop_pieces(&label, prims)?;
            let mut curve = build_arclength_with(&pieces, ds, PI * 0.999)?;
            if (curve.signed_area() > 0.0) != ccw {
                pieces = reverse_pieces(pieces);
                curve = build_arclength_with(&pieces, ds, PI * 0.999)?;
            }
            Ok(curve)
        };
        let outer_curve = build(&outer, true)?;
        let hole_curves = holes.iter().map(|h| build(h, false)).collect::<Result<Vec<_>>>()?;

        let mut polygons = vec![outer_curve.points()];
        polygons.extend(hole_curves.iter().map(ArcCurve::points));
        for (k, poly) in polygons.iter().enumerate().skip(1) {
            if !point_in_polygon(&polygons[0], poly[0]) {
                return Err(Error::InvalidPrimitive(format!("{label}: hole {} is outside the outer loop", k - 1)));
            }
        }
        let mut loops = vec![outer];
        loops.extend(holes);
        // pairwise disjoint loops
        let tol = 1e-9 * boundary.scale();
        for i in 0..loops.len() {
            let si = Shape::new("loop", loops[i].clone())?;
            for (j, poly) in polygons.iter().enumerate() {
                if i != j && poly.iter().any(|p| si.distance(*p) <= tol) {
                    return Err(Error::InvalidPrimitive(format!("{label}: loops {i} and {j} touch")));
                }
            }
        }
        for i in 1..polygons.len() {
            for j in 1..polygons.len() {
                if i != j && point_in_polygon(&polygons[j], polygons[i][0]) {
                    return Err(Error::InvalidPrimitive(format!("{label}: nested holes")));
                }
            }
        }
        Ok(Domain { label, outer: outer_curve, holes: hole_curves, regularity, boundary, loops, polygons })
    }

    pub fn simply_connected(&self) -> bool {
        self.holes.is_empty()
    }

    pub fn bbox(&self) -> BBox {
        self.boundary.bbox()
    }

    /// Open-domain membership (points on the sampled boundary polygon are
    /// resolved by the crossing rule).
    pub fn contains(&self, p: Point2) -> bool {
        point_in_polygon(&self.polygons[0], p) && !self.polygons[1..].iter().any(|h| point_in_polygon(h, p))
    }

    /// Closed-domain membership with boundary tolerance `tol`.
    pub fn contains_closed(&self, p: Point2, tol: f64) -> bool {
        self.contains(p) || self.boundary.distance(p) <= tol
    }

    /// Distance to the boundary.
    pub fn boundary_distance(&self, p: Point2) -> f64 {
        self.boundary.distance(p)
    }

    /// Area by the shoelace formula on the sampled loops.
    pub fn area(&self) -> f64 {
        self.outer.signed_area() + self.holes.iter().map(ArcCurve::signed_area).sum::<f64>()
    }

    /// Boundary length.
    pub fn perimeter(&self) -> f64 {
        self.outer.length + self.holes.iter().map(|h| h.length).sum::<f64>()
    }

    /// All boundary loops, outer first.
    pub fn curves(&self) -> impl Iterator<Item = &ArcCurve> {
        std::iter::once(&self.outer).chain(self.holes.iter())
    }

    /// Whether the sampled boundary has a tangent corner.
    pub fn has_corners(&self) -> bool {
        self.curves().any(|c| !c.corners.is_empty())
    }
}
