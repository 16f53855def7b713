//! Primitives, exact point-to-primitive projection and arc-length curves.
//!
//! Normals of open curves follow the convention "tangent rotated by +π/2".

mod curve;
mod point;
mod primitive;
mod projection;
mod shape;

pub use curve::{build_arclength, build_arclength_with, joint_jump, ArcCurve, CurvePoint, CurveSample, CORNER_TOL, G1_TOL};
pub use point::{wrap_angle, BBox, Point2, UnitVec};
pub use primitive::{segment_nearest, segments_touch, Polycurve, Primitive};
pub use projection::ProjectionResult;
pub use shape::{polygon_area, tangent_jump, Chain, Component, Components, Piece, SampleKind, Shape, SurfaceSample};

/// Exact distance and all minimizers on a single primitive.
pub fn primitive_distance(prim: &Primitive, x: Point2) -> ProjectionResult {
    prim.project(x)
}

/// Distance to a shape with explicit tie tolerance.
pub fn shape_distance(shape: &Shape, x: Point2, tie_tol: f64) -> ProjectionResult {
    shape.project_with(x, tie_tol)
}

/// Evaluates an arc-length curve at `s`.
pub fn curve_eval(curve: &ArcCurve, s: f64) -> crate::Result<CurvePoint> {
    curve.eval(s)
}
