use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use super::contour::{contour_loops, snapped_box};
use crate::error::{Error, Result};
use crate::geometry::{build_arclength_with, ArcCurve, Component, Piece, Point2, Primitive, Shape, UnitVec, G1_TOL};

/// How the tube boundary is produced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum OffsetMethod {
    /// Exact offsets of the primitives with arc caps and joins.
    Analytic,
    /// Marching squares on the grid of `d − r` with spacing `h`.
    Contour { h: f64 },
}

/// Boundary of the tube `{d < r}`, as loops with the tube on the left.
#[derive(Debug, Clone)]
pub struct OffsetBoundary {
    pub loops: Vec<ArcCurve>,
    /// Exact pieces per loop (analytic method only).
    pub pieces: Vec<Vec<Piece>>,
    pub r: f64,
    pub method: OffsetMethod,
    pub source: Shape,
}

impl OffsetBoundary {
    /// The boundary as a closed set, for exact distance queries.
    pub fn as_shape(&self) -> Result<Shape> {
        let prims: Vec<Primitive> = if self.pieces.is_empty() {
            self.loops.iter().map(|c| Primitive::polycurve(c.points(), true)).collect::<Result<_>>()?
        } else {
            self.pieces.iter().flatten().map(|p| p.prim.clone()).collect()
        };
        Shape::new(format!("{}_offset", self.source.label), prims)
    }

    pub fn length(&self) -> f64 {
        self.loops.iter().map(|c| c.length).sum()
    }

    /// Largest `|d_S − r|` over the loop samples.
    pub fn max_level_error(&self) -> f64 {
        self.loops
            .iter()
            .flat_map(|c| c.samples.iter())
            .map(|s| (self.source.distance(s.point) - self.r).abs())
            .fold(0.0, f64::max)
    }
}

/// Offset boundary of `shape` at radius `r`.
pub fn offset_boundary(shape: &Shape, r: f64, method: OffsetMethod) -> Result<OffsetBoundary> {
    offset_boundary_with(shape, r, method, (r / 50.0).min(0.005))
}

/// As [`offset_boundary`] with an explicit arc-length sampling step.
pub fn offset_boundary_with(shape: &Shape, r: f64, method: OffsetMethod, ds: f64) -> Result<OffsetBoundary> {
    if !(r > 0.0) {
        return Err(Error::InvalidPrimitive(format!("offset radius {r} must be positive")));
    }
    match method {
        OffsetMethod::Analytic => analytic(shape, r, ds),
        OffsetMethod::Contour { h } => {
            let bbox = snapped_box(&shape.bbox().expand(r + 3.0 * h), h);
            let polys = contour_loops(&|p| shape.distance(p) - r, &bbox, h)?;
            let mut loops = Vec::new();
            for poly in polys {
                let piece = Piece::forward(Primitive::polycurve(poly, true)?);
                loops.push(build_arclength_with(&[piece], h, PI * 0.999)?);
            }
            Ok(OffsetBoundary { loops, pieces: Vec::new(), r, method, source: shape.clone() })
        }
    }
}

fn analytic(shape: &Shape, r: f64, ds: f64) -> Result<OffsetBoundary> {
    let comps = shape.components();
    if !comps.branch_points.is_empty() {
        return Err(Error::ReachExceeded { r, reach: 0.0 });
    }
    let scale = shape.scale();
    let mut loops: Vec<Vec<Piece>> = Vec::new();
    for c in &comps.items {
        match c {
            Component::Isolated(p) => loops.push(vec![Piece::forward(Primitive::circle(*p, r)?)]),
            Component::Chain(ch) => {
                let fwd = expand(&ch.pieces);
                let back: Vec<Piece> = fwd.iter().rev().cloned().map(Piece::reverse).collect();
                if ch.closed {
                    loops.push(right_side(&fwd, r, true)?);
                    loops.push(right_side(&back, r, true)?);
                } else {
                    let mut lp = right_side(&fwd, r, false)?;
                    lp.push(cap(fwd.last().unwrap(), r)?);
                    lp.extend(right_side(&back, r, false)?);
                    lp.push(cap(back.last().unwrap(), r)?);
                    loops.push(lp);
                }
            }
        }
    }
    loops.retain(|l| l.iter().map(Piece::length).sum::<f64>() > 1e-9 * scale);
    let curves = loops
        .iter()
        .map(|l| build_arclength_with(l, ds, PI * 0.999))
        .collect::<Result<Vec<_>>>()?;
    let out = OffsetBoundary { loops: curves, pieces: loops, r, method: OffsetMethod::Analytic, source: shape.clone() };
    // a loop away from the level set means r is beyond the reach
    let err = out.max_level_error();
    if err > 1e-6 {
        return Err(Error::ReachExceeded { r, reach: r - err });
    }
    Ok(out)
}

/// Polycurves split into their edges, keeping traversal order.
fn expand(pieces: &[Piece]) -> Vec<Piece> {
    let mut out = Vec::new();
    for p in pieces {
        match &p.prim {
            Primitive::Polycurve(pc) => {
                let mut v = pc.vertices().to_vec();
                if pc.is_closed() {
                    v.push(v[0]);
                }
                if p.reversed {
                    v.reverse();
                }
                for w in v.windows(2) {
                    out.push(Piece::forward(Primitive::Segment { a: w[0], b: w[1] }));
                }
            }
            _ => out.push(p.clone()),
        }
    }
    out
}

/// End cap: half circle around the end of `last`, turning left.
fn cap(last: &Piece, r: f64) -> Result<Piece> {
    let a = last.end_tangent().angle() - FRAC_PI_2;
    Ok(Piece::forward(Primitive::arc(last.end(), r, a, a + PI)?))
}

enum Off {
    Seg(Point2, Point2),
    Arc(Piece),
    /// Offset collapsed onto a point (arc of radius exactly `r`).
    Point,
}

fn signed_turn(a: UnitVec, b: UnitVec) -> f64 {
    a.as_vec().cross(b.as_vec()).atan2(a.as_vec().dot(b.as_vec()))
}

/// Offset of one piece to the right of its traversal direction.
fn offset_piece(p: &Piece, r: f64) -> Result<Off> {
    match &p.prim {
        Primitive::Segment { .. } => {
            let n = p.start_tangent().perp().as_vec();
            Ok(Off::Seg(p.start() - n * r, p.end() - n * r))
        }
        Primitive::CircArc { center, radius, start, end } => {
            // to the right of a counterclockwise arc is outward
            let rr = if p.reversed { radius - r } else { radius + r };
            if rr < -1e-12 * (1.0 + radius) {
                return Err(Error::ReachExceeded { r, reach: *radius });
            }
            if rr <= 1e-12 * (1.0 + radius) {
                return Ok(Off::Point);
            }
            Ok(Off::Arc(Piece { prim: Primitive::CircArc { center: *center, radius: rr, start: *start, end: *end }, reversed: p.reversed }))
        }
        _ => Err(Error::InvalidPrimitive("unexpected primitive in chain".into())),
    }
}

/// Right-hand offset of a chain with joins: arcs where the chain turns away
/// from the offset side, trimming where it turns toward it.
fn right_side(chain: &[Piece], r: f64, closed: bool) -> Result<Vec<Piece>> {
    let n = chain.len();
    let mut offs = chain.iter().map(|p| offset_piece(p, r)).collect::<Result<Vec<_>>>()?;
    let mut joins: Vec<Option<Piece>> = vec![None; n];
    let first = if closed { 0 } else { 1 };
    for i in first..n {
        let prev = (i + n - 1) % n;
        let (t1, t2) = (chain[prev].end_tangent(), chain[i].start_tangent());
        let turn = signed_turn(t1, t2);
        if turn.abs() <= G1_TOL {
            continue;
        }
        if turn > 0.0 {
            let a = t1.angle() - FRAC_PI_2;
            joins[i] = Some(Piece::forward(Primitive::arc(chain[i].start(), r, a, a + turn)?));
            continue;
        }
        // concave side: trim the two offset segments at their crossing
        let (p1, p2) = match (&offs[prev], &offs[i]) {
            (Off::Seg(a1, b1), Off::Seg(a2, b2)) => ((*a1, *b1), (*a2, *b2)),
            _ => return Err(Error::ReachExceeded { r, reach: 0.0 }),
        };
        let x = crossing(p1, p2).ok_or(Error::ReachExceeded { r, reach: 0.0 })?;
        if let Off::Seg(_, b) = &mut offs[prev] {
            *b = x;
        }
        if let Off::Seg(a, _) = &mut offs[i] {
            *a = x;
        }
    }
    let mut out = Vec::new();
    for (i, off) in offs.into_iter().enumerate() {
        if let Some(j) = joins[i].take() {
            out.push(j);
        }
        match off {
            Off::Seg(a, b) => {
                if a.dist(b) > 1e-12 * (1.0 + a.norm()) {
                    out.push(Piece::forward(Primitive::Segment { a, b }));
                }
            }
            Off::Arc(p) => out.push(p),
            Off::Point => {}
        }
    }
    Ok(out)
}

/// Crossing of two segments, if it lies on both.
fn crossing((a, b): (Point2, Point2), (c, d): (Point2, Point2)) -> Option<Point2> {
    let (u, v) = (b - a, d - c);
    let den = u.cross(v);
    if den.abs() < 1e-300 {
        return None;
    }
    let t = (c - a).cross(v) / den;
    let s = (c - a).cross(u) / den;
    let eps = 1e-9;
    ((-eps..=1.0 + eps).contains(&t) && (-eps..=1.0 + eps).contains(&s)).then(|| a + u * t)
}
