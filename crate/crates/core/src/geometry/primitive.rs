use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::{BBox, Point2, ProjectionResult, UnitVec};
use crate::error::{Error, Result};

const CHUNK: usize = 32;

/// Closed building block of a planar set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Primitive {
    SitePoint(Point2),
    Segment { a: Point2, b: Point2 },
    /// Counterclockwise arc from `start` to `end` (radians), `0 < end - start <= 2π`.
    CircArc { center: Point2, radius: f64, start: f64, end: f64 },
    Polycurve(Polycurve),
}

/// Embedded polyline, optionally closed by an implicit last edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polycurve {
    vertices: Vec<Point2>,
    closed: bool,
    #[serde(skip)]
    chunks: Vec<BBox>,
}

impl Polycurve {
    pub fn new(mut vertices: Vec<Point2>, closed: bool) -> Result<Self> {
        if closed && vertices.len() > 2 && vertices.first() == vertices.last() {
            vertices.pop();
        }
        if vertices.len() < 2 || (closed && vertices.len() < 3) {
            return Err(Error::InvalidPrimitive("polycurve needs at least two vertices".into()));
        }
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidPrimitive("non-finite polycurve vertex".into()));
        }
        let mut pc = Polycurve { vertices, closed, chunks: Vec::new() };
        for i in 0..pc.edge_count() {
            let (a, b) = pc.edge(i);
            if a == b {
                return Err(Error::InvalidPrimitive(format!("repeated vertex at index {i}")));
            }
        }
        pc.chunks = pc.build_chunks();
        if let Some((i, j)) = pc.find_self_intersection() {
            return Err(Error::InvalidPrimitive(format!("polycurve edges {i} and {j} intersect")));
        }
        Ok(pc)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn edge_count(&self) -> usize {
        if self.closed {
            self.vertices.len()
        } else {
            self.vertices.len() - 1
        }
    }

    pub fn edge(&self, i: usize) -> (Point2, Point2) {
        let n = self.vertices.len();
        (self.vertices[i], self.vertices[(i + 1) % n])
    }

    pub fn length(&self) -> f64 {
        (0..self.edge_count()).map(|i| {
            let (a, b) = self.edge(i);
            a.dist(b)
        }).sum()
    }

    fn build_chunks(&self) -> Vec<BBox> {
        let m = self.edge_count();
        (0..m)
            .step_by(CHUNK)
            .map(|s| {
                let mut bb = BBox::empty();
                for i in s..(s + CHUNK).min(m) {
                    let (a, b) = self.edge(i);
                    bb.include(a);
                    bb.include(b);
                }
                bb
            })
            .collect()
    }

    fn chunks(&self) -> std::borrow::Cow<'_, [BBox]> {
        if self.chunks.is_empty() {
            std::borrow::Cow::Owned(self.build_chunks())
        } else {
            std::borrow::Cow::Borrowed(&self.chunks)
        }
    }

    fn adjacent(&self, i: usize, j: usize) -> bool {
        let m = self.edge_count();
        j == i + 1 || (self.closed && i == 0 && j == m - 1)
    }

    fn find_self_intersection(&self) -> Option<(usize, usize)> {
        let m = self.edge_count();
        let chunks = self.chunks();
        for ci in 0..chunks.len() {
            for cj in ci..chunks.len() {
                let (bi, bj) = (&chunks[ci], &chunks[cj]);
                if bi.max.x < bj.min.x || bj.max.x < bi.min.x || bi.max.y < bj.min.y || bj.max.y < bi.min.y {
                    continue;
                }
                for i in ci * CHUNK..((ci + 1) * CHUNK).min(m) {
                    let lo = if ci == cj { i + 1 } else { cj * CHUNK };
                    for j in lo..((cj + 1) * CHUNK).min(m) {
                        let (a, b) = self.edge(i);
                        let (c, d) = self.edge(j);
                        if self.adjacent(i, j) {
                            // Shared vertex only; reject folding back onto the previous edge.
                            let (u, v) = if j == i + 1 { (a - b, d - c) } else { (b - a, c - d) };
                            if u.cross(v).abs() <= 1e-12 * u.norm() * v.norm() && u.dot(v) > 0.0 {
                                return Some((i, j));
                            }
                        } else if segments_touch(a, b, c, d) {
                            return Some((i, j));
                        }
                    }
                }
            }
        }
        None
    }

    fn project(&self, x: Point2) -> ProjectionResult {
        let m = self.edge_count();
        let chunks = self.chunks();
        // Visit chunks nearest first so pruning kicks in early.
        let mut order: Vec<(f64, usize)> =
            chunks.iter().enumerate().map(|(k, b)| (b.distance(x), k)).collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut best = f64::INFINITY;
        let mut hits: Vec<(f64, Point2)> = Vec::new();
        for (lb, k) in order {
            if lb > best * (1.0 + 1e-12) + 1e-300 {
                break;
            }
            for i in k * CHUNK..((k + 1) * CHUNK).min(m) {
                let (a, b) = self.edge(i);
                let (d, p) = segment_nearest(a, b, x);
                if d <= best * (1.0 + 1e-12) {
                    best = best.min(d);
                    hits.push((d, p));
                }
            }
        }
        let tol = 1e-12 * (1.0 + best);
        let mut out = ProjectionResult { distance: best, projections: Vec::new(), continuum: false, multiplicity: 0 };
        for (d, p) in hits {
            if d <= best + tol {
                out.push_dedup(p, 1e-12 * (1.0 + p.norm()));
            }
        }
        out
    }
}

fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(a: Point2, b: Point2, p: Point2) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed-segment intersection test, touching included.
pub fn segments_touch(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

/// Nearest point of the closed segment `[a, b]` to `x`.
pub fn segment_nearest(a: Point2, b: Point2, x: Point2) -> (f64, Point2) {
    let ab = b - a;
    let t = ((x - a).dot(ab) / ab.norm_sq()).clamp(0.0, 1.0);
    let p = if t == 0.0 {
        a
    } else if t == 1.0 {
        b
    } else {
        a + ab * t
    };
    (x.dist(p), p)
}

impl Primitive {
    pub fn point(p: impl Into<Point2>) -> Self {
        Primitive::SitePoint(p.into())
    }

    pub fn segment(a: impl Into<Point2>, b: impl Into<Point2>) -> Result<Self> {
        let (a, b) = (a.into(), b.into());
        let p = Primitive::Segment { a, b };
        p.validate()?;
        Ok(p)
    }

    pub fn arc(center: impl Into<Point2>, radius: f64, start: f64, end: f64) -> Result<Self> {
        let p = Primitive::CircArc { center: center.into(), radius, start, end };
        p.validate()?;
        Ok(p)
    }

    pub fn circle(center: impl Into<Point2>, radius: f64) -> Result<Self> {
        Self::arc(center, radius, 0.0, TAU)
    }

    pub fn polycurve(vertices: Vec<Point2>, closed: bool) -> Result<Self> {
        Ok(Primitive::Polycurve(Polycurve::new(vertices, closed)?))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Primitive::SitePoint(p) => {
                if !p.is_finite() {
                    return Err(Error::InvalidPrimitive("non-finite point".into()));
                }
            }
            Primitive::Segment { a, b } => {
                if !a.is_finite() || !b.is_finite() {
                    return Err(Error::InvalidPrimitive("non-finite segment end".into()));
                }
                if a == b {
                    return Err(Error::InvalidPrimitive("segment with coincident ends".into()));
                }
            }
            Primitive::CircArc { center, radius, start, end } => {
                if !center.is_finite() || !start.is_finite() || !end.is_finite() {
                    return Err(Error::InvalidPrimitive("non-finite arc data".into()));
                }
                if !(*radius > 0.0) || !radius.is_finite() {
                    return Err(Error::InvalidPrimitive("arc radius must be positive".into()));
                }
                let sweep = end - start;
                if !(sweep > 0.0 && sweep <= TAU + 1e-12) {
                    return Err(Error::InvalidPrimitive("arc sweep must lie in (0, 2π]".into()));
                }
            }
            Primitive::Polycurve(_) => {}
        }
        Ok(())
    }

    pub fn sweep(&self) -> f64 {
        match self {
            Primitive::CircArc { start, end, .. } => (end - start).min(TAU),
            _ => 0.0,
        }
    }

    /// True for full circles and closed polycurves.
    pub fn is_closed(&self) -> bool {
        match self {
            Primitive::CircArc { .. } => self.sweep() >= TAU - 1e-12,
            Primitive::Polycurve(pc) => pc.closed,
            _ => false,
        }
    }

    pub fn length(&self) -> f64 {
        match self {
            Primitive::SitePoint(_) => 0.0,
            Primitive::Segment { a, b } => a.dist(*b),
            Primitive::CircArc { radius, .. } => radius * self.sweep(),
            Primitive::Polycurve(pc) => pc.length(),
        }
    }

    pub fn bbox(&self) -> BBox {
        let mut bb = BBox::empty();
        match self {
            Primitive::SitePoint(p) => bb.include(*p),
            Primitive::Segment { a, b } => {
                bb.include(*a);
                bb.include(*b);
            }
            Primitive::CircArc { center, radius, start, .. } => {
                let sweep = self.sweep();
                bb.include(Point2::from_polar(*center, *radius, *start));
                bb.include(Point2::from_polar(*center, *radius, start + sweep));
                for k in 0..4 {
                    let q = k as f64 * std::f64::consts::FRAC_PI_2;
                    if (q - start).rem_euclid(TAU) <= sweep {
                        bb.include(Point2::from_polar(*center, *radius, q));
                    }
                }
            }
            Primitive::Polycurve(pc) => pc.vertices.iter().for_each(|p| bb.include(*p)),
        }
        bb
    }

    /// Start and end points of an open primitive.
    pub fn endpoints(&self) -> Option<(Point2, Point2)> {
        if self.is_closed() {
            return None;
        }
        match self {
            Primitive::SitePoint(_) => None,
            Primitive::Segment { a, b } => Some((*a, *b)),
            Primitive::CircArc { center, radius, start, end } => Some((
                Point2::from_polar(*center, *radius, *start),
                Point2::from_polar(*center, *radius, *end),
            )),
            Primitive::Polycurve(pc) => Some((pc.vertices[0], *pc.vertices.last().unwrap())),
        }
    }

    /// Unit tangents in the natural direction at the start and at the end.
    pub fn end_tangents(&self) -> Option<(UnitVec, UnitVec)> {
        match self {
            Primitive::SitePoint(_) => None,
            Primitive::Segment { a, b } => {
                let t = UnitVec::new(*b - *a)?;
                Some((t, t))
            }
            Primitive::CircArc { start, end, .. } => {
                Some((UnitVec::from_angle(start + std::f64::consts::FRAC_PI_2), UnitVec::from_angle(end + std::f64::consts::FRAC_PI_2)))
            }
            Primitive::Polycurve(pc) => {
                let m = pc.edge_count();
                let (a0, b0) = pc.edge(0);
                let (a1, b1) = pc.edge(m - 1);
                Some((UnitVec::new(b0 - a0)?, UnitVec::new(b1 - a1)?))
            }
        }
    }

    /// Exact distance from `x` and every nearest point on this primitive.
    pub fn project(&self, x: Point2) -> ProjectionResult {
        match self {
            Primitive::SitePoint(p) => ProjectionResult::single(x.dist(*p), *p),
            Primitive::Segment { a, b } => {
                let (d, p) = segment_nearest(*a, *b, x);
                ProjectionResult::single(d, p)
            }
            Primitive::CircArc { center, radius, start, .. } => {
                let sweep = self.sweep();
                let v = x - *center;
                let rho = v.norm();
                if rho <= 1e-12 * (1.0 + radius) {
                    let reps: Vec<Point2> = if sweep >= TAU - 1e-12 {
                        (0..3).map(|k| Point2::from_polar(*center, *radius, start + k as f64 * TAU / 3.0)).collect()
                    } else {
                        [0.0, 0.5, 1.0].iter().map(|f| Point2::from_polar(*center, *radius, start + f * sweep)).collect()
                    };
                    let n = reps.len();
                    return ProjectionResult { distance: *radius, projections: reps, continuum: true, multiplicity: n };
                }
                let rel = (v.angle() - start).rem_euclid(TAU);
                if rel <= sweep || sweep >= TAU - 1e-12 {
                    let p = *center + v * (radius / rho);
                    return ProjectionResult::single((rho - radius).abs(), p);
                }
                let p0 = Point2::from_polar(*center, *radius, *start);
                let p1 = Point2::from_polar(*center, *radius, start + sweep);
                let (d0, d1) = (x.dist(p0), x.dist(p1));
                let tol = 1e-12 * (1.0 + d0.min(d1));
                if (d0 - d1).abs() <= tol {
                    ProjectionResult { distance: d0.min(d1), projections: vec![p0, p1], continuum: false, multiplicity: 2 }
                } else if d0 < d1 {
                    ProjectionResult::single(d0, p0)
                } else {
                    ProjectionResult::single(d1, p1)
                }
            }
            Primitive::Polycurve(pc) => pc.project(x),
        }
    }

    /// Lower bound of the distance from `x`, cheap to evaluate.
    pub fn distance_lower_bound(&self, x: Point2) -> f64 {
        match self {
            Primitive::CircArc { center, radius, .. } => (x.dist(*center) - radius).abs(),
            Primitive::Polycurve(_) => self.bbox().distance(x),
            _ => 0.0,
        }
    }

    /// Whether `p` lies on this primitive within `tol`.
    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        self.project(p).distance <= tol
    }
}
