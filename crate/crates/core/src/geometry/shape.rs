use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::{BBox, Point2, Primitive, ProjectionResult, UnitVec};
use crate::error::{Error, Result};

/// A nonempty closed planar set given as a finite union of primitives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Shape {
    pub primitives: Vec<Primitive>,
    pub label: String,
}

impl Shape {
    pub fn new(label: impl Into<String>, primitives: Vec<Primitive>) -> Result<Self> {
        if primitives.is_empty() {
            return Err(Error::EmptyShape);
        }
        for p in &primitives {
            p.validate()?;
        }
        Ok(Shape { primitives, label: label.into() })
    }

    pub fn bbox(&self) -> BBox {
        self.primitives.iter().fold(BBox::empty(), |acc, p| acc.union(&p.bbox()))
    }

    /// Length scale used for scale-free tolerances (never below 1e-9).
    pub fn scale(&self) -> f64 {
        self.bbox().diagonal().max(1e-9)
    }

    /// Radius below which two projections are considered the same point.
    pub fn dup_radius(&self) -> f64 {
        1e-7 * self.scale()
    }

    pub fn length(&self) -> f64 {
        self.primitives.iter().map(Primitive::length).sum()
    }

    /// Distance and merged nearest-point set; minimizers within
    /// `tie_tol` of the minimum count as ties.
    pub fn project_with(&self, x: Point2, tie_tol: f64) -> ProjectionResult {
        let dup = self.dup_radius();
        let mut results: Vec<ProjectionResult> = Vec::with_capacity(self.primitives.len());
        let mut best = f64::INFINITY;
        // Cheap bounds first; most primitives never get projected exactly.
        let mut order: Vec<(f64, usize)> = self
            .primitives
            .iter()
            .enumerate()
            .map(|(i, p)| (p.distance_lower_bound(x), i))
            .collect();
        if order.len() > 1 {
            order.sort_by(|a, b| a.0.total_cmp(&b.0));
        }
        for (lb, i) in order {
            if lb > best + tie_tol {
                break;
            }
            let r = self.primitives[i].project(x);
            best = best.min(r.distance);
            results.push(r);
        }
        let mut out = ProjectionResult { distance: best, projections: Vec::new(), continuum: false, multiplicity: 0 };
        for r in results {
            if r.distance <= best + tie_tol {
                out.continuum |= r.continuum;
                for p in r.projections {
                    out.push_dedup(p, dup);
                }
            }
        }
        out
    }

    /// Projection with the default relative tie tolerance `1e-9·(1+d)`.
    pub fn project(&self, x: Point2) -> ProjectionResult {
        let d = self.distance(x);
        self.project_with(x, 1e-9 * (1.0 + d))
    }

    /// Distance only.
    pub fn distance(&self, x: Point2) -> f64 {
        let mut best = f64::INFINITY;
        for p in &self.primitives {
            if p.distance_lower_bound(x) < best {
                best = best.min(p.project(x).distance);
            }
        }
        best
    }

    /// Splits the set into isolated points and maximal chains of primitives
    /// joined end to end.
    pub fn components(&self) -> Components {
        decompose(self)
    }

    /// Samples along the set with arc-length step close to `step`.
    pub fn sample(&self, step: f64) -> Vec<SurfaceSample> {
        let comps = self.components();
        let mut out = Vec::new();
        for (ci, c) in comps.items.iter().enumerate() {
            match c {
                Component::Isolated(p) => out.push(SurfaceSample { point: *p, tangent: None, kind: SampleKind::Isolated, component: ci }),
                Component::Chain(ch) => ch.sample_into(step, ci, &mut out),
            }
        }
        out
    }
}

/// Where a surface sample sits on its component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleKind {
    Isolated,
    Interior,
    /// Endpoint of an open chain; carries the outward tangent.
    Endpoint(UnitVec),
    /// Joint between pieces with a tangent jump (radians).
    Corner(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceSample {
    pub point: Point2,
    pub tangent: Option<UnitVec>,
    pub kind: SampleKind,
    pub component: usize,
}

impl SurfaceSample {
    pub fn normal(&self) -> Option<UnitVec> {
        self.tangent.map(UnitVec::perp)
    }
}

/// A primitive traversed in a chosen direction.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub prim: Primitive,
    pub reversed: bool,
}

impl Piece {
    pub fn forward(prim: Primitive) -> Self {
        Piece { prim, reversed: false }
    }

    pub fn reverse(mut self) -> Self {
        self.reversed = !self.reversed;
        self
    }

    pub fn length(&self) -> f64 {
        self.prim.length()
    }

    /// Point at arc-length fraction `u ∈ [0,1]` along the traversal.
    pub fn point_at(&self, u: f64) -> Point2 {
        let u = if self.reversed { 1.0 - u } else { u };
        match &self.prim {
            Primitive::SitePoint(p) => *p,
            Primitive::Segment { a, b } => a.lerp(*b, u),
            Primitive::CircArc { center, radius, start, .. } => {
                Point2::from_polar(*center, *radius, start + u * self.prim.sweep())
            }
            Primitive::Polycurve(pc) => {
                let target = u * pc.length();
                let mut acc = 0.0;
                for i in 0..pc.edge_count() {
                    let (a, b) = pc.edge(i);
                    let l = a.dist(b);
                    if acc + l >= target || i + 1 == pc.edge_count() {
                        return a.lerp(b, ((target - acc) / l).clamp(0.0, 1.0));
                    }
                    acc += l;
                }
                pc.vertices()[0]
            }
        }
    }

    /// Unit tangent (in traversal direction) at fraction `u`.
    pub fn tangent_at(&self, u: f64) -> UnitVec {
        let t = match &self.prim {
            Primitive::Segment { a, b } => UnitVec::new(*b - *a).unwrap(),
            Primitive::CircArc { start, .. } => {
                let uu = if self.reversed { 1.0 - u } else { u };
                UnitVec::from_angle(start + uu * self.prim.sweep() + FRAC_PI_2)
            }
            Primitive::Polycurve(pc) => {
                let uu = if self.reversed { 1.0 - u } else { u };
                let target = uu * pc.length();
                let mut acc = 0.0;
                let mut dir = UnitVec::from_angle(0.0);
                for i in 0..pc.edge_count() {
                    let (a, b) = pc.edge(i);
                    dir = UnitVec::new(b - a).unwrap();
                    acc += a.dist(b);
                    if acc >= target {
                        break;
                    }
                }
                dir
            }
            Primitive::SitePoint(_) => UnitVec::from_angle(0.0),
        };
        if self.reversed {
            t.neg()
        } else {
            t
        }
    }

    /// Signed curvature in traversal direction (positive turning left).
    pub fn curvature(&self) -> f64 {
        match &self.prim {
            Primitive::CircArc { radius, .. } => {
                if self.reversed {
                    -1.0 / radius
                } else {
                    1.0 / radius
                }
            }
            _ => 0.0,
        }
    }

    pub fn start(&self) -> Point2 {
        self.point_at(0.0)
    }

    pub fn end(&self) -> Point2 {
        self.point_at(1.0)
    }

    pub fn start_tangent(&self) -> UnitVec {
        self.tangent_at(0.0)
    }

    pub fn end_tangent(&self) -> UnitVec {
        self.tangent_at(1.0)
    }
}

/// Angle between two unit tangents, in `[0, π]`.
pub fn tangent_jump(a: UnitVec, b: UnitVec) -> f64 {
    a.as_vec().cross(b.as_vec()).atan2(a.as_vec().dot(b.as_vec())).abs()
}

/// Maximal chain of pieces joined end to end.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    pub pieces: Vec<Piece>,
    pub closed: bool,
}

impl Chain {
    pub fn length(&self) -> f64 {
        self.pieces.iter().map(Piece::length).sum()
    }

    pub fn start(&self) -> Point2 {
        self.pieces[0].start()
    }

    pub fn end(&self) -> Point2 {
        self.pieces.last().unwrap().end()
    }

    /// Joints with their tangent jump; a closed chain includes the wrap joint
    /// and polycurve pieces contribute their interior vertices.
    pub fn joints(&self) -> Vec<(Point2, f64)> {
        let mut out = Vec::new();
        for (i, piece) in self.pieces.iter().enumerate() {
            if let Some(prev) = self.prev_piece(i) {
                out.push((piece.start(), tangent_jump(prev.end_tangent(), piece.start_tangent())));
            }
            for (p, _, jump) in piece_samples(piece, f64::INFINITY) {
                if let Some(j) = jump {
                    out.push((p, j));
                }
            }
        }
        out
    }

    fn prev_piece(&self, i: usize) -> Option<&Piece> {
        if i > 0 {
            Some(&self.pieces[i - 1])
        } else if self.closed {
            self.pieces.last()
        } else {
            None
        }
    }

    pub fn max_jump(&self) -> f64 {
        self.joints().iter().map(|j| j.1).fold(0.0, f64::max)
    }

    /// Signed area enclosed by a closed chain (positive for counterclockwise).
    pub fn signed_area(&self, step: f64) -> f64 {
        let pts: Vec<Point2> = {
            let mut v = Vec::new();
            for p in &self.pieces {
                let n = ((p.length() / step).ceil() as usize).max(8);
                for k in 0..n {
                    v.push(p.point_at(k as f64 / n as f64));
                }
            }
            v
        };
        polygon_area(&pts)
    }

    fn sample_into(&self, step: f64, component: usize, out: &mut Vec<SurfaceSample>) {
        for (i, piece) in self.pieces.iter().enumerate() {
            let point = piece.start();
            match self.prev_piece(i) {
                None => {
                    let t = piece.start_tangent();
                    out.push(SurfaceSample { point, tangent: Some(t), kind: SampleKind::Endpoint(t.neg()), component });
                }
                Some(prev) => {
                    let (t0, t1) = (prev.end_tangent(), piece.start_tangent());
                    out.push(joint_sample(point, t0, t1, component));
                }
            }
            for (point, t, jump) in piece_samples(piece, step) {
                let kind = match jump {
                    Some(j) if j > 1e-6 => SampleKind::Corner(j),
                    _ => SampleKind::Interior,
                };
                out.push(SurfaceSample { point, tangent: Some(t), kind, component });
            }
        }
        if !self.closed {
            let last = self.pieces.last().unwrap();
            let t = last.end_tangent();
            out.push(SurfaceSample { point: last.end(), tangent: Some(t), kind: SampleKind::Endpoint(t), component });
        }
    }
}

fn joint_sample(point: Point2, t0: UnitVec, t1: UnitVec, component: usize) -> SurfaceSample {
    let jump = tangent_jump(t0, t1);
    let t = UnitVec::new(t0.as_vec() + t1.as_vec()).unwrap_or(t1);
    let kind = if jump > 1e-6 { SampleKind::Corner(jump) } else { SampleKind::Interior };
    SurfaceSample { point, tangent: Some(t), kind, component }
}

/// Samples strictly inside a piece (start and end excluded). Polycurve
/// vertices come with the tangent jump there.
fn piece_samples(piece: &Piece, step: f64) -> Vec<(Point2, UnitVec, Option<f64>)> {
    let mut out = Vec::new();
    match &piece.prim {
        Primitive::Polycurve(pc) => {
            let v = pc.vertices();
            let mut order: Vec<Point2> = v.to_vec();
            if pc.is_closed() {
                order.push(v[0]);
            }
            if piece.reversed {
                order.reverse();
            }
            let m = order.len() - 1;
            for e in 0..m {
                let (a, b) = (order[e], order[e + 1]);
                let dir = UnitVec::new(b - a).unwrap();
                if e > 0 {
                    let prev = UnitVec::new(a - order[e - 1]).unwrap();
                    let t = UnitVec::new(prev.as_vec() + dir.as_vec()).unwrap_or(dir);
                    out.push((a, t, Some(tangent_jump(prev, dir))));
                }
                if step.is_finite() {
                    let k = (a.dist(b) / step).ceil() as usize;
                    for j in 1..k {
                        out.push((a.lerp(b, j as f64 / k as f64), dir, None));
                    }
                }
            }
        }
        Primitive::SitePoint(_) => {}
        _ => {
            if step.is_finite() {
                let k = ((piece.length() / step).ceil() as usize).max(1);
                for j in 1..k {
                    let u = j as f64 / k as f64;
                    out.push((piece.point_at(u), piece.tangent_at(u), None));
                }
            }
        }
    }
    out
}

/// Shoelace area of a closed polygon.
pub fn polygon_area(pts: &[Point2]) -> f64 {
    let n = pts.len();
    (0..n).map(|i| pts[i].cross(pts[(i + 1) % n])).sum::<f64>() * 0.5
}

#[derive(Debug, Clone, PartialEq)]
pub enum Component {
    Isolated(Point2),
    Chain(Chain),
}

/// Connected pieces of a shape.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Components {
    pub items: Vec<Component>,
    /// Junctions where three or more primitive ends meet.
    pub branch_points: Vec<Point2>,
}

impl Components {
    pub fn chains(&self) -> impl Iterator<Item = &Chain> {
        self.items.iter().filter_map(|c| match c {
            Component::Chain(ch) => Some(ch),
            _ => None,
        })
    }
}

fn decompose(shape: &Shape) -> Components {
    let tol = 1e-9 * shape.scale();
    let mut comps = Components::default();
    let mut nodes: Vec<Point2> = Vec::new();
    let node_of = |p: Point2, nodes: &mut Vec<Point2>| -> usize {
        if let Some(i) = nodes.iter().position(|q| q.dist(p) <= tol) {
            i
        } else {
            nodes.push(p);
            nodes.len() - 1
        }
    };
    // (primitive index, start node, end node)
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    for (i, p) in shape.primitives.iter().enumerate() {
        match p {
            Primitive::SitePoint(_) => {}
            _ if p.is_closed() => comps.items.push(Component::Chain(Chain { pieces: vec![Piece::forward(p.clone())], closed: true })),
            _ => {
                let (a, b) = p.endpoints().unwrap();
                let na = node_of(a, &mut nodes);
                let nb = node_of(b, &mut nodes);
                edges.push((i, na, nb));
            }
        }
    }
    let mut degree = vec![0usize; nodes.len()];
    for &(_, a, b) in &edges {
        degree[a] += 1;
        degree[b] += 1;
    }
    for (k, d) in degree.iter().enumerate() {
        if *d > 2 {
            comps.branch_points.push(nodes[k]);
        }
    }
    let mut used = vec![false; edges.len()];
    let walk = |start_edge: usize, from: usize, used: &mut Vec<bool>| -> (Vec<Piece>, usize) {
        let mut pieces = Vec::new();
        let mut e = start_edge;
        let mut at = from;
        loop {
            used[e] = true;
            let (pi, a, b) = edges[e];
            let piece = Piece::forward(shape.primitives[pi].clone());
            let (piece, next) = if a == at { (piece, b) } else { (piece.reverse(), a) };
            pieces.push(piece);
            at = next;
            if degree[at] != 2 {
                break;
            }
            match (0..edges.len()).find(|&k| !used[k] && (edges[k].1 == at || edges[k].2 == at)) {
                Some(k) => e = k,
                None => break,
            }
        }
        (pieces, at)
    };
    // open chains start at nodes whose degree is not two
    for n in 0..nodes.len() {
        if degree[n] == 2 {
            continue;
        }
        while let Some(e) = (0..edges.len()).find(|&k| !used[k] && (edges[k].1 == n || edges[k].2 == n)) {
            let (pieces, _) = walk(e, n, &mut used);
            comps.items.push(Component::Chain(Chain { pieces, closed: false }));
        }
    }
    // remaining edges form cycles
    while let Some(e) = (0..edges.len()).find(|&k| !used[k]) {
        let start = edges[e].1;
        let (pieces, end) = walk(e, start, &mut used);
        comps.items.push(Component::Chain(Chain { pieces, closed: end == start }));
    }
    for p in &shape.primitives {
        if let Primitive::SitePoint(q) = p {
            let absorbed = shape
                .primitives
                .iter()
                .any(|o| !matches!(o, Primitive::SitePoint(_)) && o.contains(*q, tol));
            let dup = comps.items.iter().any(|c| matches!(c, Component::Isolated(r) if r.dist(*q) <= tol));
            if !absorbed && !dup {
                comps.items.push(Component::Isolated(*q));
            }
        }
    }
    comps
}
