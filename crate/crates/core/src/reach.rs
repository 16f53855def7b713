//! Reach (proximal smoothness radius) estimation and the exterior sphere
//! condition.
//!
//! Every sample of the set emits rays along its normal directions; the ray
//! from `x` keeps `x` as its only nearest point up to the normal distance of
//! `x`, and the reach is the infimum of those distances. Joints with a tangent
//! jump, branch points and touching components have reach zero.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::{Point2, Primitive, SampleKind, Shape, SurfaceSample, UnitVec, CORNER_TOL, G1_TOL};

#[derive(Debug, Clone, Copy)]
pub struct ReachParams {
    /// Surface samples along the set.
    pub samples: usize,
    /// Bisection levels for the lower bound.
    pub levels: usize,
    /// Directions tried at points, endpoints and corners.
    pub fan: usize,
}

impl Default for ReachParams {
    fn default() -> Self {
        ReachParams { samples: 1000, levels: 12, fan: 64 }
    }
}

/// A point with two nearest points on distinct sheets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub x: Point2,
    pub y1: Point2,
    pub y2: Point2,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReachEstimate {
    #[serde(serialize_with = "crate::report::real")]
    pub lower: f64,
    #[serde(serialize_with = "crate::report::real")]
    pub upper: f64,
    pub witness: Option<Witness>,
    pub probes: usize,
    #[serde(serialize_with = "crate::report::real")]
    pub curvature_bound: f64,
    pub reason: String,
}

impl ReachEstimate {
    pub fn is_infinite(&self) -> bool {
        self.upper.is_infinite()
    }
}

/// A ray `x + t·u` leaving the set along a normal direction.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Ray {
    pub x: Point2,
    pub u: UnitVec,
}

struct Prober<'a> {
    shape: &'a Shape,
    /// Nearest points within this radius of the foot count as the same sheet.
    sheet: f64,
    t_max: f64,
}

impl<'a> Prober<'a> {
    fn new(shape: &'a Shape, step: f64) -> Self {
        let scale = shape.scale();
        let coarse = shape.primitives.iter().filter_map(|p| match p {
            Primitive::Polycurve(pc) => Some((0..pc.edge_count()).map(|i| {
                let (a, b) = pc.edge(i);
                a.dist(b)
            }).fold(0.0, f64::max)),
            _ => None,
        }).fold(0.0, f64::max);
        let sheet = if coarse > 0.0 { 10.0 * coarse.max(step) } else { 1e-7 * scale };
        Prober { shape, sheet, t_max: 4.0 * scale }
    }

    /// Whether `x` is the only nearest point of `x + t·u`.
    fn keeps_foot(&self, ray: &Ray, t: f64) -> bool {
        let y = ray.x + ray.u.as_vec() * t;
        let r = self.shape.project(y);
        !r.continuum && r.projections.iter().all(|p| p.dist(ray.x) <= self.sheet)
    }

    /// Supremum of `t` keeping the foot, by bisection; infinite when the ray
    /// keeps its foot up to `t_max`.
    fn ray_reach(&self, ray: &Ray) -> f64 {
        if self.keeps_foot(ray, self.t_max) {
            return f64::INFINITY;
        }
        let (mut lo, mut hi) = (0.0, self.t_max);
        for _ in 0..48 {
            let mid = 0.5 * (lo + hi);
            if self.keeps_foot(ray, mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    fn witness_at(&self, ray: &Ray, t: f64) -> Witness {
        let y = ray.x + ray.u.as_vec() * t;
        let tie = 1e-6 * self.shape.scale();
        // feet at the breakdown and just past it, where the other sheet takes over
        let mut feet = self.shape.project_with(y, tie).projections;
        feet.extend(self.shape.project_with(y + ray.u.as_vec() * tie, tie).projections);
        let y1 = feet.iter().copied().min_by(|a, b| a.dist(ray.x).total_cmp(&b.dist(ray.x))).unwrap_or(ray.x);
        let y2 = feet.iter().copied().max_by(|a, b| a.dist(y1).total_cmp(&b.dist(y1))).unwrap_or(y1);
        Witness { x: y, y1, y2 }
    }
}

fn sample_step(shape: &Shape, samples: usize) -> f64 {
    let len = shape.length();
    if len > 0.0 {
        len / samples.max(1) as f64
    } else {
        shape.scale()
    }
}

/// Normal rays from surface samples. Smooth samples emit both normals; points,
/// endpoints and corners emit a fan filtered to their normal cone.
pub(crate) fn normal_rays(shape: &Shape, samples: &[SurfaceSample], fan: usize) -> Vec<Ray> {
    let probe = Prober::new(shape, 0.0);
    let t0 = 1e-5 * shape.scale();
    let mut rays = Vec::new();
    for s in samples {
        let mut dirs: Vec<UnitVec> = Vec::new();
        if let Some(n) = s.normal() {
            dirs.push(n);
            dirs.push(n.neg());
        }
        let needs_fan = match s.kind {
            SampleKind::Isolated | SampleKind::Endpoint(_) => true,
            SampleKind::Corner(j) => j > CORNER_TOL || !on_polycurve_vertex(shape, s.point),
            SampleKind::Interior => false,
        };
        if needs_fan {
            let fan_dirs = (0..fan).map(|k| UnitVec::from_angle(TAU * k as f64 / fan as f64));
            match s.kind {
                // the normal cone of an endpoint is the closed half plane ahead of it
                SampleKind::Endpoint(out) => dirs.extend(fan_dirs.filter(|u| u.as_vec().dot(out.as_vec()) > 1e-12)),
                _ => dirs.extend(fan_dirs),
            }
        }
        for u in dirs {
            let ray = Ray { x: s.point, u };
            if probe.keeps_foot(&ray, t0) {
                rays.push(ray);
            }
        }
    }
    rays
}

fn on_polycurve_vertex(shape: &Shape, p: Point2) -> bool {
    shape.primitives.iter().any(|q| match q {
        Primitive::Polycurve(pc) => pc.vertices().iter().any(|v| v.dist(p) <= 1e-12 * (1.0 + p.norm())),
        _ => false,
    })
}

/// Largest curvature magnitude bound `min 1/|κ|` over arcs and polycurves.
fn curvature_bound(shape: &Shape) -> f64 {
    let mut bound = f64::INFINITY;
    for p in &shape.primitives {
        match p {
            Primitive::CircArc { radius, .. } => bound = bound.min(*radius),
            Primitive::Polycurve(pc) => {
                let v = pc.vertices();
                let n = v.len();
                let inner = if pc.is_closed() { 0..n } else { 1..n.saturating_sub(1) };
                for i in inner {
                    let (a, b, c) = (v[(i + n - 1) % n], v[i], v[(i + 1) % n]);
                    let (u, w) = (UnitVec::new(b - a).unwrap(), UnitVec::new(c - b).unwrap());
                    let jump = u.as_vec().cross(w.as_vec()).atan2(u.as_vec().dot(w.as_vec())).abs();
                    if jump > 1e-12 {
                        let len = 0.5 * (a.dist(b) + b.dist(c));
                        bound = bound.min(len / jump);
                    }
                }
            }
            _ => {}
        }
    }
    bound
}

/// Zero-reach certificates: branch points, touching components, corners.
fn zero_reach(shape: &Shape) -> Option<(Witness, String)> {
    let comps = shape.components();
    if let Some(&b) = comps.branch_points.first() {
        return Some((Witness { x: b, y1: b, y2: b }, "branch point".into()));
    }
    let tol = 1e-9 * shape.scale();
    // touching distinct components
    let parts: Vec<Shape> = comps
        .items
        .iter()
        .map(|c| match c {
            crate::geometry::Component::Isolated(p) => Shape::new("part", vec![Primitive::point(*p)]).unwrap(),
            crate::geometry::Component::Chain(ch) => {
                Shape::new("part", ch.pieces.iter().map(|p| p.prim.clone()).collect()).unwrap()
            }
        })
        .collect();
    let step = sample_step(shape, 4000);
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            let mut best = (f64::INFINITY, Point2::new(0.0, 0.0), Point2::new(0.0, 0.0));
            for s in parts[i].sample(step) {
                let r = parts[j].project(s.point);
                if r.distance < best.0 {
                    best = (r.distance, s.point, r.nearest());
                }
            }
            // refine the closest pair by alternating projections
            let (mut a, mut b) = (best.1, best.2);
            for _ in 0..200 {
                a = parts[i].project(b).nearest();
                b = parts[j].project(a).nearest();
            }
            if a.dist(b) <= tol.max(1e-7 * shape.scale()) {
                return Some((Witness { x: a.midpoint(b), y1: a, y2: b }, format!("components {i} and {j} touch")));
            }
        }
    }
    for ch in comps.chains() {
        for (i, piece) in ch.pieces.iter().enumerate() {
            let prev = if i > 0 { Some(&ch.pieces[i - 1]) } else if ch.closed { ch.pieces.last() } else { None };
            if let Some(prev) = prev {
                let jump = crate::geometry::tangent_jump(prev.end_tangent(), piece.start_tangent());
                if jump > G1_TOL {
                    let v = piece.start();
                    let e = 1e-3 * shape.scale().min(prev.length()).min(piece.length());
                    return Some((
                        Witness { x: v, y1: prev.point_at(1.0 - e / prev.length()), y2: piece.point_at(e / piece.length()) },
                        format!("tangent jump {jump:.3e} rad"),
                    ));
                }
            }
        }
        for (v, jump) in ch.joints() {
            if jump > CORNER_TOL {
                return Some((Witness { x: v, y1: v, y2: v }, format!("polycurve corner {jump:.3e} rad")));
            }
        }
    }
    None
}

/// Brackets the reach of `shape`.
pub fn estimate_reach(shape: &Shape, params: &ReachParams) -> ReachEstimate {
    let kappa = curvature_bound(shape);
    if let Some((w, reason)) = zero_reach(shape) {
        return ReachEstimate { lower: 0.0, upper: 0.0, witness: Some(w), probes: 0, curvature_bound: kappa, reason };
    }
    let step = sample_step(shape, params.samples);
    let samples = shape.sample(step);
    let rays = normal_rays(shape, &samples, params.fan);
    let probe = Prober::new(shape, step);
    let reaches: Vec<f64> = rays.par_iter().map(|r| probe.ray_reach(r)).collect();
    let (mut upper, mut arg) = (f64::INFINITY, None);
    for (k, &t) in reaches.iter().enumerate() {
        if t < upper {
            upper = t;
            arg = Some(k);
        }
    }
    let mut reason = "normal rays".to_string();
    let mut witness = arg.map(|k| probe.witness_at(&rays[k], upper));
    if kappa < upper {
        upper = kappa;
        reason = "curvature".into();
        witness = None;
    }
    if upper.is_infinite() {
        return ReachEstimate { lower: f64::INFINITY, upper, witness: None, probes: rays.len(), curvature_bound: kappa, reason: "convex".into() };
    }
    let (mut lo, mut hi) = (0.0, upper);
    for _ in 0..params.levels {
        let mid = 0.5 * (lo + hi);
        if rays_keep_feet(&probe, &rays, mid).is_none() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if rays_keep_feet(&probe, &rays, upper * (1.0 - 1e-9)).is_none() {
        lo = upper;
    }
    ReachEstimate { lower: lo, upper, witness, probes: rays.len(), curvature_bound: kappa, reason }
}

fn rays_keep_feet(probe: &Prober, rays: &[Ray], r: f64) -> Option<Witness> {
    rays.par_iter()
        .position_first(|ray| !probe.keeps_foot(ray, r))
        .map(|k| probe.witness_at(&rays[k], r))
}

/// Whether no probe point of `{0 < d < r}` has two nearest points.
pub fn is_proximally_smooth(shape: &Shape, r: f64, probes: usize) -> (bool, Option<Witness>) {
    if let Some((w, _)) = zero_reach(shape) {
        return (false, Some(w));
    }
    let step = sample_step(shape, probes);
    let samples = shape.sample(step);
    let rays = normal_rays(shape, &samples, 64);
    let probe = Prober::new(shape, step);
    match rays_keep_feet(&probe, &rays, r * (1.0 - 1e-9)) {
        None => (true, None),
        Some(w) => (false, Some(w)),
    }
}

/// Whether every sampled point of the set touches some ball of radius `r`
/// whose interior misses the set.
pub fn exterior_sphere_check(shape: &Shape, r: f64, samples: usize) -> (bool, Option<Witness>) {
    let step = sample_step(shape, samples);
    let tol = 1e-9 * (1.0 + r);
    let fan = 360;
    let failures: Vec<Point2> = shape
        .sample(step)
        .par_iter()
        .filter_map(|s| {
            let mut dirs: Vec<UnitVec> = Vec::new();
            if let Some(n) = s.normal() {
                dirs.push(n);
                dirs.push(n.neg());
            }
            dirs.extend((0..fan).map(|k| UnitVec::from_angle(TAU * k as f64 / fan as f64)));
            let ok = dirs.iter().any(|u| shape.distance(s.point + u.as_vec() * r) >= r - tol);
            (!ok).then_some(s.point)
        })
        .collect();
    match failures.first() {
        None => (true, None),
        Some(&x) => {
            let near = shape.project(x + Point2::new(0.0, r)).nearest();
            (false, Some(Witness { x, y1: x, y2: near }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    fn circle() -> Shape {
        Shape::new("circle", vec![Primitive::circle(p(0.0, 0.0), 1.0).unwrap()]).unwrap()
    }

    fn abs_graph() -> Shape {
        Shape::new(
            "abs",
            vec![Primitive::segment(p(-1.0, 1.0), p(0.0, 0.0)).unwrap(), Primitive::segment(p(0.0, 0.0), p(1.0, 1.0)).unwrap()],
        )
        .unwrap()
    }

    fn tangent_circles() -> Shape {
        Shape::new(
            "tangent",
            vec![Primitive::circle(p(-1.0, 0.0), 1.0).unwrap(), Primitive::circle(p(1.0, 0.0), 1.0).unwrap()],
        )
        .unwrap()
    }

    /// Brute-force oracle: the double-projection radius of the unit circle
    /// is the distance from any circle point to the center.
    #[test]
    fn circle_reach_is_one() {
        let center = circle().project(p(0.0, 0.0));
        assert!(center.continuum);
        assert!((center.distance - 1.0).abs() < 1e-15);
        let e = estimate_reach(&circle(), &ReachParams::default());
        assert!(e.lower >= 1.0 - 1e-3 && e.upper <= 1.0 + 1e-3, "{e:?}");
        assert!(e.lower <= e.upper);
    }

    /// Oracle: every bisector point beyond distance one has two projections.
    #[test]
    fn two_points_reach_is_one() {
        let s = Shape::new("two", vec![Primitive::point(p(-1.0, 0.0)), Primitive::point(p(1.0, 0.0))]).unwrap();
        for y in [0.0, 0.5, 3.0] {
            let r = s.project(p(0.0, y));
            assert_eq!(r.multiplicity, 2);
            assert!(r.distance >= 1.0);
        }
        let e = estimate_reach(&s, &ReachParams::default());
        assert!((e.lower - 1.0).abs() < 1e-3 && (e.upper - 1.0).abs() < 1e-3, "{e:?}");
        let w = e.witness.unwrap();
        assert!((w.x.dist(w.y1) - e.upper).abs() < 1e-9);
    }

    #[test]
    fn tangent_circles_have_zero_reach() {
        let e = estimate_reach(&tangent_circles(), &ReachParams::default());
        assert_eq!((e.lower, e.upper), (0.0, 0.0));
        assert!(e.witness.unwrap().x.norm() < 1e-6);
    }

    #[test]
    fn convex_pieces_have_infinite_reach() {
        for s in [
            Shape::new("seg", vec![Primitive::segment(p(-1.0, 0.0), p(1.0, 0.0)).unwrap()]).unwrap(),
            Shape::new("pt", vec![Primitive::point(p(0.0, 0.0))]).unwrap(),
        ] {
            let e = estimate_reach(&s, &ReachParams::default());
            assert!(e.upper.is_infinite() && e.lower.is_infinite());
        }
    }

    #[test]
    fn hook_reach_is_one() {
        let s = Shape::new(
            "hook",
            vec![
                Primitive::segment(p(-1.0, 1.0), p(0.0, 1.0)).unwrap(),
                Primitive::arc(p(0.0, 0.0), 1.0, 0.0, FRAC_PI_2).unwrap(),
                Primitive::segment(p(1.0, 0.0), p(1.0, -1.0)).unwrap(),
            ],
        )
        .unwrap();
        let e = estimate_reach(&s, &ReachParams::default());
        assert!((e.upper - 1.0).abs() < 1e-3 && (e.lower - 1.0).abs() < 1e-3, "{e:?}");
    }

    #[test]
    fn proximal_smoothness_of_circle() {
        assert!(is_proximally_smooth(&circle(), 0.9, 500).0);
        let (ok, w) = is_proximally_smooth(&circle(), 1.1, 500);
        assert!(!ok);
        assert!(w.unwrap().x.norm() < 0.2);
    }

    #[test]
    fn abs_graph_fails_smoothness_but_has_exterior_spheres() {
        let (ok, w) = is_proximally_smooth(&abs_graph(), 0.1, 500);
        assert!(!ok);
        let w = w.unwrap();
        assert!(w.x.x.abs() < 1e-6 && w.x.y >= 0.0);
        assert!(exterior_sphere_check(&abs_graph(), 0.5, 500).0);
    }

    #[test]
    fn tangent_circles_separate_the_two_notions() {
        assert!(exterior_sphere_check(&tangent_circles(), 0.5, 500).0);
        assert!(!is_proximally_smooth(&tangent_circles(), 0.5, 500).0);
        assert!(exterior_sphere_check(&circle(), 0.5, 500).0);
    }

    #[test]
    fn smoothness_is_monotone_in_r() {
        let s = circle();
        let ladder = [0.2, 0.5, 0.8, 0.95, 1.05, 1.5];
        let flags: Vec<bool> = ladder.iter().map(|&r| is_proximally_smooth(&s, r, 300).0).collect();
        for w in flags.windows(2) {
            assert!(w[0] || !w[1], "{flags:?}");
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]

        // an open arc has reach R, or half its end gap when it sweeps past a half turn
        #[test]
        fn open_arc_reach(start in -3.0f64..3.0, sweep in 0.2f64..6.0, radius in 0.5f64..2.0) {
            let s = Shape::new("arc", vec![Primitive::arc(Point2::new(0.3, -0.2), radius, start, start + sweep).unwrap()]).unwrap();
            let e = estimate_reach(&s, &ReachParams::default());
            let radius = if sweep <= PI { radius } else { radius * (0.5 * (TAU - sweep)).sin() };
            if sweep > PI {
                let w = e.witness.unwrap();
                proptest::prop_assert!(w.y1.dist(w.y2) > 1e-3, "{w:?}");
            }
            // endpoint fans resolve directions to TAU/64, a second order error in the reach
            proptest::prop_assert!((e.lower - radius).abs() <= 2e-3 * radius && e.upper >= radius * (1.0 - 1e-6), "{e:?}");
            proptest::prop_assert!(e.upper - e.lower <= 1e-3 * radius, "{e:?}");
        }
    }
}
