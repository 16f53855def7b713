use serde::{Deserialize, Serialize};

use super::shape::{polygon_area, tangent_jump, Piece};
use super::{Point2, Primitive, UnitVec};
use crate::error::{Error, Result};

/// Joint tolerance for G¹ chains.
pub const G1_TOL: f64 = 1e-6;

/// Polycurve vertices turning more than this are reported as corners.
pub const CORNER_TOL: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub s: f64,
    pub point: Point2,
    pub tangent: UnitVec,
    pub curvature: f64,
}

/// Arc-length sampled planar curve.
///
/// Carries the cumulative turning angle `turning[i]`, with
/// `tangent = (cos φ, sin φ)` at every sample. Closed curves repeat the
/// first point at `s = length`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcCurve {
    pub samples: Vec<CurveSample>,
    pub length: f64,
    pub closed: bool,
    pub turning: Vec<f64>,
    /// Sample indices where the tangent jumps, with the signed jump.
    pub corners: Vec<(usize, f64)>,
}

/// Evaluation of a curve at one arc-length value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub point: Point2,
    pub tangent: UnitVec,
    pub normal: UnitVec,
    pub curvature: f64,
}

fn signed_jump(a: UnitVec, b: UnitVec) -> f64 {
    a.as_vec().cross(b.as_vec()).atan2(a.as_vec().dot(b.as_vec()))
}

struct Builder {
    samples: Vec<CurveSample>,
    turning: Vec<f64>,
    corners: Vec<(usize, f64)>,
    s: f64,
    phi: f64,
}

impl Builder {
    fn push(&mut self, point: Point2, phi: f64, curvature: f64) {
        self.samples.push(CurveSample { s: self.s, point, tangent: UnitVec::from_angle(phi), curvature });
        self.turning.push(phi);
    }

    /// Adds the samples of one piece after its start point.
    fn piece(&mut self, piece: &Piece, ds: f64) {
        match &piece.prim {
            Primitive::Polycurve(pc) => {
                let mut order: Vec<Point2> = pc.vertices().to_vec();
                if pc.is_closed() {
                    order.push(order[0]);
                }
                if piece.reversed {
                    order.reverse();
                }
                for e in 0..order.len() - 1 {
                    let (a, b) = (order[e], order[e + 1]);
                    let l = a.dist(b);
                    let dir = UnitVec::new(b - a).unwrap();
                    let k = ((l / ds).ceil() as usize).max(1);
                    for j in 1..=k {
                        self.s += l / k as f64;
                        let p = if j == k { b } else { a.lerp(b, j as f64 / k as f64) };
                        if j < k {
                            self.push(p, self.phi, 0.0);
                            continue;
                        }
                        if e + 2 < order.len() {
                            let next = UnitVec::new(order[e + 2] - b).unwrap();
                            let jump = signed_jump(dir, next);
                            let l2 = b.dist(order[e + 2]);
                            let kappa = jump / (0.5 * (l + l2));
                            self.push(b, self.phi + 0.5 * jump, kappa);
                            if jump.abs() > CORNER_TOL {
                                self.corners.push((self.samples.len() - 1, jump));
                            }
                            self.phi += jump;
                        } else {
                            self.push(b, self.phi, 0.0);
                        }
                    }
                }
            }
            _ => {
                let l = piece.length();
                let kappa = piece.curvature();
                let k = ((l / ds).ceil() as usize).max(1);
                for j in 1..=k {
                    let u = j as f64 / k as f64;
                    // trapezoid of a constant curvature over the interval
                    self.phi += kappa * l / k as f64;
                    self.s += l / k as f64;
                    self.push(piece.point_at(u), self.phi, kappa);
                }
            }
        }
    }
}

/// Resamples a G¹ chain by arc length. Joint tangent jumps above
/// [`G1_TOL`] are rejected.
pub fn build_arclength(chain: &[Piece], ds: f64) -> Result<ArcCurve> {
    build_arclength_with(chain, ds, G1_TOL)
}

/// As [`build_arclength`] but tolerating joint jumps up to `max_jump`;
/// jumps above [`G1_TOL`] are recorded in `corners`.
pub fn build_arclength_with(chain: &[Piece], ds: f64, max_jump: f64) -> Result<ArcCurve> {
    if chain.is_empty() || !(ds > 0.0) {
        return Err(Error::InvalidPrimitive("empty chain or non-positive step".into()));
    }
    let start = chain[0].start();
    let end = chain.last().unwrap().end();
    let scale = chain.iter().map(Piece::length).sum::<f64>().max(1e-12);
    let closed = start.dist(end) <= 1e-9 * scale;
    let first_t = first_tangent(&chain[0]);
    let mut b = Builder { samples: Vec::new(), turning: Vec::new(), corners: Vec::new(), s: 0.0, phi: first_t.angle() };
    let initial_phi = b.phi;
    b.push(start, b.phi, 0.0);
    for (i, piece) in chain.iter().enumerate() {
        if i > 0 {
            let prev = &chain[i - 1];
            if prev.end().dist(piece.start()) > 1e-9 * scale {
                return Err(Error::InvalidPrimitive(format!("chain gap before piece {i}")));
            }
            let jump = signed_jump(last_tangent(prev), first_tangent(piece));
            if jump.abs() > max_jump {
                return Err(Error::NotG1 { joint: i, jump: jump.abs() });
            }
            let idx = b.samples.len() - 1;
            let kin = b.samples[idx].curvature;
            b.samples[idx].curvature = 0.5 * (kin + start_curvature(piece));
            if jump.abs() > G1_TOL {
                b.samples[idx].tangent = UnitVec::from_angle(b.phi + 0.5 * jump);
                b.turning[idx] = b.phi + 0.5 * jump;
                b.corners.push((idx, jump));
            }
            b.phi += jump;
        }
        b.piece(piece, ds);
    }
    // curvature at the very first sample
    b.samples[0].curvature = start_curvature(&chain[0]);
    if closed {
        let n = b.samples.len() - 1;
        b.samples[n].point = start;
        let last = chain.last().unwrap();
        let jump = signed_jump(last_tangent(last), first_t);
        let wrap_inside_polycurve = chain.len() == 1 && matches!(chain[0].prim, Primitive::Polycurve(_));
        if wrap_inside_polycurve {
            let l_first = b.samples[1].s;
            let l_last = length_before_end(&b.samples);
            let kappa = jump / (0.5 * (l_first + l_last));
            b.samples[0].curvature = kappa;
            b.samples[n].curvature = kappa;
        } else {
            if jump.abs() > max_jump {
                return Err(Error::NotG1 { joint: chain.len(), jump: jump.abs() });
            }
            let avg = 0.5 * (b.samples[n].curvature + b.samples[0].curvature);
            b.samples[0].curvature = avg;
            b.samples[n].curvature = avg;
        }
        if jump.abs() > G1_TOL {
            let phi0 = initial_phi - 0.5 * jump;
            b.samples[0].tangent = UnitVec::from_angle(phi0);
            b.turning[0] = phi0;
            b.turning[n] = b.phi + 0.5 * jump;
            b.samples[n].tangent = UnitVec::from_angle(b.turning[n]);
            if !wrap_inside_polycurve || jump.abs() > CORNER_TOL {
                b.corners.push((0, jump));
            }
        }
    } else {
        let n = b.samples.len() - 1;
        b.samples[n].curvature = end_curvature(chain.last().unwrap());
    }
    let length = b.s;
    let n = b.samples.len() - 1;
    b.samples[n].s = length;
    Ok(ArcCurve { samples: b.samples, length, closed, turning: b.turning, corners: b.corners })
}

fn length_before_end(samples: &[CurveSample]) -> f64 {
    let n = samples.len();
    samples[n - 1].s - samples[n - 2].s
}

fn first_tangent(p: &Piece) -> UnitVec {
    p.start_tangent()
}

fn last_tangent(p: &Piece) -> UnitVec {
    p.end_tangent()
}

fn start_curvature(p: &Piece) -> f64 {
    match p.prim {
        Primitive::Polycurve(_) => 0.0,
        _ => p.curvature(),
    }
}

fn end_curvature(p: &Piece) -> f64 {
    start_curvature(p)
}

impl ArcCurve {
    pub fn points(&self) -> Vec<Point2> {
        let n = if self.closed { self.samples.len() - 1 } else { self.samples.len() };
        self.samples[..n].iter().map(|s| s.point).collect()
    }

    /// Evaluates by linear interpolation between bracketing samples.
    pub fn eval(&self, s: f64) -> Result<CurvePoint> {
        let s = if self.closed {
            s.rem_euclid(self.length)
        } else if s < -1e-12 || s > self.length + 1e-12 {
            return Err(Error::OutOfRange { s, len: self.length });
        } else {
            s.clamp(0.0, self.length)
        };
        let idx = self.samples.partition_point(|c| c.s <= s);
        let (i, j) = if idx == 0 {
            (0, 1.min(self.samples.len() - 1))
        } else if idx >= self.samples.len() {
            (self.samples.len() - 2, self.samples.len() - 1)
        } else {
            (idx - 1, idx)
        };
        let (a, b) = (&self.samples[i], &self.samples[j]);
        let t = if b.s > a.s { ((s - a.s) / (b.s - a.s)).clamp(0.0, 1.0) } else { 0.0 };
        let phi = self.turning[i] + t * (self.turning[j] - self.turning[i]);
        let tangent = UnitVec::from_angle(phi);
        Ok(CurvePoint {
            point: a.point.lerp(b.point, t),
            tangent,
            normal: tangent.perp(),
            curvature: a.curvature + t * (b.curvature - a.curvature),
        })
    }

    /// Signed enclosed area (positive for counterclockwise closed curves).
    pub fn signed_area(&self) -> f64 {
        polygon_area(&self.points())
    }

    pub fn max_corner_jump(&self) -> f64 {
        self.corners.iter().map(|c| c.1.abs()).fold(0.0, f64::max)
    }

    /// Total turning `φ(L) − φ(0)`.
    pub fn total_turning(&self) -> f64 {
        self.turning.last().unwrap() - self.turning[0]
    }

    /// Largest curvature difference between consecutive samples away from corners.
    pub fn max_curvature_jump(&self) -> f64 {
        let corner = |i: usize| self.corners.iter().any(|c| c.0 == i);
        self.samples
            .windows(2)
            .enumerate()
            .filter(|(i, _)| !corner(*i) && !corner(i + 1))
            .map(|(_, w)| (w[1].curvature - w[0].curvature).abs())
            .fold(0.0, f64::max)
    }

    /// Reversed traversal.
    pub fn reversed(&self) -> ArcCurve {
        let n = self.samples.len();
        let samples = self
            .samples
            .iter()
            .rev()
            .map(|c| CurveSample { s: self.length - c.s, point: c.point, tangent: c.tangent.neg(), curvature: -c.curvature })
            .collect();
        let turning = self.turning.iter().rev().map(|p| p + std::f64::consts::PI).collect();
        let corners = self.corners.iter().map(|(i, j)| ((n - 1 - i) % n, -j)).collect();
        ArcCurve { samples, length: self.length, closed: self.closed, turning, corners }
    }

    /// Whether the tangent jump at a sample exceeds `tol`.
    pub fn is_corner(&self, i: usize, tol: f64) -> bool {
        let n = self.samples.len();
        self.corners.iter().any(|&(k, j)| j.abs() > tol && (k == i || (self.closed && k == 0 && i == n - 1)))
    }
}

/// Tangent jump helper re-exported for callers assembling chains.
pub fn joint_jump(a: &Piece, b: &Piece) -> f64 {
    tangent_jump(a.end_tangent(), b.start_tangent())
}
