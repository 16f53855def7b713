//! Normal distance λ along the boundary of a domain, its constancy test, and
//! the verifiers for domains whose high ridge equals their cut locus.

use rayon::prelude::*;
use serde::Serialize;

use crate::distance::{Domain, Regularity};
use crate::error::{Error, Result};
use crate::geometry::{Point2, UnitVec, G1_TOL};
use crate::parallel::{contour_loops, snapped_box};
use crate::report::real;
use crate::singular::{component_count, hausdorff, inclusion_chain_report, PointIndex, SingularField};

/// Isoperimetric ratio accepted as a disk certificate.
pub const ISO_TOL: f64 = 1e-2;

fn on_boundary_tol(domain: &Domain) -> f64 {
    1e-6 * domain.boundary.scale()
}

/// Distance travelled from `y` along the inner normal `nu` while `y` stays
/// the projection of the moving point.
///
/// Bisection on `[0, T]` with `T` an upper bound of the inradius plus `2h`,
/// to resolution `1e-4·T`. A point passes while its distance equals the
/// travelled length and all its projections lie within `3h` of `y`.
pub fn lambda_at(domain: &Domain, y: Point2, nu: UnitVec, h: f64) -> Result<f64> {
    let tol = on_boundary_tol(domain);
    if domain.boundary.distance(y) > tol {
        return Err(Error::NotOnSet(y));
    }
    for c in domain.curves() {
        if c.corners.iter().any(|&(i, j)| j.abs() > G1_TOL && c.samples[i].point.dist(y) <= tol) {
            return Err(Error::NormalUndefined(y));
        }
    }
    let b = domain.bbox();
    let t_max = 0.5 * b.width().min(b.height()) + 2.0 * h;
    let keeps = |t: f64| {
        let r = domain.boundary.project(y + nu.as_vec() * t);
        !r.continuum && (r.distance - t).abs() <= 1e-3 * h && r.projections.iter().all(|q| q.dist(y) <= 3.0 * h)
    };
    if keeps(t_max) {
        return Ok(t_max);
    }
    let (mut lo, mut hi) = (0.0, t_max);
    while hi - lo > 1e-4 * t_max {
        let m = 0.5 * (lo + hi);
        if keeps(m) {
            lo = m;
        } else {
            hi = m;
        }
    }
    Ok(lo)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct LambdaSample {
    /// Arc-length position on its loop.
    pub s: f64,
    pub loop_index: usize,
    pub y: Point2,
    pub nu: UnitVec,
    pub lambda: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LambdaProfile {
    pub samples: Vec<LambdaSample>,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub constant: bool,
    /// Spread allowed by the constancy verdict.
    pub tol: f64,
    pub excluded_corners: usize,
    pub note: Option<String>,
}

/// λ at about `n` boundary points spread by arc length over all loops.
/// Corner samples are skipped and counted.
pub fn lambda_profile(domain: &Domain, n: usize, h: f64) -> Result<LambdaProfile> {
    let total = domain.perimeter();
    let mut picks = Vec::new();
    let mut excluded = 0;
    for (li, c) in domain.curves().enumerate() {
        let k = ((n as f64 * c.length / total).round() as usize).max(1);
        for j in 0..k {
            let s = (j as f64 + 0.5) * c.length / k as f64;
            let i = c.samples.partition_point(|q| q.s < s).min(c.samples.len() - 1);
            if c.is_corner(i, G1_TOL) {
                excluded += 1;
                continue;
            }
            let q = &c.samples[i];
            picks.push((li, q.s, q.point, q.tangent.perp()));
        }
    }
    let samples = picks
        .par_iter()
        .map(|&(loop_index, s, y, nu)| Ok(LambdaSample { s, loop_index, y, nu, lambda: lambda_at(domain, y, nu, h)? }))
        .collect::<Result<Vec<_>>>()?;
    if samples.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let min = samples.iter().map(|s| s.lambda).fold(f64::INFINITY, f64::min);
    let max = samples.iter().map(|s| s.lambda).fold(0.0, f64::max);
    let mean = samples.iter().map(|s| s.lambda).sum::<f64>() / samples.len() as f64;
    let tol = (2.0 * h).max(1e-2 * mean);
    let note = domain
        .has_corners()
        .then(|| format!("{excluded} corner samples excluded; the constancy verdict covers the smooth boundary only"));
    Ok(LambdaProfile { samples, min, max, mean, constant: max - min <= tol, tol, excluded_corners: excluded, note })
}

impl LambdaProfile {
    /// Rows `s,x,y,lambda`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,x,y,lambda\n");
        for s in &self.samples {
            out.push_str(&format!("{},{},{},{}\n", s.s, s.y.x, s.y.y, s.lambda));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ShapeClass {
    Singleton,
    ClosedCurve,
    CurveWithBoundary,
    Other,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifierReport {
    pub label: String,
    pub h: f64,
    pub hypothesis_ok: bool,
    /// Two-sided distance between the high ridge and the cut locus.
    #[serde(serialize_with = "real")]
    pub high_cut_distance: f64,
    pub s_points: Vec<Point2>,
    pub rho: f64,
    #[serde(serialize_with = "crate::report::opt_real")]
    pub tube_hausdorff: Option<f64>,
    pub shape_class: Option<ShapeClass>,
    pub s_diameter: f64,
    pub isoperimetric_ratio: f64,
    /// For C2 domains: whether the class is a singleton or a closed curve.
    pub class_consistent: Option<bool>,
    pub disk_verdict: Option<bool>,
    pub ball_verdict: Option<bool>,
    /// Largest curvature jump along the boundary, for the ball verifier.
    #[serde(serialize_with = "crate::report::opt_real")]
    pub curvature_defect: Option<f64>,
    pub applicable: bool,
    pub notes: Vec<String>,
}

fn diameter(pts: &[Point2]) -> f64 {
    let mut best: f64 = 0.0;
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            best = best.max(a.dist(*b));
        }
    }
    best
}

fn farthest_pair(pts: &[Point2]) -> (Point2, Point2) {
    let mut best = (pts[0], pts[0], 0.0);
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            if a.dist(*b) > best.2 {
                best = (*a, *b, a.dist(*b));
            }
        }
    }
    (best.0, best.1)
}

fn boundary_points(domain: &Domain) -> Vec<Point2> {
    domain.curves().flat_map(|c| c.points()).collect()
}

pub fn isoperimetric_ratio(domain: &Domain) -> f64 {
    domain.perimeter().powi(2) / (4.0 * std::f64::consts::PI * domain.area())
}

/// Checks `high = Cut`; when it holds, rebuilds the `ρ`-tube of
/// `S = Cut` and compares its boundary with the domain boundary.
pub fn verify_high_equals_cut(domain: &Domain, sf: &SingularField) -> Result<VerifierReport> {
    let h = sf.h;
    let rep = inclusion_chain_report(domain, sf)?;
    let dist = hausdorff(&rep.high_ridge, &rep.cut);
    let hypothesis_ok = dist <= 2.0 * h * (1.0 + 1e-9);
    let iso = isoperimetric_ratio(domain);
    let s = rep.cut.clone();
    let s_diameter = diameter(&s);
    let mut out = VerifierReport {
        label: domain.label.clone(),
        h,
        hypothesis_ok,
        high_cut_distance: dist,
        s_points: s.clone(),
        rho: rep.rho,
        tube_hausdorff: None,
        shape_class: None,
        s_diameter,
        isoperimetric_ratio: iso,
        class_consistent: None,
        disk_verdict: None,
        ball_verdict: None,
        curvature_defect: None,
        applicable: hypothesis_ok,
        notes: Vec::new(),
    };
    if !hypothesis_ok {
        out.notes.push(format!("high ridge and cut locus differ by {dist:.4} > 2h"));
        return Ok(out);
    }
    let idx = PointIndex::new(&s);
    let rho = rep.rho;
    let f = |x: Point2| idx.distance(x) - rho;
    let bbox = snapped_box(&domain.bbox().expand(3.0 * h), h);
    let tube: Vec<Point2> = contour_loops(&f, &bbox, h)?.into_iter().flatten().collect();
    out.tube_hausdorff = Some(hausdorff(&boundary_points(domain), &tube));
    let info = component_count(&s, 2.0 * h);
    let class = if s_diameter <= 3.0 * h {
        ShapeClass::Singleton
    } else if info.cycle {
        ShapeClass::ClosedCurve
    } else if info.count == 1 {
        ShapeClass::CurveWithBoundary
    } else {
        ShapeClass::Other
    };
    out.shape_class = Some(class);
    if domain.regularity == Regularity::C2 {
        out.class_consistent = Some(matches!(class, ShapeClass::Singleton | ShapeClass::ClosedCurve));
        if domain.simply_connected() {
            out.disk_verdict = Some(class == ShapeClass::Singleton && iso <= 1.0 + ISO_TOL);
        }
    }
    Ok(out)
}

/// Largest curvature difference across two sample steps, away from corners.
/// A curvature step shared out over one joint sample is recovered in full.
pub fn curvature_defect(domain: &Domain) -> f64 {
    let mut best: f64 = 0.0;
    for c in domain.curves() {
        let n = c.samples.len();
        for i in 1..n.saturating_sub(1) {
            if c.is_corner(i - 1, G1_TOL) || c.is_corner(i, G1_TOL) || c.is_corner(i + 1, G1_TOL) {
                continue;
            }
            best = best.max((c.samples[i + 1].curvature - c.samples[i - 1].curvature).abs());
        }
    }
    best
}

/// Ball verifier for convex domains: under `high = Cut` and C2 regularity
/// the domain must be a disk. Otherwise reports a stadium diagnostic.
pub fn verify_convex_ball(domain: &Domain, sf: &SingularField) -> Result<VerifierReport> {
    let tol = 1e-6;
    if !domain.simply_connected() {
        return Err(Error::NotConvex(format!("{} has holes", domain.label)));
    }
    let c = &domain.outer;
    if c.samples.iter().any(|q| q.curvature < -tol) || c.corners.iter().any(|k| k.1 < -tol) {
        return Err(Error::NotConvex(format!("{} turns clockwise somewhere", domain.label)));
    }
    if (c.total_turning() - std::f64::consts::TAU).abs() > 1e-6 {
        return Err(Error::NotConvex(format!("{} total turning is not 2π", domain.label)));
    }
    let mut out = verify_high_equals_cut(domain, sf)?;
    let defect = curvature_defect(domain);
    out.curvature_defect = Some(defect);
    if !out.hypothesis_ok {
        out.applicable = false;
        out.notes.push("high ridge differs from the cut locus: theorem inapplicable".into());
        return Ok(out);
    }
    let c2 = domain.regularity == Regularity::C2 && defect <= 0.1 && !domain.has_corners();
    if c2 {
        out.ball_verdict = Some(out.s_diameter <= 3.0 * sf.h && out.isoperimetric_ratio <= 1.0 + ISO_TOL);
    } else {
        out.applicable = false;
        out.notes.push(format!("not C², theorem inapplicable: curvature jump {defect:.4}"));
    }
    if out.s_diameter > 3.0 * sf.h {
        let (a, b) = farthest_pair(&out.s_points);
        out.notes.push(format!(
            "stadium-like: S spans ({:.4}, {:.4}) to ({:.4}, {:.4}); curvature jump {defect:.4} where caps meet straights",
            a.x, a.y, b.x, b.y
        ));
    }
    Ok(out)
}
