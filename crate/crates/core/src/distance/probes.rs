use serde::Serialize;

use super::LowDiscrepancy;
use crate::error::{Error, Result};
use crate::geometry::{BBox, Point2, Shape};
use crate::parallel::{offset_boundary, OffsetMethod};
use crate::reach::{estimate_reach, ReachParams};

/// Maximum violations of `d_{(S_r)^c} = r − d_S` inside the tube and
/// `d_{S̄_r} = d_S − r` between the tube and the reach.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub r: f64,
    #[serde(serialize_with = "crate::report::real")]
    pub reach: f64,
    pub seed: u64,
    pub inner_samples: usize,
    pub outer_samples: usize,
    pub inner_violation: f64,
    pub outer_violation: f64,
}

impl IdentityReport {
    pub fn max_violation(&self) -> f64 {
        self.inner_violation.max(self.outer_violation)
    }
}

/// Checks both complement identities at `samples` low-discrepancy points,
/// against the exact offset boundary.
pub fn check_complement_identity(shape: &Shape, r: f64, samples: usize, seed: u64) -> Result<IdentityReport> {
    let reach = estimate_reach(shape, &ReachParams::default()).lower;
    if !(r > 0.0) || r >= reach {
        return Err(Error::ReachExceeded { r, reach });
    }
    let boundary = offset_boundary(shape, r, OffsetMethod::Analytic)?.as_shape()?;
    let margin = if reach.is_finite() { reach } else { 2.0 * r };
    let bbox = shape.bbox().expand(margin);
    let seq = LowDiscrepancy::new(seed);
    let mut rep = IdentityReport {
        r,
        reach,
        seed,
        inner_samples: 0,
        outer_samples: 0,
        inner_violation: 0.0,
        outer_violation: 0.0,
    };
    for i in 0..samples {
        let x = seq.in_box(&bbox, i);
        let d = shape.distance(x);
        if d > 0.0 && d < r {
            rep.inner_samples += 1;
            rep.inner_violation = rep.inner_violation.max((boundary.distance(x) - (r - d)).abs());
        } else if d > r && d < reach {
            rep.outer_samples += 1;
            rep.outer_violation = rep.outer_violation.max((boundary.distance(x) - (d - r)).abs());
        }
    }
    Ok(rep)
}

#[derive(Debug, Clone, Serialize)]
pub struct LipschitzReport {
    pub r: f64,
    pub r_s: f64,
    pub seed: u64,
    pub pairs: usize,
    pub max_ratio: f64,
    /// `r_S / (r_S − r)`.
    pub bound: f64,
}

impl LipschitzReport {
    pub fn passes(&self) -> bool {
        self.max_ratio <= self.bound + 1e-3
    }
}

/// Largest observed `|π(x) − π(x′)| / |x − x′|` over pairs in `{0 < d < r}`.
///
/// Half the pairs are close (separation `1e-3·r`), the rest join
/// consecutive accepted points.
pub fn projection_lipschitz_probe(shape: &Shape, r: f64, r_s: f64, pairs: usize, seed: u64) -> Result<LipschitzReport> {
    if !(r > 0.0) || r >= r_s {
        return Err(Error::ReachExceeded { r, reach: r_s });
    }
    let reach = estimate_reach(shape, &ReachParams::default());
    if r_s > reach.upper * (1.0 + 1e-3) {
        return Err(Error::ReachExceeded { r: r_s, reach: reach.upper });
    }
    let bbox = shape.bbox().expand(r);
    let seq = LowDiscrepancy::new(seed);
    let in_tube = |x: Point2| {
        let d = shape.distance(x);
        d > 0.0 && d < r
    };
    let proj = |x: Point2| shape.project(x).nearest();
    let (mut done, mut max_ratio) = (0usize, 0.0f64);
    let mut prev: Option<(Point2, Point2)> = None;
    let mut i = 0usize;
    while done < pairs && i < 50 * pairs.max(1) {
        let x = seq.in_box(&bbox, i);
        i += 1;
        if !in_tube(x) {
            continue;
        }
        let px = proj(x);
        let delta = 1e-3 * r;
        let y = x + Point2::from_polar(Point2::new(0.0, 0.0), delta, seq.angle(i * 7 + 3));
        if in_tube(y) {
            max_ratio = max_ratio.max(px.dist(proj(y)) / x.dist(y));
            done += 1;
        }
        if let Some((q, pq)) = prev {
            if q.dist(x) > 0.0 {
                max_ratio = max_ratio.max(px.dist(pq) / x.dist(q));
                done += 1;
            }
        }
        prev = Some((x, px));
    }
    Ok(LipschitzReport { r, r_s, seed, pairs: done, max_ratio, bound: r_s / (r_s - r) })
}

/// Agreement of the analytic gradient with centered differences.
#[derive(Debug, Clone, Serialize)]
pub struct GradientCheck {
    pub seed: u64,
    pub checked: usize,
    pub skipped: usize,
    pub max_error: f64,
    pub step: f64,
}

/// Compares the gradient with centered differences of step `1e-5` at `n`
/// unique-projection points away from the set and from the singular set.
pub fn gradient_fd_check(shape: &Shape, n: usize, seed: u64) -> GradientCheck {
    let step = 1e-5;
    let bbox: BBox = shape.bbox().expand(0.25 * shape.scale() + 0.5);
    let seq = LowDiscrepancy::new(seed);
    let (mut checked, mut skipped, mut max_error) = (0usize, 0usize, 0.0f64);
    let mut i = 0usize;
    while checked < n && i < 50 * n.max(1) {
        let x = seq.in_box(&bbox, i);
        i += 1;
        let r = shape.project(x);
        if r.distance < 1e3 * step || !r.is_unique() {
            skipped += 1;
            continue;
        }
        let (ex, ey) = (Point2::new(step, 0.0), Point2::new(0.0, step));
        let lip = |e: Point2| shape.project(x + e).nearest().dist(shape.project(x - e).nearest()) / (2.0 * step);
        if lip(ex) > 100.0 || lip(ey) > 100.0 {
            skipped += 1;
            continue;
        }
        let g = match super::gradient(shape, x) {
            Ok(g) => g.as_vec(),
            Err(_) => {
                skipped += 1;
                continue;
            }
        };
        let fd = Point2::new(
            (shape.distance(x + ex) - shape.distance(x - ex)) / (2.0 * step),
            (shape.distance(x + ey) - shape.distance(x - ey)) / (2.0 * step),
        );
        max_error = max_error.max(fd.dist(g));
        checked += 1;
    }
    GradientCheck { seed, checked, skipped, max_error, step }
}
