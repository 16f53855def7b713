use serde::Serialize;

use super::contour::{snapped_box, ScalarGrid};
use crate::error::{Error, Result};
use crate::geometry::{ArcCurve, Point2, SampleKind, Shape};
use crate::reach::{estimate_reach, ReachParams};

/// Parallel parametrization of one tube boundary loop.
#[derive(Debug, Clone, Serialize)]
pub struct ParallelParam {
    pub r: f64,
    /// Arc length of each sample on the loop.
    pub s: Vec<f64>,
    /// `η = γ + r·ν` with `ν` the normal toward the tube interior.
    pub eta: Vec<Point2>,
    /// `μ = 1 − r·κ`, `κ` positive when curving toward the core.
    pub mu: Vec<f64>,
    /// Samples sitting on a tangent corner of the loop (excluded from minima).
    pub corner: Vec<bool>,
    pub min_mu: f64,
}

/// Points `γ(s) + r·ν(s)` of a tube boundary loop.
///
/// With a probe shape the inward side is decided by comparing the distance
/// on both sides of every sample; without one the left normal is used.
pub fn recover_core(gamma: &ArcCurve, r: f64, probe: Option<&Shape>) -> Result<Vec<Point2>> {
    let mut sign = 1.0;
    if let Some(shape) = probe {
        let eps = 1e-3 * r;
        let (mut left, mut right) = (0usize, 0usize);
        for c in &gamma.samples {
            let n = c.tangent.perp().as_vec();
            let (dl, dr) = (shape.distance(c.point + n * eps), shape.distance(c.point - n * eps));
            if dl < dr - 1e-12 {
                left += 1;
            } else if dr < dl - 1e-12 {
                right += 1;
            }
        }
        if left == right {
            return Err(Error::NormalAmbiguous(gamma.samples[0].point));
        }
        if right > left {
            sign = -1.0;
        }
    }
    Ok(gamma.samples.iter().map(|c| c.point + c.tangent.perp().as_vec() * (sign * r)).collect())
}

/// `μ = 1 − rκ` along a loop with the tube on its left.
pub fn mu_profile(gamma: &ArcCurve, r: f64) -> ParallelParam {
    let n = gamma.samples.len();
    let corner: Vec<bool> = (0..n).map(|i| gamma.is_corner(i, 1e-6)).collect();
    let mu: Vec<f64> = gamma.samples.iter().map(|c| 1.0 - r * c.curvature).collect();
    let min_mu = mu.iter().zip(&corner).filter(|(_, c)| !**c).map(|(m, _)| *m).fold(f64::INFINITY, f64::min);
    ParallelParam {
        r,
        s: gamma.samples.iter().map(|c| c.s).collect(),
        eta: recover_core(gamma, r, None).unwrap_or_default(),
        mu,
        corner,
        min_mu,
    }
}

impl ParallelParam {
    /// Minimum of `1 − 2rκ` over samples whose core point is a manifold
    /// interior point of `core` (not an endpoint or isolated point).
    pub fn interior_min(&self, core: &Shape, tol: f64) -> f64 {
        let ends: Vec<Point2> = core
            .sample(f64::INFINITY)
            .into_iter()
            .filter(|s| matches!(s.kind, SampleKind::Isolated | SampleKind::Endpoint(_)))
            .map(|s| s.point)
            .collect();
        self.mu
            .iter()
            .zip(&self.eta)
            .zip(&self.corner)
            .filter(|((_, e), c)| !**c && ends.iter().all(|q| q.dist(**e) > tol))
            .map(|((m, _), _)| 2.0 * m - 1.0)
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TubeArea {
    pub h: f64,
    pub radii: Vec<f64>,
    pub areas: Vec<f64>,
    /// `c₀ + c₁r + c₂r²` least squares coefficients.
    pub fit: [f64; 3],
    /// Largest absolute fit residual.
    pub residual: f64,
}

/// Area of `{d < r}` for each radius, plus a quadratic fit in `r`.
pub fn tube_area(shape: &Shape, radii: &[f64]) -> Result<TubeArea> {
    if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::InvalidPrimitive("radii must be positive".into()));
    }
    let reach = estimate_reach(shape, &ReachParams::default());
    let rmax = radii.iter().copied().fold(0.0, f64::max);
    let rmin = radii.iter().copied().fold(f64::INFINITY, f64::min);
    if rmax >= reach.lower {
        return Err(Error::ReachExceeded { r: rmax, reach: reach.lower });
    }
    let h = (rmin / 20.0).min(0.01);
    let bbox = snapped_box(&shape.bbox().expand(rmax + 2.0 * h), h);
    let dist = ScalarGrid::sample(&|p| shape.distance(p), &bbox, h)?;
    let areas: Vec<f64> = radii
        .iter()
        .map(|&r| {
            let g = ScalarGrid { origin: dist.origin, h, nx: dist.nx, ny: dist.ny, v: dist.v.iter().map(|d| d - r).collect() };
            g.sublevel_area()
        })
        .collect();
    let fit = quadratic_fit(radii, &areas);
    let residual = radii
        .iter()
        .zip(&areas)
        .map(|(r, a)| (fit[0] + fit[1] * r + fit[2] * r * r - a).abs())
        .fold(0.0, f64::max);
    Ok(TubeArea { h, radii: radii.to_vec(), areas, fit, residual })
}

/// Least squares `c₀ + c₁x + c₂x²` via the normal equations. With two
/// distinct abscissae `c₀` is pinned to zero, with one only `c₂` is fitted.
pub fn quadratic_fit(x: &[f64], y: &[f64]) -> [f64; 3] {
    let mut distinct: Vec<f64> = x.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    let basis: &[usize] = match distinct.len() {
        0 => return [0.0; 3],
        1 => &[2],
        2 => &[1, 2],
        _ => &[0, 1, 2],
    };
    let k = basis.len();
    // augmented normal equations
    let mut m = vec![vec![0.0; k + 1]; k];
    for (&xi, &yi) in x.iter().zip(y) {
        let pw = [1.0, xi, xi * xi];
        for i in 0..k {
            m[i][k] += pw[basis[i]] * yi;
            for j in 0..k {
                m[i][j] += pw[basis[i]] * pw[basis[j]];
            }
        }
    }
    for col in 0..k {
        let piv = (col..k).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs())).unwrap();
        m.swap(col, piv);
        for row in col + 1..k {
            let f = m[row][col] / m[col][col];
            for c in col..=k {
                m[row][c] -= f * m[col][c];
            }
        }
    }
    let mut sol = vec![0.0; k];
    for i in (0..k).rev() {
        let s: f64 = (i + 1..k).map(|j| m[i][j] * sol[j]).sum();
        sol[i] = (m[i][k] - s) / m[i][i];
    }
    let mut c = [0.0; 3];
    for (i, &b) in basis.iter().enumerate() {
        c[b] = sol[i];
    }
    c
}
