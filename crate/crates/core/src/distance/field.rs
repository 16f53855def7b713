use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::Domain;
use crate::error::{Error, Result};
use crate::geometry::{BBox, Point2, ProjectionResult, Shape};

/// Default cap on grid nodes.
pub const DEFAULT_NODE_BUDGET: usize = 4_000_000;

/// Anything a grid can be evaluated against.
pub trait DistanceSource: Sync {
    fn project_with(&self, x: Point2, tie_tol: f64) -> ProjectionResult;
    fn bbox(&self) -> BBox;
    /// Membership mask for domains; `None` for plain shapes.
    fn inside(&self, _x: Point2) -> Option<bool> {
        None
    }
}

impl DistanceSource for Shape {
    fn project_with(&self, x: Point2, tie_tol: f64) -> ProjectionResult {
        Shape::project_with(self, x, tie_tol)
    }
    fn bbox(&self) -> BBox {
        Shape::bbox(self)
    }
}

impl DistanceSource for Domain {
    fn project_with(&self, x: Point2, tie_tol: f64) -> ProjectionResult {
        self.boundary.project_with(x, tie_tol)
    }
    fn bbox(&self) -> BBox {
        Domain::bbox(self)
    }
    fn inside(&self, x: Point2) -> Option<bool> {
        Some(self.contains(x))
    }
}

/// Exact distance samples on a regular grid, row major in `iy`.
#[derive(Debug, Clone, Serialize)]
pub struct DistanceField {
    pub origin: Point2,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
    pub proj_multiplicity: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inside: Option<Vec<bool>>,
}

/// Grid over `bbox` (both corners included when the extent is a multiple of `h`).
pub fn grid_transform(src: &dyn DistanceSource, bbox: &BBox, h: f64) -> Result<DistanceField> {
    grid_transform_with(src, bbox, h, DEFAULT_NODE_BUDGET)
}

pub fn grid_transform_with(src: &dyn DistanceSource, bbox: &BBox, h: f64, budget: usize) -> Result<DistanceField> {
    if !(h > 0.0) || !(bbox.width() > 0.0) || !(bbox.height() > 0.0) {
        return Err(Error::DegenerateGrid);
    }
    let count = |w: f64| (w / h - 1e-9).ceil().max(1.0) as usize + 1;
    let (nx, ny) = (count(bbox.width()), count(bbox.height()));
    let nodes = nx.saturating_mul(ny);
    if nodes > budget {
        return Err(Error::GridTooLarge { nodes, budget });
    }
    let tie = (h * h).max(1e-9);
    let origin = bbox.min;
    let masked = src.inside(origin).is_some();
    let rows: Vec<(Vec<f64>, Vec<u32>, Vec<bool>)> = (0..ny)
        .into_par_iter()
        .map(|iy| {
            let mut vals = Vec::with_capacity(nx);
            let mut mult = Vec::with_capacity(nx);
            let mut ins = Vec::new();
            for ix in 0..nx {
                let p = Point2::new(origin.x + ix as f64 * h, origin.y + iy as f64 * h);
                let r = src.project_with(p, tie);
                vals.push(r.distance);
                mult.push(r.multiplicity as u32);
                if masked {
                    ins.push(src.inside(p).unwrap_or(false));
                }
            }
            (vals, mult, ins)
        })
        .collect();
    let mut values = Vec::with_capacity(nodes);
    let mut proj_multiplicity = Vec::with_capacity(nodes);
    let mut inside = Vec::new();
    for (v, m, i) in rows {
        values.extend(v);
        proj_multiplicity.extend(m);
        inside.extend(i);
    }
    Ok(DistanceField { origin, h, nx, ny, values, proj_multiplicity, inside: masked.then_some(inside) })
}

impl DistanceField {
    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    pub fn node(&self, ix: usize, iy: usize) -> Point2 {
        Point2::new(self.origin.x + ix as f64 * self.h, self.origin.y + iy as f64 * self.h)
    }

    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[self.index(ix, iy)]
    }

    /// Nearest node to `p`, if inside the grid.
    pub fn nearest_node(&self, p: Point2) -> Option<(usize, usize)> {
        let fx = ((p.x - self.origin.x) / self.h).round();
        let fy = ((p.y - self.origin.y) / self.h).round();
        (fx >= 0.0 && fy >= 0.0 && (fx as usize) < self.nx && (fy as usize) < self.ny).then(|| (fx as usize, fy as usize))
    }

    /// Largest difference between 8-neighbors, divided by their distance.
    pub fn max_lipschitz_ratio(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                let v = self.value(ix, iy);
                for (dx, dy) in [(1usize, 0usize), (0, 1), (1, 1)] {
                    if ix + dx < self.nx && iy + dy < self.ny {
                        let len = self.h * ((dx * dx + dy * dy) as f64).sqrt();
                        worst = worst.max((self.value(ix + dx, iy + dy) - v).abs() / len);
                    }
                }
                if ix >= 1 && iy + 1 < self.ny {
                    let len = self.h * 2f64.sqrt();
                    worst = worst.max((self.value(ix - 1, iy + 1) - v).abs() / len);
                }
            }
        }
        worst
    }

    /// Range of the upwind gradient magnitude over nodes whose 3×3
    /// neighborhood has unique projections and whose value exceeds `2h`.
    pub fn eikonal_range(&self) -> (f64, f64) {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for iy in 1..self.ny.saturating_sub(1) {
            for ix in 1..self.nx.saturating_sub(1) {
                let u = self.value(ix, iy);
                if u <= 2.0 * self.h {
                    continue;
                }
                let clean = (iy - 1..=iy + 1)
                    .all(|y| (ix - 1..=ix + 1).all(|x| self.proj_multiplicity[self.index(x, y)] == 1));
                if !clean {
                    continue;
                }
                let a = ((u - self.value(ix - 1, iy)).max(u - self.value(ix + 1, iy))).max(0.0) / self.h;
                let b = ((u - self.value(ix, iy - 1)).max(u - self.value(ix, iy + 1))).max(0.0) / self.h;
                let g = (a * a + b * b).sqrt();
                lo = lo.min(g);
                hi = hi.max(g);
            }
        }
        (lo, hi)
    }

    /// CSV with one row per node: `ix,iy,x,y,value,multiplicity`.
    pub fn write_csv(&self, w: &mut dyn Write) -> Result<()> {
        writeln!(w, "ix,iy,x,y,value,multiplicity")?;
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                let p = self.node(ix, iy);
                let k = self.index(ix, iy);
                writeln!(w, "{ix},{iy},{},{},{},{}", p.x, p.y, self.values[k], self.proj_multiplicity[k])?;
            }
        }
        Ok(())
    }
}
