use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{BBox, Point2};

/// Box grown to grid lines at integer multiples of `h`.
pub fn snapped_box(b: &BBox, h: f64) -> BBox {
    BBox::new(
        Point2::new((b.min.x / h).floor() * h, (b.min.y / h).floor() * h),
        Point2::new((b.max.x / h).ceil() * h, (b.max.y / h).ceil() * h),
    )
}

/// Samples of a scalar function on a regular grid.
pub struct ScalarGrid {
    pub origin: Point2,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    pub v: Vec<f64>,
}

impl ScalarGrid {
    pub fn sample(f: &(dyn Fn(Point2) -> f64 + Sync), bbox: &BBox, h: f64) -> Result<Self> {
        if !(h > 0.0) || !(bbox.width() > 0.0) || !(bbox.height() > 0.0) {
            return Err(Error::DegenerateGrid);
        }
        let nx = (bbox.width() / h - 1e-9).ceil() as usize + 1;
        let ny = (bbox.height() / h - 1e-9).ceil() as usize + 1;
        let nodes = nx.saturating_mul(ny);
        if nodes > crate::distance::DEFAULT_NODE_BUDGET {
            return Err(Error::GridTooLarge { nodes, budget: crate::distance::DEFAULT_NODE_BUDGET });
        }
        let origin = bbox.min;
        let v: Vec<f64> = (0..ny)
            .into_par_iter()
            .flat_map_iter(|iy| (0..nx).map(move |ix| f(Point2::new(origin.x + ix as f64 * h, origin.y + iy as f64 * h))))
            .collect();
        Ok(ScalarGrid { origin, h, nx, ny, v })
    }

    fn at(&self, ix: usize, iy: usize) -> f64 {
        self.v[iy * self.nx + ix]
    }

    fn node(&self, ix: usize, iy: usize) -> Point2 {
        Point2::new(self.origin.x + ix as f64 * self.h, self.origin.y + iy as f64 * self.h)
    }

    /// Corner values counterclockwise from the lower left, with positions.
    fn cell(&self, ix: usize, iy: usize) -> ([f64; 4], [Point2; 4]) {
        let c = [(ix, iy), (ix + 1, iy), (ix + 1, iy + 1), (ix, iy + 1)];
        (c.map(|(x, y)| self.at(x, y)), c.map(|(x, y)| self.node(x, y)))
    }

    /// Area of `{f < 0}` with linear interpolation along cell edges.
    pub fn sublevel_area(&self) -> f64 {
        (0..self.ny - 1)
            .into_par_iter()
            .map(|iy| (0..self.nx - 1).map(|ix| self.cell_area(ix, iy)).sum::<f64>())
            .sum()
    }

    fn cell_area(&self, ix: usize, iy: usize) -> f64 {
        let (f, p) = self.cell(ix, iy);
        let inside = f.map(|v| v < 0.0);
        let count = inside.iter().filter(|b| **b).count();
        if count == 0 {
            return 0.0;
        }
        if count == 4 {
            return self.h * self.h;
        }
        let cross = |k: usize| -> Point2 {
            let j = (k + 1) % 4;
            p[k].lerp(p[j], f[k] / (f[k] - f[j]))
        };
        let saddle = count == 2 && inside[0] == inside[2];
        if saddle && 0.25 * f.iter().sum::<f64>() >= 0.0 {
            // separated inside corners: one triangle each
            return (0..4)
                .filter(|&k| inside[k])
                .map(|k| {
                    let (a, b) = (cross((k + 3) % 4), cross(k));
                    0.5 * (a - p[k]).cross(b - p[k]).abs()
                })
                .sum();
        }
        let mut poly = Vec::with_capacity(8);
        for k in 0..4 {
            if inside[k] {
                poly.push(p[k]);
            }
            if inside[k] != inside[(k + 1) % 4] {
                poly.push(cross(k));
            }
        }
        crate::geometry::polygon_area(&poly).abs()
    }
}

/// Closed polylines of the zero level of `f`, each with `{f < 0}` on its left.
pub fn contour_loops(f: &(dyn Fn(Point2) -> f64 + Sync), bbox: &BBox, h: f64) -> Result<Vec<Vec<Point2>>> {
    let g = ScalarGrid::sample(f, bbox, h)?;
    grid_loops(&g)
}

pub(crate) fn grid_loops(g: &ScalarGrid) -> Result<Vec<Vec<Point2>>> {
    let nx = g.nx;
    // crossing keys: bottom edge of node (ix,iy) → even, left edge → odd
    let hkey = |ix: usize, iy: usize| ((iy * nx + ix) * 2) as u64;
    let vkey = |ix: usize, iy: usize| ((iy * nx + ix) * 2 + 1) as u64;
    let mut next: HashMap<u64, u64> = HashMap::new();
    let mut points: HashMap<u64, Point2> = HashMap::new();
    for iy in 0..g.ny - 1 {
        for ix in 0..nx - 1 {
            let (f, p) = g.cell(ix, iy);
            let inside = f.map(|v| v < 0.0);
            let count = inside.iter().filter(|b| **b).count();
            if count == 0 || count == 4 {
                continue;
            }
            let keys = [hkey(ix, iy), vkey(ix + 1, iy), hkey(ix, iy + 1), vkey(ix, iy)];
            let mut exits = Vec::new();
            let mut entries = Vec::new();
            for k in 0..4 {
                let j = (k + 1) % 4;
                if inside[k] != inside[j] {
                    points.entry(keys[k]).or_insert_with(|| p[k].lerp(p[j], f[k] / (f[k] - f[j])));
                    if inside[k] {
                        exits.push(k);
                    } else {
                        entries.push(k);
                    }
                }
            }
            let center_inside = 0.25 * f.iter().sum::<f64>() < 0.0;
            for &e in &exits {
                // pair each exit with the next entry counterclockwise, or the
                // previous one when the inside corners are separated
                let step = |d: usize| (1..4).map(move |s| (e + d * s) % 4);
                let target = if exits.len() == 1 || center_inside {
                    step(1).find(|k| entries.contains(k))
                } else {
                    step(3).find(|k| entries.contains(k))
                };
                next.insert(keys[e], keys[target.unwrap()]);
            }
        }
    }
    let mut loops = Vec::new();
    let mut keys: Vec<u64> = next.keys().copied().collect();
    keys.sort_unstable();
    let mut used: HashMap<u64, bool> = HashMap::new();
    for start in keys {
        if used.contains_key(&start) {
            continue;
        }
        let mut poly = Vec::new();
        let mut k = start;
        loop {
            used.insert(k, true);
            poly.push(points[&k]);
            k = match next.get(&k) {
                Some(&n) => n,
                None => return Err(Error::DegenerateLoop { length: 0.0 }),
            };
            if k == start {
                break;
            }
        }
        let tol = 1e-9 * g.h;
        poly.dedup_by(|a, b| a.dist(*b) <= tol);
        while poly.len() > 1 && poly[0].dist(*poly.last().unwrap()) <= tol {
            poly.pop();
        }
        let n = poly.len();
        let length: f64 = (0..n).map(|i| poly[i].dist(poly[(i + 1) % n])).sum();
        if n < 3 || length < 6.0 * g.h {
            return Err(Error::DegenerateLoop { length });
        }
        loops.push(poly);
    }
    Ok(loops)
}
