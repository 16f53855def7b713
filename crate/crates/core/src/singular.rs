//! High ridge, skeleton, central set and cut locus of a domain, extracted
//! from exact distance samples on a grid, with the inclusion chain
//! `high ⊆ Σ ⊆ M ⊆ Cut` and component counting.
//!
//! A node belongs to the skeleton when its own nearest-point set, or the
//! projection jump found by bisection along an incident grid edge, spreads
//! by more than `δ_sep = 3h`. The threshold also discards the short
//! bisectors that polygonal boundaries grow at every vertex. The cut locus repeats the
//! edge sweep at `δ_sep/2` and `δ_sep/4`, which recovers limit points where
//! the sheets separate slowly (rectangle corners, the ends of the ellipse
//! skeleton). A node is central unless stepping `h`
//! along its gradient raises the distance by `h`, i.e. unless its ball is
//! contained in a larger inscribed ball.

use std::collections::{BTreeMap, HashMap, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::distance::{grid_transform, DistanceField, Domain, Regularity};
use crate::error::{Error, Result};
use crate::geometry::{BBox, Point2};
use crate::parallel::snapped_box;

/// Per-node singular-set data over a domain grid.
#[derive(Debug, Clone)]
pub struct SingularField {
    pub h: f64,
    pub field: DistanceField,
    /// Nodes in the closed domain.
    pub active: Vec<bool>,
    /// Spread of each node's own nearest-point set (infinite for a continuum).
    pub own_spread: Vec<f64>,
    /// Largest projection jump along an incident edge.
    pub strength: Vec<f64>,
    pub central: Vec<bool>,
    pub sep: f64,
    pub high_band: f64,
}

fn bisect_jump(domain: &Domain, a: Point2, b: Point2, pa: Point2, pb: Point2) -> f64 {
    let (mut lo, mut hi, mut plo, mut phi) = (a, b, pa, pb);
    let mut best: f64 = 0.0;
    for _ in 0..20 {
        let m = lo.midpoint(hi);
        let r = domain.boundary.project(m);
        if r.continuum {
            return f64::INFINITY;
        }
        best = best.max(r.spread());
        let pm = r.nearest();
        if plo.dist(pm) >= pm.dist(phi) {
            hi = m;
            phi = pm;
        } else {
            lo = m;
            plo = pm;
        }
    }
    best.max(plo.dist(phi))
}

/// Samples the domain on a grid of spacing `h` aligned with multiples of `h`.
pub fn analyze(domain: &Domain, h: f64) -> Result<SingularField> {
    let bbox = snapped_box(&domain.bbox().expand(h), h);
    let field = grid_transform(domain, &bbox, h)?;
    let (nx, ny) = (field.nx, field.ny);
    let tol = 1e-9 * domain.boundary.scale();
    let inside = field.inside.clone().unwrap_or_default();
    let active: Vec<bool> = (0..nx * ny).map(|k| inside[k] || field.values[k] <= tol).collect();
    if !active.iter().zip(&inside).any(|(a, i)| *a && *i) {
        return Err(Error::EmptyDomain);
    }
    let proj: Vec<(Point2, f64)> = (0..nx * ny)
        .into_par_iter()
        .map(|k| {
            let r = domain.boundary.project(field.node(k % nx, k / nx));
            (r.nearest(), if r.continuum { f64::INFINITY } else { r.spread() })
        })
        .collect();
    let own_spread: Vec<f64> = proj.iter().zip(&active).map(|(p, a)| if *a { p.1 } else { 0.0 }).collect();
    let mut strength = vec![0.0f64; nx * ny];
    // edge jumps, computed once per edge and credited to both ends
    let edges: Vec<(usize, usize)> = (0..nx * ny)
        .flat_map(|k| {
            let (ix, iy) = (k % nx, k / nx);
            let right = (ix + 1 < nx).then_some((k, k + 1));
            let up = (iy + 1 < ny).then_some((k, k + nx));
            right.into_iter().chain(up)
        })
        .filter(|&(a, b)| active[a] && active[b] && proj[a].0.dist(proj[b].0) > 0.25 * h)
        .collect();
    let jumps: Vec<f64> = edges
        .par_iter()
        .map(|&(a, b)| bisect_jump(domain, field.node(a % nx, a / nx), field.node(b % nx, b / nx), proj[a].0, proj[b].0))
        .collect();
    for (&(a, b), &j) in edges.iter().zip(&jumps) {
        strength[a] = strength[a].max(j);
        strength[b] = strength[b].max(j);
    }
    let central: Vec<bool> = (0..nx * ny)
        .into_par_iter()
        .map(|k| {
            if !active[k] || field.values[k] <= tol {
                return false;
            }
            if proj[k].1.is_infinite() {
                return true;
            }
            let p = field.node(k % nx, k / nx);
            let d = field.values[k];
            let g = (p - proj[k].0) * (1.0 / d);
            domain.boundary.distance(p + g * h) < d + h - 1e-3 * h
        })
        .collect();
    Ok(SingularField { h, field, active, own_spread, strength, central, sep: 3.0 * h, high_band: 1.5 * h })
}

impl SingularField {
    fn collect(&self, keep: impl Fn(usize) -> bool) -> Vec<Point2> {
        let nx = self.field.nx;
        (0..self.active.len()).filter(|&k| self.active[k] && keep(k)).map(|k| self.field.node(k % nx, k / nx)).collect()
    }

    pub fn rho(&self) -> f64 {
        self.active.iter().zip(&self.field.values).filter(|(a, _)| **a).map(|(_, v)| *v).fold(0.0, f64::max)
    }

    fn in_sweep(&self, k: usize, delta: f64) -> bool {
        self.own_spread[k] > delta || self.strength[k] > delta
    }

    /// Number of nodes joining the skeleton at separation `delta`.
    pub fn sweep_count(&self, delta: f64) -> usize {
        (0..self.active.len()).filter(|&k| self.active[k] && self.in_sweep(k, delta)).count()
    }
}

/// Maximum of the distance and the nodes within the high band of it.
pub fn high_ridge(sf: &SingularField) -> Result<(f64, Vec<Point2>)> {
    let rho = sf.rho();
    if !(rho > 0.0) {
        return Err(Error::EmptyDomain);
    }
    let vals = &sf.field.values;
    Ok((rho, sf.collect(|k| vals[k] >= rho - sf.high_band)))
}

pub fn skeleton(sf: &SingularField) -> Vec<Point2> {
    sf.collect(|k| sf.in_sweep(k, sf.sep))
}

pub fn central_set(sf: &SingularField) -> Vec<Point2> {
    sf.collect(|k| sf.central[k])
}

/// Skeleton nodes of the sweeps at `δ_sep`, `δ_sep/2` and `δ_sep/4`.
pub fn cut_locus(sf: &SingularField) -> Vec<Point2> {
    let sweeps = [sf.sep, 0.5 * sf.sep, 0.25 * sf.sep];
    sf.collect(|k| sweeps.iter().any(|d| sf.in_sweep(k, *d)))
}

/// Static 2-d tree for nearest-point queries on point lists.
pub struct PointIndex {
    /// Points in tree order: each range is split at its middle element.
    pts: Vec<Point2>,
}

impl PointIndex {
    pub fn new(points: &[Point2]) -> Self {
        let mut pts = points.to_vec();
        Self::build(&mut pts, 0);
        PointIndex { pts }
    }

    fn build(pts: &mut [Point2], depth: usize) {
        if pts.len() <= 1 {
            return;
        }
        let mid = pts.len() / 2;
        let key = |p: &Point2| if depth % 2 == 0 { p.x } else { p.y };
        pts.select_nth_unstable_by(mid, |a, b| key(a).total_cmp(&key(b)));
        let (left, right) = pts.split_at_mut(mid);
        Self::build(left, depth + 1);
        Self::build(&mut right[1..], depth + 1);
    }

    fn search(pts: &[Point2], q: Point2, depth: usize, best: &mut f64) {
        if pts.is_empty() {
            return;
        }
        let mid = pts.len() / 2;
        let m = pts[mid];
        *best = best.min(m.dist(q));
        let diff = if depth % 2 == 0 { q.x - m.x } else { q.y - m.y };
        let (near, far) = if diff < 0.0 { (&pts[..mid], &pts[mid + 1..]) } else { (&pts[mid + 1..], &pts[..mid]) };
        Self::search(near, q, depth + 1, best);
        if diff.abs() < *best {
            Self::search(far, q, depth + 1, best);
        }
    }

    /// Distance to the nearest indexed point (infinite when empty).
    pub fn distance(&self, p: Point2) -> f64 {
        let mut best = f64::INFINITY;
        Self::search(&self.pts, p, 0, &mut best);
        best
    }
}

/// `max_{a∈A} d(a, B)`; zero for empty `A`, infinite for empty `B`.
pub fn one_sided_hausdorff(a: &[Point2], b: &[Point2]) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    let idx = PointIndex::new(b);
    a.par_iter().map(|p| idx.distance(*p)).reduce(|| 0.0, f64::max)
}

pub fn hausdorff(a: &[Point2], b: &[Point2]) -> f64 {
    one_sided_hausdorff(a, b).max(one_sided_hausdorff(b, a))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComponentInfo {
    pub count: usize,
    /// Whether the `link_radius` dilation encloses a bounded hole.
    pub cycle: bool,
    pub holes: usize,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Components of the union of `link_radius` balls (single linkage), with a
/// hole count of that union.
pub fn component_count(points: &[Point2], link_radius: f64) -> ComponentInfo {
    if points.is_empty() {
        return ComponentInfo { count: 0, cycle: false, holes: 0 };
    }
    let cell = 2.0 * link_radius;
    let key = |p: Point2| ((p.x / cell).floor() as i64, (p.y / cell).floor() as i64);
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        buckets.entry(key(*p)).or_default().push(i);
    }
    let mut parent: Vec<usize> = (0..points.len()).collect();
    for (i, p) in points.iter().enumerate() {
        let (cx, cy) = key(*p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(b) = buckets.get(&(cx + dx, cy + dy)) {
                    for &j in b {
                        // balls of radius link_radius overlap
                        if j > i && p.dist(points[j]) <= 2.0 * link_radius {
                            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                            parent[ri] = rj;
                        }
                    }
                }
            }
        }
    }
    let count = (0..points.len()).filter(|&i| find(&mut parent, i) == i).count();
    let holes = count_holes(points, link_radius);
    ComponentInfo { count, cycle: holes > 0, holes }
}

/// Bounded components of the complement of the dilated point set, on a
/// raster of spacing `link_radius / 2`.
fn count_holes(points: &[Point2], link_radius: f64) -> usize {
    let s = 0.5 * link_radius;
    let mut bb = BBox::empty();
    for p in points {
        bb.include(*p);
    }
    let bb = bb.expand(2.0 * link_radius + s);
    let nx = (bb.width() / s).ceil() as usize + 1;
    let ny = (bb.height() / s).ceil() as usize + 1;
    let mut filled = vec![false; nx * ny];
    let reach = (link_radius / s).ceil() as i64 + 1;
    for p in points {
        let (cx, cy) = (((p.x - bb.min.x) / s).round() as i64, ((p.y - bb.min.y) / s).round() as i64);
        for iy in (cy - reach).max(0)..=(cy + reach).min(ny as i64 - 1) {
            for ix in (cx - reach).max(0)..=(cx + reach).min(nx as i64 - 1) {
                let q = Point2::new(bb.min.x + ix as f64 * s, bb.min.y + iy as f64 * s);
                if q.dist(*p) <= link_radius {
                    filled[iy as usize * nx + ix as usize] = true;
                }
            }
        }
    }
    let comps = label_components(&filled, nx, ny, false);
    comps.iter().filter(|c| !c.1).count()
}

/// 4-connected components of cells equal to `value`; each entry carries
/// the size and whether it touches the raster border.
fn label_components(cells: &[bool], nx: usize, ny: usize, value: bool) -> Vec<(usize, bool)> {
    let mut seen = vec![false; cells.len()];
    let mut out = Vec::new();
    for start in 0..cells.len() {
        if seen[start] || cells[start] != value {
            continue;
        }
        let (mut size, mut border) = (0usize, false);
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(k) = queue.pop_front() {
            size += 1;
            let (x, y) = (k % nx, k / nx);
            border |= x == 0 || y == 0 || x + 1 == nx || y + 1 == ny;
            let mut push = |j: usize| {
                if !seen[j] && cells[j] == value {
                    seen[j] = true;
                    queue.push_back(j);
                }
            };
            if x > 0 {
                push(k - 1);
            }
            if x + 1 < nx {
                push(k + 1);
            }
            if y > 0 {
                push(k - nx);
            }
            if y + 1 < ny {
                push(k + nx);
            }
        }
        out.push((size, border));
    }
    out
}

/// Distances realizing the inclusion chain and the strictness gaps.
#[derive(Debug, Clone, Serialize)]
pub struct ChainVerdict {
    /// One-sided distances `high → Σ`, `Σ → M`, `M → Cut`.
    pub inclusion: [f64; 3],
    pub inclusions_ok: bool,
    /// Two-sided distances `(high, Σ)`, `(Σ, M)`, `(M, Cut)`.
    pub gaps: [f64; 3],
    /// Gaps above the strictness threshold.
    pub strict: [bool; 3],
    pub inclusion_tol: f64,
    pub strict_tol: f64,
    /// For C2 domains: two-sided `(M, Cut)` within the inclusion tolerance.
    pub c2_central_eq_cut: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SingularSetReport {
    pub label: String,
    pub h: f64,
    pub rho: f64,
    pub high_ridge: Vec<Point2>,
    pub skeleton: Vec<Point2>,
    pub central: Vec<Point2>,
    pub cut: Vec<Point2>,
    pub chain: ChainVerdict,
    pub components: BTreeMap<String, ComponentInfo>,
}

/// Runs the four extractors and checks the chain with tolerance `2h`;
/// strictness is flagged for gaps above `5h`.
pub fn inclusion_chain_report(domain: &Domain, sf: &SingularField) -> Result<SingularSetReport> {
    let h = sf.h;
    let (rho, high) = high_ridge(sf)?;
    let (sk, ce, cu) = (skeleton(sf), central_set(sf), cut_locus(sf));
    let tol = 2.0 * h * (1.0 + 1e-9);
    let inclusion = [
        one_sided_hausdorff(&high, &sk),
        one_sided_hausdorff(&sk, &ce),
        one_sided_hausdorff(&ce, &cu),
    ];
    let gaps = [hausdorff(&high, &sk), hausdorff(&sk, &ce), hausdorff(&ce, &cu)];
    let strict_tol = 5.0 * h;
    let link = 2.0 * h;
    let mut components = BTreeMap::new();
    components.insert("high_ridge".to_string(), component_count(&high, link));
    components.insert("skeleton".to_string(), component_count(&sk, link));
    components.insert("central".to_string(), component_count(&ce, link));
    components.insert("cut".to_string(), component_count(&cu, link));
    components.insert("domain".to_string(), mask_components(sf));
    Ok(SingularSetReport {
        label: domain.label.clone(),
        h,
        rho,
        chain: ChainVerdict {
            inclusion,
            inclusions_ok: inclusion.iter().all(|d| *d <= tol),
            gaps,
            strict: gaps.map(|g| g > strict_tol),
            inclusion_tol: tol,
            strict_tol,
            c2_central_eq_cut: (domain.regularity == Regularity::C2).then(|| gaps[2] <= tol),
        },
        high_ridge: high,
        skeleton: sk,
        central: ce,
        cut: cu,
        components,
    })
}

/// Components and holes of the active node mask.
pub fn mask_components(sf: &SingularField) -> ComponentInfo {
    let (nx, ny) = (sf.field.nx, sf.field.ny);
    let count = label_components(&sf.active, nx, ny, true).len();
    let holes = label_components(&sf.active, nx, ny, false).iter().filter(|c| !c.1).count();
    ComponentInfo { count, cycle: holes > 0, holes }
}

#[cfg(test)]
mod tests;
